#pragma once

// Free-group words, integer group-ring elements and right Fox derivatives.

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace surfrep {

/// One letter x_gen^exponent of a free-group word; gen is 1-based, exponent is +1 or -1.
struct Letter {
  int gen = 1;
  int exponent = 1;

  Letter inverse() const { return {gen, -exponent}; }
  auto operator<=>(const Letter&) const = default;
};

/// A freely reduced word in the free group on generators x_1, x_2, ...
///
/// The empty word is the identity.  Construction always reduces, so every
/// Word value satisfies the no-adjacent-inverse-pair invariant.
class Word {
 public:
  Word() = default;

  /// Reduces the raw sequence.  Throws InputError for gen < 1 or |exponent| != 1.
  static Word reduce(const std::vector<Letter>& letters);
  static Word generator(int gen, int exponent = 1);

  const std::vector<Letter>& letters() const { return letters_; }
  std::size_t length() const { return letters_.size(); }
  bool is_identity() const { return letters_.empty(); }
  int max_generator() const;

  Word inverse() const;
  friend Word operator*(const Word& u, const Word& v);

  /// Lexicographic on letter sequences.
  auto operator<=>(const Word&) const = default;
  bool operator==(const Word&) const = default;

  /// Renders as "x1*x2^-1"; the identity renders as "1".
  std::string to_string() const;

 private:
  std::vector<Letter> letters_;
};

Word word_multiply(const Word& u, const Word& v);
Word word_invert(const Word& w);

/// Commutator [u, v] = u v u^-1 v^-1.
Word commutator(const Word& u, const Word& v);

/// Parses `word := term ("*" term)*`, `term := gen ("^" int)?`, `gen := "x" digits`.
/// The empty string (or "1") is the identity.  Throws ParseError.
Word parse_word(std::string_view text);

/// Finite Z-linear combination of words, canonical: reduced keys, no zero coefficients.
class GroupRingElement {
 public:
  using Coefficient = std::int64_t;
  /// Bound asserted on every coefficient after arithmetic.
  static constexpr Coefficient kCoefficientBound = 1'000'000;

  GroupRingElement() = default;
  explicit GroupRingElement(const Word& w, Coefficient c = 1);

  static GroupRingElement one() { return GroupRingElement(Word{}); }

  const std::map<Word, Coefficient>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  Coefficient coefficient(const Word& w) const;

  /// Sum of coefficients (image under all generators -> 1).
  Coefficient augmentation() const;

  GroupRingElement& operator+=(const GroupRingElement& o);
  GroupRingElement& operator-=(const GroupRingElement& o);
  friend GroupRingElement operator+(GroupRingElement a, const GroupRingElement& b) { return a += b; }
  friend GroupRingElement operator-(GroupRingElement a, const GroupRingElement& b) { return a -= b; }
  friend GroupRingElement operator-(const GroupRingElement& a);
  friend GroupRingElement operator*(const GroupRingElement& a, const GroupRingElement& b);
  friend GroupRingElement operator*(Coefficient s, const GroupRingElement& a);
  bool operator==(const GroupRingElement&) const = default;

  /// Terms in canonical (lexicographic) order, e.g. "x2*x1^-1*x2^-1 - x1^-1*x2^-1"; zero is "0".
  std::string to_string() const;

 private:
  void add_term(const Word& w, Coefficient c);
  std::map<Word, Coefficient> terms_;
};

/// Right Fox derivative dw/dx_j, characterised by 1 - w = sum_j (1 - x_j) dw/dx_j.
/// Throws InputError unless 1 <= j.
GroupRingElement fox_derivative(const Word& w, int j);

/// Checks 1 - w == sum_{j <= n} (1 - x_j) dw/dx_j exactly, with n = max generator of w.
bool verify_fox_identity(const Word& w);

/// Finitely presented group <x_1..x_n | r_1..r_m>.
class Presentation {
 public:
  /// Throws InputError if a relator uses a generator index above n.
  Presentation(int generator_count, std::vector<Word> relators,
               std::optional<int> genus = std::nullopt);

  int generator_count() const { return n_; }
  int relator_count() const { return static_cast<int>(relators_.size()); }
  const std::vector<Word>& relators() const { return relators_; }
  std::optional<int> genus() const { return genus_; }

 private:
  int n_;
  std::vector<Word> relators_;
  std::optional<int> genus_;
};

/// Closed orientable surface of genus g: generators x1,y1,...,xg,yg mapped to
/// x1..x_{2g}, single relator [x1,y1]...[xg,yg].  Throws InputError for g < 1.
Presentation surface_presentation(int genus);

}  // namespace surfrep
