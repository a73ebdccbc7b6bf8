#include "surfrep/free_words.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <sstream>

#include "surfrep/errors.hpp"

namespace surfrep {

namespace {

constexpr std::size_t kMaxWordLength = 1'000'000;

void check_letter(const Letter& l) {
  if (l.gen < 1) throw InputError("generator index must be >= 1, got " + std::to_string(l.gen));
  if (l.exponent != 1 && l.exponent != -1)
    throw InputError("letter exponent must be +1 or -1, got " + std::to_string(l.exponent));
}

}  // namespace

Word Word::reduce(const std::vector<Letter>& letters) {
  if (letters.size() > kMaxWordLength) throw InputError("word too long");
  Word w;
  w.letters_.reserve(letters.size());
  for (const Letter& l : letters) {
    check_letter(l);
    if (!w.letters_.empty() && w.letters_.back() == l.inverse()) {
      w.letters_.pop_back();
    } else {
      w.letters_.push_back(l);
    }
  }
  return w;
}

Word Word::generator(int gen, int exponent) { return reduce({Letter{gen, exponent}}); }

int Word::max_generator() const {
  int m = 0;
  for (const Letter& l : letters_) m = std::max(m, l.gen);
  return m;
}

Word Word::inverse() const {
  Word w;
  w.letters_.reserve(letters_.size());
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) w.letters_.push_back(it->inverse());
  return w;
}

Word operator*(const Word& u, const Word& v) {
  // Cancel across the seam only; both factors are already reduced.
  std::size_t k = 0;
  while (k < u.letters_.size() && k < v.letters_.size() &&
         u.letters_[u.letters_.size() - 1 - k] == v.letters_[k].inverse()) {
    ++k;
  }
  Word w;
  w.letters_.reserve(u.letters_.size() + v.letters_.size() - 2 * k);
  w.letters_.insert(w.letters_.end(), u.letters_.begin(), u.letters_.end() - static_cast<long>(k));
  w.letters_.insert(w.letters_.end(), v.letters_.begin() + static_cast<long>(k), v.letters_.end());
  if (w.letters_.size() > kMaxWordLength) throw InputError("word too long");
  return w;
}

std::string Word::to_string() const {
  if (letters_.empty()) return "1";
  std::ostringstream os;
  std::size_t i = 0;
  bool first = true;
  while (i < letters_.size()) {
    std::size_t j = i;
    while (j < letters_.size() && letters_[j] == letters_[i]) ++j;
    const long power = static_cast<long>(j - i) * letters_[i].exponent;
    if (!first) os << '*';
    first = false;
    os << 'x' << letters_[i].gen;
    if (power != 1) os << '^' << power;
    i = j;
  }
  return os.str();
}

Word word_multiply(const Word& u, const Word& v) { return u * v; }
Word word_invert(const Word& w) { return w.inverse(); }
Word commutator(const Word& u, const Word& v) { return u * v * u.inverse() * v.inverse(); }

Word parse_word(std::string_view text) {
  std::size_t pos = 0;
  const auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  const auto parse_int = [&](bool allow_sign) -> long {
    skip_ws();
    const std::size_t start = pos;
    if (allow_sign && pos < text.size() && (text[pos] == '-' || text[pos] == '+')) ++pos;
    const std::size_t digits = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos == digits) throw ParseError("expected integer", start);
    long value = 0;
    const char* first = text.data() + start + (text[start] == '+' ? 1 : 0);
    auto [ptr, ec] = std::from_chars(first, text.data() + pos, value);
    if (ec != std::errc{} || ptr != text.data() + pos) throw ParseError("integer out of range", start);
    return value;
  };

  skip_ws();
  if (pos == text.size()) return Word{};
  {
    std::string_view rest = text.substr(pos);
    while (!rest.empty() && std::isspace(static_cast<unsigned char>(rest.back()))) rest.remove_suffix(1);
    if (rest == "1") return Word{};
  }

  std::vector<Letter> letters;
  while (true) {
    skip_ws();
    if (pos >= text.size() || text[pos] != 'x') throw ParseError("expected generator 'x<k>'", pos);
    const std::size_t gen_pos = pos;
    ++pos;
    const long gen = parse_int(false);
    if (gen < 1 || gen > 1'000'000) throw ParseError("generator index out of range", gen_pos);
    long power = 1;
    skip_ws();
    if (pos < text.size() && text[pos] == '^') {
      ++pos;
      const std::size_t power_pos = pos;
      power = parse_int(true);
      if (std::labs(power) > static_cast<long>(kMaxWordLength))
        throw ParseError("exponent too large", power_pos);
    }
    const int sign = power < 0 ? -1 : 1;
    for (long k = 0; k < std::labs(power); ++k) letters.push_back({static_cast<int>(gen), sign});
    skip_ws();
    if (pos == text.size()) break;
    if (text[pos] != '*') throw ParseError("expected '*'", pos);
    ++pos;
  }
  return Word::reduce(letters);
}

// ---------------------------------------------------------------------------

GroupRingElement::GroupRingElement(const Word& w, Coefficient c) { add_term(w, c); }

GroupRingElement::Coefficient GroupRingElement::coefficient(const Word& w) const {
  const auto it = terms_.find(w);
  return it == terms_.end() ? 0 : it->second;
}

GroupRingElement::Coefficient GroupRingElement::augmentation() const {
  Coefficient s = 0;
  for (const auto& [w, c] : terms_) s += c;
  return s;
}

void GroupRingElement::add_term(const Word& w, Coefficient c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(w, 0);
  it->second += c;
  assert(std::llabs(it->second) <= kCoefficientBound && "group ring coefficient bound exceeded");
  if (it->second == 0) terms_.erase(it);
}

GroupRingElement& GroupRingElement::operator+=(const GroupRingElement& o) {
  for (const auto& [w, c] : o.terms_) add_term(w, c);
  return *this;
}

GroupRingElement& GroupRingElement::operator-=(const GroupRingElement& o) {
  for (const auto& [w, c] : o.terms_) add_term(w, -c);
  return *this;
}

GroupRingElement operator-(const GroupRingElement& a) { return -1 * a; }

GroupRingElement operator*(const GroupRingElement& a, const GroupRingElement& b) {
  GroupRingElement r;
  for (const auto& [u, cu] : a.terms_)
    for (const auto& [v, cv] : b.terms_) r.add_term(u * v, cu * cv);
  return r;
}

GroupRingElement operator*(GroupRingElement::Coefficient s, const GroupRingElement& a) {
  GroupRingElement r;
  for (const auto& [w, c] : a.terms_) r.add_term(w, s * c);
  return r;
}

std::string GroupRingElement::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [w, c] : terms_) {
    const Coefficient mag = c < 0 ? -c : c;
    if (first) {
      if (c < 0) os << '-';
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    if (mag != 1) {
      os << mag;
      if (!w.is_identity()) os << '*';
    }
    if (mag != 1 && w.is_identity()) continue;
    os << w.to_string();
  }
  return os.str();
}

// ---------------------------------------------------------------------------

GroupRingElement fox_derivative(const Word& w, int j) {
  if (j < 1) throw InputError("Fox derivative index must be >= 1, got " + std::to_string(j));
  // Right-to-left fold of d(uv) = (du) v + dv, seeded with d(1) = 0.
  GroupRingElement result;
  Word suffix;
  const auto& letters = w.letters();
  for (auto it = letters.rbegin(); it != letters.rend(); ++it) {
    if (it->gen == j) {
      if (it->exponent > 0) {
        result += GroupRingElement(suffix);
      } else {
        result -= GroupRingElement(Word::generator(j, -1) * suffix);
      }
    }
    suffix = Word::generator(it->gen, it->exponent) * suffix;
  }
  return result;
}

bool verify_fox_identity(const Word& w) {
  const GroupRingElement lhs = GroupRingElement::one() - GroupRingElement(w);
  GroupRingElement rhs;
  for (int j = 1; j <= w.max_generator(); ++j) {
    const GroupRingElement one_minus_x = GroupRingElement::one() - GroupRingElement(Word::generator(j));
    rhs += one_minus_x * fox_derivative(w, j);
  }
  return lhs == rhs;
}

// ---------------------------------------------------------------------------

Presentation::Presentation(int generator_count, std::vector<Word> relators, std::optional<int> genus)
    : n_(generator_count), relators_(std::move(relators)), genus_(genus) {
  if (n_ < 0) throw InputError("generator count must be non-negative");
  for (const Word& r : relators_)
    if (r.max_generator() > n_)
      throw InputError("relator " + r.to_string() + " uses a generator beyond x" + std::to_string(n_));
}

Presentation surface_presentation(int genus) {
  if (genus < 1) throw InputError("surface genus must be >= 1, got " + std::to_string(genus));
  Word r;
  for (int i = 0; i < genus; ++i)
    r = r * commutator(Word::generator(2 * i + 1), Word::generator(2 * i + 2));
  return Presentation(2 * genus, {r}, genus);
}

}  // namespace surfrep
