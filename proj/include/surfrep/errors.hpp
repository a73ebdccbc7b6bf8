#pragma once

#include <stdexcept>
#include <string>

namespace surfrep {

/// Malformed user input: bad words, unknown group names, invalid configs.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Text that failed to parse; carries the 0-based character offset.
class ParseError : public InputError {
 public:
  ParseError(const std::string& what, std::size_t position)
      : InputError(what + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// A numerical routine was asked to leave its domain (e.g. log at the cut locus).
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An iterative solver ran out of iterations.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace surfrep
