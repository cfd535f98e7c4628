#ifndef PHARMONIC_ERRORS_HPP
#define PHARMONIC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace pharmonic {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input, out-of-range parameters, mismatched domains.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(what) {}
};

// A finite-index subgroup spec whose parity masks do not span the full
// parity space: the true index would be smaller than 2^m.
class NonSpanningSpec : public ValidationError {
 public:
  explicit NonSpanningSpec(const std::string& what) : ValidationError(what) {}
};

}  // namespace pharmonic

#endif  // PHARMONIC_ERRORS_HPP
