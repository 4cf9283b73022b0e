#ifndef RFX_ERRORS_HPP
#define RFX_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rfx {

// Thrown when an input breaks a documented precondition or invariant
// (malformed tensors, out-of-range indices, infeasible parameters).
// The CLI maps this family to exit code 1.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// Thrown on file read/write/parse failures. The CLI maps this to exit code 2.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace rfx

#endif  // RFX_ERRORS_HPP
