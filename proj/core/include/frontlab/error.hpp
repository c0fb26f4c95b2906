#ifndef FRONTLAB_ERROR_HPP_
#define FRONTLAB_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace frontlab {

// Base class for every error the library raises on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid arguments or violated preconditions.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Symbol text that does not parse. `offset()` is the byte offset of the
// offending character.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t offset)
      : Error(message + " at offset " + std::to_string(offset)),
        offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

// Iterative solvers that fail to converge, quadrature that does not settle.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// NaN/Inf or step-size guard violations during time stepping.
class InstabilityError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace frontlab

#endif  // FRONTLAB_ERROR_HPP_
