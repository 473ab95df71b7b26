#ifndef GJULIA_ERRORS_HPP_
#define GJULIA_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace gjulia {

// Error categories map one-to-one onto the CLI exit codes.
enum class ErrorKind {
  kInput = 2,         // malformed or out-of-range input data
  kNumerical = 3,     // a numerical procedure failed to deliver
  kPrecondition = 4,  // a documented precondition does not hold
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }
  int exit_code() const { return static_cast<int>(kind_); }

 private:
  ErrorKind kind_;
};

class InputError : public Error {
 public:
  explicit InputError(const std::string& message)
      : Error(ErrorKind::kInput, message) {}
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& message)
      : Error(ErrorKind::kNumerical, message) {}
};

class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& message)
      : Error(ErrorKind::kPrecondition, message) {}
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInput:
      return "input";
    case ErrorKind::kNumerical:
      return "numerical";
    case ErrorKind::kPrecondition:
      return "precondition";
  }
  return "unknown";
}

}  // namespace gjulia

#endif  // GJULIA_ERRORS_HPP_
