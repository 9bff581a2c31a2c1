#pragma once

#include <stdexcept>
#include <string>

namespace heatclf {

/// Failure category. Maps one-to-one onto the C API status codes and the
/// CLI exit codes (validation -> 1, numerical -> 2).
enum class ErrorKind {
  Validation,
  Numerical,
  Io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(const std::string& what) {
  throw Error(ErrorKind::Validation, what);
}

[[noreturn]] inline void fail_numerical(const std::string& what) {
  throw Error(ErrorKind::Numerical, what);
}

[[noreturn]] inline void fail_io(const std::string& what) {
  throw Error(ErrorKind::Io, what);
}

}  // namespace heatclf
