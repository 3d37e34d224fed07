#pragma once

#include <stdexcept>
#include <string>

namespace lpcoreset {

enum class ErrorKind {
  InvalidParameter,
  InvalidInput,
  NumericalFailure,
  Unsupported,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

struct InvalidParameter : Error {
  explicit InvalidParameter(const std::string& what)
      : Error(ErrorKind::InvalidParameter, what) {}
};

struct InvalidInput : Error {
  explicit InvalidInput(const std::string& what)
      : Error(ErrorKind::InvalidInput, what) {}
};

struct NumericalFailure : Error {
  explicit NumericalFailure(const std::string& what)
      : Error(ErrorKind::NumericalFailure, what) {}
};

// Raised by the desk-scale guards on extended-matrix widths.
struct UnsupportedSize : Error {
  explicit UnsupportedSize(const std::string& what)
      : Error(ErrorKind::Unsupported, what) {}
};

}  // namespace lpcoreset
