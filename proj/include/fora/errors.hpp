#pragma once

#include <stdexcept>
#include <string>

namespace fora {

/// Failure categories. Each maps to a distinct CLI exit code.
enum class ErrorKind : int {
  kUsage = 2,
  kIo = 3,
  kFormat = 4,
  kInvariant = 5,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  int exit_code() const noexcept { return static_cast<int>(kind_); }

 private:
  ErrorKind kind_;
};

inline Error usage_error(const std::string& what) {
  return Error(ErrorKind::kUsage, what);
}
inline Error io_error(const std::string& what) {
  return Error(ErrorKind::kIo, what);
}
inline Error format_error(const std::string& what) {
  return Error(ErrorKind::kFormat, what);
}
inline Error invariant_error(const std::string& what) {
  return Error(ErrorKind::kInvariant, what);
}

}  // namespace fora
