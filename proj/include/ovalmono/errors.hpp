#pragma once

#include <stdexcept>
#include <string>

namespace ovalmono {

enum class ErrorKind {
  Input,
  Parse,
  InvalidRoot,
  DegenerateDirection,
  DegreeDrop,
  Genericity,
  Tracking,
  VanishingCycleCrossing,
  Construction,
  Certificate,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Process exit code used by the command line front end for each error kind.
inline int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Genericity:
    case ErrorKind::DegenerateDirection:
      return 2;
    case ErrorKind::Tracking:
    case ErrorKind::DegreeDrop:
    case ErrorKind::VanishingCycleCrossing:
      return 3;
    case ErrorKind::Parse:
      return 4;
    default:
      return 1;
  }
}

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace ovalmono
