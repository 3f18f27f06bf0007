#pragma once

#include <stdexcept>
#include <string>

namespace tv {

/// Error category used to map failures onto process exit codes in the CLI.
enum class ErrorKind {
  input,    // malformed files, violated user-facing preconditions
  internal, // broken invariants; indicates a bug, not bad input
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void input_error(const std::string& what) {
  throw Error(ErrorKind::input, what);
}

[[noreturn]] inline void internal_error(const std::string& what) {
  throw Error(ErrorKind::internal, what);
}

} // namespace tv
