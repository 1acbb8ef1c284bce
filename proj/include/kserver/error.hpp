#pragma once

#include <stdexcept>
#include <string>

namespace kserver {

enum class ErrorKind {
  invalid_input,  // precondition violated by the caller
  parse,          // malformed text input
  unsupported,    // request outside the supported size or space family
  invariant,      // a checked mathematical invariant did not hold
  budget,         // a step or state budget was exhausted
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool condition, const std::string& what) {
  if (!condition) fail(ErrorKind::invalid_input, what);
}

}  // namespace kserver
