#pragma once

#include <stdexcept>
#include <string>

namespace sixlayer {

enum class ErrorKind {
  Parse,      // malformed text
  Schema,     // well-formed text with the wrong shape
  Structure,  // structural invariant of the model violated
  Semantic,   // taxonomy consistency (cycles, dangling parents, flags)
  Lookup,     // unknown identifier
  Range,      // value outside its admissible range
  Io,
};

const char* to_string(ErrorKind kind);

/// Single exception type for the library. The message is ready for display;
/// kind lets callers map failures onto exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace sixlayer
