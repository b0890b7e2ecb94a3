#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tocl {

enum class ErrorKind {
  Syntax,
  UnknownType,
  UnknownProperty,
  Type,
  Arity,
  UnknownArtifact,
  DuplicateArtifact,
  TypeMismatch,
  StaleSequence,
  DuplicateChange,
  UnknownInstance,
  UnknownPattern,
  DuplicateBinding,
  Format,
};

constexpr std::string_view to_string(ErrorKind k) noexcept {
  switch (k) {
    case ErrorKind::Syntax: return "SyntaxError";
    case ErrorKind::UnknownType: return "UnknownType";
    case ErrorKind::UnknownProperty: return "UnknownProperty";
    case ErrorKind::Type: return "TypeError";
    case ErrorKind::Arity: return "ArityError";
    case ErrorKind::UnknownArtifact: return "UnknownArtifact";
    case ErrorKind::DuplicateArtifact: return "DuplicateArtifact";
    case ErrorKind::TypeMismatch: return "TypeMismatch";
    case ErrorKind::StaleSequence: return "StaleSequence";
    case ErrorKind::DuplicateChange: return "DuplicateChange";
    case ErrorKind::UnknownInstance: return "UnknownInstance";
    case ErrorKind::UnknownPattern: return "UnknownPattern";
    case ErrorKind::DuplicateBinding: return "DuplicateBinding";
    case ErrorKind::Format: return "FormatError";
  }
  return "Error";
}

/// 1-based line/column into the constraint source; line 0 means "no position".
struct SourcePos {
  int line = 0;
  int column = 0;

  friend bool operator==(const SourcePos&, const SourcePos&) = default;
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string message, SourcePos pos = {},
        std::vector<std::string> expected = {})
      : std::runtime_error(format(kind, message, pos)),
        kind_(kind),
        pos_(pos),
        detail_(std::move(message)),
        expected_(std::move(expected)) {}

  ErrorKind kind() const noexcept { return kind_; }
  SourcePos position() const noexcept { return pos_; }
  const std::string& detail() const noexcept { return detail_; }
  /// Tokens the parser would have accepted (syntax errors only).
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  static std::string format(ErrorKind kind, const std::string& message, SourcePos pos) {
    std::string out(to_string(kind));
    if (pos.line > 0) {
      out += " at " + std::to_string(pos.line) + ":" + std::to_string(pos.column);
    }
    out += ": " + message;
    return out;
  }

  ErrorKind kind_;
  SourcePos pos_;
  std::string detail_;
  std::vector<std::string> expected_;
};

}  // namespace tocl
