#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace m3s {

enum class Errc {
  EmptyGraph,
  Disconnected,
  BadColourIndex,
  BadPalette,
  DuplicateId,
  UnknownId,
  UnreachableState,
  UnknownState,
  ReservedColour,
  InfinitelyManyEnds,
  PaletteMismatch,
  InvalidSpec,
  Syntax,
  Validation,
};

inline const char* to_string(Errc code) {
  switch (code) {
    case Errc::EmptyGraph: return "EmptyGraph";
    case Errc::Disconnected: return "Disconnected";
    case Errc::BadColourIndex: return "BadColourIndex";
    case Errc::BadPalette: return "BadPalette";
    case Errc::DuplicateId: return "DuplicateId";
    case Errc::UnknownId: return "UnknownId";
    case Errc::UnreachableState: return "UnreachableState";
    case Errc::UnknownState: return "UnknownState";
    case Errc::ReservedColour: return "ReservedColour";
    case Errc::InfinitelyManyEnds: return "InfinitelyManyEnds";
    case Errc::PaletteMismatch: return "PaletteMismatch";
    case Errc::InvalidSpec: return "InvalidSpec";
    case Errc::Syntax: return "SyntaxError";
    case Errc::Validation: return "ValidationError";
  }
  return "Unknown";
}

/// Base of every error raised by the library. `subjects` names the offending
/// identifiers (vertex ids, state ids, palette indices) in reporting order.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message, std::vector<std::string> subjects = {})
      : std::runtime_error(message), code_(code), subjects_(std::move(subjects)) {}

  Errc code() const noexcept { return code_; }
  const std::vector<std::string>& subjects() const noexcept { return subjects_; }

  virtual std::shared_ptr<const Error> clone() const { return std::make_shared<Error>(*this); }

 private:
  Errc code_;
  std::vector<std::string> subjects_;
};

class DisconnectedError : public Error {
 public:
  explicit DisconnectedError(std::vector<std::vector<std::string>> components)
      : Error(Errc::Disconnected, describe(components)), components_(std::move(components)) {}

  const std::vector<std::vector<std::string>>& components() const noexcept { return components_; }

  std::shared_ptr<const Error> clone() const override {
    return std::make_shared<DisconnectedError>(*this);
  }

 private:
  static std::string describe(const std::vector<std::vector<std::string>>& components) {
    std::string text = "graph is disconnected: ";
    for (std::size_t i = 0; i < components.size(); ++i) {
      if (i) text += ", ";
      text += "{";
      for (std::size_t j = 0; j < components[i].size(); ++j) {
        if (j) text += ", ";
        text += components[i][j];
      }
      text += "}";
    }
    return text;
  }

  std::vector<std::vector<std::string>> components_;
};

struct SourcePosition {
  std::size_t line = 1;
  std::size_t column = 1;

  friend bool operator==(const SourcePosition&, const SourcePosition&) = default;
};

class SyntaxError : public Error {
 public:
  SyntaxError(SourcePosition position, std::string expected, const std::string& found)
      : Error(Errc::Syntax, std::to_string(position.line) + ":" + std::to_string(position.column) +
                                ": expected " + expected + ", found " + found),
        position_(position),
        expected_(std::move(expected)) {}

  SourcePosition position() const noexcept { return position_; }
  const std::string& expected() const noexcept { return expected_; }

  std::shared_ptr<const Error> clone() const override { return std::make_shared<SyntaxError>(*this); }

 private:
  SourcePosition position_;
  std::string expected_;
};

/// A parsed document failed semantic validation; `cause()` is the original error.
class ValidationError : public Error {
 public:
  explicit ValidationError(const Error& cause)
      : Error(Errc::Validation, std::string("validation failed: ") + cause.what(), cause.subjects()),
        cause_(cause.clone()) {}

  const Error& cause() const noexcept { return *cause_; }

  std::shared_ptr<const Error> clone() const override {
    return std::make_shared<ValidationError>(*this);
  }

 private:
  std::shared_ptr<const Error> cause_;
};

}  // namespace m3s
