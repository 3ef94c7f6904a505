#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sal {

enum class ErrorCode {
  InvalidArgument,
  UnknownSubtype,
  UnknownPsi,
  RenderOverflow,
  InfeasiblePlacement,
  ParseError,
  NonMonotoneIndex,
  DimensionMismatch,
  EmptyFixationMap,
  NoFixations,
  NoNegatives,
  EmptyShuffleSet,
  InvalidMap,
  ImageTooSmall,
  BadScalePair,
  UnreadableMap,
  IoError,
  LengthMismatch,
  DegenerateConstantInput,
  MissingInput,
  UnknownModel,
  ConfigError,
};

const char* to_string(ErrorCode code);

// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace sal
