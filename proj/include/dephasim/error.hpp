#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dephasim {

enum class ErrorCode {
  InvalidArgument,
  DimensionMismatch,
  UnsupportedDimension,
  NonHermitian,
  NotHermitian,
  TraceNotOne,
  NotPositive,
  ParseError,
  LabelError,
  ZeroNorm,
  DriveNotSupported,
  NotXForm,
  GridMismatch,
  IoError,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::UnsupportedDimension: return "UnsupportedDimension";
    case ErrorCode::NonHermitian: return "NonHermitian";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::TraceNotOne: return "TraceNotOne";
    case ErrorCode::NotPositive: return "NotPositive";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::LabelError: return "LabelError";
    case ErrorCode::ZeroNorm: return "ZeroNorm";
    case ErrorCode::DriveNotSupported: return "DriveNotSupported";
    case ErrorCode::NotXForm: return "NotXForm";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

/// Base exception for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Syntax error in a ket expression; `position` is a 0-based character offset.
class ParseError : public Error {
 public:
  ParseError(std::size_t position, const std::string& message)
      : Error(ErrorCode::ParseError, "at position " + std::to_string(position) + ": " + message),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace dephasim
