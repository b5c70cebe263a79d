#include "streamelas/error.hpp"

namespace streamelas {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedHeader: return "MalformedHeader";
    case ErrorCode::Truncated: return "Truncated";
    case ErrorCode::UnsupportedDepth: return "UnsupportedDepth";
    case ErrorCode::FormatError: return "FormatError";
    case ErrorCode::WriteError: return "WriteError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::InputTooSmall: return "InputTooSmall";
    case ErrorCode::ShapeError: return "ShapeError";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

}  // namespace streamelas
