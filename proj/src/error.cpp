#include "rohoi/error.hpp"

namespace rohoi {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kInvalidKernel: return "invalid-kernel";
    case ErrorCode::kInvalidChannels: return "invalid-channels";
    case ErrorCode::kInvalidLevel: return "invalid-level";
    case ErrorCode::kUndefinedBaseline: return "undefined-baseline";
    case ErrorCode::kEmptyMask: return "empty-mask";
    case ErrorCode::kDegenerateGeometry: return "degenerate-geometry";
    case ErrorCode::kRegistry: return "registry";
    case ErrorCode::kConfig: return "config";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kVocabulary: return "vocabulary";
    case ErrorCode::kValidation: return "validation";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

}  // namespace rohoi
