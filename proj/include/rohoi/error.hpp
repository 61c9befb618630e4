#pragma once

#include <stdexcept>
#include <string>

namespace rohoi {

enum class ErrorCode {
  kInvalidArgument,
  kInvalidKernel,
  kInvalidChannels,
  kInvalidLevel,
  kUndefinedBaseline,
  kEmptyMask,
  kDegenerateGeometry,
  kRegistry,
  kConfig,
  kParse,
  kVocabulary,
  kValidation,
  kIo,
};

const char* to_string(ErrorCode code);

// Single exception type for the toolkit; the code drives CLI exit statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace rohoi
