#ifndef EEGL_ERROR_H_
#define EEGL_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace eegl {

enum class ErrorCode {
  kSelfLoop,
  kNodeOutOfRange,
  kDuplicateEdge,
  kEmptyGraph,
  kPartitionSizeMismatch,
  kBudgetExceeded,
  kDisconnectedPattern,
  kEmptyAnchorSet,
  kEmptyDatabase,
  kMissingRoot,
  kDimensionMismatch,
  kEmptyTrainSet,
  kLabelOutOfRange,
  kEmptyGrid,
  kMaskShapeMismatch,
  kNoEdgesInScope,
  kTooManyPatterns,
  kMissingLabels,
  kDimensionTooSmall,
  kBadParams,
  kNotEnoughBaseNodes,
  kCertificateFailure,
  kNotCubic,
  kLabelCountMismatch,
  kBadK,
  kEmptyMatrix,
  kSpecParseError,
  kInvalidConfig,
  kIoError,
  kParseError,
};

std::string_view error_code_name(ErrorCode code);

// All library failures surface as this exception; `code()` identifies the
// contract violation, `what()` carries the human-readable context.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace eegl

#endif  // EEGL_ERROR_H_
