#include "lsanb/error.hpp"

namespace lsanb {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kIo: return "IoError";
    case ErrorKind::kEncoding: return "EncodingError";
    case ErrorKind::kEmptyCorpus: return "EmptyCorpus";
    case ErrorKind::kRankTooLarge: return "RankTooLarge";
    case ErrorKind::kZeroMatrix: return "ZeroMatrix";
    case ErrorKind::kNonConvergence: return "NonConvergence";
    case ErrorKind::kZeroVector: return "ZeroVector";
    case ErrorKind::kKTooLarge: return "KTooLarge";
    case ErrorKind::kEmptyTraining: return "EmptyTraining";
    case ErrorKind::kDimensionMismatch: return "DimensionMismatch";
    case ErrorKind::kLengthMismatch: return "LengthMismatch";
    case ErrorKind::kUndefinedForClass: return "UndefinedForClass";
    case ErrorKind::kInvalidConfig: return "InvalidConfig";
    case ErrorKind::kFormat: return "FormatError";
  }
  return "Unknown";
}

}  // namespace lsanb
