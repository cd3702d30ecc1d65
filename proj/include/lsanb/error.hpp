#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lsanb {

enum class ErrorKind {
  kIo,
  kEncoding,
  kEmptyCorpus,
  kRankTooLarge,
  kZeroMatrix,
  kNonConvergence,
  kZeroVector,
  kKTooLarge,
  kEmptyTraining,
  kDimensionMismatch,
  kLengthMismatch,
  kUndefinedForClass,
  kInvalidConfig,
  kFormat,
};

std::string_view to_string(ErrorKind kind);

// Single exception type for the library. `stage` is filled in by the
// pipeline when an error crosses a stage boundary.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& stage() const noexcept { return stage_; }

  Error with_stage(std::string stage) const {
    Error e(kind_, what());
    e.stage_ = std::move(stage);
    return e;
  }

 private:
  ErrorKind kind_;
  std::string stage_;
};

}  // namespace lsanb
