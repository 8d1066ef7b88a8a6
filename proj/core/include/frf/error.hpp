#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace frf {

enum class ErrorCode {
  kIo,
  kParse,
  kInvalidMesh,
  kNonManifold,
  kTopology,
  kInvalidSeeds,
  kPathCrossing,
  kDivision,
  kTemplate,
  kOrientation,
  kSingular,
  kSolver,
  kDegenerate,
  kMismatch,
  kInvalidArgument,
};

const char* to_string(ErrorCode code);

// Every failure raised by the library carries the pipeline stage it came from.
// `vertex` names the offending vertex when one exists (crossing paths, bad seeds).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string stage, std::string message,
        std::optional<int> vertex = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  const std::string& stage() const noexcept { return stage_; }
  const std::string& message() const noexcept { return message_; }
  std::optional<int> vertex() const noexcept { return vertex_; }

  // Same error re-tagged with another stage name.
  Error retagged(std::string stage) const;

 private:
  ErrorCode code_;
  std::string stage_;
  std::string message_;
  std::optional<int> vertex_;
};

}  // namespace frf
