#include "frf/error.hpp"

namespace frf {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIo: return "io";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kInvalidMesh: return "invalid-mesh";
    case ErrorCode::kNonManifold: return "non-manifold";
    case ErrorCode::kTopology: return "topology";
    case ErrorCode::kInvalidSeeds: return "invalid-seeds";
    case ErrorCode::kPathCrossing: return "path-crossing";
    case ErrorCode::kDivision: return "division";
    case ErrorCode::kTemplate: return "template";
    case ErrorCode::kOrientation: return "orientation";
    case ErrorCode::kSingular: return "singular";
    case ErrorCode::kSolver: return "solver";
    case ErrorCode::kDegenerate: return "degenerate";
    case ErrorCode::kMismatch: return "mismatch";
    case ErrorCode::kInvalidArgument: return "invalid-argument";
  }
  return "unknown";
}

Error::Error(ErrorCode code, std::string stage, std::string message, std::optional<int> vertex)
    : std::runtime_error("[" + stage + "] " + message),
      code_(code),
      stage_(std::move(stage)),
      message_(std::move(message)),
      vertex_(vertex) {}

Error Error::retagged(std::string stage) const {
  return Error(code_, std::move(stage), message_, vertex_);
}

}  // namespace frf
