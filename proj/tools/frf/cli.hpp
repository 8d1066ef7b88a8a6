#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace frf::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;  // usage or configuration error
inline constexpr int kExitStage = 3;   // a pipeline stage rejected the input

// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace frf::cli
