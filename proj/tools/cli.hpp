#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gaugeword::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDataError = 1;
inline constexpr int kExitUsage = 2;

// Runs the gaugeword command line. `args` excludes the program name.
// Returns 0 on success, 2 on usage errors, 1 on data or numerical errors.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace gaugeword::cli
