#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace smf::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitNumerical = 2;

inline constexpr int kSchemaVersion = 1;

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

} // namespace smf::cli
