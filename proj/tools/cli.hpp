#ifndef INNERAPPROX_TOOLS_CLI_HPP
#define INNERAPPROX_TOOLS_CLI_HPP

#include "innerapprox/types.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace innerapprox::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitParse = 2;
inline constexpr int kExitInvariant = 3;
inline constexpr int kExitNumerical = 4;

int exit_code(ErrorKind kind);

/// "8" or "3..10".
std::vector<int> parse_depths(const std::string& text);

/// "re,im" or "re".
Complex parse_complex(const std::string& text);

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace innerapprox::cli

#endif  // INNERAPPROX_TOOLS_CLI_HPP
