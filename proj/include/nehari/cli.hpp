#ifndef NEHARI_CLI_HPP_
#define NEHARI_CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace nehari::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNumeric = 1;
inline constexpr int kExitInput = 2;
inline constexpr int kExitVerify = 3;

/// Runs one command line (argv[0] is the program name). Reports go to out
/// and to <out dir>/<subcommand>.tsv; diagnostics go to err.
int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace nehari::cli

#endif  // NEHARI_CLI_HPP_
