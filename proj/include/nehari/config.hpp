#ifndef NEHARI_CONFIG_HPP_
#define NEHARI_CONFIG_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "nehari/bubble.hpp"
#include "nehari/grid.hpp"
#include "nehari/solver.hpp"

namespace nehari {

struct RunConfig {
  Params params;

  double a = -1.0;
  double b = 1.0;
  int n = 128;

  std::vector<double> eps_ladder{0.2, 0.1, 0.05, 0.025};
  double delta = 0.25;
  ProfileKind profile = ProfileKind::ExactP2;
  /// Bubble width used by the sign-changing search and the sup scan.
  double eps = 0.05;

  SolverOptions solver;
  double tol_cross = 1e-10;

  int sobolev_iters = 3000;
  int samples = 100;

  double scan_a_max = 4.0;
  double scan_b_max = 4.0;
  int scan_counts = 32;

  std::string out_dir = ".";

  GridPtr grid() const;
  /// Every key with its current value, in key order. Used for hashing and echoing.
  std::map<std::string, std::string> entries() const;
};

/// Parses "key = value" lines; '#' starts a comment. Unknown keys and
/// malformed values raise ParameterError naming the key.
RunConfig parse_config(const std::string& text, RunConfig base = {});
RunConfig load_config(const std::string& path);
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);
/// "key=value" form used by --set.
void apply_override(RunConfig& cfg, const std::string& assignment);

/// FNV-1a 64 over the canonical entries.
std::uint64_t config_hash(const RunConfig& cfg);
std::string hex64(std::uint64_t v);

/// "%.17g" text for a double; round-trips exactly.
std::string format_real(double v);

}  // namespace nehari

#endif  // NEHARI_CONFIG_HPP_
