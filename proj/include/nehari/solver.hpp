#ifndef NEHARI_SOLVER_HPP_
#define NEHARI_SOLVER_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nehari/bubble.hpp"
#include "nehari/errors.hpp"
#include "nehari/fibering.hpp"

namespace nehari {

struct SolverOptions {
  std::uint64_t seed = 0;
  int max_iters = 5000;
  /// Residual tolerance relative to 1 + |energy|.
  double tol_res = 1e-6;
  double armijo_c = 1e-4;
  double shrink = 0.5;
  double initial_step = 1.0;
  double min_step = 1e-20;
  int max_restarts = 5;
};

struct SolveResult {
  GridFunction u;
  double energy = 0.0;
  double residual_norm = 0.0;
  /// Absolute tolerance the residual was held to.
  double tol_abs = 0.0;
  int iterations = 0;
  NehariClass klass{};
  double plus_part_norm = 0.0;
  double minus_part_norm = 0.0;
  bool converged = false;
  int restarts = 0;
  std::string stop_reason{};
  /// Energy after the start projection and after every accepted step.
  std::vector<double> energy_trace{};
};

/// t+(u) u on the selected fiber.
GridFunction project_minus(const GridFunction& u, const Params& params,
                           Variant variant = Variant::Standard);

/// Minimizes the plus-part energy over the minus branch of the manifold.
SolveResult solve_positive(const GridPtr& grid, const Params& params,
                           const SolverOptions& options = {});

struct FiberSup {
  double value = 0.0;
  double t_plus = 0.0;
  /// Set when the fiber has no Nehari root and value comes from a scan.
  bool from_scan = false;
};

FiberSup sup_over_fiber(const GridFunction& u0, const Params& params,
                        Variant variant = Variant::Standard);

struct CrossingResult {
  double r = 0.0;
  double a = 0.0;
  double b = 0.0;
  double s_plus = 0.0;
  double s_minus = 0.0;
  double r_bar1 = 0.0;
  double r_bar2 = 0.0;
  GridFunction ansatz;
  NehariClass plus_class{}, minus_class{};
  std::vector<CrossingProbe> trace{};
};

/// Part scalings s+(r), s-(r) of v_r = w1 - r u_eps.
CrossingProbe crossing_probe(const GridFunction& w1, const GridFunction& u_eps, const Params& params,
                             double r);

CrossingResult crossing_search(const GridFunction& w1, const GridFunction& u_eps, const Params& params,
                               double tol_cross = 1e-10);

/// t+(u+) u+ - t+(u-) u-: each part moved to the minus branch on its own fiber.
GridFunction project_parts(const GridFunction& u, const Params& params);

/// argmax over a, b > 0 of I(a u+ - b u-). Returns the maximizer's (a, b).
struct PartScales {
  double a = 1.0;
  double b = 1.0;
  int iterations = 0;
};
PartScales maximize_part_scales(const GridFunction& u, const Params& params);
GridFunction retract_nehari_nodal(const GridFunction& u, const Params& params);

struct SignChangingOptions {
  SolverOptions solver;
  double tol_cross = 1e-10;
  /// Sobolev constant for the energy-level bound; the check is skipped when empty.
  std::optional<double> S;
};

struct SignChangingResult {
  SolveResult result;
  CrossingResult crossing;
  BubbleSpec bubble;

  /// Descent restricted to the set where both parts sit on the minus branch.
  double cone_energy = 0.0;
  double cone_residual = 0.0;
  int cone_iterations = 0;
  bool cone_converged = false;
  std::vector<double> cone_trace{};
  NehariClass cone_plus_class{}, cone_minus_class{};

  /// Parts of the final critical point.
  NehariClass plus_class{}, minus_class{};
  double energy_plus = 0.0;
  double energy_minus = 0.0;
  bool split_ok = false;

  double positive_energy = 0.0;
  bool above_positive = false;
  std::optional<double> level_bound{};
  bool level_bound_ok = false;
};

SignChangingResult solve_sign_changing(const SolveResult& positive, const Params& params,
                                       const BubbleSpec& bubble, const SignChangingOptions& options = {});

struct SupScanResult {
  double max = 0.0;
  double a_at = 0.0;
  double b_at = 0.0;
  double coarse_max = 0.0;
  long evaluations = 0;
};

/// Max of I(a w1 - b u_eps) over a in [0, a_max], b in [-b_max, b_max]. The
/// points (1, 0) and the snapped points are grid nodes; one local refinement
/// follows.
SupScanResult sup_scan_ab(const GridFunction& w1, const GridFunction& u_eps, const Params& params,
                          double a_max, double b_max, int grid_counts,
                          const std::vector<std::pair<double, double>>& snap = {});

}  // namespace nehari

#endif  // NEHARI_SOLVER_HPP_
