#ifndef NEHARI_CONSTANTS_HPP_
#define NEHARI_CONSTANTS_HPP_

#include <cstdint>
#include <string_view>

#include "nehari/grid.hpp"

namespace nehari {

inline constexpr double kGoldenThreshold = 2.618033988749894848;  // (3 + sqrt 5) / 2

enum class PBranch { Low, High };  // 2 <= p < golden, p >= golden
std::string_view to_string(PBranch b);

double mu_tilde(const Params& params, double domain_measure, double S);
double big_M(const Params& params, double domain_measure);
/// (s/N) S^{N/(sp)} - M mu^{p*/(p*-q-1)}.
double ps_level(const Params& params, double domain_measure, double S, double mu);
double q1(const Params& params);
double q2(const Params& params);
double q3(const Params& params);
PBranch p_branch(double p);
double q0(const Params& params);
double N0(const Params& params);
/// The value N0 would take on the other p-branch.
double N0_other_branch(const Params& params);
/// Dimension bound (sp/2)[p + 1 + sqrt((p+1)^2 - 4)].
double N_energy_bound(const Params& params);
/// Threshold (N(p-2)+ps)/(N-ps) separating the three L^{q+1} regimes.
double lq_regime_threshold(const Params& params);

struct ConstantsReport {
  double S = 0.0;
  double domain_measure = 0.0;
  double mu_tilde = 0.0;
  double big_M = 0.0;
  double c_star_zero = 0.0;
  double c_star_mu = 0.0;  // at params.mu
  double q1 = 0.0, q2 = 0.0, q3 = 0.0, q0 = 0.0;
  double N0 = 0.0;
  double N0_other_branch = 0.0;
  double N_energy_bound = 0.0;
  PBranch branch = PBranch::Low;
  bool q_window_nonempty = false;
  bool hypothesis_ok = false;
  bool mu_below_mu_tilde = false;

  Params params;
  double ps_level(double mu) const;
};

ConstantsReport regime_report(const Params& params, double domain_measure, double S);

double rayleigh_quotient(const GridFunction& u, const Params& params);

struct SobolevEstimate {
  double value = 0.0;
  bool converged = false;
  int iterations = 0;
  double final_rel_decrease = 0.0;
  GridFunction minimizer;
};

/// Normalized gradient descent on the Rayleigh quotient from a seeded
/// random start; value is the running minimum.
SobolevEstimate estimate_sobolev(const GridPtr& grid, const Params& params, int iters,
                                 std::uint64_t seed);

}  // namespace nehari

#endif  // NEHARI_CONSTANTS_HPP_
