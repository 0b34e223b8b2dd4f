#ifndef NEHARI_BUBBLE_HPP_
#define NEHARI_BUBBLE_HPP_

#include <optional>
#include <string_view>
#include <vector>

#include "nehari/grid.hpp"

namespace nehari {

enum class ProfileKind { ExactP2, Model };
std::string_view to_string(ProfileKind k);
ProfileKind parse_profile_kind(std::string_view s);

/// Unnormalized extremal profile: (1+r^2)^{-(N-2s)/2} for p = 2, or the
/// model min(1, r^{-(N-sp)/(p-1)}).
double profile_U(double r, const Params& params, ProfileKind kind);

struct BubbleSpec {
  double eps = 0.0;
  double delta = 0.0;
  std::optional<double> center;  // midpoint of the grid when empty
  ProfileKind kind = ProfileKind::ExactP2;
};

/// Cubic smoothstep: 1 at distance >= delta from the boundary, 0 on it.
double cutoff(double x, const Grid& grid, double delta);

GridFunction make_u_eps(const GridPtr& grid, const Params& params, const BubbleSpec& spec);

enum class Interaction { A1, A2, A3, A4 };
std::string_view to_string(Interaction w);

double interaction_integral(const GridFunction& w1, const GridFunction& u_eps, const Params& params,
                            Interaction which);
double interaction_integral(const GridFunction& w1, const GridPtr& grid, const Params& params,
                            const BubbleSpec& spec, Interaction which);
/// Upper-bound exponent of the interaction integral in eps.
double interaction_theory(const Params& params, Interaction which);

struct ScalingFit {
  std::vector<double> eps_ladder;
  std::vector<double> values;
  double slope = 0.0;
  double intercept = 0.0;
  std::optional<double> theory;
  double rel_err = 0.0;
};

/// OLS slope of log(value) against log(eps).
ScalingFit fit_exponent(const std::vector<double>& eps_ladder, const std::vector<double>& values,
                        std::optional<double> theory = std::nullopt);

enum class LqRegime { Below, Critical, Above };
std::string_view to_string(LqRegime r);

struct LqScaling {
  ScalingFit fit;
  LqRegime regime = LqRegime::Below;
  double threshold = 0.0;
  /// Largest k with value >= k eps^theory over the ladder (the lower-bound law).
  double lower_constant = 0.0;
};

LqRegime lq_regime(const Params& params);
double lq_theory(const Params& params, LqRegime regime);

LqScaling lq_mass_scaling(const GridPtr& grid, const Params& params,
                          const std::vector<BubbleSpec>& ladder);

/// {0.2, 0.1, 0.05, 0.025} times the half-width.
std::vector<double> default_eps_ladder(const Grid& grid);
/// 0.25 times the half-width.
double default_delta(const Grid& grid);

std::vector<BubbleSpec> ladder_specs(const std::vector<double>& eps, double delta, ProfileKind kind);

}  // namespace nehari

#endif  // NEHARI_BUBBLE_HPP_
