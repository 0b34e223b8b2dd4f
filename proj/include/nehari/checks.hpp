#ifndef NEHARI_CHECKS_HPP_
#define NEHARI_CHECKS_HPP_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "nehari/grid.hpp"

namespace nehari {

/// Outcome of one property evaluated on many samples. worst is the largest
/// normalized defect seen; a sample violates when its defect exceeds tol.
struct Check {
  std::string name;
  long samples = 0;
  long violations = 0;
  double worst = 0.0;
  double tol = 0.0;
  bool passed() const { return samples > 0 && violations == 0; }
  void record(double defect);
};

/// Four sine modes with Gaussian weights plus 10% nodal noise.
GridFunction random_smooth(const GridPtr& grid, std::mt19937_64& rng, double amplitude = 1.0);

/// Gradient consistency, homogeneity, breakdown and residual identities, and
/// the sign-structure inequalities.
std::vector<Check> energy_checks(const GridPtr& grid, const Params& params, int samples, std::uint64_t seed);

/// Root ordering and dense-scan agreement, manifold identity, classification
/// of projections, and the re-projection derivative. mu_probe is the weight
/// used by the degenerate-class probe.
std::vector<Check> fibering_checks(const GridPtr& grid, const Params& params, int samples, std::uint64_t seed,
                                   double mu_probe);

/// Brackets of sign changes of psi(t) - c on a uniform scan of (0, T].
std::vector<std::pair<double, double>> scan_roots(double seminorm, double lpstar, double c, const Params& params,
                                                  int points);

}  // namespace nehari

#endif  // NEHARI_CHECKS_HPP_
