#ifndef NEHARI_ENERGY_HPP_
#define NEHARI_ENERGY_HPP_

#include <cmath>
#include <utility>

#include "nehari/grid.hpp"

namespace nehari {

/// Standard energy, or the variant that keeps only positive parts in the
/// Lebesgue terms.
enum class Variant { Standard, PlusPart };

struct EnergyBreakdown {
  double seminorm_p = 0.0;
  double lq_mass = 0.0;
  double lpstar_mass = 0.0;
  double total = 0.0;
};

/// sign(x)|x|^e with the continuous value 0 at x = 0.
inline double odd_pow(double x, double e) {
  if (x == 0.0) return 0.0;
  if (e == 1.0) return x;
  return std::copysign(std::pow(std::abs(x), e), x);
}

inline double abs_pow(double x, double e) {
  if (e == 2.0) return x * x;
  if (e == 1.0) return std::abs(x);
  return std::pow(std::abs(x), e);
}

/// Throws unless params are admissible and match the grid's kernel exponent.
void check_params(const Grid& grid, const Params& params);

double seminorm_p(const GridFunction& u, const Params& params);
double lebesgue_mass(const GridFunction& u, double r, bool plus_only = false);
EnergyBreakdown energy(const GridFunction& u, const Params& params,
                       Variant variant = Variant::Standard);

double form_A(const GridFunction& u, const GridFunction& phi, const Params& params);
/// The vector A(u, e_i) over nodal indicators.
GridFunction form_A_nodal(const GridFunction& u, const Params& params);

/// h * sum |u_i|^{r-2} u_i phi_i (positive parts of u when plus_only).
double lebesgue_pairing(const GridFunction& u, const GridFunction& phi, double r,
                        bool plus_only = false);

double residual(const GridFunction& u, const GridFunction& phi, const Params& params);
GridFunction gradient(const GridFunction& u, const Params& params,
                      Variant variant = Variant::Standard);

/// Second variation I''(w)[v,z] of the standard energy. The concave term is
/// only differentiable where w != 0, so v and z must vanish on zero nodes of w.
double second_variation(const GridFunction& w, const GridFunction& v, const GridFunction& z,
                        const Params& params);

/// u = uplus - uminus with both parts nonnegative.
std::pair<GridFunction, GridFunction> split_parts(const GridFunction& u);

}  // namespace nehari

#endif  // NEHARI_ENERGY_HPP_
