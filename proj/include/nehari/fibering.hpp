#ifndef NEHARI_FIBERING_HPP_
#define NEHARI_FIBERING_HPP_

#include <optional>
#include <string_view>

#include "nehari/energy.hpp"

namespace nehari {

/// The three masses that determine the fiber t -> I(t u) completely.
struct FiberMasses {
  double seminorm = 0.0;  // |u|^p in X0
  double lq = 0.0;        // integral of |u|^{q+1}
  double lpstar = 0.0;    // integral of |u|^{p*}

  FiberMasses scaled(double t, const Params& params) const;
};

FiberMasses fiber_masses(const GridFunction& u, const Params& params, Variant variant);

struct FiberValues {
  double phi = 0.0;
  double dphi = 0.0;
  double ddphi = 0.0;
};

/// Scalar fiber built from masses; every fibering quantity is a closed form here.
class Fiber {
 public:
  Fiber(const FiberMasses& masses, const Params& params);

  const FiberMasses& masses() const { return m_; }
  FiberValues at(double t) const;
  double psi(double t) const;
  double concave_mass() const { return mu_ * m_.lq; }
  /// Requires lpstar > 0.
  double t0() const;

 private:
  FiberMasses m_;
  double p_, q_, mu_, pstar_;
};

enum class NehariTag { Plus, Minus, Zero, Off };
std::string_view to_string(NehariTag tag);

struct NehariClass {
  NehariTag tag = NehariTag::Off;
  double first_deriv = 0.0;
  double second_deriv = 0.0;
  /// Largest pairwise gap among the four manifold expressions for phi''(1).
  double identity_discrepancy = 0.0;
  /// Largest magnitude among those expressions.
  double identity_scale = 0.0;
  double tol = 0.0;
};

struct PsiMax {
  double t0 = 0.0;
  double psi_t0 = 0.0;
};

struct FiberingReport {
  double t0 = 0.0;
  double psi_t0 = 0.0;
  double concave_mass = 0.0;
  double tminus = 0.0;
  double tplus = 0.0;
  NehariClass class_minus;
  NehariClass class_plus;
};

inline constexpr double kBisectionRelWidth = 1e-12;
inline constexpr int kBisectionMaxIters = 200;

/// 1e-8 (|u|^p + m_{p*} + mu m_{q+1}).
double default_tol_manifold(const FiberMasses& m, const Params& params);

FiberValues fiber_derivatives(const GridFunction& u, double t, const Params& params,
                              Variant variant = Variant::Standard);
PsiMax psi_and_t0(const GridFunction& u, const Params& params, Variant variant = Variant::Standard);
PsiMax psi_and_t0(const FiberMasses& m, const Params& params);

FiberingReport fiber_roots(const GridFunction& u, const Params& params,
                           Variant variant = Variant::Standard);
FiberingReport fiber_roots(const FiberMasses& m, const Params& params);

NehariClass classify(const GridFunction& u, const Params& params,
                     std::optional<double> tol_manifold = std::nullopt,
                     Variant variant = Variant::Standard);
NehariClass classify(const FiberMasses& m, const Params& params, double tol_manifold);

/// Derivative at 0 of the scaling that keeps u + eps phi on the minus
/// branch of the manifold, i.e. d/d eps of t+(u + eps phi).
double perturbation_derivative(const GridFunction& u, const GridFunction& phi, const Params& params,
                               std::optional<double> tol_degenerate = std::nullopt);
/// Same quantity for every nodal direction at once.
GridFunction perturbation_gradient(const GridFunction& u, const Params& params,
                                   std::optional<double> tol_degenerate = std::nullopt);

/// Denominator (p-1-q)|u|^p - (p*-q-1) m_{p*} of the perturbation formula.
double minus_cone_denominator(const FiberMasses& m, const Params& params);

double psi_mu(const GridFunction& u, const Params& params);
double psi_mu(const FiberMasses& m, const Params& params);

}  // namespace nehari

#endif  // NEHARI_FIBERING_HPP_
