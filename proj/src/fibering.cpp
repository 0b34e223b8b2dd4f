#include "nehari/fibering.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nehari/errors.hpp"

namespace nehari {

namespace {

// Root of a sign-changing f on [lo, hi]; f(lo) < 0 < f(hi) or the reverse.
template <typename F>
double bisect(F&& f, double lo, double hi) {
  const bool rising = f(lo) < 0.0;
  for (int it = 0; it < kBisectionMaxIters; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= kBisectionRelWidth * std::abs(mid)) return mid;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == rising) lo = mid;
    else hi = mid;
  }
  throw NumericError("bisection did not reach the relative width 1e-12 in 200 iterations");
}

void require_nonzero(const FiberMasses& m) {
  if (!(m.seminorm > 0.0)) throw DegenerateInput("nonzero function required");
}

}  // namespace

FiberMasses FiberMasses::scaled(double t, const Params& params) const {
  return {std::pow(t, params.p) * seminorm, std::pow(t, params.q + 1.0) * lq,
          std::pow(t, params.pstar()) * lpstar};
}

FiberMasses fiber_masses(const GridFunction& u, const Params& params, Variant variant) {
  const bool plus = variant == Variant::PlusPart;
  if (plus) {
    bool any = false;
    for (double v : u.values()) any = any || v > 0.0;
    if (!any) throw DegenerateInput("plus-part fiber requires a positive part");
  }
  FiberMasses m{seminorm_p(u, params), lebesgue_mass(u, params.q + 1.0, plus),
                lebesgue_mass(u, params.pstar(), plus)};
  require_nonzero(m);
  return m;
}

Fiber::Fiber(const FiberMasses& masses, const Params& params)
    : m_(masses), p_(params.p), q_(params.q), mu_(params.mu), pstar_(params.pstar()) {}

FiberValues Fiber::at(double t) const {
  if (!(t > 0.0)) throw DomainError("fiber evaluated at t <= 0");
  const double tp = std::pow(t, p_), tq = std::pow(t, q_ + 1.0), ts = std::pow(t, pstar_);
  FiberValues v;
  v.phi = tp * m_.seminorm / p_ - mu_ * tq * m_.lq / (q_ + 1.0) - ts * m_.lpstar / pstar_;
  v.dphi = (tp * m_.seminorm - mu_ * tq * m_.lq - ts * m_.lpstar) / t;
  v.ddphi = ((p_ - 1.0) * tp * m_.seminorm - q_ * mu_ * tq * m_.lq -
             (pstar_ - 1.0) * ts * m_.lpstar) / (t * t);
  return v;
}

double Fiber::psi(double t) const {
  return std::pow(t, p_ - 1.0 - q_) * m_.seminorm - std::pow(t, pstar_ - q_ - 1.0) * m_.lpstar;
}

double Fiber::t0() const {
  if (!(m_.lpstar > 0.0)) throw DegenerateInput("critical mass is zero, psi has no maximum");
  return std::pow((p_ - 1.0 - q_) * m_.seminorm / ((pstar_ - 1.0 - q_) * m_.lpstar),
                  1.0 / (pstar_ - p_));
}

std::string_view to_string(NehariTag tag) {
  switch (tag) {
    case NehariTag::Plus: return "Plus";
    case NehariTag::Minus: return "Minus";
    case NehariTag::Zero: return "Zero";
    case NehariTag::Off: return "Off";
  }
  return "?";
}

double default_tol_manifold(const FiberMasses& m, const Params& params) {
  return 1e-8 * (m.seminorm + m.lpstar + params.mu * m.lq);
}

FiberValues fiber_derivatives(const GridFunction& u, double t, const Params& params,
                              Variant variant) {
  if (!(t > 0.0)) throw DomainError("fiber evaluated at t <= 0");
  return Fiber(fiber_masses(u, params, variant), params).at(t);
}

PsiMax psi_and_t0(const FiberMasses& m, const Params& params) {
  require_nonzero(m);
  Fiber f(m, params);
  const double t0 = f.t0();
  return {t0, f.psi(t0)};
}

PsiMax psi_and_t0(const GridFunction& u, const Params& params, Variant variant) {
  return psi_and_t0(fiber_masses(u, params, variant), params);
}

NehariClass classify(const FiberMasses& m, const Params& params, double tol_manifold) {
  const double p = params.p, q = params.q, ps = params.pstar();
  const double N = m.seminorm, lq = params.mu * m.lq, ls = m.lpstar;
  NehariClass c;
  c.tol = tol_manifold;
  c.first_deriv = N - lq - ls;
  c.second_deriv = (p - 1.0) * N - q * lq - (ps - 1.0) * ls;
  const double forms[4] = {
      c.second_deriv,
      (p - ps) * ls + (p - 1.0 - q) * lq,
      (p - 1.0 - q) * N - (ps - 1.0 - q) * ls,
      (p - ps) * N + (ps - 1.0 - q) * lq,
  };
  for (int i = 0; i < 4; ++i) {
    c.identity_scale = std::max(c.identity_scale, std::abs(forms[i]));
    for (int j = i + 1; j < 4; ++j)
      c.identity_discrepancy = std::max(c.identity_discrepancy, std::abs(forms[i] - forms[j]));
  }
  if (std::abs(c.first_deriv) > tol_manifold) c.tag = NehariTag::Off;
  else if (std::abs(c.second_deriv) <= tol_manifold) c.tag = NehariTag::Zero;
  else c.tag = c.second_deriv > 0.0 ? NehariTag::Plus : NehariTag::Minus;
  return c;
}

NehariClass classify(const GridFunction& u, const Params& params, std::optional<double> tol_manifold,
                     Variant variant) {
  const FiberMasses m = fiber_masses(u, params, variant);
  return classify(m, params, tol_manifold.value_or(default_tol_manifold(m, params)));
}

FiberingReport fiber_roots(const FiberMasses& m, const Params& params) {
  require_nonzero(m);
  Fiber f(m, params);
  FiberingReport r;
  r.t0 = f.t0();
  r.psi_t0 = f.psi(r.t0);
  r.concave_mass = f.concave_mass();
  if (!(r.psi_t0 > r.concave_mass)) {
    std::ostringstream os;
    os << "no Nehari roots: psi(t0) - mu*m_{q+1} = " << r.psi_t0 - r.concave_mass;
    throw NoRoots(os.str(), r.concave_mass - r.psi_t0);
  }
  auto g = [&](double t) { return f.psi(t) - r.concave_mass; };

  if (r.concave_mass > 0.0) {
    r.tminus = bisect(g, 0.0, r.t0);
    const FiberMasses mm = m.scaled(r.tminus, params);
    r.class_minus = classify(mm, params, default_tol_manifold(mm, params));
  }

  double hi = 2.0 * r.t0;
  int grow = 0;
  while (g(hi) >= 0.0) {
    hi *= 2.0;
    if (++grow > kBisectionMaxIters || !std::isfinite(hi))
      throw NumericError("could not bracket the upper Nehari root");
  }
  r.tplus = bisect(g, r.t0, hi);
  const FiberMasses mp = m.scaled(r.tplus, params);
  r.class_plus = classify(mp, params, default_tol_manifold(mp, params));
  return r;
}

FiberingReport fiber_roots(const GridFunction& u, const Params& params, Variant variant) {
  return fiber_roots(fiber_masses(u, params, variant), params);
}

double minus_cone_denominator(const FiberMasses& m, const Params& params) {
  return (params.p - 1.0 - params.q) * m.seminorm - (params.pstar() - params.q - 1.0) * m.lpstar;
}

namespace {

double checked_denominator(const FiberMasses& m, const Params& params,
                           std::optional<double> tol_degenerate) {
  const double den = minus_cone_denominator(m, params);
  const double tol = tol_degenerate.value_or(1e-12 * (m.seminorm + m.lpstar));
  if (std::abs(den) < tol) throw DegenerateDenominator("perturbation denominator vanishes");
  if (den >= 0.0) throw NotMinusCone("perturbation derivative requires the minus branch");
  return den;
}

}  // namespace

double perturbation_derivative(const GridFunction& u, const GridFunction& phi, const Params& params,
                               std::optional<double> tol_degenerate) {
  require_same_grid(u, phi);
  const FiberMasses m = fiber_masses(u, params, Variant::Standard);
  const double den = checked_denominator(m, params, tol_degenerate);
  const double num = params.p * form_A(u, phi, params) -
                     params.pstar() * lebesgue_pairing(u, phi, params.pstar()) -
                     (params.q + 1.0) * params.mu * lebesgue_pairing(u, phi, params.q + 1.0);
  return -num / den;
}

GridFunction perturbation_gradient(const GridFunction& u, const Params& params,
                                   std::optional<double> tol_degenerate) {
  const FiberMasses m = fiber_masses(u, params, Variant::Standard);
  const double den = checked_denominator(m, params, tol_degenerate);
  std::vector<double> d = form_A_nodal(u, params).vector();
  const double h = u.grid().h();
  for (int i = 0; i < u.size(); ++i) {
    const double num = params.p * d[i] - params.pstar() * h * odd_pow(u[i], params.pstar() - 1.0) -
                       (params.q + 1.0) * params.mu * h * odd_pow(u[i], params.q);
    d[i] = -num / den;
  }
  return GridFunction(u.grid_ptr(), std::move(d));
}

double psi_mu(const FiberMasses& m, const Params& params) {
  require_nonzero(m);
  if (!(m.lpstar > 0.0)) throw DegenerateInput("critical mass is zero");
  const double p = params.p, q = params.q, ps = params.pstar();
  const double k0 = std::pow((p - 1.0 - q) / (ps - q - 1.0), (ps - 1.0) / (ps - p)) *
                    ((ps - p) / (p - 1.0 - q));
  const double ratio = std::pow(m.seminorm, ps - 1.0) / std::pow(m.lpstar, p - 1.0);
  return k0 * std::pow(ratio, 1.0 / (ps - p)) - params.mu * m.lq;
}

double psi_mu(const GridFunction& u, const Params& params) {
  return psi_mu(fiber_masses(u, params, Variant::Standard), params);
}

}  // namespace nehari
