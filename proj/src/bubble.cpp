#include "nehari/bubble.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nehari/energy.hpp"
#include "nehari/errors.hpp"

namespace nehari {

std::string_view to_string(ProfileKind k) { return k == ProfileKind::ExactP2 ? "exact-p2" : "model"; }

ProfileKind parse_profile_kind(std::string_view s) {
  if (s == "exact-p2") return ProfileKind::ExactP2;
  if (s == "model") return ProfileKind::Model;
  throw ParameterError("unknown profile kind '" + std::string(s) + "' (expected exact-p2 or model)");
}

double profile_U(double r, const Params& params, ProfileKind kind) {
  if (!(r >= 0.0)) throw DomainError("profile radius must be >= 0");
  const double N = params.N;
  if (kind == ProfileKind::ExactP2) return std::pow(1.0 + r * r, -(N - 2.0 * params.s) / 2.0);
  if (r <= 1.0) return 1.0;
  return std::pow(r, -(N - params.ps()) / (params.p - 1.0));
}

double cutoff(double x, const Grid& grid, double delta) {
  const double dist = std::min(x - grid.a(), grid.b() - x);
  if (dist <= 0.0) return 0.0;
  if (dist >= delta) return 1.0;
  const double t = dist / delta;
  return t * t * (3.0 - 2.0 * t);
}

GridFunction make_u_eps(const GridPtr& grid, const Params& params, const BubbleSpec& spec) {
  params.validate();
  if (!(spec.eps > 0.0) || !std::isfinite(spec.eps)) throw ParameterError("bubble requires eps > 0");
  if (!(spec.delta > 0.0)) throw ParameterError("bubble requires delta > 0");
  if (!(spec.delta < grid->half_width())) throw ParameterError("bubble requires delta below the half-width");
  const double c = spec.center.value_or(grid->midpoint());
  if (!(c > grid->a() && c < grid->b())) throw ParameterError("bubble center must lie inside the domain");
  const double amp = std::pow(spec.eps, -(params.N - params.ps()) / params.p);
  return GridFunction::from(grid, [&](double x) {
    return cutoff(x, *grid, spec.delta) * amp * profile_U(std::abs(x - c) / spec.eps, params, spec.kind);
  });
}

std::string_view to_string(Interaction w) {
  switch (w) {
    case Interaction::A1: return "A1";
    case Interaction::A2: return "A2";
    case Interaction::A3: return "A3";
    case Interaction::A4: return "A4";
  }
  return "?";
}

double interaction_integral(const GridFunction& w1, const GridFunction& u_eps, const Params& params,
                            Interaction which) {
  require_same_grid(w1, u_eps);
  for (double v : w1.values())
    if (v < 0.0) throw DomainError("interaction integrals require w1 >= 0");
  const double ps = params.pstar(), q = params.q;
  double acc = 0.0;
  for (int i = 0; i < w1.size(); ++i) {
    const double w = w1[i], u = u_eps[i];
    switch (which) {
      case Interaction::A1: acc += std::pow(w, ps - 1.0) * u; break;
      case Interaction::A2: acc += std::pow(w, q) * u; break;
      case Interaction::A3: acc += w * std::pow(u, q); break;
      case Interaction::A4: acc += w * std::pow(u, ps - 1.0); break;
    }
  }
  return w1.grid().h() * acc;
}

double interaction_integral(const GridFunction& w1, const GridPtr& grid, const Params& params,
                            const BubbleSpec& spec, Interaction which) {
  return interaction_integral(w1, make_u_eps(grid, params, spec), params, which);
}

double interaction_theory(const Params& params, Interaction which) {
  const double N = params.N, p = params.p, ps = params.ps();
  const double base = (N - ps) / (p * (p - 1.0));
  switch (which) {
    case Interaction::A1:
    case Interaction::A2: return base;
    case Interaction::A3: return base * params.q;
    case Interaction::A4: return (N * (p - 1.0) + ps) / (p * (p - 1.0));
  }
  return 0.0;
}

ScalingFit fit_exponent(const std::vector<double>& eps, const std::vector<double>& values,
                        std::optional<double> theory) {
  if (eps.size() != values.size()) throw ParameterError("ladder and values differ in length");
  if (eps.size() < 4) throw ParameterError("scaling fit requires at least 4 points");
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!(eps[i] > 0.0)) throw ParameterError("eps ladder must be positive");
    if (i > 0 && !(eps[i] < eps[i - 1])) throw ParameterError("eps ladder must be strictly decreasing");
    if (!(values[i] > 0.0) || !std::isfinite(values[i]))
      throw DomainError("scaling fit requires positive finite values");
  }
  const double n = static_cast<double>(eps.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    mx += std::log(eps[i]);
    my += std::log(values[i]);
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    const double dx = std::log(eps[i]) - mx;
    sxy += dx * (std::log(values[i]) - my);
    sxx += dx * dx;
  }
  ScalingFit f{eps, values, sxy / sxx, 0.0, theory, 0.0};
  f.intercept = my - f.slope * mx;
  if (theory) f.rel_err = std::abs(f.slope - *theory) / std::abs(*theory);
  return f;
}

std::string_view to_string(LqRegime r) {
  switch (r) {
    case LqRegime::Below: return "below";
    case LqRegime::Critical: return "critical";
    case LqRegime::Above: return "above";
  }
  return "?";
}

LqRegime lq_regime(const Params& params) {
  const double t = (params.N * (params.p - 2.0) + params.ps()) / (params.N - params.ps());
  if (std::abs(params.q - t) <= 1e-12 * std::max(1.0, t)) return LqRegime::Critical;
  return params.q < t ? LqRegime::Below : LqRegime::Above;
}

double lq_theory(const Params& params, LqRegime regime) {
  const double N = params.N, p = params.p, ps = params.ps(), q = params.q;
  switch (regime) {
    case LqRegime::Below: return (N - ps) * (q + 1.0) / (p * (p - 1.0));
    case LqRegime::Critical: return N / p;
    case LqRegime::Above: return N - (N - ps) * (q + 1.0) / p;
  }
  return 0.0;
}

LqScaling lq_mass_scaling(const GridPtr& grid, const Params& params,
                          const std::vector<BubbleSpec>& ladder) {
  if (ladder.size() < 4) throw ParameterError("L^{q+1} scaling requires a ladder of at least 4 points");
  LqScaling out;
  out.regime = lq_regime(params);
  out.threshold = (params.N * (params.p - 2.0) + params.ps()) / (params.N - params.ps());
  const double theory = lq_theory(params, out.regime);
  std::vector<double> eps, vals;
  for (const BubbleSpec& spec : ladder) {
    double v = lebesgue_mass(make_u_eps(grid, params, spec), params.q + 1.0);
    if (out.regime == LqRegime::Critical) v /= std::abs(std::log(spec.eps));
    eps.push_back(spec.eps);
    vals.push_back(v);
  }
  out.fit = fit_exponent(eps, vals, theory);
  out.lower_constant = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < eps.size(); ++i)
    out.lower_constant = std::min(out.lower_constant, vals[i] / std::pow(eps[i], theory));
  return out;
}

std::vector<double> default_eps_ladder(const Grid& grid) {
  const double hw = grid.half_width();
  return {0.2 * hw, 0.1 * hw, 0.05 * hw, 0.025 * hw};
}

double default_delta(const Grid& grid) { return 0.25 * grid.half_width(); }

std::vector<BubbleSpec> ladder_specs(const std::vector<double>& eps, double delta, ProfileKind kind) {
  std::vector<BubbleSpec> out;
  out.reserve(eps.size());
  for (double e : eps) out.push_back(BubbleSpec{e, delta, std::nullopt, kind});
  return out;
}

}  // namespace nehari
