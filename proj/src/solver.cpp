#include "nehari/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

namespace nehari {

namespace {

double dot(const GridFunction& u, const GridFunction& v) {
  double acc = 0.0;
  for (int i = 0; i < u.size(); ++i) acc += u[i] * v[i];
  return acc;
}

double sup_norm(const GridFunction& u) { return u.max_abs(); }

double residual_scale(double energy) { return 1.0 + std::abs(energy); }

GridFunction seeded_bump(const GridPtr& grid, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.75, 1.25);
  std::vector<double> v(grid->n());
  const double L = grid->measure();
  for (int i = 0; i < grid->n(); ++i)
    v[i] = std::sin(std::numbers::pi * (grid->node(i) - grid->a()) / L) * unif(rng);
  return GridFunction(grid, std::move(v));
}

struct Step {
  bool accepted = false;
  GridFunction u;
  double energy = 0.0;
};

// Armijo backtracking along -dir with a retraction applied to every trial.
template <typename Retract, typename Energy>
Step armijo(const GridFunction& u, double e0, const GridFunction& dir, double dir_sq,
            const SolverOptions& opt, Retract&& retract, Energy&& energy) {
  double alpha = opt.initial_step;
  while (alpha >= opt.min_step) {
    try {
      GridFunction trial = retract(u.axpy(-alpha, dir));
      const double e = energy(trial);
      if (std::isfinite(e) && e <= e0 - opt.armijo_c * alpha * dir_sq) return {true, std::move(trial), e};
    } catch (const NoRoots&) {
      // the trial left the solvable region; shorten the step
    } catch (const CollapseError&) {
    } catch (const DegenerateInput&) {
    } catch (const DomainError&) {
      // overflowed trial values
    }
    alpha *= opt.shrink;
  }
  return {false, u, e0};
}

}  // namespace

GridFunction project_minus(const GridFunction& u, const Params& params, Variant variant) {
  return u.scaled(fiber_roots(u, params, variant).tplus);
}

SolveResult solve_positive(const GridPtr& grid, const Params& params, const SolverOptions& opt) {
  params.validate_discrete();
  check_params(*grid, params);
  std::mt19937_64 rng(opt.seed);
  const Variant var = Variant::PlusPart;
  auto energy_of = [&](const GridFunction& v) { return energy(v, params, var).total; };
  auto retract = [&](const GridFunction& v) { return project_minus(v, params, var); };

  for (int restart = 0; restart <= opt.max_restarts; ++restart) {
    GridFunction start = seeded_bump(grid, rng);
    GridFunction u = start;
    try {
      u = retract(start);
    } catch (const NoRoots&) {
      continue;
    }
    SolveResult res{.u = u};
    res.restarts = restart;
    res.energy = energy_of(u);
    res.energy_trace.push_back(res.energy);
    res.stop_reason = "max_iters";
    for (int it = 0;; ++it) {
      const GridFunction g = gradient(res.u, params, var);
      res.residual_norm = sup_norm(g);
      res.tol_abs = opt.tol_res * residual_scale(res.energy);
      res.iterations = it;
      if (res.residual_norm <= res.tol_abs) {
        res.converged = true;
        res.stop_reason = "residual";
        break;
      }
      if (it >= opt.max_iters) break;
      Step st = armijo(res.u, res.energy, g, dot(g, g), opt, retract, energy_of);
      if (!st.accepted) {
        res.stop_reason = "line_search";
        break;
      }
      res.u = std::move(st.u);
      res.energy = st.energy;
      res.energy_trace.push_back(res.energy);
    }
    res.klass = classify(res.u, params, std::nullopt, var);
    auto [up, um] = split_parts(res.u);
    res.plus_part_norm = seminorm_p(up, params);
    res.minus_part_norm = seminorm_p(um, params);
    res.converged = res.converged && (res.klass.tag == NehariTag::Plus || res.klass.tag == NehariTag::Minus);
    return res;
  }
  SolveResult failed{.u = GridFunction::zeros(grid)};
  failed.restarts = opt.max_restarts;
  failed.stop_reason = "no_roots";
  return failed;
}

FiberSup sup_over_fiber(const GridFunction& u0, const Params& params, Variant variant) {
  const FiberMasses m = fiber_masses(u0, params, variant);
  Fiber f(m, params);
  try {
    const FiberingReport r = fiber_roots(m, params);
    return {f.at(r.tplus).phi, r.tplus, false};
  } catch (const NoRoots&) {
    // decreasing fiber: the supremum is the t -> 0 limit, confirmed on a scan
    const double T = 4.0 * f.t0();
    double best = 0.0;
    constexpr int kScan = 10000;
    for (int k = 1; k <= kScan; ++k) best = std::max(best, f.at(T * k / kScan).phi);
    return {best, 0.0, true};
  }
}

CrossingProbe crossing_probe(const GridFunction& w1, const GridFunction& u_eps, const Params& params,
                             double r) {
  auto [vp, vm] = split_parts(w1.axpy(-r, u_eps));
  CrossingProbe pr{r, std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
  if (!vp.is_zero()) pr.s_plus = fiber_roots(vp, params).tplus;
  if (!vm.is_zero()) pr.s_minus = fiber_roots(vm, params).tplus;
  return pr;
}

CrossingResult crossing_search(const GridFunction& w1, const GridFunction& u_eps, const Params& params,
                               double tol_cross) {
  require_same_grid(w1, u_eps);
  if (w1.is_zero() || u_eps.is_zero()) throw DegenerateInput("crossing search requires nonzero w1 and u_eps");
  for (int i = 0; i < w1.size(); ++i) {
    if (!(w1[i] > 0.0)) throw DomainError("crossing search requires w1 > 0 on interior nodes");
    if (u_eps[i] < 0.0) throw DomainError("crossing search requires u_eps >= 0");
  }
  const double umax = u_eps.max_abs();
  double r1 = std::numeric_limits<double>::infinity(), r2 = 0.0;
  for (int i = 0; i < w1.size(); ++i) {
    if (u_eps[i] > 1e-12 * umax) {
      const double ratio = w1[i] / u_eps[i];
      r1 = std::min(r1, ratio);
      r2 = std::max(r2, ratio);
    }
  }
  if (!(r2 > r1)) throw NoCrossing("degenerate ratio bracket", {});
  const double width = r2 - r1;
  std::vector<CrossingProbe> trace;

  auto probe = [&](double r) -> std::optional<CrossingProbe> {
    try {
      CrossingProbe pr = crossing_probe(w1, u_eps, params, r);
      trace.push_back(pr);
      if (std::isnan(pr.s_plus) || std::isnan(pr.s_minus)) return std::nullopt;
      return pr;
    } catch (const NoRoots&) {
      trace.push_back({r, std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()});
      return std::nullopt;
    }
  };
  auto diff = [](const CrossingProbe& pr) { return pr.s_plus - pr.s_minus; };

  // walk inward from each end until both parts are nontrivial
  std::optional<CrossingProbe> left, right;
  for (double f = 1e-6; f < 0.5 && !left; f *= 10.0) left = probe(r1 + f * width);
  for (double f = 1e-6; f < 0.5 && !right; f *= 10.0) right = probe(r2 - f * width);
  if (!left || !right || !(diff(*left) < 0.0) || !(diff(*right) > 0.0))
    throw NoCrossing("s+ - s- does not change sign across the bracket", trace);

  CrossingProbe lo = *left, hi = *right, mid = lo;
  bool found = false;
  for (int it = 0; it < kBisectionMaxIters; ++it) {
    const double rm = 0.5 * (lo.r + hi.r);
    auto pm = probe(rm);
    if (!pm) throw NoCrossing("part vanished inside the bracket", trace);
    mid = *pm;
    const double d = diff(mid);
    if (std::abs(d) <= tol_cross * std::max(mid.s_plus, mid.s_minus)) {
      found = true;
      break;
    }
    if (d < 0.0) lo = mid;
    else hi = mid;
    if (hi.r - lo.r <= 1e-15 * std::abs(rm)) break;
  }
  if (!found) {
    mid = std::abs(diff(lo)) < std::abs(diff(hi)) ? lo : hi;
  }

  const double a = 0.5 * (mid.s_plus + mid.s_minus);
  const GridFunction v = w1.axpy(-mid.r, u_eps);
  CrossingResult out{.ansatz = v.scaled(a)};
  out.r = mid.r;
  out.a = a;
  out.b = a * mid.r;
  out.s_plus = mid.s_plus;
  out.s_minus = mid.s_minus;
  out.r_bar1 = r1;
  out.r_bar2 = r2;
  auto [ap, am] = split_parts(out.ansatz);
  out.plus_class = classify(ap, params);
  out.minus_class = classify(am.scaled(-1.0), params);
  out.trace = std::move(trace);
  return out;
}

GridFunction project_parts(const GridFunction& u, const Params& params) {
  auto [up, um] = split_parts(u);
  if (up.is_zero() || um.is_zero()) throw CollapseError("iterate lost a sign part", up.is_zero() ? "plus" : "minus");
  const double tp = fiber_roots(up, params).tplus;
  const double tm = fiber_roots(um, params).tplus;
  return up.scaled(tp).axpy(-tm, um);
}

PartScales maximize_part_scales(const GridFunction& u, const Params& params) {
  auto [up, um] = split_parts(u);
  if (up.is_zero() || um.is_zero()) throw CollapseError("iterate lost a sign part", up.is_zero() ? "plus" : "minus");
  const GridFunction dm = um.scaled(-1.0);
  auto compose = [&](double a, double b) { return up.scaled(a).axpy(b, dm); };
  auto F = [&](double a, double b) { return energy(compose(a, b), params).total; };

  PartScales ps;
  double fab = F(ps.a, ps.b);
  for (; ps.iterations < 100; ++ps.iterations) {
    const GridFunction w = compose(ps.a, ps.b);
    const FiberMasses m = fiber_masses(w, params, Variant::Standard);
    const double scale = m.seminorm + m.lpstar + params.mu * m.lq;
    const double ga = residual(w, up, params), gb = residual(w, dm, params);
    if (std::max(std::abs(ps.a * ga), std::abs(ps.b * gb)) <= 1e-13 * scale) break;
    const double haa = second_variation(w, up, up, params);
    const double hab = second_variation(w, up, dm, params);
    const double hbb = second_variation(w, dm, dm, params);
    const double det = haa * hbb - hab * hab;
    double da, db;
    if (haa < 0.0 && det > 0.0) {
      da = -(hbb * ga - hab * gb) / det;
      db = -(haa * gb - hab * ga) / det;
    } else {
      // not concave here: plain ascent scaled by the diagonal
      da = ga / std::max(std::abs(haa), 1e-300);
      db = gb / std::max(std::abs(hbb), 1e-300);
    }
    double lambda = 1.0;
    bool moved = false;
    while (lambda > 1e-12) {
      const double na = ps.a + lambda * da, nb = ps.b + lambda * db;
      if (na > 0.0 && nb > 0.0) {
        const double fn = F(na, nb);
        if (fn >= fab) {
          ps.a = na;
          ps.b = nb;
          fab = fn;
          moved = true;
          break;
        }
      }
      lambda *= 0.5;
    }
    if (!moved) break;
  }
  return ps;
}

GridFunction retract_nehari_nodal(const GridFunction& u, const Params& params) {
  const PartScales ps = maximize_part_scales(u, params);
  auto [up, um] = split_parts(u);
  return up.scaled(ps.a).axpy(-ps.b, um);
}

namespace {

void guard_collapse(const GridFunction& u, const Params& params) {
  auto [up, um] = split_parts(u);
  const double scale = seminorm_p(u, params);
  if (seminorm_p(up, params) < 1e-10 * scale) throw CollapseError("plus part collapsed", "plus");
  if (seminorm_p(um, params) < 1e-10 * scale) throw CollapseError("minus part collapsed", "minus");
}

// Gradient of I(P(u)) for the part-wise retraction P at a point with P(u) = u.
GridFunction cone_gradient(const GridFunction& u, const GridFunction& g, const Params& params) {
  auto [up, um] = split_parts(u);
  const GridFunction dm = um.scaled(-1.0);
  const GridFunction Dp = perturbation_gradient(up, params);
  const GridFunction Dm = perturbation_gradient(dm, params);
  const double gp = dot(g, up), gm = dot(g, dm);
  std::vector<double> G = g.vector();
  for (int i = 0; i < u.size(); ++i) {
    if (u[i] > 0.0) G[i] += gp * Dp[i];
    else if (u[i] < 0.0) G[i] += gm * Dm[i];
  }
  return GridFunction(u.grid_ptr(), std::move(G));
}

}  // namespace

SignChangingResult solve_sign_changing(const SolveResult& positive, const Params& params,
                                       const BubbleSpec& bubble, const SignChangingOptions& options) {
  if (!positive.converged) throw NumericError("sign-changing search requires a converged positive solution");
  const GridFunction& w1 = positive.u;
  const GridPtr& grid = w1.grid_ptr();
  const SolverOptions& opt = options.solver;
  auto energy_of = [&](const GridFunction& v) { return energy(v, params).total; };

  std::mt19937_64 rng(opt.seed);
  BubbleSpec spec = bubble;
  std::optional<CrossingResult> crossing;
  int restarts = 0;
  for (; restarts <= opt.max_restarts; ++restarts) {
    try {
      crossing = crossing_search(w1, make_u_eps(grid, params, spec), params, options.tol_cross);
      break;
    } catch (const NumericError&) {
      if (restarts == opt.max_restarts) throw;
      const double room = grid->half_width() - spec.delta;
      std::uniform_real_distribution<double> shift(-0.5 * room, 0.5 * room);
      spec.center = grid->midpoint() + shift(rng);
    }
  }

  SignChangingResult out{.result = SolveResult{.u = crossing->ansatz}, .crossing = *crossing, .bubble = spec};
  out.positive_energy = positive.energy;

  // descent inside the part-wise minus cone
  auto cone_retract = [&](const GridFunction& v) { return project_parts(v, params); };
  GridFunction u = cone_retract(crossing->ansatz);
  double e = energy_of(u);
  out.cone_trace.push_back(e);
  int it = 0;
  for (;; ++it) {
    guard_collapse(u, params);
    const GridFunction G = cone_gradient(u, gradient(u, params), params);
    out.cone_residual = sup_norm(G);
    if (out.cone_residual <= opt.tol_res * residual_scale(e)) {
      out.cone_converged = true;
      break;
    }
    if (it >= opt.max_iters) break;
    Step st = armijo(u, e, G, dot(G, G), opt, cone_retract, energy_of);
    if (!st.accepted) break;
    u = std::move(st.u);
    e = st.energy;
    out.cone_trace.push_back(e);
  }
  out.cone_energy = e;
  out.cone_iterations = it;
  {
    auto [up, um] = split_parts(u);
    out.cone_plus_class = classify(up, params);
    out.cone_minus_class = classify(um.scaled(-1.0), params);
  }

  // polish to a critical point with the two-scale retraction
  auto nodal_retract = [&](const GridFunction& v) { return retract_nehari_nodal(v, params); };
  SolveResult& res = out.result;
  res.u = nodal_retract(u);
  res.energy = energy_of(res.u);
  res.energy_trace.push_back(res.energy);
  res.stop_reason = "max_iters";
  res.restarts = restarts;
  for (int k = 0;; ++k) {
    guard_collapse(res.u, params);
    const GridFunction g = gradient(res.u, params);
    res.residual_norm = sup_norm(g);
    res.tol_abs = opt.tol_res * residual_scale(res.energy);
    res.iterations = it + k;
    if (res.residual_norm <= res.tol_abs) {
      res.converged = true;
      res.stop_reason = "residual";
      break;
    }
    if (k >= opt.max_iters) break;
    Step st = armijo(res.u, res.energy, g, dot(g, g), opt, nodal_retract, energy_of);
    if (!st.accepted) {
      res.stop_reason = "line_search";
      break;
    }
    res.u = std::move(st.u);
    res.energy = st.energy;
    res.energy_trace.push_back(res.energy);
  }

  res.klass = classify(res.u, params);
  auto [up, um] = split_parts(res.u);
  const GridFunction dm = um.scaled(-1.0);
  res.plus_part_norm = seminorm_p(up, params);
  res.minus_part_norm = seminorm_p(um, params);
  res.converged = res.converged && res.plus_part_norm > 0.0 && res.minus_part_norm > 0.0 &&
                  (res.klass.tag == NehariTag::Plus || res.klass.tag == NehariTag::Minus);
  out.plus_class = classify(up, params);
  out.minus_class = classify(dm, params);
  out.energy_plus = energy_of(up);
  out.energy_minus = energy_of(dm);
  out.split_ok = res.energy >= out.energy_plus + out.energy_minus;
  out.above_positive = res.energy > positive.energy;
  if (options.S) {
    out.level_bound = positive.energy + (params.s / params.N) * std::pow(*options.S, params.N / params.ps());
    out.level_bound_ok = res.energy < *out.level_bound;
  }
  return out;
}

namespace {

std::vector<double> axis(double lo, double hi, int count, const std::vector<double>& extra) {
  std::vector<double> v;
  v.reserve(count + extra.size());
  for (int k = 0; k < count; ++k) v.push_back(lo + (hi - lo) * k / (count - 1));
  for (double x : extra)
    if (x >= lo && x <= hi) v.push_back(x);
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

SupScanResult sup_scan_ab(const GridFunction& w1, const GridFunction& u_eps, const Params& params,
                          double a_max, double b_max, int grid_counts,
                          const std::vector<std::pair<double, double>>& snap) {
  require_same_grid(w1, u_eps);
  if (grid_counts < 8) throw ParameterError("sup scan requires at least 8 grid points per axis");
  if (!(a_max > 0.0) || !(b_max > 0.0)) throw ParameterError("sup scan requires positive a_max and b_max");
  std::vector<double> ea{1.0}, eb{0.0};
  for (auto [a, b] : snap) {
    if (!(a >= 0.0 && a <= a_max && std::abs(b) <= b_max))
      throw ParameterError("snapped point (" + std::to_string(a) + ", " + std::to_string(b) + ") outside the scan box");
    ea.push_back(a);
    eb.push_back(b);
  }
  SupScanResult out;
  out.max = -std::numeric_limits<double>::infinity();
  auto scan = [&](const std::vector<double>& as, const std::vector<double>& bs) {
    for (double a : as)
      for (double b : bs) {
        const double e = energy(w1.scaled(a).axpy(-b, u_eps), params).total;
        ++out.evaluations;
        if (e > out.max) {
          out.max = e;
          out.a_at = a;
          out.b_at = b;
        }
      }
  };
  scan(axis(0.0, a_max, grid_counts, ea), axis(-b_max, b_max, grid_counts, eb));
  out.coarse_max = out.max;
  const double da = a_max / (grid_counts - 1), db = 2.0 * b_max / (grid_counts - 1);
  const double ca = out.a_at, cb = out.b_at;
  scan(axis(std::max(0.0, ca - da), std::min(a_max, ca + da), grid_counts, {}),
       axis(std::max(-b_max, cb - db), std::min(b_max, cb + db), grid_counts, {}));
  return out;
}

}  // namespace nehari
