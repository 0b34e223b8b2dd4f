#include "nehari/checks.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nehari/energy.hpp"
#include "nehari/fibering.hpp"

namespace nehari {

void Check::record(double defect) {
  ++samples;
  if (!(defect <= tol)) ++violations;
  if (!(defect <= worst)) worst = defect;
}

GridFunction random_smooth(const GridPtr& grid, std::mt19937_64& rng, double amplitude) {
  std::normal_distribution<double> nrm(0.0, 1.0);
  double c[4];
  for (double& x : c) x = nrm(rng);
  std::vector<double> v(grid->n());
  const double L = grid->measure();
  for (int i = 0; i < grid->n(); ++i) {
    const double t = (grid->node(i) - grid->a()) / L;
    double acc = 0.1 * nrm(rng);
    for (int k = 0; k < 4; ++k) acc += c[k] * std::sin(std::numbers::pi * (k + 1) * t);
    v[i] = amplitude * acc;
  }
  return GridFunction(grid, std::move(v));
}

std::vector<std::pair<double, double>> scan_roots(double seminorm, double lpstar, double c, const Params& params,
                                                  int points) {
  const double p = params.p, q = params.q, ps = params.pstar();
  auto psi = [&](double t) { return std::pow(t, p - 1.0 - q) * seminorm - std::pow(t, ps - q - 1.0) * lpstar; };
  double last = 0.0;
  for (int k = 0; k <= 4000; ++k) {
    const double t = std::pow(10.0, -10.0 + 20.0 * k / 4000.0);
    if (psi(t) >= c) last = t;
  }
  const double T = 2.0 * last;
  std::vector<std::pair<double, double>> out;
  double prev_t = 0.0, prev_f = -c;
  for (int k = 1; k <= points; ++k) {
    const double t = T * k / points;
    const double f = psi(t) - c;
    if ((prev_f < 0.0) != (f < 0.0)) out.emplace_back(prev_t, t);
    prev_t = t;
    prev_f = f;
  }
  return out;
}

std::vector<Check> energy_checks(const GridPtr& grid, const Params& params, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Check grad{"gradient_vs_central_difference", 0, 0, 0.0, 1e-5};
  Check homog{"seminorm_homogeneity", 0, 0, 0.0, 1e-12};
  Check breakdown{"energy_breakdown", 0, 0, 0.0, 1e-13};
  Check self{"residual_against_self", 0, 0, 0.0, 1e-11};
  Check superadd{"seminorm_superadditivity", 0, 0, 0.0, 0.0};
  Check masses{"lebesgue_mass_split", 0, 0, 0.0, 1e-13};
  Check split{"energy_split", 0, 0, 0.0, 0.0};
  Check positivity{"negative_part_positivity", 0, 0, 0.0, 0.0};

  const double e = 1e-6;
  for (int k = 0; k < samples; ++k) {
    const GridFunction u = random_smooth(grid, rng);
    const GridFunction v = random_smooth(grid, rng);
    const GridFunction g = gradient(u, params);
    double gv = 0.0;
    for (int i = 0; i < u.size(); ++i) gv += g[i] * v[i];
    const double fd = (energy(u.axpy(e, v), params).total - energy(u.axpy(-e, v), params).total) / (2 * e);
    grad.record(std::abs(fd - gv) / (1.0 + std::abs(fd)));

    const double s = seminorm_p(u, params);
    homog.record(std::abs(seminorm_p(u.scaled(2.0), params) - std::pow(2.0, params.p) * s) /
                 (std::pow(2.0, params.p) * s));

    const EnergyBreakdown b = energy(u, params);
    const double recomputed =
        b.seminorm_p / params.p - params.mu * b.lq_mass / (params.q + 1.0) - b.lpstar_mass / params.pstar();
    const double mag = b.seminorm_p / params.p + params.mu * b.lq_mass / (params.q + 1.0) + b.lpstar_mass / params.pstar();
    breakdown.record(std::abs(b.total - recomputed) / mag);

    const double r = residual(u, u, params);
    const double rhs = b.seminorm_p - params.mu * b.lq_mass - b.lpstar_mass;
    self.record(std::abs(r - rhs) / (b.seminorm_p + params.mu * b.lq_mass + b.lpstar_mass));

    auto [up, um] = split_parts(u);
    const double sp = seminorm_p(up, params), sm = seminorm_p(um, params);
    superadd.record(std::max(0.0, (sp + sm - s) / s - 1e-14));

    double worst_mass = 0.0;
    for (double rr : {params.q + 1.0, params.pstar(), 1.0, params.p}) {
      const double whole = lebesgue_mass(u, rr);
      worst_mass = std::max(worst_mass, std::abs(whole - lebesgue_mass(up, rr) - lebesgue_mass(um, rr)) / whole);
    }
    masses.record(worst_mass);

    const EnergyBreakdown bp = energy(up, params), bm = energy(um, params);
    const double escale = mag;
    split.record(std::max(0.0, (bp.total + bm.total - b.total) / escale - 1e-14));

    positivity.record(std::max(0.0, (sm - form_A(u, -um, params)) / s - 1e-14));
  }
  return {grad, homog, breakdown, self, superadd, masses, split, positivity};
}

std::vector<Check> fibering_checks(const GridPtr& grid, const Params& params, int samples, std::uint64_t seed,
                                   double mu_probe) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> frac(0.05, 0.95);
  Check order{"root_order", 0, 0, 0.0, 0.0};
  Check scan{"roots_inside_scan_brackets", 0, 0, 0.0, 1e-9};
  Check ident{"manifold_identity", 0, 0, 0.0, 1e-10};
  Check classes{"projection_classes", 0, 0, 0.0, 0.0};
  Check zero{"no_degenerate_projection", 0, 0, 0.0, 0.0};
  Check deriv{"reprojection_derivative", 0, 0, 0.0, 1e-3};

  Params probe = params;
  probe.mu = mu_probe;
  for (int k = 0; k < samples; ++k) {
    const GridFunction u = random_smooth(grid, rng);
    const FiberMasses m = fiber_masses(u, params, Variant::Standard);
    Params local = params;
    local.mu = frac(rng) * psi_and_t0(m, params).psi_t0 / m.lq;
    const FiberingReport r = fiber_roots(m, local);
    order.record(r.tminus < r.t0 && r.t0 < r.tplus ? 0.0 : 1.0);

    if (k < std::min(samples, 20)) {
      const auto br = scan_roots(m.seminorm, m.lpstar, local.mu * m.lq, local, 200000);
      if (br.size() != 2) {
        scan.record(INFINITY);
      } else {
        double d = 0.0;
        const double ts[2] = {r.tminus, r.tplus};
        for (int j = 0; j < 2; ++j) {
          d = std::max(d, std::max(0.0, br[j].first / ts[j] - 1.0));
          d = std::max(d, std::max(0.0, ts[j] / br[j].second - 1.0));
        }
        scan.record(d);
      }
    }

    const NehariClass cp = classify(u.scaled(r.tplus), local);
    const NehariClass cm = classify(u.scaled(r.tminus), local);
    ident.record(std::max(cp.identity_discrepancy / cp.identity_scale, cm.identity_discrepancy / cm.identity_scale));
    classes.record(cp.tag == NehariTag::Minus && cm.tag == NehariTag::Plus ? 0.0 : 1.0);

    const FiberingReport rp = fiber_roots(u, probe);
    const bool degenerate = classify(u.scaled(rp.tplus), probe).tag == NehariTag::Zero ||
                            classify(u.scaled(rp.tminus), probe).tag == NehariTag::Zero;
    zero.record(degenerate ? 1.0 : 0.0);

    if (k < std::min(samples, 10)) {
      const GridFunction w = u.scaled(r.tplus);
      const GridFunction phi = random_smooth(grid, rng);
      const double e = 1e-5;
      const double fd =
          (fiber_roots(w.axpy(e, phi), local).tplus - fiber_roots(w.axpy(-e, phi), local).tplus) / (2 * e);
      deriv.record(std::abs(perturbation_derivative(w, phi, local) - fd) / std::abs(fd));
    }
  }
  return {order, scan, ident, classes, zero, deriv};
}

}  // namespace nehari
