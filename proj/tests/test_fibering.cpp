#include <doctest.h>

#include "nehari/errors.hpp"
#include "nehari/fibering.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace nehari;
using testing::rel;

namespace {

FiberMasses unit_masses(double lq = 0.0) { return FiberMasses{1.0, lq, 1.0}; }

GridFunction on_minus_branch(const GridFunction& u, const Params& p) {
  return u.scaled(fiber_roots(u, p).tplus);
}

}  // namespace

TEST_CASE("unit-mass fiber closed forms") {
  Params p;
  const PsiMax pm = psi_and_t0(unit_masses(), p);
  CHECK(pm.t0 == doctest::Approx(std::pow(0.5 / 8.5, 0.125)).epsilon(1e-14));
  CHECK(pm.t0 == doctest::Approx(0.7018).epsilon(1e-4));
  // closed form for the maximum: (8/8.5) (0.5/8.5)^{1/16}
  const double closed = (8.0 / 8.5) * std::pow(0.5 / 8.5, 0.0625);
  CHECK(pm.psi_t0 == doctest::Approx(closed).epsilon(1e-12));
  CHECK(pm.psi_t0 == doctest::Approx(0.7885).epsilon(1e-3));
  CHECK(std::abs(Fiber(unit_masses(), p).at(1.0).dphi) < 1e-15);
}

TEST_CASE("fiber derivatives") {
  Params p;
  auto g = testing::default_grid(64);
  std::mt19937_64 rng(41);
  GridFunction u = testing::random_function(g, rng, 0.5);
  CHECK_THROWS_AS(fiber_derivatives(u, 0.0, p), DomainError);
  CHECK_THROWS_AS(fiber_derivatives(u, -1.0, p), DomainError);
  CHECK_THROWS_AS(fiber_derivatives(GridFunction::zeros(g), 1.0, p), DegenerateInput);
  // concave term dominates near 0
  for (double t : {1e-10, 1e-12, 1e-14}) {
    const FiberValues v = fiber_derivatives(u, t, p);
    CHECK(v.dphi < 0.0);
    CHECK(std::abs(v.phi) < 1e-3);
  }
  for (double t : {0.3, 1.0, 2.2}) {
    const FiberValues v = fiber_derivatives(u, t, p);
    CHECK(rel(v.dphi * t, residual(u.scaled(t), u.scaled(t), p)) < 1e-12);
    CHECK(rel(v.phi, energy(u.scaled(t), p).total) < 1e-12);
    const double e = 1e-5;
    const double fd2 = (fiber_derivatives(u, t + e, p).dphi - fiber_derivatives(u, t - e, p).dphi) / (2 * e);
    CHECK(std::abs(fd2 - v.ddphi) < 1e-6 * (1.0 + std::abs(v.ddphi)));
  }
}

TEST_CASE("t0 homogeneity") {
  Params p;
  auto g = testing::default_grid(64);
  std::mt19937_64 rng(43);
  GridFunction u = testing::random_function(g, rng);
  for (double c : {3.0, 0.25}) CHECK(rel(psi_and_t0(u.scaled(c), p).t0 * c, psi_and_t0(u, p).t0) < 1e-13);
  CHECK_THROWS_AS(psi_and_t0(FiberMasses{1.0, 1.0, 0.0}, p), DegenerateInput);
}

TEST_CASE("fiber roots on the unit-mass example") {
  Params p;
  const FiberMasses m{1.0, 8.0, 1.0};  // mu m_{q+1} = 0.4
  const FiberingReport r = fiber_roots(m, p);
  CHECK(r.concave_mass == doctest::Approx(0.4));
  CHECK(r.tminus < r.t0);
  CHECK(r.t0 < r.tplus);
  CHECK(r.class_minus.tag == NehariTag::Plus);
  CHECK(r.class_plus.tag == NehariTag::Minus);
  Fiber f(m, p);
  const double scale = std::max(r.psi_t0, r.concave_mass);
  CHECK(std::abs(f.psi(r.tminus) - r.concave_mass) <= 1e-12 * scale);
  CHECK(std::abs(f.psi(r.tplus) - r.concave_mass) <= 1e-12 * scale);

  const testing::ScanBrackets scan = testing::dense_scan(1.0, 1.0, 0.4, 2.0, 0.5, 10.0, 1000000);
  REQUIRE(scan.brackets.size() == 2);
  CHECK(scan.brackets[0].first <= r.tminus * (1 + 1e-9));
  CHECK(r.tminus <= scan.brackets[0].second * (1 + 1e-9));
  CHECK(scan.brackets[1].first <= r.tplus * (1 + 1e-9));
  CHECK(r.tplus <= scan.brackets[1].second * (1 + 1e-9));
}

TEST_CASE("small-mu limit of the roots") {
  Params p;
  const FiberMasses m{1.3, 0.9, 0.7};
  double prev = INFINITY;
  for (double mu : {1e-2, 1e-4, 1e-6, 1e-8}) {
    p.mu = mu;
    const FiberingReport r = fiber_roots(m, p);
    CHECK(r.tminus < prev);
    prev = r.tminus;
    if (mu == 1e-8) {
      CHECK(r.tminus < 1e-5);
      CHECK(rel(r.tplus, std::pow(1.3 / 0.7, 1.0 / 8.0)) < 1e-6);
    }
  }
}

TEST_CASE("fiber roots errors") {
  Params p;
  CHECK_THROWS_AS(fiber_roots(FiberMasses{1.0, 100.0, 1.0}, p), NoRoots);
  try {
    fiber_roots(FiberMasses{1.0, 100.0, 1.0}, p);
  } catch (const NoRoots& e) {
    CHECK(e.gap() == doctest::Approx(5.0 - psi_and_t0(unit_masses(), p).psi_t0));
  }
  auto g = testing::default_grid(16);
  std::vector<double> neg(16, -1.0);
  CHECK_THROWS_AS(fiber_roots(GridFunction(g, neg), p, Variant::PlusPart), DegenerateInput);
  CHECK_THROWS_WITH(fiber_roots(GridFunction::zeros(g), p), "nonzero function required");
}

TEST_CASE("root uniqueness against a dense scan") {
  Params base;
  auto g = testing::default_grid(48);
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> frac(0.05, 0.95);
  for (int k = 0; k < 20; ++k) {
    GridFunction u = testing::random_function(g, rng);
    FiberMasses m = fiber_masses(u, base, Variant::Standard);
    Params p = base;
    p.mu = frac(rng) * psi_and_t0(m, base).psi_t0 / m.lq;
    const FiberingReport r = fiber_roots(m, p);
    const auto scan = testing::dense_scan(m.seminorm, m.lpstar, p.mu * m.lq, p.p, p.q, p.pstar(), 200000);
    REQUIRE(scan.brackets.size() == 2);
    CHECK(r.tminus < r.t0);
    CHECK(r.t0 < r.tplus);
    for (int j = 0; j < 2; ++j) {
      const double t = j == 0 ? r.tminus : r.tplus;
      CHECK(scan.brackets[j].first <= t * (1 + 1e-9));
      CHECK(t <= scan.brackets[j].second * (1 + 1e-9));
    }
  }
}

TEST_CASE("classification") {
  Params p;
  auto g = testing::default_grid(64);
  std::mt19937_64 rng(53);
  for (int k = 0; k < 20; ++k) {
    GridFunction u = testing::random_function(g, rng);
    const FiberingReport r = fiber_roots(u, p);
    const NehariClass cp = classify(u.scaled(r.tplus), p);
    const NehariClass cm = classify(u.scaled(r.tminus), p);
    CHECK(cp.tag == NehariTag::Minus);
    CHECK(cm.tag == NehariTag::Plus);
    CHECK(cp.identity_discrepancy <= 1e-10 * cp.identity_scale);
    CHECK(cm.identity_discrepancy <= 1e-10 * cm.identity_scale);
    CHECK(classify(u.scaled(0.5 * (r.tminus + r.tplus)), p).tag == NehariTag::Off);
  }
}

TEST_CASE("manifold expressions for p != 2") {
  // The concave coefficient in the second expression is (p-1-q); the
  // coefficient (1-q) only coincides with it at p = 2.
  Params p;
  p.p = 3.0;
  p.s = 0.3;
  p.q = 1.2;
  auto g = testing::default_grid(48, p);
  std::mt19937_64 rng(59);
  GridFunction u = on_minus_branch(testing::random_function(g, rng), p);
  const FiberMasses m = fiber_masses(u, p, Variant::Standard);
  const NehariClass c = classify(m, p, default_tol_manifold(m, p));
  CHECK(c.tag == NehariTag::Minus);
  CHECK(c.identity_discrepancy <= 1e-10 * c.identity_scale);
  const double with_one_minus_q = (p.p - p.pstar()) * m.lpstar + (1.0 - p.q) * p.mu * m.lq;
  CHECK(std::abs(with_one_minus_q - c.second_deriv) > 1e-6 * c.identity_scale);
}

TEST_CASE("perturbation derivative") {
  Params p;
  auto g = testing::default_grid(64);
  std::mt19937_64 rng(61);
  for (int k = 0; k < 5; ++k) {
    GridFunction u = on_minus_branch(testing::random_function(g, rng), p);
    GridFunction phi1 = testing::random_function(g, rng), phi2 = testing::random_function(g, rng);
    CHECK(perturbation_derivative(u, GridFunction::zeros(g), p) == 0.0);
    const double lin = perturbation_derivative(u, phi1 + phi2, p) -
                       perturbation_derivative(u, phi1, p) - perturbation_derivative(u, phi2, p);
    CHECK(std::abs(lin) <= 1e-12 * (1.0 + std::abs(perturbation_derivative(u, phi1, p))));
    // re-projection difference quotient
    const double e = 1e-5;
    const double fd = (fiber_roots(u.axpy(e, phi1), p).tplus - fiber_roots(u.axpy(-e, phi1), p).tplus) / (2 * e);
    const double d = perturbation_derivative(u, phi1, p);
    CHECK(std::abs(d - fd) <= 1e-3 * std::abs(fd));
    const GridFunction grad = perturbation_gradient(u, p);
    double acc = 0.0;
    for (int i = 0; i < u.size(); ++i) acc += grad[i] * phi1[i];
    CHECK(std::abs(acc - d) <= 1e-11 * (1.0 + std::abs(d)));
  }
  GridFunction u = testing::random_function(g, rng);
  const FiberingReport r = fiber_roots(u, p);
  CHECK_THROWS_AS(perturbation_derivative(u.scaled(r.tminus), u, p), NotMinusCone);
  CHECK_THROWS_AS(perturbation_derivative(u.scaled(r.t0), u, p), DegenerateDenominator);
}

TEST_CASE("psi_mu") {
  Params p;
  p.mu = 0.0;  // masses-level evaluation only
  CHECK(psi_mu(FiberMasses{1.3, 0.4, 0.8}, p) > 0.0);

  Params q;
  auto g = testing::default_grid(64);
  std::mt19937_64 rng(67);
  GridFunction u = testing::random_function(g, rng);
  const FiberMasses m = fiber_masses(u, q, Variant::Standard);
  // first term is linear in the scale, the concave term has degree q+1
  const double K = psi_mu(m, q) + q.mu * m.lq;
  const double predicted = 2.0 * K - q.mu * std::pow(2.0, q.q + 1.0) * m.lq;
  CHECK(rel(psi_mu(u.scaled(2.0), q), predicted) < 1e-12);

  // a manifold point where the perturbation denominator vanishes
  const double t = psi_and_t0(m, q).t0;
  const FiberMasses mt = m.scaled(t, q);
  Params d = q;
  d.mu = (mt.seminorm - mt.lpstar) / mt.lq;
  CHECK(std::abs(minus_cone_denominator(mt, d)) <= 1e-12 * mt.seminorm);
  CHECK(std::abs(classify(mt, d, default_tol_manifold(mt, d)).first_deriv) <= 1e-12 * mt.seminorm);
  CHECK(std::abs(psi_mu(mt, d)) <= 1e-10 * mt.seminorm);
}
