#include <doctest.h>

#include "nehari/constants.hpp"
#include "nehari/energy.hpp"
#include "nehari/errors.hpp"
#include "support.hpp"

using namespace nehari;
using testing::rel;

namespace {

Params make(double s, double p, double q, int N, double mu = 0.05) {
  Params r;
  r.s = s;
  r.p = p;
  r.q = q;
  r.N = N;
  r.mu = mu;
  return r;
}

}  // namespace

TEST_CASE("hand-evaluated constants") {
  const Params d = make(0.4, 2.0, 0.5, 1);
  const ConstantsReport r = regime_report(d, 1.0, 1.0);
  CHECK(rel(r.mu_tilde, std::pow(0.5 / 8.5, 0.0625) * (8.0 / 8.5)) < 1e-13);
  CHECK(r.mu_tilde == doctest::Approx(0.7885).epsilon(1e-4));
  const double M = (1.7 * 0.5 / 6.0) * std::pow(0.1 / 1.6, 1.5 / 8.5);
  CHECK(rel(r.big_M, M) < 1e-13);
  CHECK(r.big_M == doctest::Approx(0.0869).epsilon(1e-3));

  const Params a = make(0.5, 2.0, 0.7, 4);
  CHECK(rel(q1(a), 16.0 / 10.5 - 1.0) < 1e-14);
  CHECK(q1(a) == doctest::Approx(0.5238).epsilon(1e-4));
  CHECK(N0(a) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(q1(a) < a.p - 1.0);
  CHECK(a.N > N0(a));

  const Params b = make(0.5, 3.0, 1.99, 11);
  CHECK(rel(q2(b), 33.0 / 9.5 - 1.5) < 1e-14);
  CHECK(q2(b) == doctest::Approx(1.9737).epsilon(1e-4));
  CHECK(q2(b) < b.p - 1.0);
}

TEST_CASE("branch structure of q0 and N0") {
  const Params lo = make(0.5, 2.0, 0.7, 4);
  CHECK(p_branch(lo.p) == PBranch::Low);
  CHECK(q0(lo) == std::max(q1(lo), q3(lo)));
  CHECK(N0(lo) == doctest::Approx(lo.ps() * (lo.p + 1.0)));
  CHECK(N0_other_branch(lo) == doctest::Approx(lo.ps() * (lo.p * lo.p - lo.p + 1.0)));

  const Params hi = make(0.5, 3.0, 1.99, 11);
  CHECK(p_branch(hi.p) == PBranch::High);
  CHECK(q0(hi) == std::max(q1(hi), q2(hi)));
  CHECK(N0(hi) == doctest::Approx(hi.ps() * (hi.p * hi.p - hi.p + 1.0)));

  CHECK(p_branch(kGoldenThreshold) == PBranch::High);
  CHECK(kGoldenThreshold == doctest::Approx((3.0 + std::sqrt(5.0)) / 2.0).epsilon(1e-16));
  for (const Params& p : {lo, hi}) CHECK(N0(p) > N_energy_bound(p));
}

TEST_CASE("q2 and q3 differ by sp/(N-sp) at the golden threshold") {
  // q2 - q3 = N/(N-sp) - (2p-1)/(p^2-p), and (2p-1) = p^2-p at the threshold.
  for (int N : {3, 7, 20}) {
    Params p = make(0.4, kGoldenThreshold, 1.0, N);
    CHECK(q2(p) - q3(p) == doctest::Approx(p.ps() / (N - p.ps())).epsilon(1e-12));
    CHECK(std::abs(q2(p) - q3(p)) > 1e-3);
    for (double pp : {2.0, 2.4, 3.5}) {
      Params r = make(0.4, pp, 0.5, N);
      CHECK(q2(r) - q3(r) ==
            doctest::Approx(N / (N - r.ps()) - (2 * pp - 1) / (pp * pp - pp)).epsilon(1e-12));
    }
  }
}

TEST_CASE("PS level and monotonicity") {
  const Params d = make(0.4, 2.0, 0.5, 1);
  const ConstantsReport r = regime_report(d, 2.0, 4.3);
  CHECK(rel(r.c_star_zero, 0.4 * std::pow(4.3, 1.0 / 0.8)) < 1e-14);
  CHECK(r.c_star_zero > 0.0);
  double prev = r.ps_level(0.0);
  for (double mu = 0.01; mu < 2.0; mu += 0.01) {
    CHECK(r.ps_level(mu) < prev);
    prev = r.ps_level(mu);
  }
  CHECK(mu_tilde(d, 2.0, 8.6) > mu_tilde(d, 2.0, 4.3));
  CHECK(regime_report(d, 2.0, 4.3).mu_below_mu_tilde);
}

TEST_CASE("hypothesis window is monotone in N") {
  for (double q : {0.6, 0.9}) {
    bool seen = false;
    for (int N = 2; N <= 60; ++N) {
      const Params p = make(0.5, 2.0, q, N);
      const bool ok = regime_report(p, 1.0, 1.0).hypothesis_ok;
      if (seen) CHECK(ok);
      seen = seen || ok;
    }
    CHECK(seen);
  }
  CHECK_FALSE(regime_report(make(0.4, 2.0, 0.5, 1), 2.0, 1.0).hypothesis_ok);
}

TEST_CASE("regime report rejects bad input") {
  CHECK_THROWS_AS(regime_report(make(0.4, 2.0, 1.5, 1), 1.0, 1.0), ParameterError);
  CHECK_THROWS_AS(regime_report(make(0.4, 2.0, 0.5, 1), 0.0, 1.0), ParameterError);
  CHECK_THROWS_AS(regime_report(make(0.4, 2.0, 0.5, 1), 1.0, -1.0), ParameterError);
  CHECK(lq_regime_threshold(make(0.4, 2.0, 0.5, 1)) == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("Sobolev estimate") {
  const Params d;
  auto g = testing::default_grid(64);
  const SobolevEstimate e = estimate_sobolev(g, d, 600, 0);
  CHECK(e.value > 0.0);
  CHECK(rel(rayleigh_quotient(e.minimizer, d), e.value) < 1e-12);
  std::mt19937_64 rng(71);
  for (int k = 0; k < 10; ++k) {
    GridFunction u = testing::random_function(g, rng);
    CHECK(rayleigh_quotient(u, d) >= e.value);
    CHECK(rel(rayleigh_quotient(u.scaled(3.0), d), rayleigh_quotient(u, d)) < 1e-13);
  }
  const SobolevEstimate again = estimate_sobolev(g, d, 600, 0);
  CHECK(again.value == e.value);
  CHECK(again.minimizer.vector() == e.minimizer.vector());
  CHECK_THROWS_AS(rayleigh_quotient(GridFunction::zeros(g), d), DegenerateInput);
}

TEST_CASE("Sobolev estimate under mesh refinement") {
  const Params d;
  const double coarse = estimate_sobolev(testing::default_grid(128), d, 3000, 0).value;
  const double fine = estimate_sobolev(testing::default_grid(257), d, 3000, 0).value;
  MESSAGE("S_est n=128: " << coarse << "  n=257: " << fine);
  CHECK(std::abs(fine - coarse) / coarse < 0.05);
}
