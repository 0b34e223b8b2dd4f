#include <doctest.h>

#include "nehari/bubble.hpp"
#include "nehari/energy.hpp"
#include "nehari/errors.hpp"
#include "nehari/solver.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace nehari;
using testing::rel;

namespace {

const SolveResult& positive_solution() {
  static const SolveResult r = solve_positive(testing::default_grid(128), Params{});
  return r;
}

BubbleSpec default_bubble(const Grid& g) {
  return BubbleSpec{0.05 * g.half_width(), default_delta(g), std::nullopt, ProfileKind::ExactP2};
}

const SignChangingResult& sign_changing_solution() {
  static const SignChangingResult r =
      solve_sign_changing(positive_solution(), Params{}, default_bubble(positive_solution().u.grid()));
  return r;
}

double directional_fd(const GridFunction& u, const GridFunction& phi, const Params& p, Variant v) {
  const double e = 1e-6;
  return (energy(u.axpy(e, phi), p, v).total - energy(u.axpy(-e, phi), p, v).total) / (2 * e);
}

GridFunction reflected(const GridFunction& u) {
  std::vector<double> v(u.values().rbegin(), u.values().rend());
  return GridFunction(u.grid_ptr(), std::move(v));
}

int argmax(const GridFunction& u) {
  int k = 0;
  for (int i = 0; i < u.size(); ++i)
    if (u[i] > u[k]) k = i;
  return k;
}

}  // namespace

TEST_CASE("project_minus") {
  Params p;
  auto g = testing::default_grid(64);
  std::mt19937_64 rng(89);
  for (int k = 0; k < 10; ++k) {
    const GridFunction u = testing::random_function(g, rng);
    const GridFunction w = project_minus(u, p);
    CHECK(classify(w, p).tag == NehariTag::Minus);
    CHECK(std::abs(fiber_roots(w, p).tplus - 1.0) < 1e-10);
    CHECK(rel(project_minus(w, p).max_abs(), w.max_abs()) < 1e-10);
    const FiberMasses m = fiber_masses(u, p, Variant::Standard);
    const double t = w.max_abs() / u.max_abs();
    const auto scan = testing::dense_scan(m.seminorm, m.lpstar, p.mu * m.lq, p.p, p.q, p.pstar(), 200000);
    REQUIRE(scan.brackets.size() == 2);
    CHECK(scan.brackets[1].first <= t * (1 + 1e-9));
    CHECK(t <= scan.brackets[1].second * (1 + 1e-9));
    // t+(u) maximizes the energy along the fiber beyond t0
    const double top = energy(w, p).total;
    for (int j = 1; j <= 200; ++j) {
      const double s = scan.brackets[0].second + j * (3.0 * t) / 200.0;
      CHECK(energy(u.scaled(s), p).total <= top + 1e-12 * std::abs(top));
    }
    CHECK(rel(project_minus(-u, p)[7], -w[7]) < 1e-12);
  }
}

TEST_CASE("positive solution") {
  const SolveResult& r = positive_solution();
  const Params p;
  MESSAGE("E(w1) = " << r.energy << "  residual " << r.residual_norm << "  iterations " << r.iterations);
  CHECK(r.converged);
  CHECK(r.residual_norm <= r.tol_abs);
  CHECK(r.klass.tag == NehariTag::Minus);
  CHECK(r.minus_part_norm <= 1e-8 * (1.0 + r.plus_part_norm));
  CHECK(r.energy <= r.energy_trace.front());
  CHECK(std::abs(fiber_roots(r.u, p, Variant::PlusPart).tplus - 1.0) < 1e-6);
  double lo = INFINITY;
  for (int i = 0; i < r.u.size(); ++i) lo = std::min(lo, r.u[i]);
  CHECK(lo > 0.0);
  for (std::size_t i = 1; i < r.energy_trace.size(); ++i) CHECK(r.energy_trace[i] <= r.energy_trace[i - 1]);
  std::mt19937_64 rng(97);
  const double scale = std::sqrt(r.u.size() * r.u.grid().h()) * (1.0 + std::abs(r.energy));
  for (int k = 0; k < 5; ++k) {
    const GridFunction phi = testing::random_function(r.u.grid_ptr(), rng);
    CHECK(std::abs(directional_fd(r.u, phi, p, Variant::PlusPart)) < 1e-4 * scale);
  }
  // the mirror image is an equally good critical point
  const GridFunction m = reflected(r.u);
  CHECK(rel(energy(m, p, Variant::PlusPart).total, r.energy) < 1e-12);
  CHECK(gradient(m, p, Variant::PlusPart).max_abs() <= r.tol_abs);
}

TEST_CASE("restarts from different seeds") {
  // The discrete minimizers are spikes pinned to single nodes near the centre,
  // so distinct seeds may settle at distinct local minima.
  auto g = testing::default_grid(128);
  const Params p;
  std::vector<std::pair<int, double>> found;
  double lo = INFINITY, hi = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const SolveResult r = solve_positive(g, p, SolverOptions{.seed = seed});
    CHECK(r.converged);
    const int k = argmax(r.u);
    CHECK(r.u[k] > 1.5 * std::max(r.u[k - 1], r.u[k + 1]));
    CHECK(std::abs(g->node(k)) < 0.25);
    for (auto [j, e] : found)
      if (j == k || j == g->n() - 1 - k) CHECK(rel(e, r.energy) < 1e-8);
    found.emplace_back(k, r.energy);
    lo = std::min(lo, r.energy);
    hi = std::max(hi, r.energy);
  }
  MESSAGE("10-seed energy spread " << (hi - lo) / lo << " relative, lowest " << lo);
  const SolveResult a = solve_positive(g, p, SolverOptions{.seed = 3});
  const SolveResult b = solve_positive(g, p, SolverOptions{.seed = 3});
  CHECK(a.u.vector() == b.u.vector());
  CHECK(a.energy_trace == b.energy_trace);
}

TEST_CASE("sup over the fiber") {
  const Params p;
  const SolveResult& w = positive_solution();
  CHECK(rel(sup_over_fiber(w.u, p, Variant::PlusPart).value, w.energy) < 1e-10);
  std::mt19937_64 rng(101);
  auto g = testing::default_grid(64);
  for (int k = 0; k < 5; ++k) {
    const GridFunction u = testing::random_function(g, rng);
    const FiberSup a = sup_over_fiber(u, p), b = sup_over_fiber(u.scaled(2.5), p);
    CHECK(rel(a.value, b.value) < 1e-10);
    CHECK_FALSE(a.from_scan);
  }
  // no root on the fiber: a large concave weight
  Params heavy = p;
  heavy.mu = 50.0;
  const FiberSup s = sup_over_fiber(testing::random_function(g, rng), heavy);
  CHECK(s.from_scan);
}

TEST_CASE("crossing search") {
  const Params p;
  const SolveResult& w = positive_solution();
  const Grid& g = w.u.grid();
  const GridFunction ue = make_u_eps(w.u.grid_ptr(), p, default_bubble(g));
  const CrossingResult c = crossing_search(w.u, ue, p);
  CHECK(c.r > c.r_bar1);
  CHECK(c.r < c.r_bar2);
  CHECK(std::abs(c.s_plus - c.s_minus) <= 1e-6 * c.s_plus);
  CHECK(c.a == doctest::Approx(0.5 * (c.s_plus + c.s_minus)));
  CHECK(c.plus_class.tag == NehariTag::Minus);
  CHECK(c.minus_class.tag == NehariTag::Minus);
  const double width = c.r_bar2 - c.r_bar1;
  const double mid = crossing_probe(w.u, ue, p, 0.5 * (c.r_bar1 + c.r_bar2)).s_minus;
  CHECK(crossing_probe(w.u, ue, p, c.r_bar1 + 1e-3 * width).s_minus > 10.0 * mid);
  const double mid_plus = crossing_probe(w.u, ue, p, 0.5 * (c.r_bar1 + c.r_bar2)).s_plus;
  CHECK(crossing_probe(w.u, ue, p, c.r_bar2 - 1e-3 * width).s_plus > 10.0 * mid_plus);
  CHECK_THROWS_AS(crossing_search(w.u, GridFunction::zeros(w.u.grid_ptr()), p), DegenerateInput);
}

TEST_CASE("sign-changing solution") {
  const Params p;
  const SignChangingResult& s = sign_changing_solution();
  const SolveResult& r = s.result;
  MESSAGE("cone E = " << s.cone_energy << " in " << s.cone_iterations << " its; critical E = " << r.energy
                      << " residual " << r.residual_norm << " in " << r.iterations << " its");
  CHECK(s.cone_converged);
  CHECK(r.converged);
  CHECK(r.residual_norm <= r.tol_abs);
  CHECK(r.energy >= s.energy_plus + s.energy_minus - 1e-9 * std::abs(r.energy));
  CHECK(s.above_positive);
  CHECK(r.energy > s.positive_energy);
  CHECK(s.cone_plus_class.tag == NehariTag::Minus);
  CHECK(s.cone_minus_class.tag == NehariTag::Minus);
  CHECK(r.plus_part_norm > 0.0);
  CHECK(r.minus_part_norm > 0.0);
  CHECK(s.split_ok);
  for (std::size_t i = 1; i < s.cone_trace.size(); ++i) CHECK(s.cone_trace[i] <= s.cone_trace[i - 1]);
  for (std::size_t i = 1; i < r.energy_trace.size(); ++i) CHECK(r.energy_trace[i] <= r.energy_trace[i - 1]);

  std::mt19937_64 rng(103);
  const double scale = std::sqrt(r.u.size() * r.u.grid().h()) * (1.0 + std::abs(r.energy));
  for (int k = 0; k < 5; ++k) {
    const GridFunction phi = testing::random_function(r.u.grid_ptr(), rng);
    CHECK(std::abs(directional_fd(r.u, phi, p, Variant::Standard)) < 1e-4 * scale);
  }
  // the retraction leaves a critical point fixed
  const PartScales ab = maximize_part_scales(r.u, p);
  CHECK(std::abs(ab.a - 1.0) < 1e-5);
  CHECK(std::abs(ab.b - 1.0) < 1e-5);
}

TEST_CASE("sign-changing solve is deterministic") {
  const Params p;
  auto g = testing::default_grid(64);
  const SolveResult w = solve_positive(g, p);
  const SignChangingResult a = solve_sign_changing(w, p, default_bubble(*g));
  const SignChangingResult b = solve_sign_changing(w, p, default_bubble(*g));
  CHECK(a.result.u.vector() == b.result.u.vector());
  CHECK(a.cone_energy == b.cone_energy);
}

TEST_CASE("sup scan over the (a, b) plane") {
  const Params p;
  const SolveResult& w = positive_solution();
  const GridFunction ue = make_u_eps(w.u.grid_ptr(), p, default_bubble(w.u.grid()));
  const CrossingResult c = crossing_search(w.u, ue, p);
  const std::vector<std::pair<double, double>> snap{{c.a, c.a * c.r}};
  const SupScanResult s = sup_scan_ab(w.u, ue, p, 4.0, 4.0, 32, snap);
  CHECK(s.max >= w.energy);
  CHECK(s.max >= energy(c.ansatz, p).total);
  CHECK(s.max >= s.coarse_max);
  CHECK(s.max == doctest::Approx(energy(w.u.scaled(s.a_at).axpy(-s.b_at, ue), p).total));
  const SupScanResult fine = sup_scan_ab(w.u, ue, p, 4.0, 4.0, 64, snap);
  CHECK(std::abs(fine.max - s.max) < 0.01 * std::abs(fine.max));
  CHECK_THROWS_AS(sup_scan_ab(w.u, ue, p, 4.0, 4.0, 4), ParameterError);
  CHECK_THROWS_AS(sup_scan_ab(w.u, ue, p, 2.0, 2.0, 16, snap), ParameterError);
}
