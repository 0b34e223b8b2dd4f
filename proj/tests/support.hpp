#ifndef NEHARI_TESTS_SUPPORT_HPP_
#define NEHARI_TESTS_SUPPORT_HPP_

#include <cmath>
#include <random>
#include <vector>

#include "nehari/grid.hpp"

namespace testing {

inline nehari::Params default_params() { return nehari::Params{}; }

inline nehari::GridPtr default_grid(int n = 128, const nehari::Params& p = default_params()) {
  return nehari::build_grid(-1.0, 1.0, n, p);
}

/// Smooth-scale random function: a few random sine modes plus nodal noise.
inline nehari::GridFunction random_function(const nehari::GridPtr& g, std::mt19937_64& rng,
                                            double amplitude = 1.0) {
  std::normal_distribution<double> nrm(0.0, 1.0);
  double c[4];
  for (double& x : c) x = nrm(rng);
  std::vector<double> v(g->n());
  const double L = g->measure();
  for (int i = 0; i < g->n(); ++i) {
    const double t = (g->node(i) - g->a()) / L;
    double acc = 0.1 * nrm(rng);
    for (int k = 0; k < 4; ++k) acc += c[k] * std::sin(M_PI * (k + 1) * t);
    v[i] = amplitude * acc;
  }
  return nehari::GridFunction(g, std::move(v));
}

inline nehari::GridFunction random_positive(const nehari::GridPtr& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.5, 1.5);
  std::vector<double> v(g->n());
  for (int i = 0; i < g->n(); ++i)
    v[i] = unif(rng) * std::sin(M_PI * (g->node(i) - g->a()) / g->measure());
  return nehari::GridFunction(g, std::move(v));
}

/// Independent seminorm: the full double sum over ordered pairs i != j with
/// coordinates recomputed from scratch.
inline double brute_seminorm(const std::vector<double>& u, double a, double b, double p, double s) {
  const int n = static_cast<int>(u.size());
  const double h = (b - a) / (n + 1), ps = p * s;
  double pair = 0.0, tail = 0.0;
  for (int i = 0; i < n; ++i) {
    const double xi = a + (i + 1) * h;
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double xj = a + (j + 1) * h;
      pair += std::pow(std::abs(u[i] - u[j]), p) * std::pow(std::abs(xi - xj), -(1.0 + ps));
    }
    tail += std::pow(std::abs(u[i]), p) * (std::pow(xi - a, -ps) + std::pow(b - xi, -ps)) / ps;
  }
  return h * h * pair + 2.0 * h * tail;
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace testing

#endif  // NEHARI_TESTS_SUPPORT_HPP_
