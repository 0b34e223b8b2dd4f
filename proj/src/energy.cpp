#include "nehari/energy.hpp"

#include <algorithm>
#include <vector>

#include "nehari/errors.hpp"
#include "nehari/reduction.hpp"

namespace nehari {

namespace {

// |d|^{p-2} d, with p = 2 kept free of pow calls.
template <bool P2>
inline double flux(double d, double p) {
  if constexpr (P2) {
    return d;
  } else {
    return odd_pow(d, p - 1.0);
  }
}

template <bool P2>
inline double power(double d, double p) {
  if constexpr (P2) {
    return d * d;
  } else {
    return std::pow(std::abs(d), p);
  }
}

template <bool P2>
double seminorm_impl(const Grid& g, std::span<const double> u, double p) {
  const int n = g.n();
  std::vector<double> rows(n);
  evaluate_rows(n, rows, [&](int i) {
    double acc = 0.0;
    const double ui = u[i];
    for (int j = i + 1; j < n; ++j) acc += power<P2>(ui - u[j], p) * g.kernel(j - i);
    return acc;
  });
  const double h = g.h();
  double tail = 0.0;
  for (int i = 0; i < n; ++i) tail += power<P2>(u[i], p) * g.tail()[i];
  return 2.0 * h * h * ordered_sum(rows) + 2.0 * h * tail;
}

template <bool P2>
double form_A_impl(const Grid& g, std::span<const double> u, std::span<const double> phi, double p) {
  const int n = g.n();
  std::vector<double> rows(n);
  evaluate_rows(n, rows, [&](int i) {
    double acc = 0.0;
    for (int j = i + 1; j < n; ++j)
      acc += flux<P2>(u[i] - u[j], p) * (phi[i] - phi[j]) * g.kernel(j - i);
    return acc;
  });
  const double h = g.h();
  double tail = 0.0;
  for (int i = 0; i < n; ++i) tail += flux<P2>(u[i], p) * phi[i] * g.tail()[i];
  return 2.0 * h * h * ordered_sum(rows) + 2.0 * h * tail;
}

template <bool P2>
std::vector<double> form_A_nodal_impl(const Grid& g, std::span<const double> u, double p) {
  const int n = g.n();
  const double h = g.h();
  std::vector<double> out(n);
  evaluate_rows(n, out, [&](int i) {
    double acc = 0.0;
    const double ui = u[i];
    for (int j = 0; j < i; ++j) acc += flux<P2>(ui - u[j], p) * g.kernel(i - j);
    for (int j = i + 1; j < n; ++j) acc += flux<P2>(ui - u[j], p) * g.kernel(j - i);
    return 2.0 * h * h * acc + 2.0 * h * flux<P2>(ui, p) * g.tail()[i];
  });
  return out;
}

double positive(double x) { return x > 0.0 ? x : 0.0; }

}  // namespace

void check_params(const Grid& grid, const Params& params) {
  params.validate();
  if (params.N != 1) throw DomainError("grid computations require N = 1");
  if (grid.ps() != params.ps()) throw ParameterError("params do not match the grid kernel exponent p*s");
}

double seminorm_p(const GridFunction& u, const Params& params) {
  check_params(u.grid(), params);
  if (params.p == 2.0) return seminorm_impl<true>(u.grid(), u.values(), params.p);
  return seminorm_impl<false>(u.grid(), u.values(), params.p);
}

double lebesgue_mass(const GridFunction& u, double r, bool plus_only) {
  if (!(r >= 1.0)) throw ParameterError("lebesgue mass requires exponent r >= 1");
  double acc = 0.0;
  for (double v : u.values()) acc += abs_pow(plus_only ? positive(v) : v, r);
  return u.grid().h() * acc;
}

EnergyBreakdown energy(const GridFunction& u, const Params& params, Variant variant) {
  const bool plus = variant == Variant::PlusPart;
  EnergyBreakdown e;
  e.seminorm_p = seminorm_p(u, params);
  e.lq_mass = lebesgue_mass(u, params.q + 1.0, plus);
  e.lpstar_mass = lebesgue_mass(u, params.pstar(), plus);
  e.total = e.seminorm_p / params.p - params.mu * e.lq_mass / (params.q + 1.0) -
            e.lpstar_mass / params.pstar();
  return e;
}

double form_A(const GridFunction& u, const GridFunction& phi, const Params& params) {
  require_same_grid(u, phi);
  check_params(u.grid(), params);
  if (params.p == 2.0) return form_A_impl<true>(u.grid(), u.values(), phi.values(), params.p);
  return form_A_impl<false>(u.grid(), u.values(), phi.values(), params.p);
}

GridFunction form_A_nodal(const GridFunction& u, const Params& params) {
  check_params(u.grid(), params);
  auto v = params.p == 2.0 ? form_A_nodal_impl<true>(u.grid(), u.values(), params.p)
                           : form_A_nodal_impl<false>(u.grid(), u.values(), params.p);
  return GridFunction(u.grid_ptr(), std::move(v));
}

double lebesgue_pairing(const GridFunction& u, const GridFunction& phi, double r, bool plus_only) {
  require_same_grid(u, phi);
  double acc = 0.0;
  for (int i = 0; i < u.size(); ++i) {
    const double ui = plus_only ? positive(u[i]) : u[i];
    acc += odd_pow(ui, r - 1.0) * phi[i];
  }
  return u.grid().h() * acc;
}

double residual(const GridFunction& u, const GridFunction& phi, const Params& params) {
  return form_A(u, phi, params) - params.mu * lebesgue_pairing(u, phi, params.q + 1.0) -
         lebesgue_pairing(u, phi, params.pstar());
}

GridFunction gradient(const GridFunction& u, const Params& params, Variant variant) {
  const bool plus = variant == Variant::PlusPart;
  std::vector<double> g = form_A_nodal(u, params).vector();
  const double h = u.grid().h();
  const double q = params.q;
  const double ps1 = params.pstar() - 1.0;
  for (int i = 0; i < u.size(); ++i) {
    const double ui = plus ? positive(u[i]) : u[i];
    g[i] -= h * (params.mu * odd_pow(ui, q) + odd_pow(ui, ps1));
  }
  return GridFunction(u.grid_ptr(), std::move(g));
}

double second_variation(const GridFunction& w, const GridFunction& v, const GridFunction& z,
                        const Params& params) {
  require_same_grid(w, v);
  require_same_grid(w, z);
  const Grid& g = w.grid();
  check_params(g, params);
  const int n = g.n();
  const double p = params.p;
  const double h = g.h();
  auto weight = [p](double d) { return p == 2.0 ? 1.0 : std::pow(std::abs(d), p - 2.0); };
  std::vector<double> rows(n);
  evaluate_rows(n, rows, [&](int i) {
    double acc = 0.0;
    for (int j = i + 1; j < n; ++j)
      acc += weight(w[i] - w[j]) * (v[i] - v[j]) * (z[i] - z[j]) * g.kernel(j - i);
    return acc;
  });
  double tail = 0.0, bulk = 0.0;
  for (int i = 0; i < n; ++i) {
    const double vz = v[i] * z[i];
    tail += (p - 1.0) * weight(w[i]) * vz * g.tail()[i];
    if (w[i] != 0.0) {
      const double aw = std::abs(w[i]);
      bulk += params.mu * params.q * std::pow(aw, params.q - 1.0) * vz +
              (params.pstar() - 1.0) * std::pow(aw, params.pstar() - 2.0) * vz;
    }
  }
  return 2.0 * (p - 1.0) * h * h * ordered_sum(rows) + 2.0 * h * tail - h * bulk;
}

std::pair<GridFunction, GridFunction> split_parts(const GridFunction& u) {
  std::vector<double> plus(u.size()), minus(u.size());
  for (int i = 0; i < u.size(); ++i) {
    plus[i] = positive(u[i]);
    minus[i] = positive(-u[i]);
  }
  return {GridFunction(u.grid_ptr(), std::move(plus)), GridFunction(u.grid_ptr(), std::move(minus))};
}

}  // namespace nehari
