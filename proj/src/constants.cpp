#include "nehari/constants.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "nehari/energy.hpp"
#include "nehari/errors.hpp"

namespace nehari {

std::string_view to_string(PBranch b) { return b == PBranch::High ? "p>=golden" : "2<=p<golden"; }

double mu_tilde(const Params& params, double measure, double S) {
  params.validate();
  const double p = params.p, q = params.q, s = params.s, ps = params.pstar();
  const double N = params.N;
  return std::pow((p - 1.0 - q) / (ps - q - 1.0), (p - 1.0 - q) / (ps - p)) *
         ((ps - p) / (ps - q - 1.0)) * std::pow(measure, (q + 1.0 - ps) / ps) *
         std::pow(S, N * (p - 1.0 - q) / (p * p * s) + (q + 1.0) / p);
}

double big_M(const Params& params, double measure) {
  params.validate();
  const double p = params.p, q = params.q, s = params.s, ps = params.pstar();
  const double N = params.N;
  return ((p * N - (N - p * s) * (q + 1.0)) * (p - 1.0 - q) / (p * p * (q + 1.0))) *
         std::pow((p - 1.0 - q) * (N - s * p) / (p * p * s), (q + 1.0) / (ps - q - 1.0)) * measure;
}

double ps_level(const Params& params, double measure, double S, double mu) {
  const double N = params.N, ps = params.pstar();
  return (params.s / N) * std::pow(S, N / (params.s * params.p)) -
         big_M(params, measure) * std::pow(mu, ps / (ps - params.q - 1.0));
}

double q1(const Params& params) {
  const double N = params.N, p = params.p, s = params.s;
  return N * N * (p - 1.0) / ((N - s * p) * (N - s)) - 1.0;
}

double q2(const Params& params) {
  const double N = params.N, p = params.p, s = params.s;
  return N * p / (N - s * p) - p / (p - 1.0);
}

double q3(const Params& params) {
  const double N = params.N, p = params.p, s = params.s;
  return N * (p - 1.0) / (N - s * p) - (p - 1.0) / p;
}

PBranch p_branch(double p) { return p >= kGoldenThreshold ? PBranch::High : PBranch::Low; }

double q0(const Params& params) {
  return p_branch(params.p) == PBranch::High ? std::max(q1(params), q2(params))
                                             : std::max(q1(params), q3(params));
}

namespace {

double N0_for(PBranch b, double sp, double p) {
  return b == PBranch::High ? sp * (p * p - p + 1.0) : sp * (p + 1.0);
}

}  // namespace

double N0(const Params& params) { return N0_for(p_branch(params.p), params.ps(), params.p); }

double N0_other_branch(const Params& params) {
  const PBranch other = p_branch(params.p) == PBranch::High ? PBranch::Low : PBranch::High;
  return N0_for(other, params.ps(), params.p);
}

double N_energy_bound(const Params& params) {
  const double p = params.p;
  return 0.5 * params.ps() * (p + 1.0 + std::sqrt((p + 1.0) * (p + 1.0) - 4.0));
}

double lq_regime_threshold(const Params& params) {
  const double N = params.N;
  return (N * (params.p - 2.0) + params.ps()) / (N - params.ps());
}

double ConstantsReport::ps_level(double mu) const {
  return nehari::ps_level(params, domain_measure, S, mu);
}

ConstantsReport regime_report(const Params& params, double measure, double S) {
  params.validate();
  if (!(measure > 0.0) || !std::isfinite(measure)) throw ParameterError("domain measure must be positive");
  if (!(S > 0.0) || !std::isfinite(S)) throw ParameterError("Sobolev constant must be positive");
  ConstantsReport r;
  r.params = params;
  r.S = S;
  r.domain_measure = measure;
  r.mu_tilde = mu_tilde(params, measure, S);
  r.big_M = big_M(params, measure);
  r.c_star_zero = r.ps_level(0.0);
  r.c_star_mu = r.ps_level(params.mu);
  r.q1 = q1(params);
  r.q2 = q2(params);
  r.q3 = q3(params);
  r.q0 = q0(params);
  r.branch = p_branch(params.p);
  r.N0 = N0(params);
  r.N0_other_branch = N0_other_branch(params);
  r.N_energy_bound = N_energy_bound(params);
  r.q_window_nonempty = r.q0 < params.p - 1.0;
  r.hypothesis_ok = r.q0 < params.q && params.q < params.p - 1.0 && params.N > r.N0;
  r.mu_below_mu_tilde = params.mu < r.mu_tilde;
  return r;
}

double rayleigh_quotient(const GridFunction& u, const Params& params) {
  const double m = lebesgue_mass(u, params.pstar());
  if (!(m > 0.0)) throw DegenerateInput("nonzero function required");
  return seminorm_p(u, params) / std::pow(m, params.p / params.pstar());
}

namespace {

GridFunction normalized(const GridFunction& u, const Params& params) {
  return u.scaled(std::pow(lebesgue_mass(u, params.pstar()), -1.0 / params.pstar()));
}

}  // namespace

SobolevEstimate estimate_sobolev(const GridPtr& grid, const Params& params, int iters,
                                 std::uint64_t seed) {
  params.validate_discrete();
  check_params(*grid, params);
  if (iters < 1) throw ParameterError("estimate_sobolev requires iters >= 1");
  const double p = params.p, ps = params.pstar(), h = grid->h();

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> init(grid->n());
  for (double& v : init) v = unif(rng);
  GridFunction u = normalized(GridFunction(grid, std::move(init)), params);

  double log_r = std::log(rayleigh_quotient(u, params));
  std::vector<double> best{std::exp(log_r)};
  best.reserve(iters + 1);
  GridFunction best_u = u;
  int it = 0;
  for (; it < iters; ++it) {
    const double semi = seminorm_p(u, params), mass = lebesgue_mass(u, ps);
    std::vector<double> g = form_A_nodal(u, params).vector();
    double gg = 0.0;
    for (int i = 0; i < u.size(); ++i) {
      g[i] = p * (g[i] / semi - h * odd_pow(u[i], ps - 1.0) / mass);
      gg += g[i] * g[i];
    }
    if (gg == 0.0) break;
    const GridFunction dir(grid, std::move(g));
    double alpha = 1.0;
    bool accepted = false;
    GridFunction trial = u;
    double log_trial = log_r;
    while (alpha > 1e-30) {
      trial = normalized(u.axpy(-alpha, dir), params);
      log_trial = std::log(rayleigh_quotient(trial, params));
      if (log_trial <= log_r - 1e-4 * alpha * gg) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) break;
    u = std::move(trial);
    log_r = log_trial;
    const double r = std::exp(log_r);
    if (r < best.back()) best_u = u;
    best.push_back(std::min(best.back(), r));
  }

  SobolevEstimate est{best.back(), false, it, 0.0, best_u};
  const int window = std::max(10, it / 100);
  const int k = static_cast<int>(best.size()) - 1;
  const double prev = best[std::max(0, k - window)];
  est.final_rel_decrease = (prev - best.back()) / best.back();
  est.converged = est.final_rel_decrease <= 1e-6;
  return est;
}

}  // namespace nehari
