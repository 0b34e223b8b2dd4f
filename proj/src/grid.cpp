#include "nehari/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nehari/errors.hpp"

namespace nehari {

namespace {

template <typename E>
[[noreturn]] void fail(const std::string& msg) {
  throw E(msg);
}

}  // namespace

void Params::validate() const {
  auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(s) || !finite(p) || !finite(q) || !finite(mu))
    fail<ParameterError>("invariant violated: parameters must be finite");
  if (!(s > 0.0 && s < 1.0)) fail<ParameterError>("invariant violated: 0 < s < 1");
  if (!(p >= 2.0)) fail<ParameterError>("invariant violated: p >= 2");
  if (!(q > 0.0 && q < p - 1.0)) fail<ParameterError>("invariant violated: 0 < q < p-1");
  if (!(mu > 0.0)) fail<ParameterError>("invariant violated: mu > 0");
  if (N < 1) fail<ParameterError>("invariant violated: N >= 1");
  if (!(N > p * s)) fail<ParameterError>("invariant violated: N > p*s");
}

void Params::validate_discrete() const {
  validate();
  if (N != 1) fail<DomainError>("invariant violated: grid computations require N = 1");
  if (!(p * s < 1.0)) fail<ParameterError>("invariant violated: 1-D runs require p*s < 1");
}

double tail_weight(double x, double a, double b, double ps) {
  if (!(ps > 0.0)) fail<ParameterError>("tail weight requires p*s > 0");
  if (!(x > a && x < b)) fail<DomainError>("tail weight requires a node strictly inside (a,b)");
  return (std::pow(x - a, -ps) + std::pow(b - x, -ps)) / ps;
}

double tail_weight(double x, const Grid& grid, const Params& params) {
  if (params.N != 1) fail<DomainError>("tail weight is defined for N = 1 only");
  return tail_weight(x, grid.a(), grid.b(), params.ps());
}

Grid::Grid(double a, double b, int n, const Params& params)
    : a_(a), b_(b), n_(n), ps_(params.ps()) {
  if (!std::isfinite(a) || !std::isfinite(b)) fail<ConstructionError>("grid endpoints must be finite");
  if (!(a < b)) fail<ConstructionError>("grid requires a < b");
  if (n < 2) fail<ConstructionError>("grid requires n >= 2");
  if (!(ps_ > 0.0) || !std::isfinite(ps_)) fail<ParameterError>("grid requires p*s > 0");
  h_ = (b - a) / (n + 1);
  nodes_.resize(n);
  tail_.resize(n);
  for (int i = 0; i < n; ++i) {
    nodes_[i] = a + (i + 1) * h_;
    tail_[i] = tail_weight(nodes_[i], a, b, ps_);
  }
  kernel_.assign(n, 0.0);
  for (int d = 1; d < n; ++d) kernel_[d] = std::pow(d * h_, -(1.0 + ps_));
}

bool Grid::same_as(const Grid& other) const {
  return this == &other ||
         (a_ == other.a_ && b_ == other.b_ && n_ == other.n_ && ps_ == other.ps_);
}

GridPtr build_grid(double a, double b, int n, const Params& params) {
  return std::make_shared<const Grid>(a, b, n, params);
}

GridFunction::GridFunction(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) fail<ConstructionError>("grid function without a grid");
  if (static_cast<int>(values_.size()) != grid_->n()) {
    std::ostringstream os;
    os << "grid function has " << values_.size() << " values, grid has " << grid_->n() << " nodes";
    fail<ConstructionError>(os.str());
  }
  for (double v : values_)
    if (!std::isfinite(v)) fail<DomainError>("grid function values must be finite");
}

GridFunction GridFunction::zeros(GridPtr grid) {
  const int n = grid->n();
  return GridFunction(std::move(grid), std::vector<double>(n, 0.0));
}

GridFunction GridFunction::from(GridPtr grid, const std::function<double(double)>& f) {
  std::vector<double> v(grid->n());
  for (int i = 0; i < grid->n(); ++i) v[i] = f(grid->node(i));
  return GridFunction(std::move(grid), std::move(v));
}

bool GridFunction::is_zero() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

double GridFunction::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

GridFunction GridFunction::scaled(double c) const {
  std::vector<double> v(values_);
  for (double& x : v) x *= c;
  return GridFunction(grid_, std::move(v));
}

GridFunction GridFunction::axpy(double c, const GridFunction& other) const {
  require_same_grid(*this, other);
  std::vector<double> v(values_);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += c * other.values_[i];
  return GridFunction(grid_, std::move(v));
}

GridFunction operator+(const GridFunction& u, const GridFunction& v) { return u.axpy(1.0, v); }
GridFunction operator-(const GridFunction& u, const GridFunction& v) { return u.axpy(-1.0, v); }

void require_same_grid(const GridFunction& u, const GridFunction& v) {
  if (!u.grid().same_as(v.grid())) fail<DomainError>("grid functions live on different grids");
}

}  // namespace nehari
