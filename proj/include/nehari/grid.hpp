#ifndef NEHARI_GRID_HPP_
#define NEHARI_GRID_HPP_

#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace nehari {

/// Problem parameters. pstar is derived and never set directly.
struct Params {
  double s = 0.4;
  double p = 2.0;
  double q = 0.5;
  double mu = 0.05;
  int N = 1;

  double ps() const { return p * s; }
  double pstar() const { return N * p / (N - p * s); }

  /// Throws ParameterError naming the first violated invariant.
  void validate() const;
  /// Additionally requires N = 1 and ps < 1, the setting of all grid computations.
  void validate_discrete() const;
};

class Grid;
using GridPtr = std::shared_ptr<const Grid>;

/// Uniform interior nodes of (a,b) with exterior-strip weights.
class Grid {
 public:
  Grid(double a, double b, int n, const Params& params);

  double a() const { return a_; }
  double b() const { return b_; }
  int n() const { return n_; }
  double h() const { return h_; }
  double ps() const { return ps_; }
  double measure() const { return b_ - a_; }
  double half_width() const { return 0.5 * (b_ - a_); }
  double midpoint() const { return 0.5 * (a_ + b_); }

  double node(int i) const { return nodes_[i]; }
  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> tail() const { return tail_; }
  /// (d h)^{-(1+ps)} for the node offset d >= 1.
  double kernel(int d) const { return kernel_[d]; }

  bool same_as(const Grid& other) const;

 private:
  double a_, b_;
  int n_;
  double h_;
  double ps_;
  std::vector<double> nodes_;
  std::vector<double> tail_;
  std::vector<double> kernel_;
};

GridPtr build_grid(double a, double b, int n, const Params& params);

/// Exterior weight [(x-a)^{-ps} + (b-x)^{-ps}]/ps.
double tail_weight(double x, double a, double b, double ps);
double tail_weight(double x, const Grid& grid, const Params& params);

/// Nodal values on a grid, zero outside it.
class GridFunction {
 public:
  GridFunction(GridPtr grid, std::vector<double> values);

  static GridFunction zeros(GridPtr grid);
  static GridFunction from(GridPtr grid, const std::function<double(double)>& f);

  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  int size() const { return static_cast<int>(values_.size()); }
  double operator[](int i) const { return values_[i]; }
  std::span<const double> values() const { return values_; }
  const std::vector<double>& vector() const { return values_; }

  bool is_zero() const;
  double max_abs() const;
  GridFunction scaled(double c) const;
  GridFunction operator-() const { return scaled(-1.0); }
  /// this + c * other
  GridFunction axpy(double c, const GridFunction& other) const;

 private:
  GridPtr grid_;
  std::vector<double> values_;
};

GridFunction operator+(const GridFunction& u, const GridFunction& v);
GridFunction operator-(const GridFunction& u, const GridFunction& v);

/// Throws DomainError unless u and v live on the same grid.
void require_same_grid(const GridFunction& u, const GridFunction& v);

}  // namespace nehari

#endif  // NEHARI_GRID_HPP_
