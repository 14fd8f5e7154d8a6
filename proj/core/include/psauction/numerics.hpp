#pragma once

#include <functional>
#include <span>
#include <vector>

namespace psauction {

// Interval with a sign change of the target function at the endpoints.
struct Bracket {
  double lo;
  double hi;
};

struct RootOptions {
  double abs_tol = 1e-10;
  double initial_step = 1.0;
  int max_expansions = 60;
};

// Grows a bracket geometrically from `hint` (hint +/- step, doubling) until
// f changes sign. f must be strictly decreasing. Throws BracketFailure if no
// sign change is found within max_expansions doublings.
Bracket expand_bracket(const std::function<double(double)>& f, double hint,
                       const RootOptions& opts = {});

// Root of a continuous strictly decreasing function, |result - root| <= abs_tol.
double solve_monotone_root(const std::function<double(double)>& f, double hint,
                           const RootOptions& opts = {});
inline double solve_monotone_root(const std::function<double(double)>& f,
                                  double hint, double abs_tol) {
  RootOptions opts;
  opts.abs_tol = abs_tol;
  return solve_monotone_root(f, hint, opts);
}

// Bisection restricted to [lo, hi]; requires f(lo) >= 0 >= f(hi) for a
// decreasing f, otherwise throws BracketFailure. Used where evaluating f
// outside a bounded domain is not meaningful (e.g. signal inversion).
double solve_monotone_root_bounded(const std::function<double(double)>& f,
                                   double lo, double hi, double abs_tol = 1e-10);

// n-point Gauss-Legendre nodes and weights on [-1, 1].
struct QuadratureRule {
  std::vector<double> x;
  std::vector<double> w;
};
const QuadratureRule& gauss_legendre_rule(int n);

// Fixed-order Gauss-Legendre estimate of the integral of f over [a, b].
// Throws NonFiniteError if f is non-finite at any node.
double integrate_gl(const std::function<double(double)>& f, double a, double b,
                    int nodes);

// Doubles the node count until two successive estimates agree to abs_tol.
double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double abs_tol = 1e-10,
                          int initial_nodes = 16, int max_nodes = 1 << 16);

// Splits [a, b] at the given kink locations and applies a fixed-order rule on
// each smooth piece. Kinks outside (a, b) are ignored.
double integrate_piecewise(const std::function<double(double)>& f, double a,
                           double b, std::span<const double> kinks,
                           int nodes_per_piece = 48);

// Piecewise-linear interpolation on a strictly increasing abscissa grid with
// nondecreasing ordinates. Exact at the nodes; queries outside the grid range
// throw OutOfRangeError.
class MonotoneGrid {
 public:
  MonotoneGrid(std::vector<double> xs, std::vector<double> ys);

  double operator()(double query) const;
  std::span<const double> xs() const { return xs_; }
  std::span<const double> ys() const { return ys_; }
  double x_min() const { return xs_.front(); }
  double x_max() const { return xs_.back(); }

 private:
  std::vector<double> xs_;
  std::vector<double> ys_;
};

double monotone_interpolate(std::span<const double> xs,
                            std::span<const double> ys, double query);

}  // namespace psauction
