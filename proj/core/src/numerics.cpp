#include "psauction/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>
#include <utility>

#include "psauction/errors.hpp"

namespace psauction {

Bracket expand_bracket(const std::function<double(double)>& f, double hint,
                       const RootOptions& opts) {
  const double f_hint = f(hint);
  if (f_hint == 0.0) return {hint, hint};

  double step = opts.initial_step;
  if (f_hint > 0.0) {
    // Root lies above the hint.
    double lo = hint;
    for (int i = 0; i < opts.max_expansions; ++i) {
      const double hi = hint + step;
      if (f(hi) <= 0.0) return {lo, hi};
      lo = hi;
      step *= 2.0;
    }
  } else {
    double hi = hint;
    for (int i = 0; i < opts.max_expansions; ++i) {
      const double lo = hint - step;
      if (f(lo) >= 0.0) return {lo, hi};
      hi = lo;
      step *= 2.0;
    }
  }
  std::ostringstream msg;
  msg << "no sign change within " << opts.max_expansions
      << " bracket expansions from hint " << hint;
  throw BracketFailure(msg.str());
}

namespace {

double bisect(const std::function<double(double)>& f, double lo, double hi,
              double abs_tol) {
  while (hi - lo > abs_tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // interval at floating-point resolution
    if (f(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double solve_monotone_root(const std::function<double(double)>& f, double hint,
                           const RootOptions& opts) {
  const Bracket br = expand_bracket(f, hint, opts);
  if (br.lo == br.hi) return br.lo;
  return bisect(f, br.lo, br.hi, opts.abs_tol);
}

double solve_monotone_root_bounded(const std::function<double(double)>& f,
                                   double lo, double hi, double abs_tol) {
  if (!(lo < hi)) throw BracketFailure("empty bounded bracket");
  const double f_lo = f(lo);
  const double f_hi = f(hi);
  if (f_lo < 0.0 || f_hi > 0.0) {
    std::ostringstream msg;
    msg << "target not bracketed on [" << lo << ", " << hi << "]: f(lo)=" << f_lo
        << ", f(hi)=" << f_hi;
    throw BracketFailure(msg.str());
  }
  return bisect(f, lo, hi, abs_tol);
}

namespace {

QuadratureRule compute_gl_rule(int n) {
  QuadratureRule rule;
  rule.x.resize(n);
  rule.w.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Newton iteration on the Legendre polynomial, standard cosine start.
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) < 1e-15) break;
    }
    rule.x[i] = -z;
    rule.x[n - 1 - i] = z;
    rule.w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    rule.w[n - 1 - i] = rule.w[i];
  }
  return rule;
}

}  // namespace

const QuadratureRule& gauss_legendre_rule(int n) {
  thread_local std::map<int, QuadratureRule> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_gl_rule(n)).first;
  return it->second;
}

double integrate_gl(const std::function<double(double)>& f, double a, double b,
                    int nodes) {
  if (a == b) return 0.0;
  const QuadratureRule& rule = gauss_legendre_rule(nodes);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double acc = 0.0;
  for (int i = 0; i < nodes; ++i) {
    const double v = f(mid + half * rule.x[i]);
    if (!std::isfinite(v)) {
      std::ostringstream msg;
      msg << "integrand non-finite at x=" << mid + half * rule.x[i];
      throw NonFiniteError(msg.str());
    }
    acc += rule.w[i] * v;
  }
  return acc * half;
}

double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double abs_tol, int initial_nodes,
                          int max_nodes) {
  double prev = integrate_gl(f, a, b, initial_nodes);
  for (int n = 2 * initial_nodes; n <= max_nodes; n *= 2) {
    const double cur = integrate_gl(f, a, b, n);
    if (std::abs(cur - prev) < abs_tol) return cur;
    prev = cur;
  }
  return prev;
}

double integrate_piecewise(const std::function<double(double)>& f, double a,
                           double b, std::span<const double> kinks,
                           int nodes_per_piece) {
  if (a == b) return 0.0;
  std::vector<double> cuts;
  cuts.reserve(kinks.size() + 2);
  cuts.push_back(a);
  for (double k : kinks) {
    if (k > a && k < b) cuts.push_back(k);
  }
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] > cuts[i]) {
      acc += integrate_gl(f, cuts[i], cuts[i + 1], nodes_per_piece);
    }
  }
  return acc;
}

MonotoneGrid::MonotoneGrid(std::vector<double> xs, std::vector<double> ys)
    : xs_(std::move(xs)), ys_(std::move(ys)) {
  if (xs_.size() != ys_.size() || xs_.size() < 2) {
    throw std::invalid_argument("grid needs at least two (x, y) pairs");
  }
  for (std::size_t i = 0; i + 1 < xs_.size(); ++i) {
    if (!(xs_[i] < xs_[i + 1])) {
      throw std::invalid_argument("grid abscissas must be strictly increasing");
    }
    if (ys_[i + 1] < ys_[i]) {
      throw std::invalid_argument("grid ordinates must be nondecreasing");
    }
  }
}

double MonotoneGrid::operator()(double query) const {
  return monotone_interpolate(xs_, ys_, query);
}

double monotone_interpolate(std::span<const double> xs,
                            std::span<const double> ys, double query) {
  if (query < xs.front() || query > xs.back()) {
    std::ostringstream msg;
    msg << "query " << query << " outside grid range [" << xs.front() << ", "
        << xs.back() << "]";
    throw OutOfRangeError(msg.str());
  }
  const auto it = std::upper_bound(xs.begin(), xs.end(), query);
  if (it == xs.end()) return ys.back();
  const std::size_t hi = static_cast<std::size_t>(it - xs.begin());
  if (hi == 0) return ys.front();
  const std::size_t lo = hi - 1;
  const double t = (query - xs[lo]) / (xs[hi] - xs[lo]);
  return ys[lo] + t * (ys[hi] - ys[lo]);
}

}  // namespace psauction
