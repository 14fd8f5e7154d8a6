#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "psauction/auctions.hpp"
#include "psauction/equilibrium.hpp"
#include "psauction/info_model.hpp"
#include "psauction/random.hpp"
#include "psauction/utility.hpp"

namespace psauction {

// Monetary cost of the winning buyer's hidden effort: nonnegative, increasing,
// convex on a bounded effort interval, with marginal cost crossing 1 inside
// the interval so the optimum responds to the share fraction.
class CostFunction {
 public:
  // c(e) = gamma e^2 on [0, e_hi]; e_hi defaults to max(1, 1/gamma), which
  // puts the marginal-cost crossing strictly inside the interval.
  static CostFunction quadratic(double gamma, double e_hi = 0.0);
  // Increasing convex table, interpolated linearly.
  static CostFunction custom(std::vector<double> effort, std::vector<double> cost);

  double operator()(double e) const;
  double effort_lo() const { return e_lo_; }
  double effort_hi() const { return e_hi_; }
  bool is_quadratic() const { return quadratic_; }
  double gamma() const { return gamma_; }
  // Table abscissas for custom costs; empty for quadratic.
  std::span<const double> effort_nodes() const { return efforts_; }

 private:
  CostFunction() = default;

  bool quadratic_ = true;
  double gamma_ = 1.0;
  double e_lo_ = 0.0;
  double e_hi_ = 1.0;
  std::vector<double> efforts_;
  std::vector<double> costs_;
};

// Effort maximizing (1 - alpha) e - c(e); under profit-and-loss sharing this
// is independent of the auction outcome. Ties resolve toward smaller effort.
double optimal_effort_plsc(const CostFunction& cost, double alpha);

// kappa(alpha): the winner's net gain from that optimal effort.
double effort_gain(const CostFunction& cost, double alpha);

// Indifference bid when the winner's total profit carries the effort gain:
// E[u((1 - alpha)(X - b) + kappa(alpha)) | y1, z1] = 0.
double bid_plsc_pa(const InfoModel& model, const Utility& u,
                   const CostFunction& cost, double alpha, double y1, double z1,
                   double abs_tol = 1e-10);

BidFunction equilibrium_strategy_plsc_pa(const InfoModel& model,
                                         const Utility& u,
                                         const CostFunction& cost, double alpha,
                                         int grid_nodes = 512,
                                         double abs_tol = 1e-10);

// Second price revenue with profit-and-loss sharing and hidden effort; the
// sharing stage collects its share of the effort increment as well.
RevenueBreakdown revenue_plsc_pa(const InfoModel& model, const Utility& u,
                                 const CostFunction& cost, double alpha,
                                 std::int64_t n, RandomStream& rs);

// Exact stage revenues for the two-buyer uniform-value model with quadratic
// effort cost: total = 1/3 + 1/(4 gamma) + alpha/6 - alpha^2/(4 gamma).
RevenueBreakdown revenue_plsc_pa_closed_form_example2(double gamma,
                                                      double alpha);

// Forward finite difference (R(h) - R(0)) / h of a revenue curve.
double derivative_at_zero(const std::function<double(double)>& revenue_curve,
                          double h);

// Profit-only sharing with the effort chosen after the nominal value is
// observed, quadratic cost: the optimum effort as a piecewise function of the
// preliminary profit w = x - b.
double optimal_effort_posc_expost(double gamma, double alpha, double w);

// Maximum total profit of the winning buyer at that effort:
// w + e - alpha [w + e]+ - gamma e^2; increasing in w.
double max_profit_posc_pa(double gamma, double alpha, double w);

// Indifference bid under profit-only sharing with hidden effort (risk-neutral
// buyers): the root of b -> E[pi(alpha, X - b) | Y1 = y1, Y2 = y2].
double bid_posc_pa(const InfoModel& model, double gamma, double alpha,
                   double y1, double y2, double abs_tol = 1e-10);

// Monte Carlo revenue under profit-only sharing with hidden effort: the
// winner pays the diagonal bid at the loser's signal, chooses effort after
// observing the value, and shares alpha of the positive effort-generated
// profit.
RevenueBreakdown revenue_posc_pa(const InfoModel& model, double gamma,
                                 double alpha, std::int64_t n, RandomStream& rs);

// A fully resolved hidden-effort mechanism: the cached diagonal strategy plus
// the sharing-stage take as a function of (payment, nominal value). Lets
// different mechanisms or share fractions run on identical draws.
struct PaMechanism {
  BidFunction strategy;
  std::function<double(double payment, double value)> stage2;
};

PaMechanism make_plsc_pa_mechanism(const InfoModel& model, const Utility& u,
                                   const CostFunction& cost, double alpha);
PaMechanism make_posc_pa_mechanism(const InfoModel& model, double gamma,
                                   double alpha);

// Paired total-revenue difference, mechanism b minus mechanism a, with
// common random numbers.
PairedEstimate pa_paired_diff(const InfoModel& model, const PaMechanism& a,
                              const PaMechanism& b, std::int64_t n,
                              RandomStream& rs);

}  // namespace psauction
