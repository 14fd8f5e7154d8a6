#include "psauction/principal_agent.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <stdexcept>
#include <thread>

#include "psauction/errors.hpp"
#include "psauction/numerics.hpp"

namespace psauction {

CostFunction CostFunction::quadratic(double gamma, double e_hi) {
  if (!(gamma > 0.0)) throw std::invalid_argument("cost curvature must be positive");
  if (e_hi == 0.0) e_hi = std::max(1.0, 1.0 / gamma);
  if (!(2.0 * gamma * e_hi > 1.0)) {
    throw std::invalid_argument(
        "effort ceiling too small: marginal cost must exceed 1 inside the interval");
  }
  CostFunction c;
  c.quadratic_ = true;
  c.gamma_ = gamma;
  c.e_lo_ = 0.0;
  c.e_hi_ = e_hi;
  return c;
}

CostFunction CostFunction::custom(std::vector<double> effort,
                                  std::vector<double> cost) {
  if (effort.size() != cost.size() || effort.size() < 2) {
    throw std::invalid_argument("cost table needs at least two rows");
  }
  double prev_slope = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < effort.size(); ++i) {
    if (!(effort[i] < effort[i + 1])) {
      throw std::invalid_argument("effort column must be strictly increasing");
    }
    if (cost[i + 1] < cost[i]) {
      throw std::invalid_argument("cost must be nondecreasing");
    }
    const double s = (cost[i + 1] - cost[i]) / (effort[i + 1] - effort[i]);
    if (s < prev_slope - 1e-12) {
      throw std::invalid_argument("cost table is not convex");
    }
    prev_slope = s;
  }
  if (cost.front() < 0.0) throw std::invalid_argument("cost must be nonnegative");
  CostFunction c;
  c.quadratic_ = false;
  c.e_lo_ = effort.front();
  c.e_hi_ = effort.back();
  c.efforts_ = std::move(effort);
  c.costs_ = std::move(cost);
  return c;
}

double CostFunction::operator()(double e) const {
  if (quadratic_) return gamma_ * e * e;
  if (e <= efforts_.front()) return costs_.front();
  if (e >= efforts_.back()) return costs_.back();
  const auto it = std::upper_bound(efforts_.begin(), efforts_.end(), e);
  const std::size_t hi = static_cast<std::size_t>(it - efforts_.begin());
  const std::size_t lo = hi - 1;
  const double t = (e - efforts_[lo]) / (efforts_[hi] - efforts_[lo]);
  return costs_[lo] + t * (costs_[hi] - costs_[lo]);
}

double optimal_effort_plsc(const CostFunction& cost, double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("share fraction must lie in [0, 1)");
  }
  const double keep = 1.0 - alpha;
  auto objective = [&](double e) { return keep * e - cost(e); };

  std::vector<double> candidates{cost.effort_lo(), cost.effort_hi()};
  if (cost.is_quadratic()) {
    const double interior = keep / (2.0 * cost.gamma());
    if (interior > cost.effort_lo() && interior < cost.effort_hi()) {
      candidates.push_back(interior);
    }
  } else {
    // Piecewise-linear objective attains its maximum at a table node.
    for (double e : cost.effort_nodes()) candidates.push_back(e);
  }
  double best = candidates[0];
  double best_val = objective(best);
  for (double e : candidates) {
    const double v = objective(e);
    if (v > best_val + 1e-15 || (std::abs(v - best_val) <= 1e-15 && e < best)) {
      best = e;
      best_val = v;
    }
  }
  return best;
}

double effort_gain(const CostFunction& cost, double alpha) {
  const double e = optimal_effort_plsc(cost, alpha);
  return (1.0 - alpha) * e - cost(e);
}

double bid_plsc_pa(const InfoModel& model, const Utility& u,
                   const CostFunction& cost, double alpha, double y1, double z1,
                   double abs_tol) {
  const double kappa = effort_gain(cost, alpha);
  const double keep = 1.0 - alpha;
  auto zero_utility_gap = [&](double b) {
    Integrand g;
    g.fn = [&u, keep, kappa, b](double x) {
      return u(keep * (x - b) + kappa);
    };
    for (double t : u.table_money()) {
      g.kinks.push_back(b + (t - kappa) / keep);
    }
    return model.cond_expect_pair(g, y1, z1);
  };
  const double hint = model.expected_value_pair(y1, z1) + kappa / keep;
  return solve_monotone_root(zero_utility_gap, hint, abs_tol);
}

BidFunction equilibrium_strategy_plsc_pa(const InfoModel& model,
                                         const Utility& u,
                                         const CostFunction& cost, double alpha,
                                         int grid_nodes, double abs_tol) {
  const Interval sig = model.signal_interval();
  std::vector<double> ys(static_cast<std::size_t>(grid_nodes));
  std::vector<double> bids(static_cast<std::size_t>(grid_nodes));
  for (int i = 0; i < grid_nodes; ++i) {
    const double y = sig.lo + sig.width() * i / (grid_nodes - 1);
    ys[static_cast<std::size_t>(i)] = y;
    double b = bid_plsc_pa(model, u, cost, alpha, y, y, abs_tol);
    if (i > 0) b = std::max(b, bids[static_cast<std::size_t>(i - 1)]);
    bids[static_cast<std::size_t>(i)] = b;
  }
  return BidFunction(std::move(ys), std::move(bids),
                     "plsc_pa@" + model.name());
}

namespace {

struct PaAccumulator {
  double s1 = 0.0, s2 = 0.0, tot = 0.0, tot2 = 0.0;
  std::int64_t n = 0;
  void add(double stage1, double stage2) {
    s1 += stage1;
    s2 += stage2;
    const double t = stage1 + stage2;
    tot += t;
    tot2 += t * t;
    ++n;
  }
  RevenueBreakdown finish() const {
    RevenueBreakdown r;
    r.n_samples = n;
    const double dn = static_cast<double>(n);
    r.stage1 = s1 / dn;
    r.stage2 = s2 / dn;
    r.total = tot / dn;
    const double var = std::max(0.0, tot2 / dn - r.total * r.total);
    r.stderr_total = std::sqrt(var / dn);
    return r;
  }
};

constexpr std::int64_t kBlockSize = 8192;

template <typename PerSample>
RevenueBreakdown pa_monte_carlo(const InfoModel& model, std::int64_t n,
                                RandomStream& rs, PerSample per_sample) {
  if (n < 1) throw std::invalid_argument("need at least one sample");
  const RandomStream base = rs.derive(rs.next_u64());
  const std::int64_t blocks = (n + kBlockSize - 1) / kBlockSize;
  std::vector<PaAccumulator> partial(static_cast<std::size_t>(blocks));
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned workers =
      static_cast<unsigned>(std::min<std::int64_t>(hw, blocks));
  std::vector<std::future<void>> futures;
  for (unsigned w = 0; w < workers; ++w) {
    futures.push_back(std::async(std::launch::async, [&, w]() {
      std::vector<double> signals(static_cast<std::size_t>(model.n_buyers()));
      for (std::int64_t blk = w; blk < blocks; blk += workers) {
        const std::int64_t count =
            std::min<std::int64_t>(kBlockSize, n - blk * kBlockSize);
        RandomStream blk_rs = base.derive(static_cast<std::uint64_t>(blk));
        for (std::int64_t i = 0; i < count; ++i) {
          model.sample_signals(blk_rs, signals);
          per_sample(partial[static_cast<std::size_t>(blk)], signals, blk_rs);
        }
      }
    }));
  }
  for (auto& f : futures) f.get();
  PaAccumulator acc;
  for (const PaAccumulator& p : partial) {
    acc.s1 += p.s1;
    acc.s2 += p.s2;
    acc.tot += p.tot;
    acc.tot2 += p.tot2;
    acc.n += p.n;
  }
  return acc.finish();
}

std::size_t argmax(std::span<const double> v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return best;
}

}  // namespace

RevenueBreakdown revenue_plsc_pa(const InfoModel& model, const Utility& u,
                                 const CostFunction& cost, double alpha,
                                 std::int64_t n, RandomStream& rs) {
  const BidFunction strategy =
      equilibrium_strategy_plsc_pa(model, u, cost, alpha);
  const double effort = optimal_effort_plsc(cost, alpha);
  return pa_monte_carlo(
      model, n, rs,
      [&](PaAccumulator& acc, std::span<const double> signals,
          RandomStream& blk_rs) {
        const std::size_t winner = argmax(signals);
        double z1 = -std::numeric_limits<double>::infinity();
        std::vector<double> perm;
        perm.reserve(signals.size());
        perm.push_back(signals[winner]);
        for (std::size_t i = 0; i < signals.size(); ++i) {
          if (i != winner) {
            z1 = std::max(z1, signals[i]);
            perm.push_back(signals[i]);
          }
        }
        const double payment = strategy(z1);
        const double x = model.sample_value(perm, blk_rs);
        // The sharing stage sees the effort-generated value x + e(alpha).
        const double stage2 = alpha * (x + effort - payment);
        acc.add(payment, stage2);
      });
}

RevenueBreakdown revenue_plsc_pa_closed_form_example2(double gamma,
                                                      double alpha) {
  if (!(gamma > 0.0)) throw std::invalid_argument("cost curvature must be positive");
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("share fraction must lie in [0, 1)");
  }
  RevenueBreakdown r;
  r.stage1 = 1.0 / 3.0 + (1.0 - alpha) / (4.0 * gamma);
  r.stage2 = alpha * (1.0 - alpha) / (4.0 * gamma) + alpha / 6.0;
  r.total = r.stage1 + r.stage2;
  return r;
}

double derivative_at_zero(const std::function<double(double)>& revenue_curve,
                          double h) {
  if (!(h > 0.0)) throw std::invalid_argument("step must be positive");
  return (revenue_curve(h) - revenue_curve(0.0)) / h;
}

double optimal_effort_posc_expost(double gamma, double alpha, double w) {
  const double full = 1.0 / (2.0 * gamma);
  const double kept = (1.0 - alpha) / (2.0 * gamma);
  if (w <= -full) return full;
  if (w < -kept) return -w;  // push the shared profit exactly to zero
  return kept;
}

double max_profit_posc_pa(double gamma, double alpha, double w) {
  const double e = optimal_effort_posc_expost(gamma, alpha, w);
  const double we = w + e;
  return we - alpha * std::max(0.0, we) - gamma * e * e;
}

double bid_posc_pa(const InfoModel& model, double gamma, double alpha,
                   double y1, double y2, double abs_tol) {
  if (!(gamma > 0.0)) throw std::invalid_argument("cost curvature must be positive");
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("share fraction must lie in [0, 1)");
  }
  auto zero_profit_gap = [&](double b) {
    Integrand g;
    g.fn = [gamma, alpha, b](double x) {
      return max_profit_posc_pa(gamma, alpha, x - b);
    };
    // The optimal-effort policy switches branches at these profit levels.
    g.kinks = {b - 1.0 / (2.0 * gamma), b - (1.0 - alpha) / (2.0 * gamma)};
    return model.cond_expect_pair(g, y1, y2);
  };
  const double hint =
      model.expected_value_pair(y1, y2) + 1.0 / (4.0 * gamma);
  return solve_monotone_root(zero_profit_gap, hint, abs_tol);
}

RevenueBreakdown revenue_posc_pa(const InfoModel& model, double gamma,
                                 double alpha, std::int64_t n,
                                 RandomStream& rs) {
  const Interval sig = model.signal_interval();
  const int grid_nodes = 512;
  std::vector<double> ys(grid_nodes), bids(grid_nodes);
  for (int i = 0; i < grid_nodes; ++i) {
    const double y = sig.lo + sig.width() * i / (grid_nodes - 1);
    ys[static_cast<std::size_t>(i)] = y;
    double b = bid_posc_pa(model, gamma, alpha, y, y);
    if (i > 0) b = std::max(b, bids[static_cast<std::size_t>(i - 1)]);
    bids[static_cast<std::size_t>(i)] = b;
  }
  const BidFunction strategy(std::move(ys), std::move(bids),
                             "posc_pa@" + model.name());

  return pa_monte_carlo(
      model, n, rs,
      [&](PaAccumulator& acc, std::span<const double> signals,
          RandomStream& blk_rs) {
        const std::size_t winner = argmax(signals);
        double z1 = -std::numeric_limits<double>::infinity();
        std::vector<double> perm;
        perm.reserve(signals.size());
        perm.push_back(signals[winner]);
        for (std::size_t i = 0; i < signals.size(); ++i) {
          if (i != winner) {
            z1 = std::max(z1, signals[i]);
            perm.push_back(signals[i]);
          }
        }
        const double payment = strategy(z1);
        const double x = model.sample_value(perm, blk_rs);
        const double e = optimal_effort_posc_expost(gamma, alpha, x - payment);
        const double stage2 = alpha * std::max(0.0, x + e - payment);
        acc.add(payment, stage2);
      });
}

PaMechanism make_plsc_pa_mechanism(const InfoModel& model, const Utility& u,
                                   const CostFunction& cost, double alpha) {
  const double effort = optimal_effort_plsc(cost, alpha);
  return PaMechanism{
      equilibrium_strategy_plsc_pa(model, u, cost, alpha),
      [alpha, effort](double payment, double x) {
        return alpha * (x + effort - payment);
      }};
}

PaMechanism make_posc_pa_mechanism(const InfoModel& model, double gamma,
                                   double alpha) {
  const Interval sig = model.signal_interval();
  const int grid_nodes = 512;
  std::vector<double> ys(grid_nodes), bids(grid_nodes);
  for (int i = 0; i < grid_nodes; ++i) {
    const double y = sig.lo + sig.width() * i / (grid_nodes - 1);
    ys[static_cast<std::size_t>(i)] = y;
    double b = bid_posc_pa(model, gamma, alpha, y, y);
    if (i > 0) b = std::max(b, bids[static_cast<std::size_t>(i - 1)]);
    bids[static_cast<std::size_t>(i)] = b;
  }
  return PaMechanism{
      BidFunction(std::move(ys), std::move(bids), "posc_pa@" + model.name()),
      [gamma, alpha](double payment, double x) {
        const double e = optimal_effort_posc_expost(gamma, alpha, x - payment);
        return alpha * std::max(0.0, x + e - payment);
      }};
}

PairedEstimate pa_paired_diff(const InfoModel& model, const PaMechanism& a,
                              const PaMechanism& b, std::int64_t n,
                              RandomStream& rs) {
  if (n < 1) throw std::invalid_argument("need at least one sample");
  const RandomStream base = rs.derive(rs.next_u64());
  const std::int64_t blocks = (n + kBlockSize - 1) / kBlockSize;
  struct DiffAcc {
    double sa = 0.0, sb = 0.0, d = 0.0, d2 = 0.0;
  };
  std::vector<DiffAcc> partial(static_cast<std::size_t>(blocks));
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned workers =
      static_cast<unsigned>(std::min<std::int64_t>(hw, blocks));
  std::vector<std::future<void>> futures;
  for (unsigned w = 0; w < workers; ++w) {
    futures.push_back(std::async(std::launch::async, [&, w]() {
      std::vector<double> signals(static_cast<std::size_t>(model.n_buyers()));
      for (std::int64_t blk = w; blk < blocks; blk += workers) {
        const std::int64_t count =
            std::min<std::int64_t>(kBlockSize, n - blk * kBlockSize);
        RandomStream blk_rs = base.derive(static_cast<std::uint64_t>(blk));
        DiffAcc& acc = partial[static_cast<std::size_t>(blk)];
        for (std::int64_t s = 0; s < count; ++s) {
          model.sample_signals(blk_rs, signals);
          const std::size_t winner = argmax(signals);
          double z1 = -std::numeric_limits<double>::infinity();
          std::vector<double> perm;
          perm.reserve(signals.size());
          perm.push_back(signals[winner]);
          for (std::size_t i = 0; i < signals.size(); ++i) {
            if (i != winner) {
              z1 = std::max(z1, signals[i]);
              perm.push_back(signals[i]);
            }
          }
          const double x = model.sample_value(perm, blk_rs);
          const double pay_a = a.strategy(z1);
          const double pay_b = b.strategy(z1);
          const double tot_a = pay_a + a.stage2(pay_a, x);
          const double tot_b = pay_b + b.stage2(pay_b, x);
          acc.sa += tot_a;
          acc.sb += tot_b;
          const double d = tot_b - tot_a;
          acc.d += d;
          acc.d2 += d * d;
        }
      }
    }));
  }
  for (auto& f : futures) f.get();

  DiffAcc total;
  for (const DiffAcc& p : partial) {
    total.sa += p.sa;
    total.sb += p.sb;
    total.d += p.d;
    total.d2 += p.d2;
  }
  PairedEstimate est;
  est.n_samples = n;
  const double dn = static_cast<double>(n);
  est.mean_a = total.sa / dn;
  est.mean_b = total.sb / dn;
  est.mean_diff = total.d / dn;
  const double var = std::max(0.0, total.d2 / dn - est.mean_diff * est.mean_diff);
  est.stderr_ = std::sqrt(var / dn);
  est.t_stat = est.stderr_ > 0.0
                   ? est.mean_diff / est.stderr_
                   : (est.mean_diff == 0.0 ? 0.0 : std::copysign(1e9, est.mean_diff));
  return est;
}

}  // namespace psauction

