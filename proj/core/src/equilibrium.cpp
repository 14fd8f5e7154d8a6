#include "psauction/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "psauction/errors.hpp"

namespace psauction {

namespace {

// Inverts the winner's net profit map h(w) = w - phi(w) (piecewise linear,
// increasing) at the given target. Used to pull utility-table kinks back
// into value space.
double invert_net_profit(const SharingContract& c, double target) {
  const std::vector<double> knots = c.profit_kinks();
  if (knots.empty()) {
    const double slope = 1.0 - (c.payment(1.0) - c.payment(0.0));
    const double h0 = -c.payment(0.0);
    return (target - h0) / slope;
  }
  std::vector<double> h(knots.size());
  for (std::size_t i = 0; i < knots.size(); ++i) {
    h[i] = knots[i] - c.payment(knots[i]);
  }
  if (target <= h.front()) {
    const double w0 = knots.front();
    const double slope = 1.0 - (c.payment(w0) - c.payment(w0 - 1.0));
    return w0 + (target - h.front()) / slope;
  }
  if (target >= h.back()) {
    const double wm = knots.back();
    const double slope = 1.0 - (c.payment(wm + 1.0) - c.payment(wm));
    return wm + (target - h.back()) / slope;
  }
  const auto it = std::upper_bound(h.begin(), h.end(), target);
  const std::size_t hi = static_cast<std::size_t>(it - h.begin());
  const std::size_t lo = hi - 1;
  const double t = (target - h[lo]) / (h[hi] - h[lo]);
  return knots[lo] + t * (knots[hi] - knots[lo]);
}

}  // namespace

std::vector<double> utility_profit_kinks(const Utility& u,
                                         const SharingContract& contract,
                                         double bid) {
  std::vector<double> kinks;
  for (double w : contract.profit_kinks()) kinks.push_back(bid + w);
  for (double t : u.table_money()) {
    kinks.push_back(bid + invert_net_profit(contract, t));
  }
  return kinks;
}

namespace {

// Conditional expectation under either the pairwise or the full-information
// conditioning, fixed once per solve.
struct Conditioning {
  const InfoModel* model;
  double y1;
  double z1 = 0.0;
  std::span<const double> z_full{};
  bool full = false;

  double expect(const Integrand& g) const {
    return full ? model->cond_expect_full(g, y1, z_full)
                : model->cond_expect_pair(g, y1, z1);
  }
  double expected_value() const {
    return full ? model->expected_value_full(y1, z_full)
                : model->expected_value_pair(y1, z1);
  }
};

// Unique payment b at which E[u(X - b - phi(X - b)) | conditioning] = 0.
// The expectation is strictly decreasing in b, so bisection applies; the
// conditional expected value is an upper bound for the root and serves as
// the bracket hint.
double solve_indifference(const Conditioning& cond, const Utility& u,
                          const SharingContract& contract, double abs_tol) {
  auto zero_utility_gap = [&](double b) {
    Integrand g;
    g.fn = [&u, &contract, b](double x) {
      const double w = x - b;
      return u(w - contract.payment(w));
    };
    g.kinks = utility_profit_kinks(u, contract, b);
    return cond.expect(g);
  };
  return solve_monotone_root(zero_utility_gap, cond.expected_value(), abs_tol);
}

double solve_plsc(const Conditioning& cond, const Utility& u, double alpha,
                  double abs_tol) {
  const double keep = 1.0 - alpha;
  auto zero_utility_gap = [&](double b) {
    Integrand g;
    g.fn = [&u, keep, b](double x) { return u(keep * (x - b)); };
    for (double t : u.table_money()) g.kinks.push_back(b + t / keep);
    return cond.expect(g);
  };
  return solve_monotone_root(zero_utility_gap, cond.expected_value(), abs_tol);
}

}  // namespace

double bid_posc_sp(const InfoModel& model, const Utility& u, double alpha,
                   double y1, double z1, double abs_tol) {
  const SharingContract c = SharingContract::posc(alpha);
  return solve_indifference({&model, y1, z1}, u, c, abs_tol);
}

double bid_plsc_sp(const InfoModel& model, const Utility& u, double alpha,
                   double y1, double z1, double abs_tol) {
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("share fraction must lie in [0, 1)");
  }
  return solve_plsc({&model, y1, z1}, u, alpha, abs_tol);
}

double bid_general_sp(const InfoModel& model, const Utility& u,
                      const SharingContract& contract, double y1, double z1,
                      double abs_tol) {
  if (contract.kind() == ContractKind::general) {
    const double span = model.value_interval().width() + 1.0;
    const AdmissibilityReport rep = contract.check_admissible(-span, span);
    if (!rep.admissible) {
      std::ostringstream msg;
      msg << "contract fails admissibility:";
      for (const auto& v : rep.violations) msg << " [" << v << "]";
      throw InadmissibleContract(msg.str());
    }
  }
  return solve_indifference({&model, y1, z1}, u, contract, abs_tol);
}

double bid_eng(const InfoModel& model, const Utility& u,
               const SharingContract& contract, double y1,
               std::span<const double> z_desc, double abs_tol) {
  Conditioning cond{&model, y1};
  cond.z_full = z_desc;
  cond.full = true;
  if (contract.kind() == ContractKind::plsc) {
    return solve_plsc(cond, u, contract.alpha(), abs_tol);
  }
  return solve_indifference(cond, u, contract, abs_tol);
}

BidFunction::BidFunction(std::vector<double> signals, std::vector<double> bids,
                         std::string label)
    : grid_(std::move(signals), std::move(bids)), label_(std::move(label)) {}

BidFunction equilibrium_strategy_sp(const InfoModel& model, const Utility& u,
                                    const SharingContract& contract,
                                    int grid_nodes, double abs_tol) {
  if (grid_nodes < 2) throw std::invalid_argument("need at least two grid nodes");
  if (contract.kind() == ContractKind::general) {
    const double span = model.value_interval().width() + 1.0;
    const AdmissibilityReport rep = contract.check_admissible(-span, span);
    if (!rep.admissible) {
      throw InadmissibleContract("contract fails admissibility");
    }
  }
  const Interval sig = model.signal_interval();
  std::vector<double> ys(static_cast<std::size_t>(grid_nodes));
  std::vector<double> bids(static_cast<std::size_t>(grid_nodes));
  for (int i = 0; i < grid_nodes; ++i) {
    const double y = sig.lo + sig.width() * i / (grid_nodes - 1);
    ys[static_cast<std::size_t>(i)] = y;
    Conditioning cond{&model, y, y};
    double b = contract.kind() == ContractKind::plsc
                   ? solve_plsc(cond, u, contract.alpha(), abs_tol)
                   : solve_indifference(cond, u, contract, abs_tol);
    if (i > 0) {
      const double prev = bids[static_cast<std::size_t>(i - 1)];
      if (b < prev) {
        if (prev - b > 1e-8) {
          std::ostringstream msg;
          msg << "diagonal bid not monotone at y=" << y << " (" << b << " < "
              << prev << ")";
          throw std::runtime_error(msg.str());
        }
        b = prev;  // solver jitter on a flat stretch
      }
    }
    bids[static_cast<std::size_t>(i)] = b;
  }
  return BidFunction(std::move(ys), std::move(bids),
                     contract.label() + "@" + model.name());
}

double english_strategy(const InfoModel& model, const Utility& u,
                        const SharingContract& contract, int k_active,
                        double y, std::span<const double> q_inferred,
                        double abs_tol) {
  const int n = model.n_buyers();
  if (k_active < 2 || k_active > n) {
    throw std::invalid_argument("active buyer count out of range");
  }
  if (static_cast<int>(q_inferred.size()) != n - k_active) {
    throw std::invalid_argument("inferred signal count inconsistent with drops");
  }
  // Conditioning: k_active copies of the own signal (self plus the still
  // active rivals), then the inferred signals of those who quit, descending.
  // In equilibrium play every inferred signal sits below an active buyer's
  // signal; the clamp keeps the vector ordered when a discretized clock
  // queries a buyer within one step of the last quit.
  std::vector<double> z;
  z.reserve(static_cast<std::size_t>(n - 1));
  for (int i = 0; i < k_active - 1; ++i) z.push_back(y);
  for (auto it = q_inferred.rbegin(); it != q_inferred.rend(); ++it) {
    z.push_back(std::min(*it, y));
  }
  return bid_eng(model, u, contract, y, z, abs_tol);
}

std::vector<double> invert_drop_prices(const InfoModel& model, const Utility& u,
                                       const SharingContract& contract,
                                       std::span<const double> prices,
                                       double abs_tol) {
  const int n = model.n_buyers();
  if (static_cast<int>(prices.size()) > n - 1) {
    throw std::invalid_argument("more quit prices than opponents");
  }
  for (std::size_t k = 0; k + 1 < prices.size(); ++k) {
    if (prices[k] > prices[k + 1]) {
      throw std::invalid_argument("quit prices must be nondecreasing");
    }
  }
  const Interval sig = model.signal_interval();
  std::vector<double> q;
  q.reserve(prices.size());
  for (std::size_t k = 0; k < prices.size(); ++k) {
    const double price = prices[k];
    auto price_gap = [&](double b) {
      std::vector<double> z;
      z.reserve(static_cast<std::size_t>(n - 1));
      for (int i = 0; i < n - 1 - static_cast<int>(k); ++i) z.push_back(b);
      for (auto it = q.rbegin(); it != q.rend(); ++it) {
        z.push_back(std::min(*it, b));
      }
      return price - bid_eng(model, u, contract, b, z, abs_tol);
    };
    q.push_back(solve_monotone_root_bounded(price_gap, sig.lo, sig.hi, abs_tol));
  }
  return q;
}

}  // namespace psauction
