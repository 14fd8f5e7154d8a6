#pragma once

#include <span>
#include <string>
#include <vector>

#include "psauction/contracts.hpp"
#include "psauction/info_model.hpp"
#include "psauction/numerics.hpp"
#include "psauction/utility.hpp"

namespace psauction {

// x-locations where x -> u(x - b - phi(x - b)) changes slope, for exact
// piecewise quadrature inside the conditional-expectation oracles.
std::vector<double> utility_profit_kinks(const Utility& u,
                                         const SharingContract& contract,
                                         double bid);

// Auction-stage payment at which the winner's conditional expected utility of
// the two-stage outcome is zero, conditioned on own signal y1 and highest
// opponent signal z1. May be negative for profit-only sharing with a large
// share fraction.
double bid_posc_sp(const InfoModel& model, const Utility& u, double alpha,
                   double y1, double z1, double abs_tol = 1e-10);
// The profit-and-loss analogue; always positive.
double bid_plsc_sp(const InfoModel& model, const Utility& u, double alpha,
                   double y1, double z1, double abs_tol = 1e-10);
// Indifference bid for an arbitrary sharing rule. General piecewise-linear
// contracts are admissibility-checked first (InadmissibleContract on failure);
// posc/plsc/one_time kinds dispatch to the same machinery unchecked.
double bid_general_sp(const InfoModel& model, const Utility& u,
                      const SharingContract& contract, double y1, double z1,
                      double abs_tol = 1e-10);

// Full-conditioning indifference bid given all opponent signals (descending),
// as used by ascending-auction strategies.
double bid_eng(const InfoModel& model, const Utility& u,
               const SharingContract& contract, double y1,
               std::span<const double> z_desc, double abs_tol = 1e-10);

// Cached symmetric equilibrium strategy y -> beta(y) on a signal grid, with
// monotone interpolation between nodes.
class BidFunction {
 public:
  BidFunction(std::vector<double> signals, std::vector<double> bids,
              std::string label);

  double operator()(double y) const { return grid_(y); }
  std::span<const double> signals() const { return grid_.xs(); }
  std::span<const double> bids() const { return grid_.ys(); }
  const std::string& label() const { return label_; }

 private:
  MonotoneGrid grid_;
  std::string label_;
};

// Tabulates the diagonal bid beta(y) = bid(y, y) for the second price
// auction with the given sharing rule.
BidFunction equilibrium_strategy_sp(const InfoModel& model, const Utility& u,
                                    const SharingContract& contract,
                                    int grid_nodes = 512,
                                    double abs_tol = 1e-10);

// Price at which a buyer with signal y quits an ascending auction while
// k_active buyers remain, given the signals already inferred from earlier
// quits (chronological order, lowest first).
double english_strategy(const InfoModel& model, const Utility& u,
                        const SharingContract& contract, int k_active,
                        double y, std::span<const double> q_inferred,
                        double abs_tol = 1e-10);

// Recovers the dropped buyers' signals from the observed quit prices by
// inverting the drop-price recursion, one monotone root-find per price.
// Throws BracketFailure if a price is inconsistent with the signal range.
std::vector<double> invert_drop_prices(const InfoModel& model, const Utility& u,
                                       const SharingContract& contract,
                                       std::span<const double> prices,
                                       double abs_tol = 1e-10);

}  // namespace psauction
