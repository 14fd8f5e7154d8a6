#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "psauction/contracts.hpp"
#include "psauction/equilibrium.hpp"
#include "psauction/info_model.hpp"
#include "psauction/random.hpp"
#include "psauction/utility.hpp"

namespace psauction {

enum class AuctionFormat { second_price, english };

// One two-stage outcome: auction-stage payment (may be negative under
// profit-only sharing), realized value, sharing-stage payment, and the
// winner's total profit. Conservation: payment + sharing + profit == value.
struct AuctionOutcome {
  int winner = 0;
  double payment = 0.0;
  double value = 0.0;
  double sharing = 0.0;
  double profit = 0.0;
};

struct RevenueBreakdown {
  double stage1 = 0.0;
  double stage2 = 0.0;
  double total = 0.0;
  double stderr_total = 0.0;
  std::int64_t n_samples = 0;
};

// Sealed-bid second price auction at the cached symmetric strategy: the
// highest signal wins (ties to the lowest index), pays the second-highest
// bid, and settles the sharing stage on the realized value.
AuctionOutcome run_second_price(const InfoModel& model,
                                const BidFunction& strategy,
                                const SharingContract& contract,
                                std::span<const double> signals,
                                RandomStream& rs);
AuctionOutcome run_second_price(const InfoModel& model,
                                const BidFunction& strategy,
                                const SharingContract& contract,
                                RandomStream& rs);

// Ascending-auction payment from the drop-price recursion evaluated directly:
// the winner pays the full-conditioning indifference bid of the second
// highest signal given all loser signals.
AuctionOutcome english_payment_direct(const InfoModel& model, const Utility& u,
                                      const SharingContract& contract,
                                      std::span<const double> signals,
                                      RandomStream& rs);

struct ClockResult {
  AuctionOutcome outcome;
  std::vector<double> drop_prices;
  std::vector<double> inferred_signals;
  std::int64_t ticks = 0;
};

// Discretized ascending clock: the price rises in steps, buyers quit when it
// passes their current drop threshold, and each quit price is inverted into
// an inferred signal before the remaining thresholds are recomputed. Exists
// to validate the direct payment rule; throws NonTermination if the price
// escapes the value range.
ClockResult run_english_clock(const InfoModel& model, const Utility& u,
                              const SharingContract& contract,
                              std::span<const double> signals,
                              double price_step, RandomStream& rs);

// Monte Carlo revenue estimate over n outcomes. Sampling is blocked with one
// derived substream per block, so results do not depend on scheduling.
RevenueBreakdown estimate_revenue(const InfoModel& model, const Utility& u,
                                  const SharingContract& contract,
                                  AuctionFormat format, std::int64_t n,
                                  RandomStream& rs);

// Exact stage revenues for the two-buyer Bernoulli-value model: the
// profit-and-loss contract has stage revenues (1/3, 2 alpha / 9); the
// profit-only contract is evaluated by quadrature of the stage integrals.
RevenueBreakdown revenue_closed_form_example1(ContractKind kind, double alpha);

struct PairedDiff {
  std::size_t first = 0;
  std::size_t second = 0;
  double mean_diff = 0.0;   // total revenue of `second` minus `first`
  double stderr_ = 0.0;
  double t_stat = 0.0;
};

struct PairedComparison {
  std::vector<RevenueBreakdown> per_contract;
  std::vector<PairedDiff> diffs;
  std::int64_t n_samples = 0;
};

// Runs every contract on identical signal and value draws (common random
// numbers) and reports each pairwise total-revenue difference with its
// paired standard error.
PairedComparison compare_contracts_paired(
    const InfoModel& model, const Utility& u,
    std::span<const SharingContract> contracts, AuctionFormat format,
    std::int64_t n, RandomStream& rs);

struct PairedEstimate {
  double mean_a = 0.0;
  double mean_b = 0.0;
  double mean_diff = 0.0;  // b minus a
  double stderr_ = 0.0;
  double t_stat = 0.0;
  std::int64_t n_samples = 0;
};

// Paired difference of total revenue, ascending auction minus second price,
// for one contract on identical draws.
PairedEstimate compare_formats_paired(const InfoModel& model, const Utility& u,
                                      const SharingContract& contract,
                                      std::int64_t n, RandomStream& rs);

}  // namespace psauction
