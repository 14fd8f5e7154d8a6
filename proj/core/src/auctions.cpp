#include "psauction/auctions.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numeric>
#include <thread>

#include "psauction/errors.hpp"
#include "psauction/numerics.hpp"

namespace psauction {

namespace {

std::size_t argmax_signal(std::span<const double> signals) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < signals.size(); ++i) {
    if (signals[i] > signals[best]) best = i;  // ties stay with the lowest index
  }
  return best;
}

// Signals reordered so the winner's own signal comes first, as the value
// samplers expect.
std::vector<double> winner_first(std::span<const double> signals,
                                 std::size_t winner) {
  std::vector<double> perm;
  perm.reserve(signals.size());
  perm.push_back(signals[winner]);
  for (std::size_t i = 0; i < signals.size(); ++i) {
    if (i != winner) perm.push_back(signals[i]);
  }
  return perm;
}

AuctionOutcome settle(const InfoModel& model, const SharingContract& contract,
                      std::span<const double> signals, std::size_t winner,
                      double payment, RandomStream& rs) {
  AuctionOutcome out;
  out.winner = static_cast<int>(winner);
  out.payment = payment;
  const std::vector<double> perm = winner_first(signals, winner);
  out.value = model.sample_value(perm, rs);
  out.sharing = contract.payment(out.value - payment);
  out.profit = out.value - payment - out.sharing;
  return out;
}

}  // namespace

AuctionOutcome run_second_price(const InfoModel& model,
                                const BidFunction& strategy,
                                const SharingContract& contract,
                                std::span<const double> signals,
                                RandomStream& rs) {
  const std::size_t winner = argmax_signal(signals);
  double z1 = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < signals.size(); ++i) {
    if (i != winner) z1 = std::max(z1, signals[i]);
  }
  return settle(model, contract, signals, winner, strategy(z1), rs);
}

AuctionOutcome run_second_price(const InfoModel& model,
                                const BidFunction& strategy,
                                const SharingContract& contract,
                                RandomStream& rs) {
  const std::vector<double> signals = model.sample_signals(rs);
  return run_second_price(model, strategy, contract, signals, rs);
}

AuctionOutcome english_payment_direct(const InfoModel& model, const Utility& u,
                                      const SharingContract& contract,
                                      std::span<const double> signals,
                                      RandomStream& rs) {
  const std::size_t winner = argmax_signal(signals);
  const std::vector<double> z = order_stats_desc(signals, winner);
  const double payment = bid_eng(model, u, contract, z[0], z);
  return settle(model, contract, signals, winner, payment, rs);
}

ClockResult run_english_clock(const InfoModel& model, const Utility& u,
                              const SharingContract& contract,
                              std::span<const double> signals,
                              double price_step, RandomStream& rs) {
  if (!(price_step > 0.0)) throw std::invalid_argument("price step must be positive");
  ClockResult res;

  std::vector<std::size_t> active(signals.size());
  std::iota(active.begin(), active.end(), std::size_t{0});
  std::vector<double> inferred;  // chronological, lowest quitter first

  auto thresholds = [&]() {
    std::vector<double> t(active.size());
    for (std::size_t i = 0; i < active.size(); ++i) {
      t[i] = english_strategy(model, u, contract,
                              static_cast<int>(active.size()),
                              signals[active[i]], inferred);
    }
    return t;
  };

  const double price_ceiling =
      model.value_interval().hi + std::max(1.0, model.value_interval().width());
  std::vector<double> t = thresholds();
  double price = *std::min_element(t.begin(), t.end());
  price = std::floor(price / price_step) * price_step;
  double last_drop = -std::numeric_limits<double>::infinity();

  while (active.size() > 1) {
    // Next quitter: lowest current threshold; on a tie the higher index
    // quits first so the lowest index ends up winning.
    std::size_t who = 0;
    for (std::size_t i = 1; i < active.size(); ++i) {
      if (t[i] < t[who] || (t[i] == t[who] && active[i] > active[who])) who = i;
    }
    // Advance the clock until it passes that threshold.
    while (price < t[who]) {
      price += price_step;
      ++res.ticks;
      if (price > price_ceiling) {
        throw NonTermination("clock price escaped the value range");
      }
    }
    // The quit is detected at the tick but registered at the exact
    // threshold, which is where a continuously rising price would stop.
    const double drop_price = std::max(t[who], last_drop);
    last_drop = drop_price;
    res.drop_prices.push_back(drop_price);
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(who));
    if (active.size() < 2) break;

    std::vector<double> prices_so_far = res.drop_prices;
    inferred = invert_drop_prices(model, u, contract, prices_so_far);
    t = thresholds();
  }

  res.inferred_signals =
      invert_drop_prices(model, u, contract, res.drop_prices);
  const std::size_t winner = active.front();
  res.outcome = settle(model, contract, signals, winner,
                       res.drop_prices.back(), rs);
  return res;
}

namespace {

struct Accumulator {
  double s1 = 0.0, s2 = 0.0, tot = 0.0, tot2 = 0.0;
  std::int64_t n = 0;

  void add(const AuctionOutcome& o) {
    s1 += o.payment;
    s2 += o.sharing;
    const double t = o.payment + o.sharing;
    tot += t;
    tot2 += t * t;
    ++n;
  }
  void merge(const Accumulator& other) {
    s1 += other.s1;
    s2 += other.s2;
    tot += other.tot;
    tot2 += other.tot2;
    n += other.n;
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

// Runs `body(block_index, count, block_stream)` over ceil(n / block) blocks,
// each with its own derived substream; partial results merge in block order
// so the estimate does not depend on the thread count.
template <typename Body>
std::vector<Accumulator> run_blocks(std::int64_t n, const RandomStream& base,
                                    Body body) {
  const std::int64_t blocks = (n + kBlockSize - 1) / kBlockSize;
  std::vector<Accumulator> partial(static_cast<std::size_t>(blocks));
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned workers =
      static_cast<unsigned>(std::min<std::int64_t>(hw, blocks));
  std::vector<std::future<void>> futures;
  futures.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    futures.push_back(std::async(std::launch::async, [&, w]() {
      for (std::int64_t blk = w; blk < blocks; blk += workers) {
        const std::int64_t count =
            std::min<std::int64_t>(kBlockSize, n - blk * kBlockSize);
        RandomStream rs = base.derive(static_cast<std::uint64_t>(blk));
        body(partial[static_cast<std::size_t>(blk)], count, rs);
      }
    }));
  }
  for (auto& f : futures) f.get();
  return partial;
}

Accumulator reduce_blocks(const std::vector<Accumulator>& partial) {
  Accumulator acc;
  for (const Accumulator& p : partial) acc.merge(p);
  return acc;
}

}  // namespace

RevenueBreakdown estimate_revenue(const InfoModel& model, const Utility& u,
                                  const SharingContract& contract,
                                  AuctionFormat format, std::int64_t n,
                                  RandomStream& rs) {
  if (n < 1) throw std::invalid_argument("need at least one sample");
  // Advance the caller's stream so repeated calls see fresh substreams.
  const RandomStream base = rs.derive(rs.next_u64());

  std::vector<Accumulator> partial;
  if (format == AuctionFormat::second_price) {
    const BidFunction strategy = equilibrium_strategy_sp(model, u, contract);
    partial = run_blocks(n, base, [&](Accumulator& acc, std::int64_t count,
                                      RandomStream& blk) {
      for (std::int64_t i = 0; i < count; ++i) {
        acc.add(run_second_price(model, strategy, contract, blk));
      }
    });
  } else {
    partial = run_blocks(n, base, [&](Accumulator& acc, std::int64_t count,
                                      RandomStream& blk) {
      std::vector<double> signals(static_cast<std::size_t>(model.n_buyers()));
      for (std::int64_t i = 0; i < count; ++i) {
        model.sample_signals(blk, signals);
        acc.add(english_payment_direct(model, u, contract, signals, blk));
      }
    });
  }
  return reduce_blocks(partial).finish();
}

RevenueBreakdown revenue_closed_form_example1(ContractKind kind, double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("share fraction must lie in [0, 1)");
  }
  RevenueBreakdown r;
  switch (kind) {
    case ContractKind::one_time:
      r.stage1 = 1.0 / 3.0;
      r.stage2 = 0.0;
      break;
    case ContractKind::plsc:
      r.stage1 = 1.0 / 3.0;
      r.stage2 = 2.0 * alpha / 9.0;
      break;
    case ContractKind::posc: {
      // Expected second-highest diagonal bid against the min-signal density
      // 2(1 - t), and the expected sharing-stage take of the winner.
      const auto auction_integrand = [alpha](double t) {
        return t * (1.0 - t) / (1.0 - alpha * t);
      };
      const auto sharing_integrand = [alpha](double t) {
        return t * (1.0 - t) * (1.0 + 2.0 * t) / (1.0 - alpha * t);
      };
      const double i1 = integrate_adaptive(auction_integrand, 0.0, 1.0, 1e-13);
      const double i2 = integrate_adaptive(sharing_integrand, 0.0, 1.0, 1e-13);
      r.stage1 = 2.0 * (1.0 - alpha) * i1;
      r.stage2 = 5.0 * alpha / 9.0 - (2.0 * alpha * (1.0 - alpha) / 3.0) * i2;
      break;
    }
    case ContractKind::general:
      throw std::invalid_argument("no closed form for general contracts");
  }
  r.total = r.stage1 + r.stage2;
  return r;
}

PairedComparison compare_contracts_paired(
    const InfoModel& model, const Utility& u,
    std::span<const SharingContract> contracts, AuctionFormat format,
    std::int64_t n, RandomStream& rs) {
  if (contracts.size() < 2) {
    throw std::invalid_argument("need at least two contracts to compare");
  }
  if (n < 1) throw std::invalid_argument("need at least one sample");

  std::vector<BidFunction> strategies;
  if (format == AuctionFormat::second_price) {
    strategies.reserve(contracts.size());
    for (const SharingContract& c : contracts) {
      strategies.push_back(equilibrium_strategy_sp(model, u, c));
    }
  }

  const std::size_t m = contracts.size();
  struct PairAcc {
    std::vector<Accumulator> per_contract;
    std::vector<double> dsum, dsum2;  // pairwise (j > i) difference moments
  };
  const std::size_t n_pairs = m * (m - 1) / 2;

  const RandomStream base = rs.derive(rs.next_u64());
  const std::int64_t blocks = (n + kBlockSize - 1) / kBlockSize;
  std::vector<PairAcc> partial(static_cast<std::size_t>(blocks));
  for (auto& p : partial) {
    p.per_contract.resize(m);
    p.dsum.assign(n_pairs, 0.0);
    p.dsum2.assign(n_pairs, 0.0);
  }

  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned workers =
      static_cast<unsigned>(std::min<std::int64_t>(hw, blocks));
  std::vector<std::future<void>> futures;
  for (unsigned w = 0; w < workers; ++w) {
    futures.push_back(std::async(std::launch::async, [&, w]() {
      std::vector<double> totals(m);
      std::vector<double> signals(static_cast<std::size_t>(model.n_buyers()));
      for (std::int64_t blk = w; blk < blocks; blk += workers) {
        const std::int64_t count =
            std::min<std::int64_t>(kBlockSize, n - blk * kBlockSize);
        RandomStream blk_rs = base.derive(static_cast<std::uint64_t>(blk));
        PairAcc& acc = partial[static_cast<std::size_t>(blk)];
        for (std::int64_t s = 0; s < count; ++s) {
          model.sample_signals(blk_rs, signals);
          const std::size_t winner = argmax_signal(signals);
          const std::vector<double> perm = winner_first(signals, winner);
          // One value draw shared by every contract.
          const double value = model.sample_value(perm, blk_rs);
          const std::vector<double> z = order_stats_desc(signals, winner);
          for (std::size_t c = 0; c < m; ++c) {
            const double payment =
                format == AuctionFormat::second_price
                    ? strategies[c](z[0])
                    : bid_eng(model, u, contracts[c], z[0], z);
            AuctionOutcome o;
            o.winner = static_cast<int>(winner);
            o.payment = payment;
            o.value = value;
            o.sharing = contracts[c].payment(value - payment);
            o.profit = value - payment - o.sharing;
            acc.per_contract[c].add(o);
            totals[c] = payment + o.sharing;
          }
          std::size_t pair = 0;
          for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = i + 1; j < m; ++j, ++pair) {
              const double d = totals[j] - totals[i];
              acc.dsum[pair] += d;
              acc.dsum2[pair] += d * d;
            }
          }
        }
      }
    }));
  }
  for (auto& f : futures) f.get();

  PairedComparison result;
  result.n_samples = n;
  std::vector<Accumulator> merged(m);
  std::vector<double> dsum(n_pairs, 0.0), dsum2(n_pairs, 0.0);
  for (const PairAcc& p : partial) {
    for (std::size_t c = 0; c < m; ++c) merged[c].merge(p.per_contract[c]);
    for (std::size_t k = 0; k < n_pairs; ++k) {
      dsum[k] += p.dsum[k];
      dsum2[k] += p.dsum2[k];
    }
  }
  for (std::size_t c = 0; c < m; ++c) {
    result.per_contract.push_back(merged[c].finish());
  }
  const double dn = static_cast<double>(n);
  std::size_t pair = 0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j, ++pair) {
      PairedDiff d;
      d.first = i;
      d.second = j;
      d.mean_diff = dsum[pair] / dn;
      const double var = std::max(0.0, dsum2[pair] / dn - d.mean_diff * d.mean_diff);
      d.stderr_ = std::sqrt(var / dn);
      d.t_stat = d.stderr_ > 0.0 ? d.mean_diff / d.stderr_
                                 : (d.mean_diff == 0.0 ? 0.0 : std::copysign(1e9, d.mean_diff));
      result.diffs.push_back(d);
    }
  }
  return result;
}

PairedEstimate compare_formats_paired(const InfoModel& model, const Utility& u,
                                      const SharingContract& contract,
                                      std::int64_t n, RandomStream& rs) {
  if (n < 1) throw std::invalid_argument("need at least one sample");
  const BidFunction strategy = equilibrium_strategy_sp(model, u, contract);
  const RandomStream base = rs.derive(rs.next_u64());

  struct FmtAcc {
    double a = 0.0, b = 0.0, d = 0.0, d2 = 0.0;
  };
  const std::int64_t blocks = (n + kBlockSize - 1) / kBlockSize;
  std::vector<FmtAcc> partial(static_cast<std::size_t>(blocks));
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
        FmtAcc& acc = partial[static_cast<std::size_t>(blk)];
        for (std::int64_t s = 0; s < count; ++s) {
          model.sample_signals(blk_rs, signals);
          const std::size_t winner = argmax_signal(signals);
          const std::vector<double> perm = winner_first(signals, winner);
          const double value = model.sample_value(perm, blk_rs);
          const std::vector<double> z = order_stats_desc(signals, winner);
          const double pay_sp = strategy(z[0]);
          const double pay_eng = bid_eng(model, u, contract, z[0], z);
          const double tot_sp = pay_sp + contract.payment(value - pay_sp);
          const double tot_eng = pay_eng + contract.payment(value - pay_eng);
          acc.a += tot_sp;
          acc.b += tot_eng;
          const double d = tot_eng - tot_sp;
          acc.d += d;
          acc.d2 += d * d;
        }
      }
    }));
  }
  for (auto& f : futures) f.get();

  FmtAcc total;
  for (const FmtAcc& p : partial) {
    total.a += p.a;
    total.b += p.b;
    total.d += p.d;
    total.d2 += p.d2;
  }
  PairedEstimate est;
  est.n_samples = n;
  const double dn = static_cast<double>(n);
  est.mean_a = total.a / dn;
  est.mean_b = total.b / dn;
  est.mean_diff = total.d / dn;
  const double var = std::max(0.0, total.d2 / dn - est.mean_diff * est.mean_diff);
  est.stderr_ = std::sqrt(var / dn);
  est.t_stat = est.stderr_ > 0.0
                   ? est.mean_diff / est.stderr_
                   : (est.mean_diff == 0.0 ? 0.0 : std::copysign(1e9, est.mean_diff));
  return est;
}

}  // namespace psauction
