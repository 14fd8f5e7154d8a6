#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <vector>

#include "psauction/auctions.hpp"
#include "psauction/errors.hpp"
#include "psauction/random.hpp"

using namespace psauction;

namespace {

const InfoModel kExample1 = InfoModel::example1();
const Utility kLinear = Utility::linear();

}  // namespace

TEST_CASE("second price outcomes settle at the rival's bid") {
  RandomStream rs(31, 1);
  const std::vector<double> signals{0.8, 0.2};

  SUBCASE("profit-and-loss sharing") {
    const SharingContract c = SharingContract::plsc(0.5);
    const BidFunction beta = equilibrium_strategy_sp(kExample1, kLinear, c);
    const AuctionOutcome o =
        run_second_price(kExample1, beta, c, signals, rs);
    CHECK(o.winner == 0);
    CHECK(o.payment == doctest::Approx(0.2).epsilon(1e-8));
    CHECK(o.sharing == doctest::Approx(0.5 * (o.value - o.payment)));
  }
  SUBCASE("profit-only sharing") {
    const SharingContract c = SharingContract::posc(0.5);
    const BidFunction beta = equilibrium_strategy_sp(kExample1, kLinear, c);
    const AuctionOutcome o =
        run_second_price(kExample1, beta, c, signals, rs);
    // The cached 512-node strategy carries interpolation error below 1e-5.
    CHECK(o.payment == doctest::Approx(0.3 / 2.7).epsilon(1e-5));
    CHECK(o.sharing ==
          doctest::Approx(0.5 * std::max(0.0, o.value - o.payment)));
  }
  SUBCASE("one-time payment has no sharing stage") {
    const SharingContract c = SharingContract::one_time();
    const BidFunction beta = equilibrium_strategy_sp(kExample1, kLinear, c);
    const AuctionOutcome o =
        run_second_price(kExample1, beta, c, signals, rs);
    CHECK(o.sharing == 0.0);
    CHECK(o.payment == doctest::Approx(0.2).epsilon(1e-8));  // E[X | .2, .2]
  }
}

TEST_CASE("stage payments and winner profit add up to the realized value") {
  RandomStream rs(31, 2);
  for (const SharingContract& c :
       {SharingContract::posc(0.8), SharingContract::plsc(0.6),
        SharingContract::one_time()}) {
    const BidFunction beta = equilibrium_strategy_sp(kExample1, kLinear, c, 128);
    for (int i = 0; i < 300; ++i) {
      const AuctionOutcome o = run_second_price(kExample1, beta, c, rs);
      CHECK(std::abs(o.payment + o.sharing + o.profit - o.value) <= 1e-12);
      CHECK(o.profit == o.value - o.payment - o.sharing);
    }
  }
}

TEST_CASE("ties go to the lowest index") {
  RandomStream rs(31, 3);
  const SharingContract c = SharingContract::plsc(0.5);
  const BidFunction beta = equilibrium_strategy_sp(kExample1, kLinear, c);
  const std::vector<double> tied{0.4, 0.4};
  const AuctionOutcome o = run_second_price(kExample1, beta, c, tied, rs);
  CHECK(o.winner == 0);
}

TEST_CASE("direct ascending payment uses the full conditioning") {
  RandomStream rs(31, 4);
  const InfoModel cv = InfoModel::common_value_avg(3);
  const std::vector<double> signals{0.9, 0.6, 0.3};

  const AuctionOutcome plsc = english_payment_direct(
      cv, kLinear, SharingContract::plsc(0.4), signals, rs);
  CHECK(plsc.winner == 0);
  CHECK(plsc.payment == doctest::Approx(0.5).epsilon(1e-9));

  const AuctionOutcome flat = english_payment_direct(
      cv, kLinear, SharingContract::one_time(), signals, rs);
  CHECK(flat.payment == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("two-buyer ascending and sealed payments coincide") {
  RandomStream rs(31, 5);
  const SharingContract c = SharingContract::posc(0.45);
  const BidFunction beta = equilibrium_strategy_sp(kExample1, kLinear, c);
  for (int i = 0; i < 25; ++i) {
    const std::vector<double> signals = kExample1.sample_signals(rs);
    RandomStream ra = rs.derive(2 * static_cast<std::uint64_t>(i));
    RandomStream rb = ra;
    const AuctionOutcome sealed =
        run_second_price(kExample1, beta, c, signals, ra);
    const AuctionOutcome open =
        english_payment_direct(kExample1, kLinear, c, signals, rb);
    CHECK(open.payment == doctest::Approx(sealed.payment).epsilon(1e-6));
  }
}

TEST_CASE("discrete clock reproduces the direct payment") {
  const InfoModel cv = InfoModel::common_value_avg(3);
  RandomStream rs(31, 6);
  const double step = 1e-4;
  for (const SharingContract& c :
       {SharingContract::plsc(0.4), SharingContract::posc(0.3)}) {
    for (int i = 0; i < 25; ++i) {
      const std::vector<double> signals = cv.sample_signals(rs);
      RandomStream ra = rs.derive(100 + static_cast<std::uint64_t>(i));
      RandomStream rb = ra;
      const ClockResult clock = run_english_clock(cv, kLinear, c, signals, step, ra);
      const AuctionOutcome direct =
          english_payment_direct(cv, kLinear, c, signals, rb);
      CHECK(std::abs(clock.outcome.payment - direct.payment) <= step);
      CHECK(clock.outcome.winner == direct.winner);
      REQUIRE(clock.inferred_signals.size() == 2);
    }
  }
}

TEST_CASE("clock with equal signals collapses to a single quit price") {
  const InfoModel cv = InfoModel::common_value_avg(3);
  RandomStream rs(31, 7);
  const std::vector<double> same{0.5, 0.5, 0.5};
  const ClockResult clock = run_english_clock(
      cv, kLinear, SharingContract::plsc(0.4), same, 1e-4, rs);
  REQUIRE(clock.drop_prices.size() == 2);
  CHECK(clock.drop_prices[1] - clock.drop_prices[0] <= 1e-4);
  CHECK(clock.outcome.winner == 0);
  CHECK(clock.outcome.payment == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("two-buyer clock charges the loser's signal under full sharing") {
  RandomStream rs(31, 8);
  for (int i = 0; i < 10; ++i) {
    const std::vector<double> signals = kExample1.sample_signals(rs);
    RandomStream ra = rs.derive(static_cast<std::uint64_t>(i));
    const ClockResult clock = run_english_clock(
        kExample1, kLinear, SharingContract::plsc(0.5), signals, 1e-4, ra);
    CHECK(clock.outcome.payment ==
          doctest::Approx(std::min(signals[0], signals[1])).epsilon(1e-4));
  }
}

TEST_CASE("closed-form stage revenues for the two-buyer bernoulli model") {
  SUBCASE("profit-and-loss sharing is exactly linear in the share") {
    const RevenueBreakdown r = revenue_closed_form_example1(ContractKind::plsc, 0.75);
    CHECK(r.stage1 == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(r.stage2 == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
    CHECK(r.total == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("profit-only sharing at zero is the one-time rule") {
    const RevenueBreakdown r = revenue_closed_form_example1(ContractKind::posc, 0.0);
    CHECK(r.total == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  }
  SUBCASE("profit-only stages at one half, against the antiderivatives") {
    // First integral: 3 - 4 ln 2. Second: 43/3 - 20 ln 2.
    const double stage1 = 3.0 - 4.0 * std::log(2.0);
    const double stage2 = 5.0 / 18.0 - (43.0 / 3.0 - 20.0 * std::log(2.0)) / 6.0;
    const RevenueBreakdown r = revenue_closed_form_example1(ContractKind::posc, 0.5);
    CHECK(r.stage1 == doctest::Approx(stage1).epsilon(1e-10));
    CHECK(r.stage2 == doctest::Approx(stage2).epsilon(1e-10));
    CHECK(r.total == doctest::Approx(0.42679).epsilon(1e-4));
  }
}

TEST_CASE("profit-only stages move against each other in the share") {
  double prev_s1 = 1e18, prev_s2 = -1e18, prev_total = -1e18;
  for (double alpha = 0.0; alpha < 0.95; alpha += 0.1) {
    const RevenueBreakdown r = revenue_closed_form_example1(ContractKind::posc, alpha);
    CHECK(r.stage1 < prev_s1 + 1e-9);
    CHECK(r.stage2 > prev_s2 - 1e-9);
    CHECK(r.total >= prev_total - 1e-9);
    if (alpha > 0.0) CHECK(r.stage2 > 0.0);
    prev_s1 = r.stage1;
    prev_s2 = r.stage2;
    prev_total = r.total;
  }
}

TEST_CASE("profit-and-loss dominates profit-only at every share") {
  for (double alpha = 0.0; alpha < 0.95; alpha += 0.05) {
    const double gap = revenue_closed_form_example1(ContractKind::plsc, alpha).total -
                       revenue_closed_form_example1(ContractKind::posc, alpha).total;
    CHECK(gap >= -1e-10);
    if (alpha >= 0.05) CHECK(gap > 1e-7);
  }
}

TEST_CASE("monte carlo revenue agrees with the closed forms") {
  RandomStream rs(31, 9);
  const std::int64_t n = 200000;
  for (double alpha : {0.25, 0.5}) {
    const RevenueBreakdown plsc_mc = estimate_revenue(
        kExample1, kLinear, SharingContract::plsc(alpha),
        AuctionFormat::second_price, n, rs);
    const RevenueBreakdown plsc_cf =
        revenue_closed_form_example1(ContractKind::plsc, alpha);
    CHECK(std::abs(plsc_mc.total - plsc_cf.total) <= 3.0 * plsc_mc.stderr_total);

    const RevenueBreakdown posc_mc = estimate_revenue(
        kExample1, kLinear, SharingContract::posc(alpha),
        AuctionFormat::second_price, n, rs);
    const RevenueBreakdown posc_cf =
        revenue_closed_form_example1(ContractKind::posc, alpha);
    CHECK(std::abs(posc_mc.total - posc_cf.total) <= 3.0 * posc_mc.stderr_total);
    CHECK(posc_mc.n_samples == n);
    CHECK(posc_mc.total == doctest::Approx(posc_mc.stage1 + posc_mc.stage2));
  }
}

TEST_CASE("ascending-format estimate matches its analytic expectation") {
  // Pure common value with three buyers under full profit-and-loss sharing:
  // the winner pays (2 Z1 + Z2) / 3, so the expected auction stage revenue is
  // (2 E[mid] + E[min]) / 3 = 5/12 and the sharing stage adds
  // alpha (E[X] - 5/12) = alpha / 12.
  RandomStream rs(31, 10);
  const InfoModel cv = InfoModel::common_value_avg(3);
  const double alpha = 0.4;
  const RevenueBreakdown r = estimate_revenue(
      cv, kLinear, SharingContract::plsc(alpha), AuctionFormat::english,
      100000, rs);
  CHECK(std::abs(r.stage1 - 5.0 / 12.0) <= 4.0 * r.stderr_total);
  CHECK(std::abs(r.total - (5.0 / 12.0 + alpha / 12.0)) <=
        3.0 * r.stderr_total);
}

TEST_CASE("paired comparison ranks the contracts with common random numbers") {
  RandomStream rs(31, 11);
  const std::vector<SharingContract> contracts{
      SharingContract::one_time(), SharingContract::posc(0.5),
      SharingContract::plsc(0.5), SharingContract::posc(0.3),
      SharingContract::plsc(0.2), SharingContract::plsc(0.4)};
  const PairedComparison cmp = compare_contracts_paired(
      kExample1, kLinear, contracts, AuctionFormat::second_price, 100000, rs);
  REQUIRE(cmp.per_contract.size() == 6);

  auto diff = [&](std::size_t i, std::size_t j) {
    for (const PairedDiff& d : cmp.diffs) {
      if (d.first == i && d.second == j) return d;
    }
    REQUIRE(false);
    return PairedDiff{};
  };
  // Full sharing beats profit-only sharing at one half: closed-form gap .0176.
  CHECK(diff(1, 2).mean_diff > 0.0);
  CHECK(diff(1, 2).t_stat > 3.0);
  // A profit-only contract earns at least the one-time rule.
  CHECK(diff(0, 1).mean_diff >= -3.0 * diff(0, 1).stderr_);
  CHECK(diff(0, 3).mean_diff >= -3.0 * diff(0, 3).stderr_);
  // A larger share fraction wins within the same family.
  CHECK(diff(4, 5).mean_diff > 0.0);
  CHECK(diff(4, 5).t_stat > 3.0);
}

TEST_CASE("format comparison is balanced for the common value model") {
  RandomStream rs(31, 12);
  const InfoModel cv = InfoModel::common_value_avg(3);
  const PairedEstimate est = compare_formats_paired(
      cv, kLinear, SharingContract::plsc(0.25), 50000, rs);
  // Independent signals: the two formats earn the same revenue on average.
  CHECK(est.mean_diff >= -3.0 * est.stderr_);
  CHECK(est.mean_diff <= 3.0 * est.stderr_);
  CHECK(est.n_samples == 50000);
}

TEST_CASE("input validation") {
  RandomStream rs(31, 13);
  CHECK_THROWS_AS(revenue_closed_form_example1(ContractKind::general, 0.5),
                  std::invalid_argument);
  CHECK_THROWS_AS(revenue_closed_form_example1(ContractKind::plsc, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(estimate_revenue(kExample1, kLinear,
                                   SharingContract::plsc(0.5),
                                   AuctionFormat::second_price, 0, rs),
                  std::invalid_argument);
  const std::vector<SharingContract> single{SharingContract::plsc(0.5)};
  CHECK_THROWS_AS(compare_contracts_paired(kExample1, kLinear, single,
                                           AuctionFormat::second_price, 10, rs),
                  std::invalid_argument);
  const std::vector<double> signals{0.5, 0.4};
  CHECK_THROWS_AS(run_english_clock(kExample1, kLinear,
                                    SharingContract::plsc(0.5), signals, 0.0,
                                    rs),
                  std::invalid_argument);
}
