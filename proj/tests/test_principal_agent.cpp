#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <vector>

#include "psauction/errors.hpp"
#include "psauction/numerics.hpp"
#include "psauction/principal_agent.hpp"
#include "psauction/random.hpp"

using namespace psauction;

namespace {

const InfoModel kModel = InfoModel::example2_pa();
const Utility kLinear = Utility::linear();

}  // namespace

TEST_CASE("optimal effort under full sharing follows the marginal condition") {
  const CostFunction c1 = CostFunction::quadratic(1.0);
  CHECK(optimal_effort_plsc(c1, 0.0) == doctest::Approx(0.5));
  CHECK(optimal_effort_plsc(c1, 0.5) == doctest::Approx(0.25));
  const CostFunction c2 = CostFunction::quadratic(2.0);
  CHECK(optimal_effort_plsc(c2, 0.999) == doctest::Approx(0.00025).epsilon(1e-6));
  // Default interval widens for cheap effort so the optimum stays interior.
  const CostFunction cheap = CostFunction::quadratic(0.2);
  CHECK(cheap.effort_hi() == doctest::Approx(5.0));
  CHECK(optimal_effort_plsc(cheap, 0.0) == doctest::Approx(2.5));
}

TEST_CASE("effort gain is the envelope value of the incentive problem") {
  const CostFunction c1 = CostFunction::quadratic(1.0);
  CHECK(effort_gain(c1, 0.0) == doctest::Approx(0.25));
  CHECK(effort_gain(c1, 0.5) == doctest::Approx(0.0625));
  double prev_e = 1e18, prev_k = 1e18;
  for (double a = 0.0; a <= 0.951; a += 0.05) {
    const double e = optimal_effort_plsc(c1, a);
    const double k = effort_gain(c1, a);
    CHECK(e <= prev_e + 1e-12);
    CHECK(k <= prev_k + 1e-12);
    CHECK(k >= 0.0);
    prev_e = e;
    prev_k = k;
  }
}

TEST_CASE("table costs pick the best node") {
  // Piecewise-linear convex cost with slopes 0.2 then 1.5.
  const CostFunction table =
      CostFunction::custom({0.0, 0.5, 1.0}, {0.0, 0.1, 0.85});
  // At alpha = 0: marginal benefit 1 lies between the slopes, stop at 0.5.
  CHECK(optimal_effort_plsc(table, 0.0) == doctest::Approx(0.5));
  // At alpha = 0.9: benefit 0.1 below the first slope, do nothing.
  CHECK(optimal_effort_plsc(table, 0.9) == doctest::Approx(0.0));
  CHECK(effort_gain(table, 0.9) == doctest::Approx(0.0));
}

TEST_CASE("cost construction validates convexity and the marginal range") {
  CHECK_THROWS_AS(CostFunction::quadratic(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(CostFunction::quadratic(0.1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(CostFunction::custom({0.0, 1.0, 2.0}, {0.0, 1.0, 1.5}),
                  std::invalid_argument);  // concave
  CHECK_THROWS_AS(CostFunction::custom({0.0}, {0.0}), std::invalid_argument);
}

TEST_CASE("hidden-effort full-sharing bid adds the effort gain") {
  const CostFunction c1 = CostFunction::quadratic(1.0);
  CHECK(bid_plsc_pa(kModel, kLinear, c1, 0.5, 0.4, 0.4) ==
        doctest::Approx(0.525).epsilon(1e-9));
  CHECK(bid_plsc_pa(kModel, kLinear, c1, 0.0, 0.6, 0.2) ==
        doctest::Approx(0.65).epsilon(1e-9));
  for (double g : {0.5, 2.0}) {
    const CostFunction c = CostFunction::quadratic(g);
    for (double a : {0.0, 0.4}) {
      for (double y : {0.25, 0.75}) {
        CHECK(bid_plsc_pa(kModel, kLinear, c, a, y, y) ==
              doctest::Approx(y + (1.0 - a) / (4.0 * g)).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("a cost with unit marginal slope shuts the effort channel") {
  // c(e) = e makes (1-alpha) e - c(e) maximal at zero effort with zero gain,
  // so the bid collapses to the plain full-sharing bid.
  const CostFunction unit = CostFunction::custom({0.0, 2.0}, {0.0, 2.0});
  CHECK(effort_gain(unit, 0.3) == doctest::Approx(0.0));
  CHECK(bid_plsc_pa(kModel, kLinear, unit, 0.3, 0.5, 0.5) ==
        doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("closed-form hidden-effort revenue and its peak") {
  CHECK(revenue_plsc_pa_closed_form_example2(1.0, 0.0).total ==
        doctest::Approx(1.0 / 3.0 + 0.25).epsilon(1e-12));
  CHECK(revenue_plsc_pa_closed_form_example2(1.0, 1.0 / 3.0).total ==
        doctest::Approx(11.0 / 18.0).epsilon(1e-12));
  const RevenueBreakdown r = revenue_plsc_pa_closed_form_example2(2.0, 0.4);
  CHECK(r.stage1 == doctest::Approx(1.0 / 3.0 + 0.6 / 8.0).epsilon(1e-12));
  CHECK(r.total == doctest::Approx(r.stage1 + r.stage2).epsilon(1e-12));

  double best_a = 0.0, best_r = -1.0;
  for (double a = 0.0; a < 0.995; a += 0.01) {
    const double rr = revenue_plsc_pa_closed_form_example2(1.0, a).total;
    if (rr > best_r) {
      best_r = rr;
      best_a = a;
    }
  }
  CHECK(std::abs(best_a - 1.0 / 3.0) <= 0.01);
}

TEST_CASE("sampled hidden-effort revenue matches the closed form") {
  RandomStream rs(41, 1);
  for (double g : {0.5, 1.0, 2.0}) {
    const CostFunction cost = CostFunction::quadratic(g);
    for (double a : {0.0, 0.3, 0.7}) {
      const RevenueBreakdown mc =
          revenue_plsc_pa(kModel, kLinear, cost, a, 150000, rs);
      const RevenueBreakdown cf = revenue_plsc_pa_closed_form_example2(g, a);
      CHECK(std::abs(mc.total - cf.total) <= 3.0 * mc.stderr_total);
    }
  }
}

TEST_CASE("forward difference of the revenue curve at zero share") {
  auto closed = [](double a) {
    return revenue_plsc_pa_closed_form_example2(1.0, a).total;
  };
  CHECK(derivative_at_zero(closed, 1e-3) ==
        doctest::Approx(1.0 / 6.0).epsilon(1e-3));
  auto parabola = [](double a) { return 1.0 + 4.0 * a - 2.0 * a * a; };
  CHECK(derivative_at_zero(parabola, 1e-8) == doctest::Approx(4.0).epsilon(1e-6));
  CHECK_THROWS_AS(derivative_at_zero(parabola, 0.0), std::invalid_argument);

  RandomStream rs(41, 2);
  const CostFunction cost = CostFunction::quadratic(1.0);
  const PairedEstimate mc = pa_paired_diff(
      kModel, make_plsc_pa_mechanism(kModel, kLinear, cost, 0.0),
      make_plsc_pa_mechanism(kModel, kLinear, cost, 0.05), 200000, rs);
  CHECK(mc.t_stat > 3.0);
  CHECK(mc.mean_diff / 0.05 == doctest::Approx(1.0 / 6.0).epsilon(0.25));
}

TEST_CASE("value-contingent effort policy hits all three branches") {
  CHECK(optimal_effort_posc_expost(1.0, 0.5, 0.0) == 0.25);
  CHECK(optimal_effort_posc_expost(1.0, 0.5, -0.3) == doctest::Approx(0.3));
  CHECK(optimal_effort_posc_expost(1.0, 0.5, -0.8) == 0.5);
  // Continuity at the branch boundaries.
  CHECK(optimal_effort_posc_expost(1.0, 0.5, -0.5) ==
        doctest::Approx(optimal_effort_posc_expost(1.0, 0.5, -0.5 - 1e-12)));
  CHECK(optimal_effort_posc_expost(1.0, 0.5, -0.25) ==
        doctest::Approx(optimal_effort_posc_expost(1.0, 0.5, -0.25 + 1e-12)));
}

TEST_CASE("value-contingent effort dominates the share-only effort") {
  for (double g : {0.25, 1.0, 4.0}) {
    const CostFunction cost = CostFunction::quadratic(g);
    for (double a = 0.0; a <= 0.91; a += 0.1) {
      const double baseline = optimal_effort_plsc(cost, a);
      for (double w = -2.0; w <= 2.0; w += 0.05) {
        CHECK(optimal_effort_posc_expost(g, a, w) >= baseline - 1e-12);
      }
    }
  }
}

TEST_CASE("maximum winner profit is increasing and beats doing nothing") {
  CHECK(max_profit_posc_pa(1.0, 0.5, 0.0) == doctest::Approx(0.0625));
  CHECK(max_profit_posc_pa(1.0, 0.5, -0.3) == doctest::Approx(-0.09));
  for (double g : {0.5, 1.0}) {
    for (double a : {0.0, 0.3, 0.8}) {
      double prev = -1e18;
      for (double w = -2.0; w <= 2.0; w += 0.02) {
        const double pi = max_profit_posc_pa(g, a, w);
        CHECK(pi > prev);
        CHECK(pi >= w - a * std::max(0.0, w) - 1e-12);
        prev = pi;
      }
    }
  }
}

TEST_CASE("profit-only hidden-effort bid") {
  SUBCASE("coincides with the full-sharing bid when nothing is shared") {
    const CostFunction c1 = CostFunction::quadratic(1.0);
    for (double y : {0.2, 0.5, 0.9}) {
      CHECK(bid_posc_pa(kModel, 1.0, 0.0, y, y) ==
            doctest::Approx(bid_plsc_pa(kModel, kLinear, c1, 0.0, y, y))
                .epsilon(1e-8));
    }
  }
  SUBCASE("regression fixture at gamma 1, share one half") {
    const double b = bid_posc_pa(kModel, 1.0, 0.5, 0.4, 0.4);
    CHECK(b > 0.0);
    CHECK(b == doctest::Approx(0.510302981193).epsilon(1e-8));
    // Residual of the zero-expected-profit condition at the returned bid.
    Integrand g;
    g.fn = [b](double x) { return max_profit_posc_pa(1.0, 0.5, x - b); };
    g.kinks = {b - 0.5, b - 0.25};
    CHECK(std::abs(kModel.cond_expect_pair(g, 0.4, 0.4)) < 1e-10);
  }
  SUBCASE("steep costs recover the no-effort bid") {
    const double with_effort = bid_posc_pa(kModel, 100.0, 0.5, 0.4, 0.4);
    const double without = bid_posc_sp(kModel, kLinear, 0.5, 0.4, 0.4);
    CHECK(std::abs(with_effort - without) <= 1e-2);
  }
}

TEST_CASE("profit-only hidden-effort bid against a brute-force solve") {
  // Independent route: midpoint-rule expectation of the winner's maximum
  // profit and a plain interval bisection, no library quadrature involved.
  const double gamma = 1.0, alpha = 0.5, y1 = 0.4, y2 = 0.4;
  auto expected_profit = [&](double b) {
    const double m = y1 + y2;
    const int n = 200000;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = m * (i + 0.5) / n;
      acc += max_profit_posc_pa(gamma, alpha, x - b);
    }
    return acc / n;
  };
  double lo = -1.0, hi = 2.0;
  for (int i = 0; i < 45; ++i) {
    const double mid = 0.5 * (lo + hi);
    (expected_profit(mid) > 0.0 ? lo : hi) = mid;
  }
  CHECK(bid_posc_pa(kModel, gamma, alpha, y1, y2) ==
        doctest::Approx(0.5 * (lo + hi)).epsilon(1e-5));
}

TEST_CASE("profit-only hidden-effort revenue") {
  SUBCASE("coincides with full sharing when nothing is shared") {
    RandomStream rs(41, 3);
    const CostFunction c1 = CostFunction::quadratic(1.0);
    const PairedEstimate d = pa_paired_diff(
        kModel, make_plsc_pa_mechanism(kModel, kLinear, c1, 0.0),
        make_posc_pa_mechanism(kModel, 1.0, 0.0), 50000, rs);
    CHECK(std::abs(d.mean_diff) <= 3.0 * d.stderr_ + 1e-9);
  }
  SUBCASE("a moderate share beats the one-time rule at gamma 1") {
    RandomStream rs(41, 4);
    const PairedEstimate d = pa_paired_diff(
        kModel, make_posc_pa_mechanism(kModel, 1.0, 0.0),
        make_posc_pa_mechanism(kModel, 1.0, 0.3), 200000, rs);
    CHECK(d.t_stat > 3.0);
  }
  SUBCASE("cheap effort reverses the contract ranking at a high share") {
    RandomStream rs(41, 5);
    const CostFunction c = CostFunction::quadratic(0.25);
    const PairedEstimate d = pa_paired_diff(
        kModel, make_plsc_pa_mechanism(kModel, kLinear, c, 0.8),
        make_posc_pa_mechanism(kModel, 0.25, 0.8), 100000, rs);
    CHECK(d.t_stat > 3.0);
  }
  SUBCASE("the peak share is interior for cheap effort") {
    RandomStream rs(41, 6);
    const PaMechanism base = make_posc_pa_mechanism(kModel, 0.25, 0.0);
    double best_a = 0.0, best_d = 0.0;
    double last_d = 0.0;
    for (double a = 0.1; a <= 0.91; a += 0.2) {
      const PairedEstimate d = pa_paired_diff(
          kModel, base, make_posc_pa_mechanism(kModel, 0.25, a), 50000, rs);
      if (d.mean_diff > best_d) {
        best_d = d.mean_diff;
        best_a = a;
      }
      last_d = d.mean_diff;
    }
    CHECK(best_d > 0.0);
    CHECK(best_a < 0.9);
    CHECK(last_d < best_d);
  }
}
