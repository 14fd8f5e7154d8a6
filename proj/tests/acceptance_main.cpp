// Acceptance suite: end-to-end checks of the equilibrium solvers, revenue
// estimators, hidden-effort mechanisms and the experiment driver, each
// printed as a single pass/fail line.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "psauction/auctions.hpp"
#include "psauction/equilibrium.hpp"
#include "psauction/experiment.hpp"
#include "psauction/info_model.hpp"
#include "psauction/principal_agent.hpp"
#include "psauction/verify.hpp"

using namespace psauction;

namespace {

struct Criterion {
  int id;
  std::string title;
  std::function<void(std::vector<std::string>&)> body;
};

int g_failures = 0;

void run(const Criterion& c) {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<std::string> problems;
  try {
    c.body(problems);
  } catch (const std::exception& e) {
    problems.push_back(std::string("exception: ") + e.what());
  }
  const double dt =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  if (problems.empty()) {
    std::printf("[%2d/12] PASS  %-58s (%.1f s)\n", c.id, c.title.c_str(), dt);
  } else {
    ++g_failures;
    std::printf("[%2d/12] FAIL  %-58s (%.1f s)\n", c.id, c.title.c_str(), dt);
    for (const std::string& p : problems) {
      std::printf("         - %s\n", p.c_str());
    }
  }
  std::fflush(stdout);
}

void require(std::vector<std::string>& problems, bool cond,
             const std::string& what) {
  if (!cond && problems.size() < 6) problems.push_back(what);
}

void require_near(std::vector<std::string>& problems, double got, double want,
                  double tol, const std::string& what) {
  if (!(std::abs(got - want) <= tol)) {
    std::ostringstream s;
    s << what << ": got " << got << ", wanted " << want << " +/- " << tol;
    require(problems, false, s.str());
  }
}

double example1_posc_bid(double alpha, double y1, double z1) {
  const double p = 2.0 * y1 + z1;
  return (1.0 - alpha) * p / (3.0 - alpha * p);
}

}  // namespace

int main() {
  const InfoModel example1 = InfoModel::example1();
  const InfoModel example2 = InfoModel::example2_pa();
  const InfoModel cv3 = InfoModel::common_value_avg(3);
  const Utility lin = Utility::linear();
  const Utility cara = Utility::cara(1.0, 1.0);
  const std::uint64_t seed = 20110214;

  run({1, "full-sharing sweep: affine revenue line", [&](auto& problems) {
         const auto t0 = std::chrono::steady_clock::now();
         ExperimentConfig cfg;
         cfg.model_name = "example1";
         cfg.contracts.push_back({"plsc", std::nullopt, {}, {}});
         cfg.alpha_grid = {0.0, 0.25, 0.5, 0.75};
         cfg.n_samples = 1000000;
         cfg.seed = seed;
         const std::vector<SweepRow> rows = sweep_alpha(cfg);
         int closed_hits = 0, mc_hits = 0;
         for (const SweepRow& r : rows) {
           const double want = 1.0 / 3.0 + 2.0 * r.alpha / 9.0;
           if (r.estimator == "closed_form") {
             require_near(problems, r.total, want, 1e-9,
                          "closed form at alpha " + std::to_string(r.alpha));
             ++closed_hits;
           } else {
             require(problems, std::abs(r.total - want) <= 3.0 * r.stderr_,
                     "sampled total outside three standard errors at alpha " +
                         std::to_string(r.alpha));
             require(problems, r.n == 1000000, "wrong sample count");
             ++mc_hits;
           }
         }
         require(problems, closed_hits == 4 && mc_hits == 4,
                 "expected four closed-form and four sampled rows");
         const double dt = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - t0)
                               .count();
         require(problems, dt < 30.0, "sweep exceeded 30 seconds");
       }});

  run({2, "profit-only bids match the closed form on the grid",
       [&](auto& problems) {
         int violations = 0;
         for (int ai = 0; ai < 8; ++ai) {
           const double alpha = ai / 8.0;
           for (int yi = 0; yi < 16; ++yi) {
             const double y1 = (yi + 0.5) / 16.0;
             for (int zi = 0; zi < 16; ++zi) {
               const double z1 = (zi + 0.5) / 16.0;
               const double got = bid_posc_sp(example1, lin, alpha, y1, z1);
               if (std::abs(got - example1_posc_bid(alpha, y1, z1)) > 1e-9) {
                 ++violations;
               }
             }
           }
         }
         require(problems, violations == 0,
                 std::to_string(violations) + " grid points off by over 1e-9");
       }});

  run({3, "profit-only stage revenues at a one-half share", [&](auto& problems) {
         const RevenueBreakdown cf =
             revenue_closed_form_example1(ContractKind::posc, 0.5);
         require_near(problems, cf.stage1, 3.0 - 4.0 * std::log(2.0), 1e-9,
                      "auction stage against the antiderivative");
         require_near(problems, cf.stage2,
                      5.0 / 18.0 - (43.0 / 3.0 - 20.0 * std::log(2.0)) / 6.0,
                      1e-9, "sharing stage against the antiderivative");
         require_near(problems, cf.stage1, 0.22741, 5e-6, "auction stage");
         require_near(problems, cf.stage2, 0.19938, 5e-6, "sharing stage");
         require_near(problems, cf.total, 0.42679, 1e-5, "total");
         RandomStream rs(seed, 3);
         const RevenueBreakdown mc =
             estimate_revenue(example1, lin, SharingContract::posc(0.5),
                              AuctionFormat::second_price, 1000000, rs);
         require(problems, std::abs(mc.total - cf.total) <= 3.0 * mc.stderr_total,
                 "sampled total outside three standard errors");
       }});

  run({4, "share-fraction monotonicity and contract ranking", [&](auto& problems) {
         std::vector<double> grid;
         for (int i = 0; i <= 9; ++i) grid.push_back(0.1 * i);
         std::vector<RevenueBreakdown> posc_cf, plsc_cf;
         for (double a : grid) {
           posc_cf.push_back(revenue_closed_form_example1(ContractKind::posc, a));
           plsc_cf.push_back(revenue_closed_form_example1(ContractKind::plsc, a));
         }
         for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
           require(problems, posc_cf[i + 1].total >= posc_cf[i].total - 1e-9,
                   "profit-only total fell in the share fraction");
           require(problems, plsc_cf[i + 1].total > plsc_cf[i].total + 1e-9,
                   "full-sharing total failed to rise");
           require(problems, posc_cf[i + 1].stage1 < posc_cf[i].stage1 - 1e-9,
                   "profit-only auction stage failed to fall");
           require(problems, posc_cf[i + 1].stage2 > posc_cf[i].stage2 + 1e-9,
                   "profit-only sharing stage failed to rise");
         }
         for (std::size_t i = 0; i < grid.size(); ++i) {
           require(problems, plsc_cf[i].total >= posc_cf[i].total - 1e-9,
                   "full sharing fell below profit-only sharing");
         }

         // One paired run with every contract cell, common random numbers.
         std::vector<SharingContract> contracts;
         for (double a : grid) contracts.push_back(SharingContract::posc(a));
         for (double a : grid) contracts.push_back(SharingContract::plsc(a));
         RandomStream rs(seed, 4);
         const PairedComparison cmp = compare_contracts_paired(
             example1, lin, contracts, AuctionFormat::second_price, 100000, rs);
         auto paired_t = [&](std::size_t i, std::size_t j) {
           for (const PairedDiff& d : cmp.diffs) {
             if (d.first == i && d.second == j) return d.t_stat;
             if (d.first == j && d.second == i) return -d.t_stat;
           }
           return 0.0;
         };
         for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
           if (posc_cf[i + 1].total - posc_cf[i].total > 0.005) {
             require(problems, paired_t(i, i + 1) > 3.0,
                     "paired profit-only increase not significant");
           }
           if (plsc_cf[i + 1].total - plsc_cf[i].total > 0.005) {
             require(problems, paired_t(10 + i, 10 + i + 1) > 3.0,
                     "paired full-sharing increase not significant");
           }
         }
         for (std::size_t i = 0; i < grid.size(); ++i) {
           if (plsc_cf[i].total - posc_cf[i].total > 0.005) {
             require(problems, paired_t(i, 10 + i) > 3.0,
                     "paired contract ranking not significant");
           }
         }
       }});

  run({5, "bid monotonicity and bound suites", [&](auto& problems) {
         int violations = 0;
         const double tol = 1e-9;
         for (const Utility* u : {&lin, &cara}) {
           for (int ai = 0; ai < 8; ++ai) {
             const double alpha = ai / 8.0;
             std::vector<std::vector<double>> sgrid(16), tgrid(16);
             for (int yi = 0; yi < 16; ++yi) {
               sgrid[yi].resize(16);
               tgrid[yi].resize(16);
               for (int zi = 0; zi < 16; ++zi) {
                 const double y1 = (yi + 0.5) / 16.0;
                 const double z1 = (zi + 0.5) / 16.0;
                 sgrid[yi][zi] = bid_posc_sp(example1, *u, alpha, y1, z1);
                 tgrid[yi][zi] = bid_plsc_sp(example1, *u, alpha, y1, z1);
                 const double mean = example1.expected_value_pair(y1, z1);
                 if (sgrid[yi][zi] > tgrid[yi][zi] + tol) ++violations;
                 if (tgrid[yi][zi] > mean + tol) ++violations;
                 if (tgrid[yi][zi] <= 0.0) ++violations;
                 if (alpha > 0.0 && sgrid[yi][zi] >= tgrid[yi][zi] - tol) {
                   ++violations;
                 }
               }
             }
             for (int yi = 0; yi + 1 < 16; ++yi) {
               for (int zi = 0; zi < 16; ++zi) {
                 if (sgrid[yi + 1][zi] <= sgrid[yi][zi] - tol) ++violations;
                 if (tgrid[yi + 1][zi] <= tgrid[yi][zi] - tol) ++violations;
               }
             }
             for (int yi = 0; yi < 16; ++yi) {
               for (int zi = 0; zi + 1 < 16; ++zi) {
                 if (sgrid[yi][zi + 1] < sgrid[yi][zi] - tol) ++violations;
                 if (tgrid[yi][zi + 1] < tgrid[yi][zi] - tol) ++violations;
               }
             }
           }
           // Share-fraction monotonicity along a fixed conditioning point.
           double prev_s = 1e18, prev_t = -1e18;
           for (int ai = 0; ai < 8; ++ai) {
             const double alpha = ai / 8.0;
             const double sb = bid_posc_sp(example1, *u, alpha, 0.55, 0.35);
             const double tb = bid_plsc_sp(example1, *u, alpha, 0.55, 0.35);
             if (sb >= prev_s + tol) ++violations;
             if (tb < prev_t - tol) ++violations;
             if (u->strictly_concave() && ai > 0 && tb <= prev_t + tol) {
               ++violations;
             }
             prev_s = sb;
             prev_t = tb;
           }
           // Full-conditioning bids on the three-buyer common value model.
           const std::vector<double> pts{0.1, 0.3, 0.5, 0.7, 0.9};
           for (double alpha : {0.25, 0.6}) {
             const SharingContract po = SharingContract::posc(alpha);
             const SharingContract pl = SharingContract::plsc(alpha);
             for (double y : pts) {
               for (double z1 : pts) {
                 for (double z2 : pts) {
                   if (z2 > z1) continue;
                   const std::vector<double> z{z1, z2};
                   const double sb = bid_eng(cv3, *u, po, y, z);
                   const double tb = bid_eng(cv3, *u, pl, y, z);
                   if (sb > tb + tol) ++violations;
                   if (tb > cv3.expected_value_full(y, z) + tol) ++violations;
                   const std::vector<double> z_up{std::min(1.0, z1 + 0.2), z1};
                   if (bid_eng(cv3, *u, po, std::min(1.0, y + 0.2), z) <=
                       sb - tol) {
                     ++violations;
                   }
                   if (bid_eng(cv3, *u, po, y, z_up) < sb - tol) ++violations;
                 }
               }
             }
           }
         }
         require(problems, violations == 0,
                 std::to_string(violations) + " lemma-suite violations");
       }});

  run({6, "ascending clock agrees with the direct payment", [&](auto& problems) {
         RandomStream rs(seed, 6);
         const double step = 1e-4;
         int bad = 0;
         for (int i = 0; i < 1000; ++i) {
           const std::vector<double> signals = cv3.sample_signals(rs);
           const SharingContract c =
               (i % 2 == 0) ? SharingContract::plsc(0.4)
                            : SharingContract::posc(0.3);
           RandomStream ra = rs.derive(static_cast<std::uint64_t>(i));
           RandomStream rb = ra;
           const ClockResult clock =
               run_english_clock(cv3, lin, c, signals, step, ra);
           const AuctionOutcome direct =
               english_payment_direct(cv3, lin, c, signals, rb);
           if (std::abs(clock.outcome.payment - direct.payment) > step) ++bad;
         }
         require(problems, bad == 0,
                 std::to_string(bad) + " clock payments off by over one step");

         int bad_n2 = 0;
         for (int i = 0; i < 100; ++i) {
           const std::vector<double> signals = example1.sample_signals(rs);
           const std::vector<double> z = order_stats_desc(signals, 0);
           for (double alpha : {0.2, 0.6}) {
             const double eng = bid_eng(example1, cara,
                                        SharingContract::posc(alpha),
                                        signals[0], z);
             const double sp = bid_posc_sp(example1, cara, alpha, signals[0],
                                           z[0]);
             if (std::abs(eng - sp) > 1e-8) ++bad_n2;
           }
         }
         require(problems, bad_n2 == 0,
                 "two-buyer ascending and sealed bids diverged");
       }});

  run({7, "ascending format earns at least the sealed format", [&](auto& problems) {
         RandomStream rs(seed, 7);
         for (double alpha : {0.25, 0.5}) {
           const PairedEstimate est = compare_formats_paired(
               cv3, lin, SharingContract::plsc(alpha), 100000, rs);
           require(problems, est.mean_diff >= -3.0 * est.stderr_,
                   "ranking violated at alpha " + std::to_string(alpha));
         }
       }});

  run({8, "general sharing rule sits between its bounds", [&](auto& problems) {
         const SharingContract phi = SharingContract::general(
             {-2.0, 0.0, 0.5, 2.0}, {-0.4, 0.0, 0.2, 0.35});
         require(problems, phi.marginal_slope_bound() <= 0.4 + 1e-12,
                 "slope bound above 0.4");
         require(problems, phi.check_admissible(-2.0, 2.0).admissible,
                 "test rule must be admissible");
         const std::vector<SharingContract> contracts{
             SharingContract::one_time(), phi, SharingContract::plsc(0.4)};
         RandomStream rs(seed, 8);
         const PairedComparison cmp = compare_contracts_paired(
             example1, lin, contracts, AuctionFormat::second_price, 100000, rs);
         for (const PairedDiff& d : cmp.diffs) {
           if (d.first == 0 && d.second == 1) {
             require(problems, d.mean_diff >= -3.0 * d.stderr_,
                     "general rule fell below the one-time rule");
           }
           if (d.first == 1 && d.second == 2) {
             require(problems, d.mean_diff >= -3.0 * d.stderr_,
                     "general rule beat its full-sharing envelope");
           }
         }
       }});

  run({9, "hidden-effort full sharing: closed form and its peak",
       [&](auto& problems) {
         for (double g : {0.5, 1.0, 2.0}) {
           for (double a = 0.0; a < 0.95; a += 0.1) {
             const double want =
                 1.0 / 3.0 + 1.0 / (4.0 * g) + a / 6.0 - a * a / (4.0 * g);
             require_near(problems,
                          revenue_plsc_pa_closed_form_example2(g, a).total,
                          want, 1e-9, "closed form at gamma/alpha grid");
           }
         }
         double best_a = 0.0, best_r = -1.0;
         for (double a = 0.0; a < 0.995; a += 0.01) {
           const double r = revenue_plsc_pa_closed_form_example2(1.0, a).total;
           if (r > best_r) {
             best_r = r;
             best_a = a;
           }
         }
         require(problems, std::abs(best_a - 1.0 / 3.0) <= 0.01,
                 "grid peak away from one third");
         RandomStream rs(seed, 9);
         const CostFunction cost = CostFunction::quadratic(1.0);
         for (double a : {0.0, 1.0 / 3.0, 0.7}) {
           const RevenueBreakdown mc =
               revenue_plsc_pa(example2, lin, cost, a, 400000, rs);
           const RevenueBreakdown cf =
               revenue_plsc_pa_closed_form_example2(1.0, a);
           require(problems,
                   std::abs(mc.total - cf.total) <= 3.0 * mc.stderr_total,
                   "sampled revenue outside three standard errors");
         }
       }});

  run({10, "revenue slope at zero share is positive", [&](auto& problems) {
         auto closed = [](double a) {
           return revenue_plsc_pa_closed_form_example2(1.0, a).total;
         };
         require_near(problems, derivative_at_zero(closed, 1e-3), 1.0 / 6.0,
                      1e-3, "closed-form forward difference");
         RandomStream rs(seed, 10);
         const CostFunction cost = CostFunction::quadratic(1.0);
         const PairedEstimate est = pa_paired_diff(
             example2, make_plsc_pa_mechanism(example2, lin, cost, 0.0),
             make_plsc_pa_mechanism(example2, lin, cost, 0.05), 1000000, rs);
         require(problems, est.t_stat > 3.0,
                 "paired slope estimate not significantly positive");
       }});

  run({11, "hidden effort under profit-only sharing", [&](auto& problems) {
         require_near(problems, optimal_effort_posc_expost(1.0, 0.5, 0.0), 0.25,
                      0.0, "interior branch");
         require_near(problems, optimal_effort_posc_expost(1.0, 0.5, -0.3), 0.3,
                      1e-15, "loss-offset branch");
         require_near(problems, optimal_effort_posc_expost(1.0, 0.5, -0.8), 0.5,
                      0.0, "deep-loss branch");
         for (double g : {0.25, 1.0, 4.0}) {
           const CostFunction cost = CostFunction::quadratic(g);
           for (double a = 0.0; a <= 0.91; a += 0.1) {
             const double base = optimal_effort_plsc(cost, a);
             for (double w = -2.0; w <= 2.0; w += 0.05) {
               require(problems,
                       optimal_effort_posc_expost(g, a, w) >= base - 1e-12,
                       "effort fell below the share-only optimum");
             }
           }
         }
         RandomStream rs(seed, 11);
         const PairedEstimate gain = pa_paired_diff(
             example2, make_posc_pa_mechanism(example2, 1.0, 0.0),
             make_posc_pa_mechanism(example2, 1.0, 0.3), 1000000, rs);
         require(problems, gain.t_stat > 3.0,
                 "share 0.3 did not beat the one-time rule at gamma 1");

         const PaMechanism base = make_posc_pa_mechanism(example2, 0.25, 0.0);
         double best_a = 0.0, best_d = 0.0;
         for (double a = 0.05; a < 0.95; a += 0.05) {
           const PairedEstimate d = pa_paired_diff(
               example2, base, make_posc_pa_mechanism(example2, 0.25, a),
               100000, rs);
           if (d.mean_diff > best_d) {
             best_d = d.mean_diff;
             best_a = a;
           }
         }
         require(problems, best_d > 0.0 && best_a < 0.95,
                 "peak share not interior for cheap effort");
       }});

  run({12, "verification suite runtime budgets", [&](auto& problems) {
         VerifyOptions fast;
         fast.scope = VerifyScope::fast;
         const VerifyReport fast_report = verify_suite(fast);
         require(problems, fast_report.all_pass(), "fast scope failed");
         require(problems, fast_report.wall_seconds < 60.0,
                 "fast scope exceeded 60 seconds");
         VerifyOptions all;
         all.scope = VerifyScope::all;
         const VerifyReport all_report = verify_suite(all);
         require(problems, all_report.all_pass(), "full scope failed");
         require(problems, all_report.wall_seconds < 900.0,
                 "full scope exceeded 15 minutes");
       }});

  if (g_failures == 0) {
    std::printf("all 12 acceptance criteria passed\n");
    return 0;
  }
  std::printf("%d acceptance criteria failed\n", g_failures);
  return 1;
}
