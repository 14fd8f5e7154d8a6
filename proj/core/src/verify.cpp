#include "psauction/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <ostream>
#include <sstream>

#include "psauction/auctions.hpp"
#include "psauction/equilibrium.hpp"
#include "psauction/errors.hpp"
#include "psauction/experiment.hpp"
#include "psauction/info_model.hpp"
#include "psauction/numerics.hpp"
#include "psauction/principal_agent.hpp"
#include "psauction/random.hpp"
#include "psauction/utility.hpp"

namespace psauction {

namespace {

struct Failures {
  std::vector<std::string> msgs;

  void fail(const std::string& msg) {
    if (msgs.size() < 4) msgs.push_back(msg);
  }
  void expect(bool cond, const std::string& msg) {
    if (!cond) fail(msg);
  }
  void expect_near(double got, double want, double tol, const std::string& what) {
    if (!(std::abs(got - want) <= tol)) {
      std::ostringstream s;
      s << what << ": got " << got << ", wanted " << want << " +/- " << tol;
      fail(s.str());
    }
  }
  std::string summary() const {
    std::ostringstream s;
    for (std::size_t i = 0; i < msgs.size(); ++i) {
      if (i) s << "; ";
      s << msgs[i];
    }
    return s.str();
  }
};

class Suite {
 public:
  Suite(const VerifyOptions& options) : options_(options) {}

  bool fast() const { return options_.scope == VerifyScope::fast; }
  std::uint64_t seed() const { return options_.seed; }
  const VerifyOptions& options() const { return options_; }

  template <typename Fn>
  void check(const std::string& name, Fn fn) {
    VerifyLine line;
    line.name = name;
    try {
      Failures f;
      fn(f);
      if (!f.msgs.empty()) {
        line.pass = false;
        line.detail = f.summary();
      }
    } catch (const std::exception& e) {
      line.pass = false;
      line.detail = std::string("exception: ") + e.what();
    }
    report.lines.push_back(std::move(line));
  }

  VerifyReport report;

 private:
  VerifyOptions options_;
};

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    v[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
  }
  return v;
}

// ---------------------------------------------------------------------------
// numerics

void check_numerics(Suite& s) {
  s.check("numerics.monotone_root", [&](Failures& f) {
    f.expect_near(solve_monotone_root([](double b) { return -b; }, 5.0), 0.0,
                  1e-9, "f(b) = -b");
    f.expect_near(solve_monotone_root([](double b) { return 0.5 - b; }, 0.0),
                  0.5, 1e-9, "f(b) = 0.5 - b");
    RandomStream rs(s.seed(), 11);
    for (int i = 0; i < 25; ++i) {
      const double root = rs.uniform(-8.0, 8.0);
      const double a = rs.uniform(0.1, 3.0);
      const double c = rs.uniform(0.0, 1.0);
      auto fn = [=](double x) {
        return a * (root - x) + c * (std::exp(root) - std::exp(x));
      };
      f.expect_near(solve_monotone_root(fn, rs.uniform(-10.0, 10.0)), root,
                    1e-9, "random decreasing function");
    }
    bool threw = false;
    try {
      solve_monotone_root([](double) { return 1.0; }, 0.0);
    } catch (const BracketFailure&) {
      threw = true;
    }
    f.expect(threw, "rootless function must raise BracketFailure");
  });

  s.check("numerics.quadrature_exactness", [&](Failures& f) {
    RandomStream rs(s.seed(), 12);
    for (int nodes : {2, 4, 8}) {
      const int degree = 2 * nodes - 1;
      std::vector<double> coef(static_cast<std::size_t>(degree + 1));
      for (double& c : coef) c = rs.uniform(-2.0, 2.0);
      auto poly = [&](double x) {
        double acc = 0.0;
        for (std::size_t k = coef.size(); k-- > 0;) acc = acc * x + coef[k];
        return acc;
      };
      double exact = 0.0;  // antiderivative difference on [-1, 2]
      for (std::size_t k = 0; k < coef.size(); ++k) {
        const double p = static_cast<double>(k) + 1.0;
        exact += coef[k] / p * (std::pow(2.0, p) - std::pow(-1.0, p));
      }
      f.expect_near(integrate_gl(poly, -1.0, 2.0, nodes), exact,
                    1e-12 * std::max(1.0, std::abs(exact)),
                    "degree " + std::to_string(degree));
    }
  });

  s.check("numerics.quadrature_adaptive", [&](Failures& f) {
    const double got = integrate_adaptive(
        [](double t) { return t * (1.0 - t) / (1.0 - 0.5 * t); }, 0.0, 1.0);
    f.expect_near(got, 3.0 - 4.0 * std::log(2.0), 1e-10, "rational integrand");
    f.expect_near(integrate_gl([](double t) { return t; }, 0.0, 1.0, 8), 0.5,
                  1e-14, "linear integrand");
  });

  s.check("numerics.interpolation", [&](Failures& f) {
    const std::vector<double> xs{0.0, 1.0};
    const std::vector<double> ys{0.0, 1.0};
    f.expect_near(monotone_interpolate(xs, ys, 0.5), 0.5, 1e-15, "midpoint");
    const auto grid = linspace(0.0, 1.0, 512);
    std::vector<double> sq(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) sq[i] = grid[i] * grid[i];
    f.expect_near(monotone_interpolate(grid, sq, 0.5), 0.25, 1e-4,
                  "quadratic resampling");
    f.expect_near(monotone_interpolate(grid, sq, grid[37]), sq[37], 0.0,
                  "node exactness");
  });

  s.check("numerics.random_reproducibility", [&](Failures& f) {
    RandomStream a(s.seed(), 7), b(s.seed(), 7), c(s.seed(), 8);
    bool same = true, differ = false;
    for (int i = 0; i < 1000; ++i) {
      const auto va = a.next_u64();
      same = same && (va == b.next_u64());
      differ = differ || (va != c.next_u64());
    }
    f.expect(same, "identical (seed, stream) must replay bitwise");
    f.expect(differ, "distinct streams must not coincide");
    RandomStream d1 = a.derive(1), d2 = a.derive(2);
    f.expect(d1.next_u64() != d2.next_u64(), "derived children must differ");
  });
}

// ---------------------------------------------------------------------------
// info model

void check_info_model(Suite& s) {
  const Integrand identity{[](double x) { return x; }};

  s.check("info.oracle_values", [&](Failures& f) {
    const InfoModel m1 = InfoModel::example1();
    f.expect_near(m1.cond_expect_pair(identity, 0.6, 0.3), 0.5, 1e-12,
                  "bernoulli mean at (0.6, 0.3)");
    f.expect_near(m1.cond_expect_pair(identity, 1.0, 1.0), 1.0, 1e-12,
                  "boundary");
    const InfoModel m2 = InfoModel::example2_pa();
    f.expect_near(m2.cond_expect_pair(identity, 0.4, 0.4), 0.4, 1e-12,
                  "uniform mean at (0.4, 0.4)");
    const InfoModel cv = InfoModel::common_value_avg(3);
    const std::vector<double> z{0.6, 0.3};
    f.expect_near(cv.cond_expect_full(identity, 0.9, z), 0.6, 1e-12,
                  "deterministic average");
    f.expect_near(
        cv.cond_expect_full({[](double x) { return x * x; }}, 0.9, z), 0.36,
        1e-12, "average squared");
    f.expect_near(cv.cond_expect_pair(identity, 0.6, 0.3), (0.6 + 1.5 * 0.3) / 3.0,
                  1e-10, "pair oracle integrates the hidden signal");
  });

  s.check("info.sampling_marginals", [&](Failures& f) {
    RandomStream rs(s.seed(), 21);
    const long n = s.fast() ? 200000 : 1000000;
    const InfoModel m1 = InfoModel::example1();
    double sum_y = 0.0;
    std::vector<double> y(2);
    for (long i = 0; i < n; ++i) {
      m1.sample_signals(rs, y);
      sum_y += y[0];
    }
    f.expect_near(sum_y / static_cast<double>(n), 0.5,
                  3.0 * 0.29 / std::sqrt(static_cast<double>(n)),
                  "uniform signal mean");

    const InfoModel pv = InfoModel::private_values(2);
    double sxy = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, syy = 0.0;
    const long nc = s.fast() ? 100000 : 400000;
    for (long i = 0; i < nc; ++i) {
      pv.sample_signals(rs, y);
      sx += y[0];
      sy += y[1];
      sxy += y[0] * y[1];
      sxx += y[0] * y[0];
      syy += y[1] * y[1];
    }
    const double dn = static_cast<double>(nc);
    const double cov = sxy / dn - (sx / dn) * (sy / dn);
    const double corr = cov / std::sqrt((sxx / dn - (sx / dn) * (sx / dn)) *
                                        (syy / dn - (sy / dn) * (sy / dn)));
    f.expect(std::abs(corr) < 0.01, "independent signals must be uncorrelated");

    // Kolmogorov-Smirnov distance of one marginal against uniform(0,1).
    const InfoModel cv = InfoModel::common_value_avg(3);
    const long nk = 100000;
    std::vector<double> draws(nk);
    std::vector<double> prof(3);
    for (long i = 0; i < nk; ++i) {
      cv.sample_signals(rs, prof);
      draws[static_cast<std::size_t>(i)] = prof[1];
    }
    std::sort(draws.begin(), draws.end());
    double ks = 0.0;
    for (long i = 0; i < nk; ++i) {
      const double emp_hi = static_cast<double>(i + 1) / nk;
      const double emp_lo = static_cast<double>(i) / nk;
      const double v = draws[static_cast<std::size_t>(i)];
      ks = std::max({ks, std::abs(emp_hi - v), std::abs(emp_lo - v)});
    }
    f.expect(ks < 0.01, "marginal signal law must be uniform (KS < 0.01)");
  });

  s.check("info.value_sampler_means", [&](Failures& f) {
    RandomStream rs(s.seed(), 22);
    const InfoModel m1 = InfoModel::example1();
    const long n = 100000;
    double acc = 0.0;
    const std::vector<double> y11{1.0, 1.0};
    for (long i = 0; i < n; ++i) acc += m1.sample_value(y11, rs);
    f.expect_near(acc / static_cast<double>(n), 1.0, 0.005,
                  "sure success at the top signal pair");
    const InfoModel m2 = InfoModel::example2_pa();
    acc = 0.0;
    const std::vector<double> yh{0.5, 0.5};
    for (long i = 0; i < n; ++i) acc += m2.sample_value(yh, rs);
    f.expect_near(acc / static_cast<double>(n), 0.5, 0.01, "uniform[0,1] mean");
    const InfoModel cv = InfoModel::common_value_avg(3);
    const std::vector<double> yc{0.3, 0.6, 0.9};
    f.expect_near(cv.sample_value(yc, rs), 0.6, 1e-15, "deterministic value");
  });

  s.check("info.exchangeability", [&](Failures& f) {
    const InfoModel cv = InfoModel::common_value_avg(4);
    RandomStream rs(s.seed(), 23);
    for (int i = 0; i < 50; ++i) {
      std::vector<double> opp{rs.next_double(), rs.next_double(),
                              rs.next_double()};
      const double y1 = rs.next_double();
      std::vector<double> sorted = opp;
      std::sort(sorted.begin(), sorted.end(), std::greater<>());
      const double base = cv.cond_expect_full(identity, y1, sorted);
      std::next_permutation(opp.begin(), opp.end());
      std::vector<double> resorted = opp;
      std::sort(resorted.begin(), resorted.end(), std::greater<>());
      f.expect_near(cv.cond_expect_full(identity, y1, resorted), base, 1e-12,
                    "opponent permutation must not matter");
    }
  });

  s.check("info.oracle_consistency", [&](Failures& f) {
    const int res = s.fast() ? 6 : 16;
    const long n_inner = s.fast() ? 5000 : 20000;
    RandomStream rs(s.seed(), 24);
    // With hundreds of independent cells a handful of 3-sigma excursions is
    // expected; budget for those and cap the worst case at 5 sigma.
    int beyond_3s = 0;
    int cells = 0;
    for (const InfoModel& m :
         {InfoModel::example1(), InfoModel::example2_pa()}) {
      const auto grid = linspace(0.05, 0.95, res);
      for (double y1 : grid) {
        for (double z1 : grid) {
          const double cf = m.cond_expect_pair(identity, y1, z1);
          const McEstimate mc =
              m.cond_expect_pair_mc(identity, y1, z1, n_inner, rs);
          const double gap = std::abs(cf - mc.mean);
          if (gap > 3.0 * mc.stderr_ + 1e-12) ++beyond_3s;
          f.expect(gap <= 5.0 * mc.stderr_ + 1e-12,
                   "closed form vs nested sampling at " + m.name());
          ++cells;
        }
      }
    }
    f.expect(beyond_3s <= std::max(1, cells / 100),
             "too many cells outside three standard errors");
  });

  s.check("info.pair_monotonicity", [&](Failures& f) {
    const std::vector<Integrand> gs{
        identity, Integrand{[](double x) { return std::min(x, 0.5); }, {0.5}}};
    for (const InfoModel& m :
         {InfoModel::example1(), InfoModel::example2_pa(),
          InfoModel::common_value_avg(3), InfoModel::private_values(2)}) {
      const auto grid = linspace(0.02, 0.98, s.fast() ? 8 : 14);
      for (const Integrand& g : gs) {
        for (std::size_t j = 0; j < grid.size(); ++j) {
          for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
            const double lo = m.cond_expect_pair(g, grid[i], grid[j]);
            const double hi = m.cond_expect_pair(g, grid[i + 1], grid[j]);
            f.expect(hi >= lo - 1e-9, m.name() + " oracle not monotone in y1");
            const double lo_z = m.cond_expect_pair(g, grid[j], grid[i]);
            const double hi_z = m.cond_expect_pair(g, grid[j], grid[i + 1]);
            f.expect(hi_z >= lo_z - 1e-9, m.name() + " oracle decreasing in z1");
          }
        }
      }
    }
  });

  s.check("info.positive_dependence", [&](Failures& f) {
    f.expect(InfoModel::example1().check_positive_dependence(16).ok,
             "bernoulli model must pass");
    f.expect(InfoModel::common_value_avg(3).check_positive_dependence(12).ok,
             "common value model must pass");
    InfoModel::CustomSpec bad;
    bad.name = "anti_monotone";
    bad.n_buyers = 2;
    bad.signal_interval = {0.0, 1.0};
    bad.value_interval = {-1.0, 0.0};
    bad.pair_oracle = [](const Integrand& g, double y1, double) {
      return g.fn(-y1);
    };
    const DependenceReport rep =
        InfoModel::custom(bad).check_positive_dependence(8);
    f.expect(!rep.ok && !rep.violations.empty(),
             "decreasing model must be flagged");
  });
}

// ---------------------------------------------------------------------------
// preferences

void check_preferences(Suite& s) {
  s.check("utility.basics", [&](Failures& f) {
    const Utility lin = Utility::linear();
    f.expect_near(lin(0.7), 0.7, 0.0, "linear passthrough");
    const Utility cara = Utility::cara(1.0, 1.0);
    f.expect_near(cara(0.0), 0.0, 0.0, "normalization");
    f.expect_near(cara(1.0), 1.0 - std::exp(-1.0), 1e-15, "cara value");
    const auto grid = linspace(-2.0, 2.0, 41);
    f.expect(lin.verify(grid).ok, "linear must verify");
    f.expect(Utility::cara(1.0, 2.0).verify(grid).ok, "cara must verify");
  });

  s.check("utility.jensen", [&](Failures& f) {
    RandomStream rs(s.seed(), 31);
    const Utility cara = Utility::cara(1.0, 1.0);
    for (int i = 0; i < 30; ++i) {
      const double a = rs.uniform(-1.0, 0.5);
      const double b = rs.uniform(0.6, 2.0);
      const double p = rs.uniform(0.1, 0.9);
      const double eu = p * cara(a) + (1.0 - p) * cara(b);
      const double ue = cara(p * a + (1.0 - p) * b);
      f.expect(eu < ue, "strict concavity must penalize spread");
    }
  });

  s.check("utility.negative_control", [&](Failures& f) {
    const std::vector<double> xs{-1.0, 0.0, 1.0, 2.0};
    const std::vector<double> convex{-0.5, 0.0, 1.0, 3.0};
    const auto grid = linspace(-1.0, 2.0, 13);
    const UtilityCheckReport rep = verify_utility_table(xs, convex, grid);
    f.expect(!rep.ok, "convex table must be flagged");
    bool threw = false;
    try {
      Utility::custom(xs, convex);
    } catch (const std::invalid_argument&) {
      threw = true;
    }
    f.expect(threw, "convex table must be rejected at load");
  });
}

// ---------------------------------------------------------------------------
// contracts

void check_contracts(Suite& s) {
  s.check("contracts.payments", [&](Failures& f) {
    f.expect_near(SharingContract::posc(0.3).payment(-2.0), 0.0, 0.0,
                  "losses stay with the winner");
    f.expect_near(SharingContract::plsc(0.3).payment(-2.0), -0.6, 1e-15,
                  "losses are shared");
    const SharingContract gen =
        SharingContract::general({-1.0, 0.0, 1.0}, {-0.2, 0.0, 0.4});
    for (const SharingContract& c :
         {SharingContract::one_time(), SharingContract::posc(0.4),
          SharingContract::plsc(0.4), gen}) {
      f.expect_near(c.payment(0.0), 0.0, 0.0, "no sharing at zero profit");
    }
    f.expect_near(gen.payment(2.0), 0.8, 1e-15, "terminal slope extension");
    f.expect_near(gen.payment(-2.0), -0.4, 1e-15, "leading slope extension");
  });

  s.check("contracts.posc_dominance", [&](Failures& f) {
    RandomStream rs(s.seed(), 41);
    for (int i = 0; i < 200; ++i) {
      const double alpha = rs.uniform(0.01, 0.99);
      const double w = rs.uniform(-3.0, 3.0);
      const double po = SharingContract::posc(alpha).payment(w);
      const double pl = SharingContract::plsc(alpha).payment(w);
      if (w < 0.0) {
        f.expect(po >= pl, "profit-only take must dominate under losses");
        f.expect(po > pl, "strict under losses");
      } else {
        f.expect_near(po, pl, 1e-15, "equal under gains");
      }
    }
  });

  s.check("contracts.admissibility", [&](Failures& f) {
    f.expect(SharingContract::posc(0.5).check_admissible(-2.0, 2.0).admissible,
             "profit-only rule admissible");
    f.expect(SharingContract::plsc(0.5).check_admissible(-2.0, 2.0).admissible,
             "profit-and-loss rule admissible");
    const SharingContract steep =
        SharingContract::general({-1.0, 0.0, 1.0}, {-0.1, 0.0, 1.5});
    const AdmissibilityReport rep = steep.check_admissible(-2.0, 2.0);
    f.expect(!rep.admissible, "slope above one must be flagged");
  });

  s.check("contracts.injected_admissibility", [&](Failures& f) {
    for (std::size_t i = 0; i < s.options().extra_admissibility_checks.size();
         ++i) {
      const AdmissibilityReport rep =
          s.options().extra_admissibility_checks[i].check_admissible(-2.0, 2.0);
      f.expect(rep.admissible,
               "injected contract " + std::to_string(i) + " inadmissible" +
                   (rep.violations.empty() ? "" : ": " + rep.violations[0]));
    }
  });

  s.check("contracts.slope_bound", [&](Failures& f) {
    f.expect_near(SharingContract::plsc(0.4).marginal_slope_bound(), 0.4, 0.0,
                  "plsc bound");
    f.expect_near(SharingContract::posc(0.4).marginal_slope_bound(), 0.4, 0.0,
                  "posc bound");
    const SharingContract gen =
        SharingContract::general({0.0, 1.0, 2.0}, {0.0, 0.1, 0.4});
    f.expect_near(gen.marginal_slope_bound(), 0.3, 1e-15, "max segment slope");
  });

  s.check("contracts.net_profit_increasing", [&](Failures& f) {
    const auto grid = linspace(-2.0, 2.0, 201);
    std::vector<SharingContract> cs{
        SharingContract::posc(0.7), SharingContract::plsc(0.9),
        SharingContract::general({-1.0, 0.0, 0.5}, {-0.3, 0.0, 0.2})};
    for (const SharingContract& c : s.options().extra_admissibility_checks) {
      cs.push_back(c);
    }
    for (const SharingContract& c : cs) {
      if (!c.check_admissible(-2.0, 2.0).admissible) continue;
      for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const double a = grid[i] - c.payment(grid[i]);
        const double b = grid[i + 1] - c.payment(grid[i + 1]);
        f.expect(b > a, "winner's net profit must increase in w");
      }
    }
  });
}

// ---------------------------------------------------------------------------
// equilibrium

double example1_posc_bid(double alpha, double y1, double z1) {
  const double p = 2.0 * y1 + z1;
  return (1.0 - alpha) * p / (3.0 - alpha * p);
}

void check_equilibrium(Suite& s) {
  const InfoModel m1 = InfoModel::example1();
  const Utility lin = Utility::linear();
  const Utility cara = Utility::cara(1.0, 1.0);

  s.check("equilibrium.posc_closed_form", [&](Failures& f) {
    const int res = s.fast() ? 8 : 16;
    const int ares = s.fast() ? 4 : 8;
    const auto ys = linspace(0.05, 0.95, res);
    const auto as = linspace(0.0, 0.875, ares);
    for (double alpha : as) {
      for (double y1 : ys) {
        for (double z1 : ys) {
          f.expect_near(bid_posc_sp(m1, lin, alpha, y1, z1),
                        example1_posc_bid(alpha, y1, z1), 1e-9,
                        "profit-only bid");
        }
      }
    }
    f.expect_near(bid_posc_sp(m1, lin, 0.9, 0.05, 0.05),
                  0.1 * 0.15 / (3.0 - 0.135), 1e-9, "small-signal bid");
  });

  s.check("equilibrium.plsc_closed_form", [&](Failures& f) {
    for (double alpha : {0.0, 0.3, 0.9}) {
      f.expect_near(bid_plsc_sp(m1, lin, alpha, 0.6, 0.3), 0.5, 1e-9,
                    "risk-neutral bid is the conditional mean");
    }
    const BidFunction beta =
        equilibrium_strategy_sp(m1, lin, SharingContract::plsc(0.5), 64);
    for (double y : linspace(0.0, 1.0, 17)) {
      f.expect_near(beta(y), y, 1e-8, "each buyer bids his signal");
    }
  });

  s.check("equilibrium.alpha_zero_is_one_time", [&](Failures& f) {
    for (const InfoModel& m : {m1, InfoModel::example2_pa()}) {
      for (double y1 : {0.2, 0.7}) {
        for (double z1 : {0.1, 0.6}) {
          f.expect_near(bid_posc_sp(m, lin, 0.0, y1, z1),
                        m.expected_value_pair(y1, z1), 1e-9,
                        "no sharing, risk neutral: bid = conditional mean");
          f.expect_near(bid_posc_sp(m, lin, 0.0, y1, z1),
                        bid_plsc_sp(m, lin, 0.0, y1, z1), 1e-9,
                        "contracts coincide at alpha 0");
        }
      }
    }
  });

  s.check("equilibrium.lemma2_suite", [&](Failures& f) {
    const auto ys = linspace(0.05, 0.95, s.fast() ? 6 : 16);
    const auto as = linspace(0.0, 0.875, s.fast() ? 4 : 8);
    for (const Utility& u : {lin, cara}) {
      for (double alpha : as) {
        for (std::size_t i = 0; i < ys.size(); ++i) {
          for (std::size_t j = 0; j < ys.size(); ++j) {
            const double b = bid_posc_sp(m1, u, alpha, ys[i], ys[j]);
            if (i + 1 < ys.size()) {
              f.expect(bid_posc_sp(m1, u, alpha, ys[i + 1], ys[j]) > b - 1e-9,
                       "bid must increase in the own signal");
            }
            if (j + 1 < ys.size()) {
              f.expect(bid_posc_sp(m1, u, alpha, ys[i], ys[j + 1]) >= b - 1e-9,
                       "bid must not decrease in the rival signal");
            }
            f.expect(b <= m1.expected_value_pair(ys[i], ys[j]) + 1e-9,
                     "bid bounded by the conditional mean");
          }
        }
      }
      for (std::size_t a = 0; a + 1 < as.size(); ++a) {
        const double b0 = bid_posc_sp(m1, u, as[a], 0.5, 0.4);
        const double b1 = bid_posc_sp(m1, u, as[a + 1], 0.5, 0.4);
        f.expect(b1 < b0 + 1e-9, "bid must decrease in the share fraction");
      }
    }
  });

  s.check("equilibrium.lemma4_suite", [&](Failures& f) {
    const auto ys = linspace(0.05, 0.95, s.fast() ? 6 : 16);
    const auto as = linspace(0.0, 0.875, s.fast() ? 4 : 8);
    for (const Utility& u : {lin, cara}) {
      const bool strict = u.strictly_concave();
      for (double alpha : as) {
        for (std::size_t i = 0; i < ys.size(); ++i) {
          for (std::size_t j = 0; j < ys.size(); ++j) {
            const double t = bid_plsc_sp(m1, u, alpha, ys[i], ys[j]);
            f.expect(t > 0.0, "profit-and-loss bid must be positive");
            if (i + 1 < ys.size()) {
              f.expect(bid_plsc_sp(m1, u, alpha, ys[i + 1], ys[j]) > t - 1e-9,
                       "bid must increase in the own signal");
            }
            const double sb = bid_posc_sp(m1, u, alpha, ys[i], ys[j]);
            f.expect(sb <= t + 1e-9, "profit-only bid cannot exceed");
            if (alpha > 0.0) {
              f.expect(sb < t - 1e-9, "strict gap away from alpha 0");
            }
            f.expect(t <= m1.expected_value_pair(ys[i], ys[j]) + 1e-9,
                     "bid bounded by the conditional mean");
          }
        }
      }
      for (std::size_t a = 0; a + 1 < as.size(); ++a) {
        const double t0 = bid_plsc_sp(m1, u, as[a], 0.5, 0.4);
        const double t1 = bid_plsc_sp(m1, u, as[a + 1], 0.5, 0.4);
        f.expect(t1 >= t0 - 1e-9, "bid must not decrease in the share");
        if (strict) f.expect(t1 > t0 + 1e-9, "strict increase when risk averse");
      }
    }
  });

  s.check("equilibrium.lemma8_suite", [&](Failures& f) {
    const InfoModel cv = InfoModel::common_value_avg(3);
    const auto ys = linspace(0.1, 0.9, s.fast() ? 5 : 8);
    for (const Utility& u : {lin, cara}) {
      for (double alpha : {0.25, 0.6}) {
        const SharingContract po = SharingContract::posc(alpha);
        const SharingContract pl = SharingContract::plsc(alpha);
        for (double y : ys) {
          for (double z1 : ys) {
            for (double z2 : ys) {
              if (z2 > z1) continue;
              const std::vector<double> z{z1, z2};
              const double sb = bid_eng(cv, u, po, y, z);
              const double tb = bid_eng(cv, u, pl, y, z);
              f.expect(sb <= tb + 1e-9, "profit-only below profit-and-loss");
              f.expect(tb <= cv.expected_value_full(y, z) + 1e-9,
                       "bounded by the conditional mean");
              const std::vector<double> z_up{std::min(z1 + 0.1, 1.0), z2};
              f.expect(bid_eng(cv, u, po, std::min(y + 0.1, 1.0), z) > sb - 1e-9,
                       "increasing in the own signal");
              f.expect(bid_eng(cv, u, po, y, z_up) >= sb - 1e-9,
                       "componentwise monotone in rivals");
            }
          }
        }
      }
    }
  });

  s.check("equilibrium.specialization", [&](Failures& f) {
    for (double alpha : {0.2, 0.5, 0.8}) {
      for (double y1 : {0.3, 0.8}) {
        for (double z1 : {0.2, 0.6}) {
          f.expect_near(
              bid_general_sp(m1, lin, SharingContract::posc(alpha), y1, z1),
              bid_posc_sp(m1, lin, alpha, y1, z1), 1e-10, "profit-only route");
          f.expect_near(
              bid_general_sp(m1, cara, SharingContract::plsc(alpha), y1, z1),
              bid_plsc_sp(m1, cara, alpha, y1, z1), 1e-10,
              "profit-and-loss route");
        }
      }
    }
  });

  s.check("equilibrium.english_reduces_to_sp", [&](Failures& f) {
    RandomStream rs(s.seed(), 51);
    for (const InfoModel& m : {m1, InfoModel::example2_pa()}) {
      for (int i = 0; i < 10; ++i) {
        const double y1 = rs.uniform(0.05, 0.95);
        const double z1 = rs.uniform(0.05, 0.95);
        const std::vector<double> z{z1};
        f.expect_near(bid_eng(m, cara, SharingContract::posc(0.4), y1, z),
                      bid_posc_sp(m, cara, 0.4, y1, z1), 1e-9,
                      "single rival conditioning");
      }
    }
  });

  s.check("equilibrium.roundtrip_inversion", [&](Failures& f) {
    const InfoModel cv = InfoModel::common_value_avg(3);
    RandomStream rs(s.seed(), 52);
    const int trials = s.fast() ? 10 : 40;
    for (const SharingContract& c :
         {SharingContract::plsc(0.35), SharingContract::posc(0.2)}) {
      for (int i = 0; i < trials; ++i) {
        double q1 = rs.uniform(0.05, 0.95);
        double q2 = rs.uniform(0.05, 0.95);
        if (q1 > q2) std::swap(q1, q2);
        const double p1 = english_strategy(cv, lin, c, 3, q1, {});
        const std::vector<double> q_so_far{q1};
        const double p2 = english_strategy(cv, lin, c, 2, q2, q_so_far);
        const std::vector<double> prices{p1, p2};
        const std::vector<double> rec = invert_drop_prices(cv, lin, c, prices);
        f.expect_near(rec[0], q1, 1e-8, "first quitter recovered");
        f.expect_near(rec[1], q2, 1e-8, "second quitter recovered");
      }
    }
  });
}

// ---------------------------------------------------------------------------
// auctions

void check_auctions(Suite& s) {
  const InfoModel m1 = InfoModel::example1();
  const Utility lin = Utility::linear();

  s.check("auctions.conservation", [&](Failures& f) {
    RandomStream rs(s.seed(), 61);
    const BidFunction beta =
        equilibrium_strategy_sp(m1, lin, SharingContract::posc(0.8), 128);
    for (int i = 0; i < 200; ++i) {
      const AuctionOutcome o =
          run_second_price(m1, beta, SharingContract::posc(0.8), rs);
      f.expect(std::abs(o.payment + o.sharing + o.profit - o.value) <=
                   1e-12 * std::max(1.0, std::abs(o.value)),
               "two stages plus winner profit must add to the value");
    }
  });

  s.check("auctions.closed_forms", [&](Failures& f) {
    f.expect_near(
        revenue_closed_form_example1(ContractKind::plsc, 0.75).total, 0.5,
        1e-12, "profit-and-loss at 0.75");
    f.expect_near(revenue_closed_form_example1(ContractKind::posc, 0.0).total,
                  1.0 / 3.0, 1e-12, "profit-only at 0 is the one-time rule");
    const RevenueBreakdown posc_half =
        revenue_closed_form_example1(ContractKind::posc, 0.5);
    const double stage1 = 3.0 - 4.0 * std::log(2.0);
    const double stage2 =
        5.0 / 18.0 - (43.0 / 3.0 - 20.0 * std::log(2.0)) / 6.0;
    f.expect_near(posc_half.stage1, stage1, 1e-9, "auction stage quadrature");
    f.expect_near(posc_half.stage2, stage2, 1e-9, "sharing stage quadrature");
  });

  s.check("auctions.posc_stage_shape", [&](Failures& f) {
    const auto as = linspace(0.0, 0.9, 10);
    for (std::size_t i = 0; i + 1 < as.size(); ++i) {
      const RevenueBreakdown lo =
          revenue_closed_form_example1(ContractKind::posc, as[i]);
      const RevenueBreakdown hi =
          revenue_closed_form_example1(ContractKind::posc, as[i + 1]);
      f.expect(hi.stage1 < lo.stage1 - 1e-9, "auction stage decreasing");
      f.expect(hi.stage2 > lo.stage2 + 1e-9, "sharing stage increasing");
      f.expect(hi.stage2 > 0.0, "sharing stage positive");
      f.expect(hi.total >= lo.total - 1e-9, "total nondecreasing");
    }
  });

  s.check("auctions.plsc_total_increasing", [&](Failures& f) {
    const auto as = linspace(0.0, 0.9, 10);
    for (std::size_t i = 0; i + 1 < as.size(); ++i) {
      f.expect(revenue_closed_form_example1(ContractKind::plsc, as[i + 1]).total >
                   revenue_closed_form_example1(ContractKind::plsc, as[i]).total +
                       1e-9,
               "total must increase in the share fraction");
    }
  });

  s.check("auctions.plsc_beats_posc", [&](Failures& f) {
    for (double alpha : linspace(0.0, 0.9, 10)) {
      const double gap =
          revenue_closed_form_example1(ContractKind::plsc, alpha).total -
          revenue_closed_form_example1(ContractKind::posc, alpha).total;
      f.expect(gap >= -1e-9, "profit-and-loss dominates");
      if (alpha > 0.05) f.expect(gap > 1e-6, "strictly for positive shares");
    }
  });

  s.check("auctions.mc_vs_closed", [&](Failures& f) {
    RandomStream rs(s.seed(), 62);
    const std::int64_t n = s.fast() ? 20000 : 200000;
    for (double alpha : {0.25, 0.5}) {
      for (ContractKind kind : {ContractKind::posc, ContractKind::plsc}) {
        const SharingContract c = kind == ContractKind::posc
                                      ? SharingContract::posc(alpha)
                                      : SharingContract::plsc(alpha);
        const RevenueBreakdown mc = estimate_revenue(
            m1, lin, c, AuctionFormat::second_price, n, rs);
        const RevenueBreakdown cf = revenue_closed_form_example1(kind, alpha);
        f.expect(std::abs(mc.total - cf.total) <= 3.0 * mc.stderr_total,
                 "sampled total within three standard errors");
      }
    }
  });

  s.check("auctions.clock_consistency", [&](Failures& f) {
    const InfoModel cv = InfoModel::common_value_avg(3);
    RandomStream rs(s.seed(), 63);
    const int trials = s.fast() ? 10 : 60;
    const double step = 1e-4;
    for (const SharingContract& c :
         {SharingContract::plsc(0.4), SharingContract::posc(0.3)}) {
      for (int i = 0; i < trials; ++i) {
        const std::vector<double> signals = cv.sample_signals(rs);
        RandomStream rs_a = rs.derive(1000 + static_cast<std::uint64_t>(i));
        RandomStream rs_b = rs_a;
        const ClockResult clock =
            run_english_clock(cv, lin, c, signals, step, rs_a);
        const AuctionOutcome direct =
            english_payment_direct(cv, lin, c, signals, rs_b);
        f.expect(std::abs(clock.outcome.payment - direct.payment) <= step,
                 "clock payment within one step of the direct rule");
      }
      const std::vector<double> same{0.5, 0.5, 0.5};
      RandomStream rs_c = rs.derive(99);
      const ClockResult clock = run_english_clock(cv, lin, c, same, step, rs_c);
      f.expect(clock.drop_prices.back() - clock.drop_prices.front() <= step,
               "equal signals must quit together");
    }
  });

  s.check("auctions.english_monotone_paired", [&](Failures& f) {
    const InfoModel cv = InfoModel::common_value_avg(3);
    RandomStream rs(s.seed(), 64);
    const std::int64_t n = s.fast() ? 4000 : 50000;
    const std::vector<SharingContract> cs{
        SharingContract::posc(0.2), SharingContract::posc(0.5),
        SharingContract::plsc(0.2), SharingContract::plsc(0.5)};
    const PairedComparison cmp = compare_contracts_paired(
        cv, lin, cs, AuctionFormat::english, n, rs);
    auto diff = [&](std::size_t i, std::size_t j) {
      for (const PairedDiff& d : cmp.diffs) {
        if (d.first == i && d.second == j) return d;
      }
      throw std::logic_error("missing pair");
    };
    f.expect(diff(0, 1).mean_diff >= -3.0 * diff(0, 1).stderr_,
             "profit-only total must not fall in the share");
    f.expect(diff(2, 3).mean_diff >= 3.0 * diff(2, 3).stderr_,
             "profit-and-loss total must rise in the share");
    f.expect(diff(0, 2).mean_diff >= -3.0 * diff(0, 2).stderr_,
             "profit-and-loss dominates at 0.2");
    f.expect(diff(1, 3).mean_diff >= -3.0 * diff(1, 3).stderr_,
             "profit-and-loss dominates at 0.5");
  });

  s.check("auctions.english_vs_sp_ranking", [&](Failures& f) {
    const InfoModel cv = InfoModel::common_value_avg(3);
    RandomStream rs(s.seed(), 65);
    const std::int64_t n = s.fast() ? 10000 : 100000;
    for (double alpha : {0.25, 0.5}) {
      const PairedEstimate est = compare_formats_paired(
          cv, lin, SharingContract::plsc(alpha), n, rs);
      f.expect(est.mean_diff >= -3.0 * est.stderr_,
               "ascending format must not fall below the sealed format");
    }
  });
}

// ---------------------------------------------------------------------------
// principal agent

void check_principal_agent(Suite& s) {
  const InfoModel m2 = InfoModel::example2_pa();
  const Utility lin = Utility::linear();

  s.check("pa.effort_formulas", [&](Failures& f) {
    const CostFunction c1 = CostFunction::quadratic(1.0);
    f.expect_near(optimal_effort_plsc(c1, 0.0), 0.5, 1e-12, "base effort");
    f.expect_near(optimal_effort_plsc(c1, 0.5), 0.25, 1e-12, "halved incentive");
    f.expect_near(effort_gain(c1, 0.0), 0.25, 1e-12, "base gain");
    f.expect_near(effort_gain(c1, 0.5), 0.0625, 1e-12, "halved gain");
    const CostFunction c2 = CostFunction::quadratic(2.0);
    f.expect(optimal_effort_plsc(c2, 0.999) < 1e-3, "vanishing incentive");
    double prev_e = 1e9, prev_k = 1e9;
    for (double a : linspace(0.0, 0.95, 20)) {
      const double e = optimal_effort_plsc(c1, a);
      const double k = effort_gain(c1, a);
      f.expect(e <= prev_e + 1e-12, "effort nonincreasing in the share");
      f.expect(k <= prev_k + 1e-12, "gain nonincreasing in the share");
      f.expect(k >= 0.0, "gain nonnegative");
      prev_e = e;
      prev_k = k;
    }
  });

  s.check("pa.bid_closed_form", [&](Failures& f) {
    const CostFunction c1 = CostFunction::quadratic(1.0);
    f.expect_near(bid_plsc_pa(m2, lin, c1, 0.5, 0.4, 0.4), 0.525, 1e-9,
                  "mid bid");
    f.expect_near(bid_plsc_pa(m2, lin, c1, 0.0, 0.6, 0.2), 0.65, 1e-9,
                  "no-sharing bid");
    for (double g : {0.5, 1.0, 2.0}) {
      const CostFunction c = CostFunction::quadratic(g);
      for (double a : {0.0, 0.3, 0.7}) {
        for (double y : {0.2, 0.8}) {
          f.expect_near(bid_plsc_pa(m2, lin, c, a, y, y),
                        y + (1.0 - a) / (4.0 * g), 1e-9, "diagonal formula");
        }
      }
    }
  });

  s.check("pa.revenue_closed_form", [&](Failures& f) {
    f.expect_near(revenue_plsc_pa_closed_form_example2(1.0, 0.0).total,
                  1.0 / 3.0 + 0.25, 1e-12, "no-sharing revenue");
    f.expect_near(revenue_plsc_pa_closed_form_example2(1.0, 1.0 / 3.0).total,
                  11.0 / 18.0, 1e-12, "peak revenue");
    double best_a = 0.0, best_r = -1.0;
    for (double a = 0.0; a < 0.995; a += 0.01) {
      const double r = revenue_plsc_pa_closed_form_example2(1.0, a).total;
      if (r > best_r) {
        best_r = r;
        best_a = a;
      }
    }
    f.expect(std::abs(best_a - 1.0 / 3.0) <= 0.01, "grid peak near one third");
  });

  s.check("pa.revenue_mc_agreement", [&](Failures& f) {
    RandomStream rs(s.seed(), 71);
    const std::int64_t n = s.fast() ? 20000 : 100000;
    const auto gammas = s.fast() ? std::vector<double>{0.5, 1.0}
                                 : std::vector<double>{0.25, 0.5, 1.0, 2.0, 4.0};
    const auto alphas = s.fast() ? std::vector<double>{0.0, 0.5}
                                 : std::vector<double>{0.0, 0.2, 0.4, 0.6, 0.8};
    for (double g : gammas) {
      const CostFunction cost = CostFunction::quadratic(g);
      for (double a : alphas) {
        const RevenueBreakdown mc = revenue_plsc_pa(m2, lin, cost, a, n, rs);
        const RevenueBreakdown cf = revenue_plsc_pa_closed_form_example2(g, a);
        f.expect(std::abs(mc.total - cf.total) <= 3.0 * mc.stderr_total,
                 "sampled revenue within three standard errors");
      }
    }
  });

  s.check("pa.derivative_at_zero", [&](Failures& f) {
    auto closed = [](double a) {
      return revenue_plsc_pa_closed_form_example2(1.0, a).total;
    };
    f.expect_near(derivative_at_zero(closed, 1e-3), 1.0 / 6.0, 1e-3,
                  "closed-form slope");
    auto quadratic_curve = [](double a) { return 2.0 + 3.0 * a - 5.0 * a * a; };
    f.expect_near(derivative_at_zero(quadratic_curve, 1e-9), 3.0, 1e-6,
                  "linear coefficient");
    RandomStream rs(s.seed(), 72);
    const std::int64_t n = s.fast() ? 100000 : 1000000;
    const CostFunction cost = CostFunction::quadratic(1.0);
    const double h = 0.05;
    const PairedEstimate est = pa_paired_diff(
        m2, make_plsc_pa_mechanism(m2, lin, cost, 0.0),
        make_plsc_pa_mechanism(m2, lin, cost, h), n, rs);
    f.expect(est.t_stat > 3.0, "sampled slope at zero must be positive");
    const Utility cara = Utility::cara(1.0, 1.0);
    const PairedEstimate est_ra = pa_paired_diff(
        m2, make_plsc_pa_mechanism(m2, cara, cost, 0.0),
        make_plsc_pa_mechanism(m2, cara, cost, h), n, rs);
    f.expect(est_ra.t_stat > 3.0, "positive under risk aversion as well");
  });

  s.check("pa.posc_effort_policy", [&](Failures& f) {
    f.expect_near(optimal_effort_posc_expost(1.0, 0.5, 0.0), 0.25, 0.0,
                  "interior branch");
    f.expect_near(optimal_effort_posc_expost(1.0, 0.5, -0.3), 0.3, 0.0,
                  "loss-offset branch");
    f.expect_near(optimal_effort_posc_expost(1.0, 0.5, -0.8), 0.5, 0.0,
                  "deep-loss branch");
    for (double g : {0.25, 1.0, 4.0}) {
      const CostFunction cost = CostFunction::quadratic(g);
      for (double a : linspace(0.0, 0.9, 7)) {
        const double plsc_e = optimal_effort_plsc(cost, a);
        double prev_pi = -1e18;
        for (double w : linspace(-2.0, 2.0, 81)) {
          f.expect(optimal_effort_posc_expost(g, a, w) >= plsc_e - 1e-12,
                   "profit-only effort dominates");
          const double pi = max_profit_posc_pa(g, a, w);
          f.expect(pi > prev_pi, "winner profit increasing in w");
          f.expect(pi >= w - a * std::max(0.0, w) - 1e-12,
                   "doing nothing is always feasible");
          prev_pi = pi;
        }
      }
    }
    f.expect_near(max_profit_posc_pa(1.0, 0.5, 0.0), 0.0625, 1e-15,
                  "profit at zero");
    f.expect_near(max_profit_posc_pa(1.0, 0.5, -0.3), -0.09, 1e-15,
                  "profit under loss offset");
  });

  s.check("pa.posc_bid", [&](Failures& f) {
    const CostFunction c1 = CostFunction::quadratic(1.0);
    for (double y : {0.2, 0.5, 0.9}) {
      f.expect_near(bid_posc_pa(m2, 1.0, 0.0, y, y),
                    bid_plsc_pa(m2, lin, c1, 0.0, y, y), 1e-8,
                    "mechanisms coincide with no sharing");
    }
    const double b = bid_posc_pa(m2, 1.0, 0.5, 0.4, 0.4);
    f.expect(b > 0.0, "bid positive");
    auto residual = [&](double bid) {
      Integrand g;
      g.fn = [bid](double x) { return max_profit_posc_pa(1.0, 0.5, x - bid); };
      g.kinks = {bid - 0.5, bid - 0.25};
      return m2.cond_expect_pair(g, 0.4, 0.4);
    };
    f.expect(std::abs(residual(b)) < 1e-10, "root residual");
    // With a steep cost the effort channel closes and the plain profit-only
    // bid reappears.
    f.expect_near(bid_posc_pa(m2, 100.0, 0.5, 0.4, 0.4),
                  bid_posc_sp(m2, lin, 0.5, 0.4, 0.4), 1e-2,
                  "steep-cost limit");
  });

  s.check("pa.posc_revenue", [&](Failures& f) {
    RandomStream rs(s.seed(), 73);
    const std::int64_t n = s.fast() ? 100000 : 1000000;
    const CostFunction c1 = CostFunction::quadratic(1.0);
    const PairedEstimate at_zero = pa_paired_diff(
        m2, make_plsc_pa_mechanism(m2, lin, c1, 0.0),
        make_posc_pa_mechanism(m2, 1.0, 0.0), n / 10, rs);
    f.expect(std::abs(at_zero.mean_diff) <= 3.0 * at_zero.stderr_ + 1e-9,
             "identical mechanisms with no sharing");
    const PairedEstimate gain = pa_paired_diff(
        m2, make_posc_pa_mechanism(m2, 1.0, 0.0),
        make_posc_pa_mechanism(m2, 1.0, 0.3), n, rs);
    f.expect(gain.t_stat > 3.0, "a small share must beat the one-time rule");
  });

  s.check("pa.posc_interior_argmax", [&](Failures& f) {
    // Paired differences against the one-time rule resolve the shallow peak.
    RandomStream rs(s.seed(), 74);
    const std::int64_t n = s.fast() ? 20000 : 100000;
    const PaMechanism base = make_posc_pa_mechanism(m2, 0.25, 0.0);
    double best_a = 0.0, best_d = 0.0, best_se = 0.0, top_d = 0.0;
    for (double a = 0.05; a < 0.95; a += 0.05) {
      const PairedEstimate d =
          pa_paired_diff(m2, base, make_posc_pa_mechanism(m2, 0.25, a), n, rs);
      if (d.mean_diff > best_d) {
        best_d = d.mean_diff;
        best_a = a;
        best_se = d.stderr_;
      }
      top_d = d.mean_diff;
    }
    f.expect(best_d > 3.0 * best_se,
             "some small share must beat the one-time rule");
    f.expect(best_a < 0.949, "peak share strictly inside the grid");
    f.expect(top_d < best_d, "revenue must decline past the peak");
  });

  s.check("pa.ranking_reversal", [&](Failures& f) {
    RandomStream rs(s.seed(), 75);
    const std::int64_t n = s.fast() ? 30000 : 200000;
    const CostFunction c = CostFunction::quadratic(0.25);
    bool reversed = false;
    for (double a : {0.5, 0.65, 0.8}) {
      const PairedEstimate est = pa_paired_diff(
          m2, make_plsc_pa_mechanism(m2, lin, c, a),
          make_posc_pa_mechanism(m2, 0.25, a), n, rs);
      if (est.t_stat > 3.0) reversed = true;
    }
    f.expect(reversed,
             "cheap effort must let profit-only sharing overtake somewhere");
  });
}

// ---------------------------------------------------------------------------
// experiment driver

void check_experiment(Suite& s) {
  s.check("cli.csv_schema", [&](Failures& f) {
    f.expect(std::string(kSweepCsvHeader) ==
                 "contract,alpha,format,stage1,stage2,total,stderr,n,estimator",
             "header is pinned");
  });

  s.check("cli.determinism", [&](Failures& f) {
    ExperimentConfig cfg;
    cfg.model_name = "example1";
    cfg.contracts.push_back({"posc", std::nullopt, {}, {}});
    cfg.contracts.push_back({"plsc", std::nullopt, {}, {}});
    cfg.alpha_grid = {0.0, 0.5};
    cfg.n_samples = 4000;
    cfg.seed = s.seed();
    const std::string csv1 = rows_to_csv(sweep_alpha(cfg));
    const std::string csv2 = rows_to_csv(sweep_alpha(cfg));
    f.expect(csv1 == csv2, "identical config and seed must give identical bytes");
  });

  s.check("cli.closed_vs_mc", [&](Failures& f) {
    ExperimentConfig cfg;
    cfg.model_name = "example1";
    cfg.contracts.push_back({"posc", std::nullopt, {}, {}});
    cfg.contracts.push_back({"plsc", std::nullopt, {}, {}});
    cfg.alpha_grid = {0.25, 0.5};
    cfg.n_samples = s.fast() ? 20000 : 200000;
    cfg.seed = s.seed();
    const std::vector<SweepRow> rows = sweep_alpha(cfg);
    for (const SweepRow& mc : rows) {
      if (mc.estimator != "mc") continue;
      for (const SweepRow& cf : rows) {
        if (cf.estimator == "closed_form" && cf.contract == mc.contract &&
            cf.alpha == mc.alpha) {
          f.expect(std::abs(mc.total - cf.total) <= 3.0 * mc.stderr_,
                   "sampled cell within three standard errors");
        }
      }
    }
  });

  s.check("cli.pa_argmax", [&](Failures& f) {
    ExperimentConfig cfg;
    cfg.model_name = "example2_pa";
    cfg.contracts.push_back({"plsc", std::nullopt, {}, {}});
    ExperimentConfig::PaBlock pa;
    pa.gamma = 1.0;
    cfg.pa = pa;
    for (double a = 0.0; a < 0.9; a += 0.02) cfg.alpha_grid.push_back(a);
    cfg.n_samples = 2000;
    cfg.seed = s.seed();
    const std::vector<SweepRow> rows = pa_sweep(cfg);
    double best_a = -1.0, best_r = -1e18;
    for (const SweepRow& r : rows) {
      if (r.estimator == "closed_form" && r.total > best_r) {
        best_r = r.total;
        best_a = r.alpha;
      }
    }
    f.expect(std::abs(best_a - 1.0 / 3.0) <= 0.02, "closed-form peak near 1/3");
  });
}

}  // namespace

VerifyReport verify_suite(const VerifyOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  Suite s(options);
  check_numerics(s);
  check_info_model(s);
  check_preferences(s);
  check_contracts(s);
  check_equilibrium(s);
  check_auctions(s);
  check_principal_agent(s);
  check_experiment(s);
  const auto t1 = std::chrono::steady_clock::now();
  s.report.wall_seconds = std::chrono::duration<double>(t1 - t0).count();
  return s.report;
}

void print_report(const VerifyReport& report, std::ostream& out) {
  int passed = 0;
  for (const VerifyLine& l : report.lines) {
    out << (l.pass ? "PASS" : "FAIL") << "  " << l.name;
    if (!l.pass && !l.detail.empty()) out << "  (" << l.detail << ")";
    out << "\n";
    if (l.pass) ++passed;
  }
  out << passed << "/" << report.lines.size() << " checks passed in "
      << report.wall_seconds << " s\n";
}

}  // namespace psauction
