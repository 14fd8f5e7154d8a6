#include "psauction/info_model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <sstream>

#include "psauction/errors.hpp"
#include "psauction/numerics.hpp"

namespace psauction {

std::vector<double> order_stats_desc(std::span<const double> signals,
                                     std::size_t self) {
  std::vector<double> z;
  z.reserve(signals.size() - 1);
  for (std::size_t i = 0; i < signals.size(); ++i) {
    if (i != self) z.push_back(signals[i]);
  }
  std::sort(z.begin(), z.end(), std::greater<>());
  return z;
}

namespace {

// Mean of g over uniform[0, m]; g(0) in the degenerate case.
double uniform_mean(const Integrand& g, double m) {
  if (m <= 0.0) return g.fn(0.0);
  return integrate_piecewise(g.fn, 0.0, m, g.kinks) / m;
}

// Density of the sum of k iid uniform(0,1) variables.
double irwin_hall_pdf(int k, double s) {
  if (s <= 0.0 || s >= k) return 0.0;
  double fact = 1.0;
  for (int i = 2; i < k; ++i) fact *= i;  // (k-1)!
  double acc = 0.0;
  double binom = 1.0;  // C(k, j)
  const int jmax = static_cast<int>(std::floor(s));
  for (int j = 0; j <= jmax; ++j) {
    const double term = binom * std::pow(s - j, k - 1);
    acc += (j % 2 == 0) ? term : -term;
    binom *= static_cast<double>(k - j) / (j + 1);
  }
  return acc / fact;
}

}  // namespace

InfoModel InfoModel::example1() {
  CustomSpec spec;
  spec.name = "example1";
  spec.n_buyers = 2;
  spec.signal_interval = {0.0, 1.0};
  spec.value_interval = {0.0, 1.0};
  spec.signal_sampler = [](RandomStream& rs, std::span<double> out) {
    for (double& y : out) y = rs.next_double();
  };
  spec.value_sampler = [](std::span<const double> y, RandomStream& rs) {
    const double p = (2.0 * y[0] + y[1]) / 3.0;
    return rs.bernoulli(p) ? 1.0 : 0.0;
  };
  spec.pair_oracle = [](const Integrand& g, double y1, double z1) {
    const double p = (2.0 * y1 + z1) / 3.0;
    return p * g.fn(1.0) + (1.0 - p) * g.fn(0.0);
  };
  return InfoModel(std::move(spec));
}

InfoModel InfoModel::example2_pa() {
  CustomSpec spec;
  spec.name = "example2_pa";
  spec.n_buyers = 2;
  spec.signal_interval = {0.0, 1.0};
  spec.value_interval = {0.0, 2.0};
  spec.signal_sampler = [](RandomStream& rs, std::span<double> out) {
    for (double& y : out) y = rs.next_double();
  };
  spec.value_sampler = [](std::span<const double> y, RandomStream& rs) {
    return rs.uniform(0.0, y[0] + y[1]);
  };
  spec.pair_oracle = [](const Integrand& g, double y1, double z1) {
    return uniform_mean(g, y1 + z1);
  };
  return InfoModel(std::move(spec));
}

InfoModel InfoModel::common_value_avg(int n_buyers) {
  if (n_buyers < 2) throw std::invalid_argument("need at least two buyers");
  CustomSpec spec;
  spec.name = "common_value_avg(" + std::to_string(n_buyers) + ")";
  spec.n_buyers = n_buyers;
  spec.signal_interval = {0.0, 1.0};
  spec.value_interval = {0.0, 1.0};
  spec.signal_sampler = [](RandomStream& rs, std::span<double> out) {
    for (double& y : out) y = rs.next_double();
  };
  spec.value_sampler = [n_buyers](std::span<const double> y, RandomStream&) {
    double acc = 0.0;
    for (double v : y) acc += v;
    return acc / n_buyers;
  };
  const int n = n_buyers;
  spec.pair_oracle = [n](const Integrand& g, double y1, double z1) {
    const int k = n - 2;  // opponents below the highest one
    if (k == 0 || z1 <= 0.0) return g.fn((y1 + z1 * (k + 1)) / n);
    // Those k signals are iid uniform(0, z1); their sum is z1 * IrwinHall(k).
    std::vector<double> kinks;
    for (int j = 1; j < k; ++j) kinks.push_back(static_cast<double>(j));
    for (double xk : g.kinks) {
      const double s = (n * xk - y1 - z1) / z1;
      if (s > 0.0 && s < k) kinks.push_back(s);
    }
    auto integrand = [&](double s) {
      return g.fn((y1 + z1 + z1 * s) / n) * irwin_hall_pdf(k, s);
    };
    return integrate_piecewise(integrand, 0.0, static_cast<double>(k), kinks);
  };
  spec.full_oracle = [n](const Integrand& g, double y1,
                         std::span<const double> z) {
    double acc = y1;
    for (double v : z) acc += v;
    return g.fn(acc / n);
  };
  return InfoModel(std::move(spec));
}

InfoModel InfoModel::private_values(int n_buyers) {
  if (n_buyers < 2) throw std::invalid_argument("need at least two buyers");
  CustomSpec spec;
  spec.name = "private_values(" + std::to_string(n_buyers) + ")";
  spec.n_buyers = n_buyers;
  spec.signal_interval = {0.0, 1.0};
  spec.value_interval = {0.0, 2.0};
  spec.signal_sampler = [](RandomStream& rs, std::span<double> out) {
    for (double& y : out) y = rs.next_double();
  };
  spec.value_sampler = [](std::span<const double> y, RandomStream& rs) {
    return rs.uniform(0.0, 2.0 * y[0]);
  };
  spec.pair_oracle = [](const Integrand& g, double y1, double /*z1*/) {
    return uniform_mean(g, 2.0 * y1);
  };
  spec.full_oracle = [](const Integrand& g, double y1,
                        std::span<const double> /*z*/) {
    return uniform_mean(g, 2.0 * y1);
  };
  return InfoModel(std::move(spec));
}

InfoModel InfoModel::custom(CustomSpec spec) {
  if (spec.n_buyers < 2) throw std::invalid_argument("need at least two buyers");
  return InfoModel(std::move(spec));
}

InfoModel InfoModel::with_monte_carlo_oracles(long n_inner) const {
  InfoModel copy = *this;
  copy.oracle_kind_ = OracleKind::monte_carlo;
  copy.n_inner_ = n_inner;
  return copy;
}

void InfoModel::sample_signals(RandomStream& rs, std::span<double> out) const {
  spec_.signal_sampler(rs, out);
}

std::vector<double> InfoModel::sample_signals(RandomStream& rs) const {
  std::vector<double> y(static_cast<std::size_t>(spec_.n_buyers));
  sample_signals(rs, y);
  return y;
}

double InfoModel::sample_value(std::span<const double> signals,
                               RandomStream& rs) const {
  return spec_.value_sampler(signals, rs);
}

namespace {

// Deterministic stream for oracle-internal sampling so that a Monte Carlo
// oracle is a pure function of its arguments.
RandomStream oracle_stream(double y1, std::span<const double> z) {
  std::uint64_t h = splitmix64(std::bit_cast<std::uint64_t>(y1));
  for (double v : z) h = splitmix64(h ^ std::bit_cast<std::uint64_t>(v));
  return RandomStream(0x9C0FFEE1u, h);
}

}  // namespace

double InfoModel::cond_expect_pair(const Integrand& g, double y1,
                                   double z1) const {
  if (oracle_kind_ == OracleKind::closed_form) {
    if (!spec_.pair_oracle) {
      throw OracleUnavailable("model '" + spec_.name +
                              "' has no closed-form pair oracle");
    }
    return spec_.pair_oracle(g, y1, z1);
  }
  RandomStream rs = oracle_stream(y1, {&z1, 1});
  return cond_expect_pair_mc(g, y1, z1, n_inner_, rs).mean;
}

double InfoModel::cond_expect_full(const Integrand& g, double y1,
                                   std::span<const double> z_desc) const {
  if (spec_.n_buyers == 2 && !spec_.full_oracle) {
    return cond_expect_pair(g, y1, z_desc[0]);
  }
  if (oracle_kind_ == OracleKind::closed_form) {
    if (!spec_.full_oracle) {
      throw OracleUnavailable("model '" + spec_.name +
                              "' has no closed-form full oracle");
    }
    return spec_.full_oracle(g, y1, z_desc);
  }
  RandomStream rs = oracle_stream(y1, z_desc);
  return cond_expect_full_mc(g, y1, z_desc, n_inner_, rs).mean;
}

McEstimate InfoModel::cond_expect_pair_mc(const Integrand& g, double y1,
                                          double z1, long n_inner,
                                          RandomStream& rs) const {
  if (!spec_.value_sampler || !spec_.signals_iid_uniform) {
    throw OracleUnavailable("model '" + spec_.name +
                            "' has no conditional sampler for the pair oracle");
  }
  const int n = spec_.n_buyers;
  std::vector<double> y(static_cast<std::size_t>(n));
  y[0] = y1;
  y[1] = z1;  // one opponent pinned at the conditioning value
  double acc = 0.0, acc2 = 0.0;
  for (long i = 0; i < n_inner; ++i) {
    for (int j = 2; j < n; ++j) {
      y[static_cast<std::size_t>(j)] = rs.uniform(spec_.signal_interval.lo, z1);
    }
    const double v = g.fn(spec_.value_sampler(y, rs));
    acc += v;
    acc2 += v * v;
  }
  const double mean = acc / static_cast<double>(n_inner);
  const double var =
      std::max(0.0, acc2 / static_cast<double>(n_inner) - mean * mean);
  return {mean, std::sqrt(var / static_cast<double>(n_inner))};
}

McEstimate InfoModel::cond_expect_full_mc(const Integrand& g, double y1,
                                          std::span<const double> z_desc,
                                          long n_inner, RandomStream& rs) const {
  if (!spec_.value_sampler) {
    throw OracleUnavailable("model '" + spec_.name + "' has no value sampler");
  }
  std::vector<double> y;
  y.reserve(z_desc.size() + 1);
  y.push_back(y1);
  y.insert(y.end(), z_desc.begin(), z_desc.end());
  double acc = 0.0, acc2 = 0.0;
  for (long i = 0; i < n_inner; ++i) {
    const double v = g.fn(spec_.value_sampler(y, rs));
    acc += v;
    acc2 += v * v;
  }
  const double mean = acc / static_cast<double>(n_inner);
  const double var =
      std::max(0.0, acc2 / static_cast<double>(n_inner) - mean * mean);
  return {mean, std::sqrt(var / static_cast<double>(n_inner))};
}

double InfoModel::expected_value_pair(double y1, double z1) const {
  return cond_expect_pair({[](double x) { return x; }}, y1, z1);
}

double InfoModel::expected_value_full(double y1,
                                      std::span<const double> z_desc) const {
  return cond_expect_full({[](double x) { return x; }}, y1, z_desc);
}

DependenceReport InfoModel::check_positive_dependence(
    int grid_resolution) const {
  DependenceReport report;
  const Interval sig = spec_.signal_interval;
  const Interval val = spec_.value_interval;

  std::vector<std::pair<std::string, Integrand>> tests;
  tests.emplace_back("identity", Integrand{[](double x) { return x; }});
  for (int q = 1; q <= 3; ++q) {
    const double c = val.lo + 0.25 * q * val.width();
    std::ostringstream name;
    name << "min(x," << c << ")";
    tests.emplace_back(name.str(),
                       Integrand{[c](double x) { return std::min(x, c); }, {c}});
  }

  std::vector<double> grid(static_cast<std::size_t>(grid_resolution));
  for (int i = 0; i < grid_resolution; ++i) {
    grid[static_cast<std::size_t>(i)] =
        sig.lo + (i + 0.5) * sig.width() / grid_resolution;
  }
  {
    std::ostringstream line;
    line << grid_resolution << "x" << grid_resolution
         << " grid over the signal interval, " << tests.size()
         << " increasing test functions";
    report.checks.push_back(line.str());
  }

  // Closed-form oracles are compared at solver precision; Monte Carlo oracles
  // get a 3-sigma allowance for the noise of a difference of two estimates.
  const double tol =
      oracle_kind_ == OracleKind::closed_form
          ? 1e-9
          : 3.0 * std::numbers::sqrt2 * 0.5 * val.width() /
                std::sqrt(static_cast<double>(n_inner_));
  for (const auto& [name, g] : tests) {
    std::vector<std::vector<double>> m(grid.size(),
                                       std::vector<double>(grid.size()));
    for (std::size_t i = 0; i < grid.size(); ++i) {
      for (std::size_t j = 0; j < grid.size(); ++j) {
        m[i][j] = cond_expect_pair(g, grid[i], grid[j]);
      }
    }
    for (std::size_t j = 0; j < grid.size(); ++j) {
      for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        if (m[i + 1][j] <= m[i][j] - tol) {
          std::ostringstream msg;
          msg << name << " not increasing in y1 at (y1=" << grid[i]
              << ", z1=" << grid[j] << ")";
          report.ok = false;
          report.violations.push_back(msg.str());
        }
      }
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
      for (std::size_t j = 0; j + 1 < grid.size(); ++j) {
        if (m[i][j + 1] < m[i][j] - tol) {
          std::ostringstream msg;
          msg << name << " decreasing in z1 at (y1=" << grid[i]
              << ", z1=" << grid[j] << ")";
          report.ok = false;
          report.violations.push_back(msg.str());
        }
      }
    }
  }
  return report;
}

}  // namespace psauction
