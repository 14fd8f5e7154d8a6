#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "psauction/random.hpp"

namespace psauction {

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
  double width() const { return hi - lo; }
  bool contains(double x) const { return x >= lo && x <= hi; }
};

// Test function for a conditional expectation, with the locations where it
// changes slope so the oracle can integrate each smooth piece exactly.
struct Integrand {
  std::function<double(double)> fn;
  std::vector<double> kinks{};
};

struct McEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
};

struct DependenceReport {
  bool ok = true;
  std::vector<std::string> violations;
  // Which test functions and grids the check used (the check is necessarily
  // partial; this records its extent).
  std::vector<std::string> checks;
};

enum class OracleKind { closed_form, monte_carlo };

// Descending order statistics of the opponents of `self`.
std::vector<double> order_stats_desc(std::span<const double> signals,
                                     std::size_t self);

// Symmetric interdependent-values information structure: the joint law of the
// buyers' signals Y and the value X of the resource to a given buyer, plus
// the conditional-expectation oracles every indifference equation consumes.
//
// Oracle conventions: the conditioned buyer's own signal is y1; z1 is the
// highest opponent signal; z is the full vector of opponent signals sorted
// descending. Conditioning on the highest opponent signal pins one opponent
// at z1 and truncates the rest below z1, which is exact for the built-in
// models with iid signals.
class InfoModel {
 public:
  struct CustomSpec {
    std::string name;
    int n_buyers = 2;
    Interval signal_interval;
    Interval value_interval;
    // Draws one iid signal profile.
    std::function<void(RandomStream&, std::span<double>)> signal_sampler;
    // Draws X for the buyer whose signal is first in the profile.
    std::function<double(std::span<const double>, RandomStream&)> value_sampler;
    // E[g(X1) | Y1 = y1, Z1 = z1]; may be empty if only sampling is available.
    std::function<double(const Integrand&, double, double)> pair_oracle;
    // E[g(X1) | Y1 = y1, Z = z]; defaults to the pair oracle when N = 2.
    std::function<double(const Integrand&, double, std::span<const double>)>
        full_oracle;
    // Enables the nested Monte Carlo conditioning decomposition.
    bool signals_iid_uniform = true;
  };

  // Two buyers, signals iid uniform(0,1), X1 | y Bernoulli((2 y1 + y2) / 3).
  static InfoModel example1();
  // Two buyers, signals iid uniform[0,1], X1 | y uniform[0, y1 + y2].
  static InfoModel example2_pa();
  // Pure common value: X = mean of all signals, signals iid uniform(0,1).
  static InfoModel common_value_avg(int n_buyers);
  // Independent private values: X_n | y_n uniform[0, 2 y_n].
  static InfoModel private_values(int n_buyers);
  static InfoModel custom(CustomSpec spec);

  const std::string& name() const { return spec_.name; }
  int n_buyers() const { return spec_.n_buyers; }
  Interval signal_interval() const { return spec_.signal_interval; }
  Interval value_interval() const { return spec_.value_interval; }
  OracleKind oracle_kind() const { return oracle_kind_; }
  long mc_inner_samples() const { return n_inner_; }

  // Returns a copy whose default oracles run the nested Monte Carlo path.
  InfoModel with_monte_carlo_oracles(long n_inner) const;

  void sample_signals(RandomStream& rs, std::span<double> out) const;
  std::vector<double> sample_signals(RandomStream& rs) const;
  // X for the buyer whose signal is signals[0].
  double sample_value(std::span<const double> signals, RandomStream& rs) const;

  double cond_expect_pair(const Integrand& g, double y1, double z1) const;
  double cond_expect_full(const Integrand& g, double y1,
                          std::span<const double> z_desc) const;

  McEstimate cond_expect_pair_mc(const Integrand& g, double y1, double z1,
                                 long n_inner, RandomStream& rs) const;
  McEstimate cond_expect_full_mc(const Integrand& g, double y1,
                                 std::span<const double> z_desc, long n_inner,
                                 RandomStream& rs) const;

  // E[X1 | ...], used as root-finding hints and equilibrium bid bounds.
  double expected_value_pair(double y1, double z1) const;
  double expected_value_full(double y1, std::span<const double> z_desc) const;

  // Grid check of the positive-dependence requirement: E[h(X1)|Y1, Z1] must
  // be increasing in y1 and nondecreasing in z1 for increasing h.
  DependenceReport check_positive_dependence(int grid_resolution) const;

 private:
  explicit InfoModel(CustomSpec spec) : spec_(std::move(spec)) {}

  CustomSpec spec_;
  OracleKind oracle_kind_ = OracleKind::closed_form;
  long n_inner_ = 20000;
};

}  // namespace psauction
