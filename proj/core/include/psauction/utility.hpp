#pragma once

#include <span>
#include <string>
#include <vector>

namespace psauction {

struct UtilityCheckReport {
  bool ok = true;
  std::vector<std::string> violations;
};

// von Neumann-Morgenstern money utility: concave, increasing, u(0) = 0.
class Utility {
 public:
  enum class Kind { linear, cara, custom };

  static Utility linear();
  // u(x) = A (1 - exp(-c x)), A > 0, c > 0.
  static Utility cara(double scale, double aversion);
  // Tabulated concave increasing function through (money, value) pairs;
  // interpolated linearly and extended beyond the table with the end slopes.
  // Concavity, monotonicity and u(0) = 0 are enforced at construction.
  static Utility custom(std::vector<double> money, std::vector<double> value);

  double operator()(double x) const;

  Kind kind() const { return kind_; }
  bool is_linear() const { return kind_ == Kind::linear; }
  bool strictly_concave() const;
  double cara_scale() const { return scale_; }
  double cara_aversion() const { return aversion_; }

  // Table abscissas for custom utilities (slope kinks); empty otherwise.
  std::span<const double> table_money() const { return money_; }

  // Grid check of u(0) = 0, strict increase, and chord concavity.
  UtilityCheckReport verify(std::span<const double> grid) const;

  std::string describe() const;

 private:
  friend UtilityCheckReport verify_utility_table(std::span<const double>,
                                                 std::span<const double>,
                                                 std::span<const double>);
  Utility() = default;

  Kind kind_ = Kind::linear;
  double scale_ = 0.0;
  double aversion_ = 0.0;
  std::vector<double> money_;
  std::vector<double> value_;
};

// Runs the same grid checks against a raw table without the load-time
// validation, so rejected candidates can still be reported on.
UtilityCheckReport verify_utility_table(std::span<const double> money,
                                        std::span<const double> value,
                                        std::span<const double> grid);

}  // namespace psauction
