#include "psauction/utility.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace psauction {

Utility Utility::linear() {
  Utility u;
  u.kind_ = Kind::linear;
  return u;
}

Utility Utility::cara(double scale, double aversion) {
  if (!(scale > 0.0) || !(aversion > 0.0)) {
    throw std::invalid_argument("cara utility requires positive scale and aversion");
  }
  Utility u;
  u.kind_ = Kind::cara;
  u.scale_ = scale;
  u.aversion_ = aversion;
  return u;
}

Utility Utility::custom(std::vector<double> money, std::vector<double> value) {
  if (money.size() != value.size() || money.size() < 2) {
    throw std::invalid_argument("custom utility needs at least two table rows");
  }
  for (std::size_t i = 0; i + 1 < money.size(); ++i) {
    if (!(money[i] < money[i + 1])) {
      throw std::invalid_argument("custom utility money column must be strictly increasing");
    }
    if (!(value[i] < value[i + 1])) {
      throw std::invalid_argument("custom utility must be strictly increasing");
    }
  }
  // Chord slopes must be nonincreasing for concavity.
  for (std::size_t i = 0; i + 2 < money.size(); ++i) {
    const double s0 = (value[i + 1] - value[i]) / (money[i + 1] - money[i]);
    const double s1 = (value[i + 2] - value[i + 1]) / (money[i + 2] - money[i + 1]);
    if (s1 > s0 + 1e-12) {
      throw std::invalid_argument("custom utility table is not concave");
    }
  }
  if (money.front() > 0.0 || money.back() < 0.0) {
    throw std::invalid_argument("custom utility table must cover x = 0");
  }
  Utility u;
  u.kind_ = Kind::custom;
  u.money_ = std::move(money);
  u.value_ = std::move(value);
  if (std::abs(u(0.0)) > 1e-12) {
    throw std::invalid_argument("custom utility must satisfy u(0) = 0");
  }
  return u;
}

double Utility::operator()(double x) const {
  switch (kind_) {
    case Kind::linear:
      return x;
    case Kind::cara:
      return scale_ * (1.0 - std::exp(-aversion_ * x));
    case Kind::custom: {
      if (x <= money_.front()) {
        const double s = (value_[1] - value_[0]) / (money_[1] - money_[0]);
        return value_.front() + s * (x - money_.front());
      }
      if (x >= money_.back()) {
        const std::size_t m = money_.size();
        const double s =
            (value_[m - 1] - value_[m - 2]) / (money_[m - 1] - money_[m - 2]);
        return value_.back() + s * (x - money_.back());
      }
      const auto it = std::upper_bound(money_.begin(), money_.end(), x);
      const std::size_t hi = static_cast<std::size_t>(it - money_.begin());
      const std::size_t lo = hi - 1;
      const double t = (x - money_[lo]) / (money_[hi] - money_[lo]);
      return value_[lo] + t * (value_[hi] - value_[lo]);
    }
  }
  return x;
}

bool Utility::strictly_concave() const {
  switch (kind_) {
    case Kind::linear:
      return false;
    case Kind::cara:
      return true;
    case Kind::custom: {
      for (std::size_t i = 0; i + 2 < money_.size(); ++i) {
        const double s0 = (value_[i + 1] - value_[i]) / (money_[i + 1] - money_[i]);
        const double s1 =
            (value_[i + 2] - value_[i + 1]) / (money_[i + 2] - money_[i + 1]);
        if (s1 < s0 - 1e-12) return true;
      }
      return false;
    }
  }
  return false;
}

UtilityCheckReport Utility::verify(std::span<const double> grid) const {
  UtilityCheckReport report;
  auto flag = [&report](const std::string& what) {
    report.ok = false;
    report.violations.push_back(what);
  };

  if (std::abs((*this)(0.0)) > 1e-12) flag("u(0) != 0");
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    if (!((*this)(grid[i + 1]) > (*this)(grid[i]))) {
      std::ostringstream msg;
      msg << "not increasing between x=" << grid[i] << " and x=" << grid[i + 1];
      flag(msg.str());
    }
  }
  for (std::size_t i = 0; i + 2 < grid.size(); ++i) {
    const double x0 = grid[i], x1 = grid[i + 1], x2 = grid[i + 2];
    const double chord =
        (*this)(x0) + ((*this)(x2) - (*this)(x0)) * (x1 - x0) / (x2 - x0);
    if ((*this)(x1) < chord - 1e-12) {
      std::ostringstream msg;
      msg << "convex kink near x=" << x1;
      flag(msg.str());
    }
  }
  return report;
}

UtilityCheckReport verify_utility_table(std::span<const double> money,
                                        std::span<const double> value,
                                        std::span<const double> grid) {
  Utility u;
  u.kind_ = Utility::Kind::custom;
  u.money_.assign(money.begin(), money.end());
  u.value_.assign(value.begin(), value.end());
  return u.verify(grid);
}

std::string Utility::describe() const {
  switch (kind_) {
    case Kind::linear:
      return "linear";
    case Kind::cara: {
      std::ostringstream s;
      s << "cara(" << scale_ << "," << aversion_ << ")";
      return s.str();
    }
    case Kind::custom:
      return "custom[" + std::to_string(money_.size()) + " rows]";
  }
  return "?";
}

}  // namespace psauction
