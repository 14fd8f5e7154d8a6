#include "psauction/contracts.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace psauction {

SharingContract SharingContract::one_time() { return SharingContract{}; }

SharingContract SharingContract::posc(double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("posc share fraction must lie in [0, 1)");
  }
  SharingContract c;
  c.kind_ = ContractKind::posc;
  c.alpha_ = alpha;
  return c;
}

SharingContract SharingContract::plsc(double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("plsc share fraction must lie in [0, 1)");
  }
  SharingContract c;
  c.kind_ = ContractKind::plsc;
  c.alpha_ = alpha;
  return c;
}

SharingContract SharingContract::general(std::vector<double> breaks,
                                         std::vector<double> values) {
  if (breaks.size() != values.size() || breaks.size() < 2) {
    throw std::invalid_argument("general contract needs at least two breakpoints");
  }
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (!(breaks[i] < breaks[i + 1])) {
      throw std::invalid_argument("contract breakpoints must be strictly increasing");
    }
  }
  SharingContract c;
  c.kind_ = ContractKind::general;
  c.breaks_ = std::move(breaks);
  c.values_ = std::move(values);
  return c;
}

double SharingContract::payment(double w) const {
  switch (kind_) {
    case ContractKind::one_time:
      return 0.0;
    case ContractKind::posc:
      return alpha_ * std::max(0.0, w);
    case ContractKind::plsc:
      return alpha_ * w;
    case ContractKind::general: {
      const std::size_t m = breaks_.size();
      if (w <= breaks_.front()) {
        const double s = (values_[1] - values_[0]) / (breaks_[1] - breaks_[0]);
        return values_.front() + s * (w - breaks_.front());
      }
      if (w >= breaks_.back()) {
        const double s =
            (values_[m - 1] - values_[m - 2]) / (breaks_[m - 1] - breaks_[m - 2]);
        return values_.back() + s * (w - breaks_.back());
      }
      const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), w);
      const std::size_t hi = static_cast<std::size_t>(it - breaks_.begin());
      const std::size_t lo = hi - 1;
      const double t = (w - breaks_[lo]) / (breaks_[hi] - breaks_[lo]);
      return values_[lo] + t * (values_[hi] - values_[lo]);
    }
  }
  return 0.0;
}

double SharingContract::alpha() const {
  if (kind_ == ContractKind::general) return marginal_slope_bound();
  return alpha_;
}

std::string SharingContract::label() const {
  switch (kind_) {
    case ContractKind::one_time:
      return "one_time";
    case ContractKind::posc:
      return "posc";
    case ContractKind::plsc:
      return "plsc";
    case ContractKind::general:
      return "general";
  }
  return "?";
}

double SharingContract::marginal_slope_bound() const {
  switch (kind_) {
    case ContractKind::one_time:
      return 0.0;
    case ContractKind::posc:
    case ContractKind::plsc:
      return alpha_;
    case ContractKind::general: {
      double bound = 0.0;
      for (std::size_t i = 0; i + 1 < breaks_.size(); ++i) {
        const double s =
            (values_[i + 1] - values_[i]) / (breaks_[i + 1] - breaks_[i]);
        bound = std::max(bound, s);
      }
      return bound;
    }
  }
  return 0.0;
}

std::vector<double> SharingContract::profit_kinks() const {
  switch (kind_) {
    case ContractKind::posc:
      return {0.0};
    case ContractKind::general:
      return {breaks_.begin(), breaks_.end()};
    default:
      return {};
  }
}

AdmissibilityReport SharingContract::check_admissible(double w_lo, double w_hi,
                                                      int grid_points) const {
  AdmissibilityReport report;
  auto flag = [&report](const std::string& what) {
    report.admissible = false;
    report.violations.push_back(what);
  };
  if (!(w_lo < w_hi) || grid_points < 3) {
    flag("degenerate admissibility grid");
    return report;
  }

  const double h = (w_hi - w_lo) / (grid_points - 1);
  double prev_w = w_lo;
  double prev_phi = payment(w_lo);
  for (int i = 1; i < grid_points; ++i) {
    const double w = w_lo + i * h;
    const double phi = payment(w);
    if (phi < prev_phi - 1e-12) {
      std::ostringstream msg;
      msg << "phi decreasing near w=" << w;
      flag(msg.str());
    }
    if ((w - phi) - (prev_w - prev_phi) <= 1e-12 * h) {
      std::ostringstream msg;
      msg << "w - phi(w) not increasing near w=" << w << " (slope >= 1)";
      flag(msg.str());
    }
    // Continuity proxy: admissible slopes are below 1, so any secant jump
    // beyond the spacing signals a discontinuity in the table.
    if (std::abs(phi - prev_phi) > h + 1e-9) {
      std::ostringstream msg;
      msg << "jump between w=" << prev_w << " and w=" << w;
      flag(msg.str());
    }
    prev_w = w;
    prev_phi = phi;
  }

  if (std::abs(payment(0.0)) > 1e-12) flag("phi(0) != 0");
  const double terminal_slope = (payment(w_hi) - payment(w_hi - h)) / h;
  if (!(payment(w_hi) > 0.0) || !(terminal_slope > 0.0)) {
    flag("no positive growth at the top of the profit range");
  }
  report.notes.push_back(
      "unbounded growth checked via positive terminal slope on the grid");
  return report;
}

}  // namespace psauction
