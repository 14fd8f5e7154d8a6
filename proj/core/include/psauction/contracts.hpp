#pragma once

#include <span>
#include <string>
#include <vector>

namespace psauction {

enum class ContractKind { one_time, posc, plsc, general };

struct AdmissibilityReport {
  bool admissible = true;
  std::vector<std::string> violations;
  // Which finite proxies stood in for the asymptotic requirements.
  std::vector<std::string> notes;
};

// Ex-post sharing rule phi applied to the preliminary profit w = x - b.
//   one_time: phi == 0 (no sharing stage)
//   posc:     phi(w) = alpha * max(0, w)
//   plsc:     phi(w) = alpha * w
//   general:  continuous piecewise-linear phi through given breakpoints,
//             extended beyond the table with the end slopes.
class SharingContract {
 public:
  static SharingContract one_time();
  static SharingContract posc(double alpha);
  static SharingContract plsc(double alpha);
  static SharingContract general(std::vector<double> breaks,
                                 std::vector<double> values);

  double payment(double w) const;

  ContractKind kind() const { return kind_; }
  // Share fraction for posc/plsc; 0 for one_time; the marginal slope bound
  // for general contracts.
  double alpha() const;
  std::string label() const;

  // Smallest alpha' bounding every secant slope of phi.
  double marginal_slope_bound() const;

  // Locations in w where phi changes slope; empty for plsc/one_time.
  std::vector<double> profit_kinks() const;

  // Grid check of the admissibility properties: phi nondecreasing with
  // w - phi(w) increasing, phi(0) = 0 with positive terminal growth, and
  // continuity. The unbounded-growth requirement is proxied by a positive
  // terminal slope, recorded in the report notes.
  AdmissibilityReport check_admissible(double w_lo, double w_hi,
                                       int grid_points = 257) const;

  std::span<const double> breakpoints() const { return breaks_; }
  std::span<const double> break_values() const { return values_; }

 private:
  SharingContract() = default;

  ContractKind kind_ = ContractKind::one_time;
  double alpha_ = 0.0;
  std::vector<double> breaks_;
  std::vector<double> values_;
};

}  // namespace psauction
