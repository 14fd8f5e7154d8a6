#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "psauction/experiment.hpp"

namespace psauction {

namespace {

constexpr int kWidth = 760;
constexpr int kHeight = 480;
constexpr int kLeft = 70;
constexpr int kRight = 180;
constexpr int kTop = 30;
constexpr int kBottom = 55;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

struct Series {
  std::string contract;
  std::string estimator;
  std::vector<std::pair<double, double>> points;  // (alpha, total)
  std::vector<double> stderrs;
};

}  // namespace

void emit_plot(std::span<const SweepRow> rows, std::ostream& out) {
  if (rows.empty()) throw std::invalid_argument("empty input: nothing to plot");

  std::vector<Series> series;
  std::map<std::string, std::size_t> color_of;
  for (const SweepRow& r : rows) {
    auto it = std::find_if(series.begin(), series.end(), [&](const Series& s) {
      return s.contract == r.contract && s.estimator == r.estimator;
    });
    if (it == series.end()) {
      series.push_back({r.contract, r.estimator, {}, {}});
      it = series.end() - 1;
      color_of.emplace(r.contract, color_of.size());
    }
    it->points.emplace_back(r.alpha, r.total);
    it->stderrs.push_back(r.stderr_);
  }
  for (Series& s : series) {
    std::vector<std::size_t> idx(s.points.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return s.points[a].first < s.points[b].first;
    });
    Series sorted = s;
    for (std::size_t i = 0; i < idx.size(); ++i) {
      sorted.points[i] = s.points[idx[i]];
      sorted.stderrs[i] = s.stderrs[idx[i]];
    }
    s = std::move(sorted);
  }

  double x_lo = rows[0].alpha, x_hi = rows[0].alpha;
  double y_lo = rows[0].total, y_hi = rows[0].total;
  for (const SweepRow& r : rows) {
    x_lo = std::min(x_lo, r.alpha);
    x_hi = std::max(x_hi, r.alpha);
    y_lo = std::min(y_lo, r.total - 2.0 * r.stderr_);
    y_hi = std::max(y_hi, r.total + 2.0 * r.stderr_);
  }
  if (x_hi - x_lo < 1e-12) {
    x_lo -= 0.05;
    x_hi += 0.05;
  }
  const double y_pad = std::max(1e-6, 0.06 * (y_hi - y_lo));
  y_lo -= y_pad;
  y_hi += y_pad;

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto px = [&](double a) { return kLeft + plot_w * (a - x_lo) / (x_hi - x_lo); };
  auto py = [&](double t) {
    return kTop + plot_h * (1.0 - (t - y_lo) / (y_hi - y_lo));
  };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
      << kHeight << "\">\n";
  out << "<rect width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" fill=\"white\"/>\n";

  // Axes and ticks.
  out << "<g stroke=\"#333\" stroke-width=\"1\">\n";
  out << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + plot_h << "\" x2=\""
      << kLeft + plot_w << "\" y2=\"" << kTop + plot_h << "\"/>\n";
  out << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft
      << "\" y2=\"" << kTop + plot_h << "\"/>\n";
  out << "</g>\n";
  out << "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"#333\">\n";
  for (int i = 0; i <= 5; ++i) {
    const double a = x_lo + (x_hi - x_lo) * i / 5.0;
    const double t = y_lo + (y_hi - y_lo) * i / 5.0;
    out << "<line x1=\"" << num(px(a)) << "\" y1=\"" << kTop + plot_h
        << "\" x2=\"" << num(px(a)) << "\" y2=\"" << kTop + plot_h + 5
        << "\" stroke=\"#333\"/>\n";
    out << "<text x=\"" << num(px(a)) << "\" y=\"" << kTop + plot_h + 20
        << "\" text-anchor=\"middle\">" << num(a) << "</text>\n";
    out << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << num(py(t)) << "\" x2=\""
        << kLeft << "\" y2=\"" << num(py(t)) << "\" stroke=\"#333\"/>\n";
    out << "<text x=\"" << kLeft - 9 << "\" y=\"" << num(py(t) + 4)
        << "\" text-anchor=\"end\">" << num(t) << "</text>\n";
  }
  out << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 12
      << "\" text-anchor=\"middle\">share fraction</text>\n";
  out << "<text x=\"18\" y=\"" << kTop + plot_h / 2
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << kTop + plot_h / 2 << ")\">expected total revenue</text>\n";
  out << "</g>\n";

  for (const Series& s : series) {
    const char* color = kPalette[color_of[s.contract] % 8];
    if (s.estimator == "closed_form" && s.points.size() > 1) {
      out << "<polyline fill=\"none\" stroke=\"" << color
          << "\" stroke-width=\"2\" data-series=\"" << s.contract << ":"
          << s.estimator << "\" points=\"";
      for (const auto& [a, t] : s.points) {
        out << num(px(a)) << "," << num(py(t)) << " ";
      }
      out << "\"/>\n";
    } else {
      out << "<g fill=\"" << color << "\" stroke=\"" << color
          << "\" data-series=\"" << s.contract << ":" << s.estimator << "\">\n";
      for (std::size_t i = 0; i < s.points.size(); ++i) {
        const auto& [a, t] = s.points[i];
        if (s.stderrs[i] > 0.0) {
          out << "<line x1=\"" << num(px(a)) << "\" y1=\""
              << num(py(t - 2.0 * s.stderrs[i])) << "\" x2=\"" << num(px(a))
              << "\" y2=\"" << num(py(t + 2.0 * s.stderrs[i])) << "\"/>\n";
        }
        out << "<circle cx=\"" << num(px(a)) << "\" cy=\"" << num(py(t))
            << "\" r=\"3\"/>\n";
      }
      out << "</g>\n";
    }
  }

  // Legend.
  out << "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"#333\">\n";
  int slot = 0;
  for (const Series& s : series) {
    const char* color = kPalette[color_of[s.contract] % 8];
    const int y = kTop + 10 + 20 * slot++;
    const int x = kWidth - kRight + 14;
    if (s.estimator == "closed_form") {
      out << "<line x1=\"" << x << "\" y1=\"" << y - 4 << "\" x2=\"" << x + 22
          << "\" y2=\"" << y - 4 << "\" stroke=\"" << color
          << "\" stroke-width=\"2\"/>\n";
    } else {
      out << "<circle cx=\"" << x + 11 << "\" cy=\"" << y - 4
          << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    }
    out << "<text x=\"" << x + 28 << "\" y=\"" << y << "\">" << s.contract
        << " (" << s.estimator << ")</text>\n";
  }
  out << "</g>\n";
  out << "</svg>\n";
}

}  // namespace psauction
