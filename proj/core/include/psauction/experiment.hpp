#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "psauction/auctions.hpp"
#include "psauction/contracts.hpp"
#include "psauction/info_model.hpp"
#include "psauction/principal_agent.hpp"
#include "psauction/utility.hpp"

namespace psauction {

// One experiment = one plain-text config file. Parsing and validation throw
// ConfigError with field diagnostics.
struct ExperimentConfig {
  struct ContractEntry {
    std::string kind;                 // one_time | posc | plsc | general
    std::optional<double> alpha;      // fixed share fraction (else swept)
    std::vector<double> breaks;
    std::vector<double> values;
  };
  struct PaBlock {
    std::string cost_kind = "quadratic";
    double gamma = 1.0;
    double effort_hi = 0.0;           // 0 -> max(1, 1/gamma)
    std::string timing = "value_observed";
  };

  std::string model_name = "example1";
  int n_buyers = 0;                   // 0 -> the model's natural count
  std::string utility_kind = "linear";
  double cara_scale = 1.0;
  double cara_aversion = 1.0;
  std::vector<ContractEntry> contracts;
  AuctionFormat format = AuctionFormat::second_price;
  std::vector<double> alpha_grid;
  std::int64_t n_samples = 100000;
  std::uint64_t seed = 1;
  std::optional<PaBlock> pa;
  std::string out_dir = "out";
  std::string source_text;            // raw config bytes, hashed in the manifest

  static ExperimentConfig from_file(const std::filesystem::path& path);
  static ExperimentConfig from_json_text(const std::string& text);

  InfoModel make_model() const;
  Utility make_utility() const;
  SharingContract make_contract(const ContractEntry& entry, double alpha) const;
  CostFunction make_cost() const;
};

// One revenue estimate: a (contract, alpha, format, estimator) cell.
struct SweepRow {
  std::string contract;
  double alpha = 0.0;
  std::string format;
  double stage1 = 0.0;
  double stage2 = 0.0;
  double total = 0.0;
  double stderr_ = 0.0;
  std::int64_t n = 0;
  std::string estimator;  // closed_form | mc
};

inline constexpr const char* kSweepCsvHeader =
    "contract,alpha,format,stage1,stage2,total,stderr,n,estimator";

// Revenue sweep over the share-fraction grid: a closed-form row where the
// model has one, and a Monte Carlo row always; contracts at the same alpha
// share their draws.
std::vector<SweepRow> sweep_alpha(const ExperimentConfig& config);

// Hidden-effort sweep (second price): profit-and-loss and profit-only
// mechanisms per grid point, closed-form rows where available.
std::vector<SweepRow> pa_sweep(const ExperimentConfig& config);

std::string rows_to_csv(std::span<const SweepRow> rows);

// Standalone SVG revenue plot: one polyline per closed-form series, markers
// per Monte Carlo series, share fraction against total revenue.
void emit_plot(std::span<const SweepRow> rows, std::ostream& out);

struct RunResult {
  std::filesystem::path csv_path;
  std::filesystem::path svg_path;
  std::filesystem::path manifest_path;
  std::size_t rows = 0;
};

enum class SweepMode { standard, principal_agent };

// Runs the configured sweep and writes sweep.csv, plot.svg and manifest.json
// into the output directory. Deterministic given (config, seed); partial
// outputs are removed if anything fails.
RunResult run_experiment(const ExperimentConfig& config, SweepMode mode,
                         const std::filesystem::path& out_dir);

std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace psauction
