#include "psauction/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "psauction/errors.hpp"

namespace psauction {

namespace {

using nlohmann::json;

std::string fmt12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

[[noreturn]] void config_fail(const std::string& field, const std::string& what) {
  throw ConfigError("config field '" + field + "': " + what);
}

double require_number(const json& j, const std::string& field) {
  if (!j.contains(field) || !j[field].is_number()) {
    config_fail(field, "expected a number");
  }
  return j[field].get<double>();
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

ExperimentConfig ExperimentConfig::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str());
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }

  ExperimentConfig cfg;
  cfg.source_text = text;

  if (j.contains("model")) {
    const json& m = j["model"];
    if (!m.contains("name") || !m["name"].is_string()) {
      config_fail("model.name", "expected a string");
    }
    cfg.model_name = m["name"].get<std::string>();
    if (m.contains("n_buyers")) cfg.n_buyers = m["n_buyers"].get<int>();
  }

  if (j.contains("utility")) {
    const json& u = j["utility"];
    if (!u.contains("kind") || !u["kind"].is_string()) {
      config_fail("utility.kind", "expected a string");
    }
    cfg.utility_kind = u["kind"].get<std::string>();
    if (cfg.utility_kind == "cara") {
      cfg.cara_scale = require_number(u, "scale");
      cfg.cara_aversion = require_number(u, "aversion");
    } else if (cfg.utility_kind != "linear") {
      config_fail("utility.kind", "unknown kind '" + cfg.utility_kind + "'");
    }
  }

  if (!j.contains("contracts") || !j["contracts"].is_array() ||
      j["contracts"].empty()) {
    config_fail("contracts", "expected a non-empty array");
  }
  for (const json& c : j["contracts"]) {
    ContractEntry entry;
    if (!c.contains("kind") || !c["kind"].is_string()) {
      config_fail("contracts[].kind", "expected a string");
    }
    entry.kind = c["kind"].get<std::string>();
    if (entry.kind != "one_time" && entry.kind != "posc" &&
        entry.kind != "plsc" && entry.kind != "general") {
      config_fail("contracts[].kind", "unknown kind '" + entry.kind + "'");
    }
    if (c.contains("alpha")) {
      entry.alpha = c["alpha"].get<double>();
      if (!(*entry.alpha >= 0.0 && *entry.alpha < 1.0)) {
        config_fail("contracts[].alpha", "share fraction must lie in [0, 1)");
      }
    }
    if (entry.kind == "general") {
      if (!c.contains("breakpoints") || !c["breakpoints"].is_array()) {
        config_fail("contracts[].breakpoints", "expected [[w, phi], ...]");
      }
      for (const json& row : c["breakpoints"]) {
        if (!row.is_array() || row.size() != 2) {
          config_fail("contracts[].breakpoints", "expected [w, phi] pairs");
        }
        entry.breaks.push_back(row[0].get<double>());
        entry.values.push_back(row[1].get<double>());
      }
    }
    cfg.contracts.push_back(std::move(entry));
  }

  if (j.contains("format")) {
    const std::string f = j["format"].get<std::string>();
    if (f == "second_price") {
      cfg.format = AuctionFormat::second_price;
    } else if (f == "english") {
      cfg.format = AuctionFormat::english;
    } else {
      config_fail("format", "expected 'second_price' or 'english'");
    }
  }

  if (j.contains("alpha_grid")) {
    if (!j["alpha_grid"].is_array()) config_fail("alpha_grid", "expected an array");
    for (const json& a : j["alpha_grid"]) {
      const double v = a.get<double>();
      if (!(v >= 0.0 && v < 1.0)) {
        config_fail("alpha_grid", "share fractions must lie in [0, 1)");
      }
      cfg.alpha_grid.push_back(v);
    }
  }

  if (j.contains("n_samples")) {
    cfg.n_samples = j["n_samples"].get<std::int64_t>();
    if (cfg.n_samples < 1) config_fail("n_samples", "must be at least 1");
  }
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("out_dir")) cfg.out_dir = j["out_dir"].get<std::string>();

  if (j.contains("pa")) {
    const json& p = j["pa"];
    PaBlock pa;
    if (p.contains("cost")) pa.cost_kind = p["cost"].get<std::string>();
    if (pa.cost_kind != "quadratic") {
      config_fail("pa.cost", "only quadratic costs are configurable");
    }
    pa.gamma = require_number(p, "gamma");
    if (!(pa.gamma > 0.0)) config_fail("pa.gamma", "must be positive");
    if (p.contains("effort_hi")) pa.effort_hi = p["effort_hi"].get<double>();
    if (p.contains("timing")) pa.timing = p["timing"].get<std::string>();
    if (pa.timing != "value_observed") {
      config_fail("pa.timing", "only 'value_observed' effort timing is supported");
    }
    cfg.pa = pa;
  }

  // Validate that the referenced constructors resolve.
  cfg.make_model();
  cfg.make_utility();
  for (const ContractEntry& e : cfg.contracts) cfg.make_contract(e, 0.5);
  return cfg;
}

InfoModel ExperimentConfig::make_model() const {
  if (model_name == "example1") return InfoModel::example1();
  if (model_name == "example2_pa") return InfoModel::example2_pa();
  if (model_name == "common_value_avg") {
    return InfoModel::common_value_avg(n_buyers > 0 ? n_buyers : 3);
  }
  if (model_name == "private_values") {
    return InfoModel::private_values(n_buyers > 0 ? n_buyers : 2);
  }
  config_fail("model.name", "unknown model '" + model_name + "'");
}

Utility ExperimentConfig::make_utility() const {
  if (utility_kind == "linear") return Utility::linear();
  if (utility_kind == "cara") return Utility::cara(cara_scale, cara_aversion);
  config_fail("utility.kind", "unknown kind '" + utility_kind + "'");
}

SharingContract ExperimentConfig::make_contract(const ContractEntry& entry,
                                                double alpha) const {
  const double a = entry.alpha.value_or(alpha);
  if (entry.kind == "one_time") return SharingContract::one_time();
  if (entry.kind == "posc") return SharingContract::posc(a);
  if (entry.kind == "plsc") return SharingContract::plsc(a);
  return SharingContract::general(entry.breaks, entry.values);
}

CostFunction ExperimentConfig::make_cost() const {
  if (!pa) throw ConfigError("config has no pa block");
  return CostFunction::quadratic(pa->gamma, pa->effort_hi);
}

namespace {

std::string format_label(AuctionFormat f) {
  return f == AuctionFormat::second_price ? "second_price" : "english";
}

bool is_swept(const ExperimentConfig::ContractEntry& e) {
  return (e.kind == "posc" || e.kind == "plsc") && !e.alpha.has_value();
}

SweepRow make_row(const std::string& contract, double alpha,
                  const std::string& format, const RevenueBreakdown& r,
                  const std::string& estimator) {
  SweepRow row;
  row.contract = contract;
  row.alpha = alpha;
  row.format = format;
  row.stage1 = r.stage1;
  row.stage2 = r.stage2;
  row.total = r.total;
  row.stderr_ = r.stderr_total;
  row.n = r.n_samples;
  row.estimator = estimator;
  return row;
}

}  // namespace

std::vector<SweepRow> sweep_alpha(const ExperimentConfig& config) {
  const InfoModel model = config.make_model();
  const Utility u = config.make_utility();
  const std::string fmt = format_label(config.format);
  const bool closed_forms = model.name() == "example1" && u.is_linear();

  std::vector<double> grid = config.alpha_grid;
  if (grid.empty()) grid.push_back(0.0);
  std::sort(grid.begin(), grid.end());

  // Fixed contracts (pinned alpha, one_time, general) contribute one cell;
  // swept contracts contribute one cell per grid point. All contracts at a
  // given grid point run on common draws.
  std::vector<SweepRow> rows;
  for (std::size_t gi = 0; gi < grid.size(); ++gi) {
    const double alpha = grid[gi];
    std::vector<SharingContract> contracts;
    for (std::size_t e = 0; e < config.contracts.size(); ++e) {
      if (gi > 0 && !is_swept(config.contracts[e])) continue;
      contracts.push_back(config.make_contract(config.contracts[e], alpha));
    }
    if (contracts.empty()) continue;

    RandomStream rs(config.seed, 0x5000 + gi);
    std::vector<RevenueBreakdown> mc;
    if (contracts.size() >= 2) {
      PairedComparison cmp = compare_contracts_paired(
          model, u, contracts, config.format, config.n_samples, rs);
      mc = std::move(cmp.per_contract);
    } else {
      mc.push_back(estimate_revenue(model, u, contracts[0], config.format,
                                    config.n_samples, rs));
    }

    for (std::size_t c = 0; c < contracts.size(); ++c) {
      const SharingContract& contract = contracts[c];
      const double cell_alpha = contract.kind() == ContractKind::general
                                    ? contract.marginal_slope_bound()
                                    : contract.alpha();
      if (closed_forms && contract.kind() != ContractKind::general &&
          config.format == AuctionFormat::second_price) {
        rows.push_back(make_row(
            contract.label(), cell_alpha, fmt,
            revenue_closed_form_example1(contract.kind(), contract.alpha()),
            "closed_form"));
      }
      rows.push_back(make_row(contract.label(), cell_alpha, fmt, mc[c], "mc"));
    }
  }

  std::stable_sort(rows.begin(), rows.end(),
                   [](const SweepRow& a, const SweepRow& b) {
                     if (a.contract != b.contract) return a.contract < b.contract;
                     if (a.alpha != b.alpha) return a.alpha < b.alpha;
                     return a.estimator < b.estimator;
                   });
  return rows;
}

std::vector<SweepRow> pa_sweep(const ExperimentConfig& config) {
  if (!config.pa) throw ConfigError("pa sweep requires a pa block");
  if (config.format != AuctionFormat::second_price) {
    throw ConfigError("hidden-effort sweeps support the second price format only");
  }
  const InfoModel model = config.make_model();
  const Utility u = config.make_utility();
  const CostFunction cost = config.make_cost();
  const double gamma = config.pa->gamma;
  const bool closed_forms = model.name() == "example2_pa" && u.is_linear();

  std::vector<double> grid = config.alpha_grid;
  if (grid.empty()) grid.push_back(0.0);
  std::sort(grid.begin(), grid.end());

  bool want_plsc = false, want_posc = false;
  for (const auto& e : config.contracts) {
    if (e.kind == "plsc") want_plsc = true;
    if (e.kind == "posc") want_posc = true;
  }
  if (want_posc && !u.is_linear()) {
    throw ConfigError(
        "profit-only sharing with hidden effort requires a linear utility");
  }

  std::vector<SweepRow> rows;
  for (std::size_t gi = 0; gi < grid.size(); ++gi) {
    const double alpha = grid[gi];
    RandomStream rs(config.seed, 0xA000 + gi);
    if (want_plsc) {
      if (closed_forms) {
        rows.push_back(make_row("plsc_pa", alpha, "second_price",
                                revenue_plsc_pa_closed_form_example2(gamma, alpha),
                                "closed_form"));
      }
      rows.push_back(make_row(
          "plsc_pa", alpha, "second_price",
          revenue_plsc_pa(model, u, cost, alpha, config.n_samples, rs), "mc"));
    }
    if (want_posc) {
      rows.push_back(make_row(
          "posc_pa", alpha, "second_price",
          revenue_posc_pa(model, gamma, alpha, config.n_samples, rs), "mc"));
    }
  }

  std::stable_sort(rows.begin(), rows.end(),
                   [](const SweepRow& a, const SweepRow& b) {
                     if (a.contract != b.contract) return a.contract < b.contract;
                     if (a.alpha != b.alpha) return a.alpha < b.alpha;
                     return a.estimator < b.estimator;
                   });
  return rows;
}

std::string rows_to_csv(std::span<const SweepRow> rows) {
  std::ostringstream out;
  out << kSweepCsvHeader << "\n";
  for (const SweepRow& r : rows) {
    out << r.contract << ',' << fmt12(r.alpha) << ',' << r.format << ','
        << fmt12(r.stage1) << ',' << fmt12(r.stage2) << ',' << fmt12(r.total)
        << ',' << fmt12(r.stderr_) << ',' << r.n << ',' << r.estimator << "\n";
  }
  return out.str();
}

RunResult run_experiment(const ExperimentConfig& config, SweepMode mode,
                         const std::filesystem::path& out_dir) {
  namespace fs = std::filesystem;
  const auto t0 = std::chrono::steady_clock::now();

  fs::create_directories(out_dir);
  const fs::path csv_path = out_dir / "sweep.csv";
  const fs::path svg_path = out_dir / "plot.svg";
  const fs::path manifest_path = out_dir / "manifest.json";

  auto cleanup = [&]() {
    std::error_code ec;
    fs::remove(csv_path, ec);
    fs::remove(svg_path, ec);
    fs::remove(manifest_path, ec);
  };

  try {
    const std::vector<SweepRow> rows = mode == SweepMode::principal_agent
                                           ? pa_sweep(config)
                                           : sweep_alpha(config);
    {
      std::ofstream csv(csv_path, std::ios::binary);
      csv << rows_to_csv(rows);
    }
    {
      std::ofstream svg(svg_path, std::ios::binary);
      emit_plot(rows, svg);
    }
    const auto t1 = std::chrono::steady_clock::now();
    {
      char hash_hex[17];
      std::snprintf(hash_hex, sizeof(hash_hex), "%016llx",
                    static_cast<unsigned long long>(fnv1a64(config.source_text)));
      json manifest;
      manifest["seed"] = config.seed;
      manifest["config_hash"] = hash_hex;
      manifest["rows"] = rows.size();
      manifest["wall_time_seconds"] =
          std::chrono::duration<double>(t1 - t0).count();
      manifest["outputs"] = {"sweep.csv", "plot.svg"};
#ifdef PSAUCTION_VERSION
      manifest["version"] = PSAUCTION_VERSION;
#endif
      std::ofstream mf(manifest_path, std::ios::binary);
      mf << manifest.dump(2) << "\n";
    }
    RunResult result;
    result.csv_path = csv_path;
    result.svg_path = svg_path;
    result.manifest_path = manifest_path;
    result.rows = rows.size();
    return result;
  } catch (...) {
    cleanup();
    throw;
  }
}

}  // namespace psauction
