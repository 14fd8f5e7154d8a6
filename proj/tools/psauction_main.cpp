// Experiment driver: one-off bid solves, single auction traces, revenue
// sweeps over the share fraction, hidden-effort sweeps, and the invariant
// verification suite.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "psauction/auctions.hpp"
#include "psauction/equilibrium.hpp"
#include "psauction/errors.hpp"
#include "psauction/experiment.hpp"
#include "psauction/principal_agent.hpp"
#include "psauction/verify.hpp"

namespace {

using namespace psauction;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitVerification = 2;
constexpr int kExitNumeric = 3;

struct CommonArgs {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> n;
  std::string out_dir;
};

ExperimentConfig load(const CommonArgs& args) {
  ExperimentConfig cfg = ExperimentConfig::from_file(args.config_path);
  if (args.seed) cfg.seed = *args.seed;
  if (args.n) cfg.n_samples = *args.n;
  if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;
  return cfg;
}

int cmd_bid(const CommonArgs& args, double y1, double z1, bool pa) {
  const ExperimentConfig cfg = load(args);
  const InfoModel model = cfg.make_model();
  const Utility u = cfg.make_utility();
  if (!model.signal_interval().contains(y1) ||
      !model.signal_interval().contains(z1)) {
    throw ConfigError("signal outside the model's signal interval");
  }
  for (const auto& entry : cfg.contracts) {
    const double alpha = entry.alpha.value_or(0.5);
    if (pa) {
      if (!cfg.pa) throw ConfigError("--pa requires a pa block in the config");
      double b;
      if (entry.kind == "plsc") {
        b = bid_plsc_pa(model, u, cfg.make_cost(), alpha, y1, z1);
      } else if (entry.kind == "posc") {
        b = bid_posc_pa(model, cfg.pa->gamma, alpha, y1, z1);
      } else {
        continue;
      }
      std::printf("%s_pa alpha=%.12g y1=%.12g z1=%.12g bid=%.12g\n",
                  entry.kind.c_str(), alpha, y1, z1, b);
      continue;
    }
    const SharingContract c = cfg.make_contract(entry, alpha);
    const double b = bid_general_sp(model, u, c, y1, z1);
    std::printf("%s alpha=%.12g y1=%.12g z1=%.12g bid=%.12g\n",
                c.label().c_str(), c.alpha(), y1, z1, b);
  }
  return kExitOk;
}

int cmd_simulate(const CommonArgs& args, double price_step) {
  const ExperimentConfig cfg = load(args);
  const InfoModel model = cfg.make_model();
  const Utility u = cfg.make_utility();
  RandomStream rs(cfg.seed, 1);
  const std::vector<double> signals = model.sample_signals(rs);

  std::printf("model=%s format=%s seed=%llu\n", model.name().c_str(),
              cfg.format == AuctionFormat::second_price ? "second_price"
                                                        : "english",
              static_cast<unsigned long long>(cfg.seed));
  for (std::size_t i = 0; i < signals.size(); ++i) {
    std::printf("  buyer %zu signal %.12g\n", i, signals[i]);
  }
  for (const auto& entry : cfg.contracts) {
    const SharingContract c = cfg.make_contract(entry, entry.alpha.value_or(0.5));
    RandomStream value_rs = rs.derive(7);
    if (cfg.format == AuctionFormat::second_price) {
      const BidFunction beta = equilibrium_strategy_sp(model, u, c);
      for (std::size_t i = 0; i < signals.size(); ++i) {
        std::printf("  [%s] buyer %zu bids %.12g\n", c.label().c_str(), i,
                    beta(signals[i]));
      }
      const AuctionOutcome o =
          run_second_price(model, beta, c, signals, value_rs);
      std::printf(
          "  [%s] winner=%d payment=%.12g value=%.12g sharing=%.12g "
          "profit=%.12g\n",
          c.label().c_str(), o.winner, o.payment, o.value, o.sharing, o.profit);
    } else {
      const ClockResult clock =
          run_english_clock(model, u, c, signals, price_step, value_rs);
      std::printf("  [%s] quits at:", c.label().c_str());
      for (double p : clock.drop_prices) std::printf(" %.12g", p);
      std::printf("\n  [%s] inferred signals:", c.label().c_str());
      for (double q : clock.inferred_signals) std::printf(" %.12g", q);
      const AuctionOutcome& o = clock.outcome;
      std::printf(
          "\n  [%s] winner=%d payment=%.12g value=%.12g sharing=%.12g "
          "profit=%.12g (%lld ticks)\n",
          c.label().c_str(), o.winner, o.payment, o.value, o.sharing, o.profit,
          static_cast<long long>(clock.ticks));
    }
  }
  return kExitOk;
}

int cmd_sweep(const CommonArgs& args, SweepMode mode) {
  const ExperimentConfig cfg = load(args);
  const RunResult result = run_experiment(cfg, mode, cfg.out_dir);
  std::printf("wrote %zu rows\n  %s\n  %s\n  %s\n", result.rows,
              result.csv_path.string().c_str(), result.svg_path.string().c_str(),
              result.manifest_path.string().c_str());
  return kExitOk;
}

int cmd_verify(const std::string& scope, std::uint64_t seed) {
  VerifyOptions options;
  options.scope = scope == "all" ? VerifyScope::all : VerifyScope::fast;
  options.seed = seed;
  const VerifyReport report = verify_suite(options);
  print_report(report, std::cout);
  return report.all_pass() ? kExitOk : kExitVerification;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"auction revenue laboratory for profit sharing contracts"};
  app.require_subcommand(1);

  CommonArgs args;
  double y1 = 0.5, z1 = 0.5;
  bool pa_bid = false;
  double price_step = 1e-4;
  std::string scope = "fast";
  std::uint64_t verify_seed = 20110214;

  auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* opt = sub->add_option("--config", args.config_path, "experiment config file");
    if (needs_config) opt->required();
    sub->add_option("--seed", [&args](auto& vals) {
      args.seed = std::stoull(vals[0]);
      return true;
    }, "override the config seed");
    sub->add_option("--n", [&args](auto& vals) {
      args.n = std::stoll(vals[0]);
      return true;
    }, "override the sample count");
    sub->add_option("--out", args.out_dir, "output directory");
  };

  CLI::App* bid = app.add_subcommand("bid", "solve one indifference bid");
  add_common(bid, true);
  bid->add_option("--y1", y1, "own signal")->required();
  bid->add_option("--z1", z1, "highest rival signal")->required();
  bid->add_flag("--pa", pa_bid, "use the hidden-effort bid");

  CLI::App* simulate = app.add_subcommand("simulate", "trace a single auction");
  add_common(simulate, true);
  simulate->add_option("--step", price_step, "clock price step");

  CLI::App* sweep = app.add_subcommand("sweep", "revenue sweep over the share fraction");
  add_common(sweep, true);

  CLI::App* pa_sweep_cmd = app.add_subcommand("pa-sweep", "hidden-effort revenue sweep");
  add_common(pa_sweep_cmd, true);

  CLI::App* verify = app.add_subcommand("verify", "run the invariant suite");
  verify->add_option("--scope", scope, "fast or all")
      ->check(CLI::IsMember({"fast", "all"}));
  verify->add_option("--seed", verify_seed, "suite seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (bid->parsed()) return cmd_bid(args, y1, z1, pa_bid);
    if (simulate->parsed()) return cmd_simulate(args, price_step);
    if (sweep->parsed()) return cmd_sweep(args, SweepMode::standard);
    if (pa_sweep_cmd->parsed()) return cmd_sweep(args, SweepMode::principal_agent);
    if (verify->parsed()) return cmd_verify(scope, verify_seed);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const BracketFailure& e) {
    std::fprintf(stderr, "numeric failure: %s\n", e.what());
    return kExitNumeric;
  } catch (const NonFiniteError& e) {
    std::fprintf(stderr, "numeric failure: %s\n", e.what());
    return kExitNumeric;
  } catch (const NonTermination& e) {
    std::fprintf(stderr, "numeric failure: %s\n", e.what());
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNumeric;
  }
  return kExitOk;
}
