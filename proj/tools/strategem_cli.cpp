// Command-line front end: run, batch, aggregate, validate.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "strategem/config.hpp"
#include "strategem/experiment.hpp"

namespace fs = std::filesystem;
using namespace strategem;

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kRuntimeError = 2;

struct Options {
  std::string config_path;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  std::optional<std::uint32_t> runs;
  std::optional<std::uint32_t> cycles;
  std::optional<std::uint32_t> firms;
  std::optional<std::uint32_t> markets;
  std::optional<std::uint32_t> workers;
  std::vector<std::string> settings;
  bool trace = false;
  std::string runs_csv;  // aggregate input
};

BatchConfig effective_config(const Options& o, bool seed_is_base) {
  BatchConfig cfg = o.config_path.empty() ? BatchConfig{} : load_config(o.config_path);
  if (const char* env = std::getenv("STRATEGEM_WORKERS"); env && *env)
    apply_setting(cfg, "batch.workers", env);
  for (const auto& kv : o.settings) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects KEY=VALUE, got '" + kv + "'");
    apply_setting(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (o.seed) (seed_is_base ? cfg.base_seed : cfg.sim.rng_seed) = *o.seed;
  if (o.runs) cfg.n_runs = *o.runs;
  if (o.cycles) cfg.sim.n_cycles = *o.cycles;
  if (o.firms) cfg.sim.n_firms = *o.firms;
  if (o.markets) cfg.sim.n_markets = *o.markets;
  if (o.workers) cfg.workers = *o.workers;
  cfg.validate();
  return cfg;
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + p.string());
  return os;
}

void echo_config(const fs::path& dir, const BatchConfig& cfg) {
  open_out(dir / "config.ini") << to_ini(cfg);
}

void print_checkpoint_line(const CheckpointSummary& cs) {
  const auto& s = cs.snapshot;
  std::cout << "cycle " << cs.cycle << ": top10 IO=" << s.io.count_in_top
            << " RBV=" << s.rbv.count_in_top << "  best IO=" << format_double(s.io.best)
            << " best RBV=" << format_double(s.rbv.best)
            << "  avg-all IO=" << format_double(s.io.avg_all)
            << " avg-all RBV=" << format_double(s.rbv.avg_all) << "\n";
}

int cmd_run(const Options& o) {
  const BatchConfig cfg = effective_config(o, false);
  const fs::path dir(o.out_dir);
  fs::create_directories(dir);
  echo_config(dir, cfg);
  auto trace = open_out(dir / "trace.csv");
  write_trace_header(trace);
  const RunSummary summary = run_one(0, cfg.sim.rng_seed, cfg.sim, [&](const CycleReport& r) {
    write_trace_rows(trace, 0, r);
  });
  auto runs = open_out(dir / "runs.csv");
  write_runs_csv(runs, to_table({summary}));
  for (const auto& cs : summary.checkpoints) print_checkpoint_line(cs);
  return kOk;
}

int cmd_batch(const Options& o) {
  const BatchConfig cfg = effective_config(o, true);
  const fs::path dir(o.out_dir);
  fs::create_directories(dir);
  echo_config(dir, cfg);
  const BatchResult result = run_batch(cfg, o.trace ? dir / "traces" : fs::path{});
  auto runs = open_out(dir / "runs.csv");
  write_runs_csv(runs, result.table);
  auto aggregate_os = open_out(dir / "aggregate.csv");
  write_aggregate_csv(aggregate_os, result.aggregate);
  std::cout << cfg.n_runs << " runs written to " << dir.string() << "\n";
  const auto& agg = result.aggregate;
  for (std::size_t c = 0; c < agg.columns.size(); ++c) {
    const auto& name = agg.columns[c];
    if (name.find("_nb_") == std::string::npos && name.find("_rd_") == std::string::npos) continue;
    std::cout << "  " << name << " mean=" << format_double(agg.values[0][c]);
    if (name.find("_rd_") != std::string::npos)
      std::cout << " pct_io_gt_rbv=" << format_double(agg.values[8][c]);
    std::cout << "\n";
  }
  return kOk;
}

int cmd_aggregate(const Options& o) {
  const fs::path input = o.runs_csv.empty() ? fs::path(o.out_dir) / "runs.csv" : fs::path(o.runs_csv);
  std::ifstream is(input, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read " + input.string());
  const RunsTable table = read_runs_csv(is);
  const fs::path dir = o.runs_csv.empty() || !o.out_dir.empty() ? fs::path(o.out_dir)
                                                                : input.parent_path();
  fs::create_directories(dir);
  auto os = open_out(dir / "aggregate.csv");
  write_aggregate_csv(os, aggregate(table));
  std::cout << "aggregated " << table.values.size() << " runs into "
            << (dir / "aggregate.csv").string() << "\n";
  return kOk;
}

int cmd_validate(const Options& o) {
  std::cout << to_ini(effective_config(o, true));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Agent-based simulator of IO and RBV market-entry strategies"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--config", o.config_path, "Config file ([sim] and [batch] sections)");
  auto* out_opt = app.add_option("--out", o.out_dir, "Output directory");
  app.add_option("--seed", o.seed, "Run seed (run) or base seed (batch)");
  app.add_option("--runs", o.runs, "Number of runs in a batch");
  app.add_option("--cycles", o.cycles, "Cycles per run");
  app.add_option("--firms", o.firms, "Number of firms (even)");
  app.add_option("--markets", o.markets, "Number of markets");
  app.add_option("--workers", o.workers, "Worker threads (default: $STRATEGEM_WORKERS)");
  app.add_option("--set", o.settings, "Override a config key, KEY=VALUE (repeatable)");
  app.add_flag("--trace", o.trace, "Write per-run trace CSVs (batch)");

  auto* run = app.add_subcommand("run", "Run one simulation and write its trace");
  auto* batch = app.add_subcommand("batch", "Run a seeded batch and aggregate it");
  auto* agg = app.add_subcommand("aggregate", "Recompute aggregate.csv from runs.csv");
  agg->add_option("runs_csv", o.runs_csv, "runs.csv to aggregate (default: <out>/runs.csv)");
  auto* validate = app.add_subcommand("validate", "Check a config and print the effective one");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e, std::cerr, std::cerr);
    std::cerr << app.help();
    return kConfigError;
  }
  if (agg->parsed() && !o.runs_csv.empty() && out_opt->count() == 0) o.out_dir.clear();

  try {
    if (run->parsed()) return cmd_run(o);
    if (batch->parsed()) return cmd_batch(o);
    if (agg->parsed()) return cmd_aggregate(o);
    if (validate->parsed()) return cmd_validate(o);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n" << app.help();
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntimeError;
  }
  return kConfigError;
}
