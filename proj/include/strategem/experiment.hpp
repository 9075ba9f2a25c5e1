#pragma once

#include <array>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "strategem/engine.hpp"
#include "strategem/metrics.hpp"
#include "strategem/model.hpp"

namespace strategem {

struct CheckpointSummary {
  std::uint32_t cycle = 0;
  StrategySnapshot snapshot;
  // best, top-5 mean, top-10 mean, population mean; NaN when the RBV side is 0
  std::array<double, 4> rel_diff{};
  ProfileStats profiles;
};

struct RunSummary {
  std::uint64_t run_id = 0;
  std::uint64_t seed = 0;
  std::vector<CheckpointSummary> checkpoints;
};

struct BatchConfig {
  std::uint32_t n_runs = 1008;
  std::uint64_t base_seed = 20110404;
  std::uint32_t workers = 1;
  SimConfig sim;

  void validate() const;
};

/// Called with every CycleReport of a run, starting with the cycle-0 report.
using CycleObserver = std::function<void(const CycleReport&)>;

/// Checkpoints that fall within the run; the final cycle when none do.
std::vector<std::uint32_t> effective_checkpoints(const SimConfig& sim);

/// One seeded simulation. `sim.rng_seed` is replaced by `seed`.
RunSummary run_one(std::uint64_t run_id, std::uint64_t seed, SimConfig sim,
                   const CycleObserver& observer = {});

/// Flat numeric view of RunSummary rows, in run_id order.
struct RunsTable {
  std::vector<std::string> columns;
  std::vector<std::uint64_t> run_ids;
  std::vector<std::uint64_t> seeds;
  std::vector<std::vector<double>> values;

  std::size_t column(const std::string& name) const;  // throws std::out_of_range
};

RunsTable to_table(const std::vector<RunSummary>& runs);
void write_runs_csv(std::ostream& os, const RunsTable& table);
RunsTable read_runs_csv(std::istream& is);

/// Appendix-style statistics: one row per statistic, one column per runs.csv
/// column. The IO-vs-RBV tallies are filled only under the rd_* columns and
/// compare the underlying IO and RBV values directly.
struct AggregateTable {
  std::vector<std::string> columns;
  std::vector<std::string> statistics;
  std::vector<std::vector<double>> values;  // [statistic][column], NaN = blank
};

AggregateTable aggregate(const RunsTable& runs);
void write_aggregate_csv(std::ostream& os, const AggregateTable& table);

struct BatchResult {
  std::vector<RunSummary> runs;
  RunsTable table;
  AggregateTable aggregate;
};

/// Runs every seed (possibly on several threads) and merges by run_id. With
/// a non-empty `trace_dir`, run i writes trace_dir/run_<i>.csv. A failing
/// run aborts the batch with a std::runtime_error naming its seed.
BatchResult run_batch(const BatchConfig& cfg, const std::filesystem::path& trace_dir = {});

}  // namespace strategem
