#include "strategem/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <istream>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "strategem/rng.hpp"

namespace strategem {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

void BatchConfig::validate() const {
  if (n_runs < 1) throw ConfigError("n_runs must be >= 1");
  if (workers < 1) throw ConfigError("workers must be >= 1");
  sim.validate();
}

std::vector<std::uint32_t> effective_checkpoints(const SimConfig& sim) {
  std::vector<std::uint32_t> out;
  for (auto c : sim.checkpoint_cycles)
    if (c <= sim.n_cycles) out.push_back(c);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (out.empty()) out.push_back(sim.n_cycles);
  return out;
}

namespace {

double safe_rel_diff(double io, double rbv) {
  if (rbv == 0.0 || std::isnan(io) || std::isnan(rbv)) return kNaN;
  return relative_diff(io, rbv);
}

CheckpointSummary summarize(const World& w) {
  CheckpointSummary cs;
  cs.cycle = w.cycle;
  cs.snapshot = top_k_snapshot(w.firms, 10, w.cycle);
  const auto& io = cs.snapshot.io;
  const auto& rbv = cs.snapshot.rbv;
  cs.rel_diff = {safe_rel_diff(io.best, rbv.best), safe_rel_diff(io.avg_top5, rbv.avg_top5),
                 safe_rel_diff(io.avg_top10, rbv.avg_top10),
                 safe_rel_diff(io.avg_all, rbv.avg_all)};
  cs.profiles = profile_stats(w.firms);
  return cs;
}

}  // namespace

RunSummary run_one(std::uint64_t run_id, std::uint64_t seed, SimConfig sim,
                   const CycleObserver& observer) {
  sim.rng_seed = seed;
  World world = make_world(sim);
  const auto checkpoints = effective_checkpoints(sim);

  RunSummary out;
  out.run_id = run_id;
  out.seed = seed;
  auto next = checkpoints.begin();
  auto capture = [&] {
    while (next != checkpoints.end() && *next == world.cycle) {
      out.checkpoints.push_back(summarize(world));
      ++next;
    }
  };

  if (observer) observer(initial_report(world));
  capture();
  while (world.cycle < sim.n_cycles) {
    CycleReport r = step_cycle(world);
    if (observer) observer(r);
    capture();
  }
  return out;
}

std::size_t RunsTable::column(const std::string& name) const {
  auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw std::out_of_range("no column " + name);
  return static_cast<std::size_t>(it - columns.begin());
}

namespace {

const char* const kProfileNames[3] = {"wallflowers", "convenience", "soulmates"};

std::vector<std::string> columns_for(std::uint32_t c) {
  const std::string p = "c" + std::to_string(c) + "_";
  std::vector<std::string> cols;
  for (const char* name : {"nb_io_top10", "nb_rbv_top10", "best_io", "best_rbv", "avg5_io",
                           "avg5_rbv", "avg10_io", "avg10_rbv", "avgall_io", "avgall_rbv",
                           "rd_best", "rd_avg5", "rd_avg10", "rd_avgall"})
    cols.push_back(p + name);
  for (const char* name : kProfileNames) cols.push_back(p + name);
  for (const char* name : kProfileNames) cols.push_back(p + "perf_" + name);
  return cols;
}

void append_values(std::vector<double>& row, const CheckpointSummary& cs) {
  const auto& io = cs.snapshot.io;
  const auto& rbv = cs.snapshot.rbv;
  row.insert(row.end(), {static_cast<double>(io.count_in_top), static_cast<double>(rbv.count_in_top),
                         io.best, rbv.best, io.avg_top5, rbv.avg_top5, io.avg_top10,
                         rbv.avg_top10, io.avg_all, rbv.avg_all});
  row.insert(row.end(), cs.rel_diff.begin(), cs.rel_diff.end());
  for (auto n : cs.profiles.count) row.push_back(n);
  row.insert(row.end(), cs.profiles.mean_perf.begin(), cs.profiles.mean_perf.end());
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::uint64_t parse_u64(const std::string& s) {
  std::size_t pos = 0;
  const auto v = std::stoull(s, &pos);
  if (pos != s.size()) throw std::runtime_error("bad integer field: " + s);
  return v;
}

double parse_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size())
    throw std::runtime_error("bad numeric field: '" + s + "'");
  return v;
}

}  // namespace

RunsTable to_table(const std::vector<RunSummary>& runs) {
  RunsTable t;
  if (runs.empty()) return t;
  for (const auto& cs : runs.front().checkpoints) {
    auto cols = columns_for(cs.cycle);
    t.columns.insert(t.columns.end(), cols.begin(), cols.end());
  }
  for (const auto& r : runs) {
    t.run_ids.push_back(r.run_id);
    t.seeds.push_back(r.seed);
    std::vector<double> row;
    row.reserve(t.columns.size());
    for (const auto& cs : r.checkpoints) append_values(row, cs);
    t.values.push_back(std::move(row));
  }
  return t;
}

void write_runs_csv(std::ostream& os, const RunsTable& table) {
  os << "run_id,seed";
  for (const auto& c : table.columns) os << ',' << c;
  os << '\n';
  for (std::size_t i = 0; i < table.values.size(); ++i) {
    os << table.run_ids[i] << ',' << table.seeds[i];
    for (double v : table.values[i]) os << ',' << format_double(v);
    os << '\n';
  }
}

RunsTable read_runs_csv(std::istream& is) {
  RunsTable t;
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("runs.csv: missing header");
  auto header = split(line);
  if (header.size() < 2 || header[0] != "run_id" || header[1] != "seed")
    throw std::runtime_error("runs.csv: header must start with run_id,seed");
  t.columns.assign(header.begin() + 2, header.end());
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto cells = split(line);
    if (cells.size() != header.size())
      throw std::runtime_error("runs.csv line " + std::to_string(lineno) + ": wrong field count");
    t.run_ids.push_back(parse_u64(cells[0]));
    t.seeds.push_back(parse_u64(cells[1]));
    std::vector<double> row;
    row.reserve(t.columns.size());
    for (std::size_t c = 2; c < cells.size(); ++c) row.push_back(parse_double(cells[c]));
    t.values.push_back(std::move(row));
  }
  return t;
}

AggregateTable aggregate(const RunsTable& runs) {
  AggregateTable agg;
  agg.columns = runs.columns;
  agg.statistics = {"mean",          "stdev",         "variance",      "median",
                    "max",           "min",           "n_io_gt_rbv",   "n_rbv_gt_io",
                    "pct_io_gt_rbv", "pct_rbv_gt_io"};
  const std::size_t ncol = runs.columns.size();
  agg.values.assign(agg.statistics.size(), std::vector<double>(ncol, kNaN));

  for (std::size_t c = 0; c < ncol; ++c) {
    std::vector<double> xs;
    xs.reserve(runs.values.size());
    for (const auto& row : runs.values)
      if (!std::isnan(row[c])) xs.push_back(row[c]);
    if (xs.empty()) continue;
    const double n = static_cast<double>(xs.size());
    double sum = 0.0;
    for (double x : xs) sum += x;
    const double mean = sum / n;
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    const double var = ss / n;
    std::sort(xs.begin(), xs.end());
    const std::size_t mid = xs.size() / 2;
    const double median = xs.size() % 2 ? xs[mid] : 0.5 * (xs[mid - 1] + xs[mid]);
    agg.values[0][c] = mean;
    agg.values[1][c] = std::sqrt(var);
    agg.values[2][c] = var;
    agg.values[3][c] = median;
    agg.values[4][c] = xs.back();
    agg.values[5][c] = xs.front();
  }

  // rd_<x> compares <x>_io against <x>_rbv within the same checkpoint prefix
  for (std::size_t c = 0; c < ncol; ++c) {
    const std::string& name = runs.columns[c];
    const auto at = name.find("_rd_");
    if (at == std::string::npos) continue;
    const std::string prefix = name.substr(0, at + 1);
    const std::string stem = name.substr(at + 4);
    std::size_t ci, cr;
    try {
      ci = runs.column(prefix + stem + "_io");
      cr = runs.column(prefix + stem + "_rbv");
    } catch (const std::out_of_range&) {
      continue;
    }
    double io_gt = 0, rbv_gt = 0, valid = 0;
    for (const auto& row : runs.values) {
      if (std::isnan(row[ci]) || std::isnan(row[cr])) continue;
      ++valid;
      if (row[ci] > row[cr]) ++io_gt;
      if (row[cr] > row[ci]) ++rbv_gt;
    }
    agg.values[6][c] = io_gt;
    agg.values[7][c] = rbv_gt;
    if (valid > 0) {
      agg.values[8][c] = 100.0 * io_gt / valid;
      agg.values[9][c] = 100.0 * rbv_gt / valid;
    }
  }
  return agg;
}

void write_aggregate_csv(std::ostream& os, const AggregateTable& table) {
  os << "statistic";
  for (const auto& c : table.columns) os << ',' << c;
  os << '\n';
  for (std::size_t s = 0; s < table.statistics.size(); ++s) {
    os << table.statistics[s];
    for (double v : table.values[s]) {
      os << ',';
      if (!std::isnan(v)) os << format_double(v);
    }
    os << '\n';
  }
}

BatchResult run_batch(const BatchConfig& cfg, const std::filesystem::path& trace_dir) {
  cfg.validate();
  if (!trace_dir.empty()) std::filesystem::create_directories(trace_dir);

  BatchResult out;
  out.runs.resize(cfg.n_runs);
  std::atomic<std::uint32_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex err_mu;
  std::uint64_t failed_seed = 0;
  std::uint32_t failed_run = std::numeric_limits<std::uint32_t>::max();
  std::string failed_what;

  auto worker = [&] {
    for (;;) {
      const std::uint32_t i = next.fetch_add(1);
      if (i >= cfg.n_runs || failed.load()) return;
      const std::uint64_t seed = derive_seed(cfg.base_seed, i);
      try {
        if (trace_dir.empty()) {
          out.runs[i] = run_one(i, seed, cfg.sim);
        } else {
          std::ofstream os(trace_dir / ("run_" + std::to_string(i) + ".csv"));
          if (!os) throw std::runtime_error("cannot open trace file");
          write_trace_header(os);
          out.runs[i] = run_one(i, seed, cfg.sim,
                                [&](const CycleReport& r) { write_trace_rows(os, i, r); });
        }
      } catch (const std::exception& e) {
        std::lock_guard lock(err_mu);
        // report the lowest failing run so the message does not depend on scheduling
        if (i < failed_run) {
          failed_run = i;
          failed_seed = seed;
          failed_what = e.what();
        }
        failed = true;
      }
    }
  };

  const std::uint32_t n_threads = std::min(cfg.workers, cfg.n_runs);
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_threads);
    for (std::uint32_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }
  if (failed)
    throw std::runtime_error("run " + std::to_string(failed_run) + " (seed " +
                             std::to_string(failed_seed) + ") failed: " + failed_what);

  out.table = to_table(out.runs);
  out.aggregate = aggregate(out.table);
  return out;
}

}  // namespace strategem
