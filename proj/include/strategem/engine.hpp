#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "strategem/model.hpp"
#include "strategem/rng.hpp"
#include "strategem/strategy.hpp"

namespace strategem {

/// Quantities moved by one SFM trade. `cost` is the cash paid (buy) or
/// received (sale).
struct TradeResult {
  ResourceBundle quantity;
  double cost = 0.0;
};

/// Audit record for one SFM trade within a cycle.
struct TradeRecord {
  FirmId firm = 0;
  bool is_sale = false;
  ResourceBundle quantity;  // units moved, stock -> firm for a purchase
  ResourceBundle firm_before, firm_after;
  ResourceBundle stock_before, stock_after;
  double cash_before = 0.0;
  double cash_after = 0.0;
};

struct FirmRow {
  FirmId id = 0;
  StrategyTag strategy = StrategyTag::IO;
  std::optional<MarketId> market;
  Action action = Action::None;
  double cash = 0.0;
  ResourceBundle resources;
  ProfitBreakdown pnl;
  double roa = 0.0;
  double total_perf = 0.0;
  bool alive = true;
};

struct MarketRow {
  MarketId id = 0;
  std::uint32_t occupants = 0;      // NF(t) at allocation time
  double share_value = 0.0;         // v(t) used for allocation
  double revenue_paid = 0.0;        // sum of occupant allocations
  double next_share_value = 0.0;    // v(t+1) after the update
};

/// Everything that happened in one cycle. Firms appear if they were alive
/// at the start of the cycle; every market appears.
struct CycleReport {
  std::uint32_t cycle = 0;
  std::vector<FirmRow> firms;
  std::vector<MarketRow> markets;
  std::vector<TradeRecord> trades;
  std::array<double, 3> demand{};
  std::array<double, 3> supply{};
  std::array<double, 3> prices{};  // after the update
  ResourceBundle stock;
};

/// Complete state of one simulation.
struct World {
  SimConfig config;
  std::vector<Firm> firms;
  std::vector<Market> markets;
  SfmState sfm;
  Rng rng;
  std::uint32_t cycle = 0;

  explicit World(const SimConfig& cfg) : config(cfg), rng(cfg.rng_seed) {}
};

/// Seeds a fresh world: equal IO/RBV split shuffled over ids, uniform
/// bundles, market sizes, initial share values and barriers.
World make_world(const SimConfig& cfg);

/// Revenue per occupant: shares * share_value / occupants, 0 when empty.
double allocate_market_profit(const Market& m);

/// v(t) = v(0) / (1 + crowding * NF) * noise, clamped to `floor`.
double update_share_value(const Market& m, double crowding, double noise, double floor);

/// Books one cycle of accounts. TC = maintenance on current assets plus
/// this cycle's purchase outlays, and profit = TR - TC. Purchases were
/// already paid in cash by sfm_buy, so cash moves by TR - maintenance.
ProfitBreakdown charge_costs(Firm& firm, const SfmState& sfm, double revenue, double quantity,
                             double purchases, double maintenance_rate);

/// Buys min(wanted, stock) per type. If cash does not cover it, buys the
/// largest affordable uniform fraction. Never leaves cash below zero.
TradeResult sfm_buy(Firm& firm, const ResourceBundle& wanted, SfmState& sfm);

/// Sells `offered` at current prices. Throws std::invalid_argument when the
/// offer exceeds holdings or has negative components.
TradeResult sfm_sell(Firm& firm, const ResourceBundle& offered, SfmState& sfm);

/// p' = p * (1 + alpha * (d - s) / (d + s + 1)) * noise, clamped to `floor`.
std::array<double, 3> update_sfm_prices(const SfmState& sfm, const std::array<double, 3>& demand,
                                        const std::array<double, 3>& supply, double alpha,
                                        const std::array<double, 3>& noise, double floor);

/// Updates the in-red streak and the alive flag. A firm dies when its
/// assets are worth nothing or its cash stayed <= 0 for `grace` cycles.
bool survival_check(Firm& firm, const SfmState& sfm, std::uint32_t grace);

/// Advances the world by one cycle.
CycleReport step_cycle(World& world);

/// Recounts NF for every market from the firms' attachments.
std::vector<std::uint32_t> recount_occupants(const World& world);

/// Per-cycle trace CSV (one row per firm per cycle).
void write_trace_header(std::ostream& os);
void write_trace_rows(std::ostream& os, std::uint64_t run_id, const CycleReport& report);
/// Cycle-0 rows describing the initialized world.
CycleReport initial_report(const World& world);

/// 17 significant digits, which round-trips every double exactly.
std::string format_double(double x);

}  // namespace strategem
