#pragma once

#include <optional>
#include <span>

#include "strategem/model.hpp"

namespace strategem {

enum class Action : std::uint8_t { Enter, SellResource, SellOutput, Stay, None };

const char* to_string(Action a);

/// Outcome of one firm's market search.
///
/// `score` is the winning expected profit for IO firms and the candidate's
/// resource shortfall for RBV firms. `value` is the one-cycle value estimate
/// of the chosen action (equal to `score` for IO).
struct MarketChoice {
  std::optional<MarketId> market;
  double score = 0.0;
  double value = 0.0;
  Action action = Action::None;
  // RBV only: what a SellResource action liquidates
  std::size_t resource_type = 0;
  double quantity = 0.0;
};

/// Expected per-firm profit of market `m` for a firm currently attached to
/// `current`: shares * share_value / max(NF, 1), where NF gains the chooser
/// when `count_self` is set and the firm is not already there.
double io_market_score(const Market& m, std::optional<MarketId> current, bool count_self);

/// IO rule: the market promising the highest profit. `noise`, when non-empty,
/// holds one multiplicative factor per market applied to each score. Ties go
/// to the lowest index. Returns action None only for an empty market list.
MarketChoice io_choose_market(const Firm& firm, std::span<const Market> markets,
                              bool count_self = false, std::span<const double> noise = {});

/// Euclidean norm of the clamped gap pos(barrier - have). With `literal` the
/// gap is taken the other way round, pos(have - barrier).
double resource_shortfall(const ResourceBundle& have, const ResourceBundle& barrier,
                          bool literal = false);

inline double resource_shortfall(const Firm& firm, const Market& market, bool literal = false) {
  return resource_shortfall(firm.resources, market.barrier, literal);
}

/// Index of the market with minimal shortfall, lowest index on ties.
std::optional<MarketId> rbv_candidate(const ResourceBundle& have, std::span<const Market> markets,
                                      bool literal = false);

struct RbvParams {
  double output_fraction = 0.5;
  double maintenance_rate = 0.0;
  bool count_self = true;
  bool literal_distance = false;
};

/// RBV rule. A firm already attached stays (lock-in). Otherwise the
/// candidate is the minimal-shortfall market, and the three actions are
/// valued over one cycle:
///   Enter        expected per-firm profit on the candidate, if the shortfall
///                can be bought with current cash;
///   SellResource proceeds of liquidating the most abundant resource type;
///   SellOutput   output_fraction * expected per-firm profit.
/// The best positive value wins (ties in that order); None if none is positive.
MarketChoice rbv_choose_market(const Firm& firm, std::span<const Market> markets,
                               const SfmState& sfm, const RbvParams& params,
                               std::span<const double> noise = {});

}  // namespace strategem
