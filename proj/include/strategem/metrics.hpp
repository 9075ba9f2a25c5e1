#pragma once

#include <array>
#include <span>

#include "strategem/model.hpp"

namespace strategem {

/// Profit over asset value; 0 when the firm holds no assets.
double instant_roa(double profit, double asset_value);

/// Sum of the ROA series, term j weighted by discount^j (j from 0).
/// The default discount of 1 gives the plain cumulative sum.
double total_performance(std::span<const double> roa_series, double discount = 1.0);

/// Ranking statistics of one strategy population at a checkpoint.
struct StrategyStats {
  std::uint32_t population = 0;
  std::uint32_t count_in_top = 0;
  double best = 0.0;
  double avg_top5 = 0.0;
  double avg_top10 = 0.0;
  double avg_all = 0.0;
};

struct StrategySnapshot {
  std::uint32_t cycle = 0;
  std::uint32_t k = 10;
  StrategyStats io;
  StrategyStats rbv;

  const StrategyStats& of(StrategyTag s) const { return s == StrategyTag::IO ? io : rbv; }
};

/// Ranks every firm (dead ones at their frozen total_perf) by total_perf
/// descending, ties by id, and counts each strategy among the first k. A
/// strategy with fewer than 5 or 10 firms averages over what it has; an
/// empty strategy reports NaN.
StrategySnapshot top_k_snapshot(std::span<const Firm> firms, std::uint32_t k,
                                std::uint32_t cycle);

/// (io - rbv) / rbv. Throws std::domain_error when rbv == 0.
double relative_diff(double io_value, double rbv_value);

enum class RbvProfile : std::uint8_t { Wallflower, ConvenienceMarriage, SoulMate };

const char* to_string(RbvProfile p);

/// Wallflower: no market. Convenience marriage: a market without live IO
/// occupants, or one where the firm does not beat the IO occupants' mean
/// total_perf. Soul mate: a market shared with IO firms whose mean
/// total_perf it exceeds. Throws std::invalid_argument for an IO firm.
RbvProfile classify_rbv(const Firm& firm, std::span<const Firm> firms);

/// Count and mean total_perf of each profile over all RBV firms.
struct ProfileStats {
  std::array<std::uint32_t, 3> count{};
  std::array<double, 3> mean_perf{};
};

ProfileStats profile_stats(std::span<const Firm> firms);

}  // namespace strategem
