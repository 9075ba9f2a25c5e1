#include "strategem/strategy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace strategem {

const char* to_string(Action a) {
  switch (a) {
    case Action::Enter: return "ENTER";
    case Action::SellResource: return "SELL_RESOURCE";
    case Action::SellOutput: return "SELL_OUTPUT";
    case Action::Stay: return "STAY";
    case Action::None: return "NONE";
  }
  return "NONE";
}

double io_market_score(const Market& m, std::optional<MarketId> current, bool count_self) {
  double nf = m.occupants;
  if (count_self && current != m.id) nf += 1.0;
  return m.shares * m.share_value / std::max(nf, 1.0);
}

MarketChoice io_choose_market(const Firm& firm, std::span<const Market> markets, bool count_self,
                              std::span<const double> noise) {
  MarketChoice best;
  double best_score = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < markets.size(); ++j) {
    double s = io_market_score(markets[j], firm.market, count_self);
    if (!noise.empty()) s *= noise[j];
    if (s > best_score) {
      best_score = s;
      best.market = j;
    }
  }
  if (best.market) {
    best.score = best.value = best_score;
    best.action = Action::Enter;
  }
  return best;
}

double resource_shortfall(const ResourceBundle& have, const ResourceBundle& barrier, bool literal) {
  double sq = 0.0;
  for (std::size_t k = 0; k < ResourceBundle::kTypes; ++k) {
    const double gap = literal ? have[k] - barrier[k] : barrier[k] - have[k];
    if (gap > 0.0) sq += gap * gap;
  }
  return std::sqrt(sq);
}

std::optional<MarketId> rbv_candidate(const ResourceBundle& have, std::span<const Market> markets,
                                      bool literal) {
  std::optional<MarketId> best;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < markets.size(); ++j) {
    const double d = resource_shortfall(have, markets[j].barrier, literal);
    if (d < best_d) {
      best_d = d;
      best = j;
    }
  }
  return best;
}

MarketChoice rbv_choose_market(const Firm& firm, std::span<const Market> markets,
                               const SfmState& sfm, const RbvParams& params,
                               std::span<const double> noise) {
  MarketChoice out;
  if (firm.market) {
    out.market = firm.market;
    out.action = Action::Stay;
    return out;
  }
  const auto cand = rbv_candidate(firm.resources, markets, params.literal_distance);
  if (!cand) return out;

  const Market& m = markets[*cand];
  out.market = cand;
  out.score = resource_shortfall(firm.resources, m.barrier, params.literal_distance);

  double revenue = io_market_score(m, firm.market, params.count_self);
  if (!noise.empty()) revenue *= noise[*cand];
  const double profit = revenue - params.maintenance_rate * total_asset_value(firm, sfm);
  const double entry_cost = bundle_value(shortfall_bundle(firm.resources, m.barrier), sfm);

  std::size_t richest = 0;
  for (std::size_t k = 1; k < ResourceBundle::kTypes; ++k)
    if (firm.resources[k] > firm.resources[richest]) richest = k;
  const double surplus = std::max(firm.resources[richest] - m.barrier[richest], 0.0);

  const double enter_value =
      entry_cost <= firm.cash ? profit : -std::numeric_limits<double>::infinity();
  const double sell_value = surplus * sfm.price[richest];
  const double output_value = params.output_fraction * profit;

  out.action = Action::None;
  out.value = 0.0;
  auto consider = [&](Action a, double v) {
    if (v > out.value) {
      out.value = v;
      out.action = a;
    }
  };
  consider(Action::Enter, enter_value);
  consider(Action::SellResource, sell_value);
  consider(Action::SellOutput, output_value);
  if (out.action == Action::SellResource) {
    out.resource_type = richest;
    out.quantity = surplus;
  }
  return out;
}

}  // namespace strategem
