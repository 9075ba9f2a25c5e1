#include "strategem/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace strategem {

double instant_roa(double profit, double asset_value) {
  if (asset_value <= 0.0) return 0.0;
  return profit / asset_value;
}

double total_performance(std::span<const double> roa_series, double discount) {
  double sum = 0.0;
  double w = 1.0;
  for (double x : roa_series) {
    sum += w * x;
    w *= discount;
  }
  return sum;
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double mean_of_first(const std::vector<double>& sorted_desc, std::size_t n) {
  n = std::min(n, sorted_desc.size());
  if (n == 0) return kNaN;
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += sorted_desc[i];
  return s / static_cast<double>(n);
}

StrategyStats stats_for(const std::vector<double>& perfs_desc) {
  StrategyStats st;
  st.population = static_cast<std::uint32_t>(perfs_desc.size());
  st.best = perfs_desc.empty() ? kNaN : perfs_desc.front();
  st.avg_top5 = mean_of_first(perfs_desc, 5);
  st.avg_top10 = mean_of_first(perfs_desc, 10);
  st.avg_all = mean_of_first(perfs_desc, perfs_desc.size());
  return st;
}

}  // namespace

StrategySnapshot top_k_snapshot(std::span<const Firm> firms, std::uint32_t k, std::uint32_t cycle) {
  if (k == 0) throw std::invalid_argument("top_k_snapshot: k must be >= 1");
  std::vector<const Firm*> ranked;
  ranked.reserve(firms.size());
  for (const auto& f : firms) ranked.push_back(&f);
  std::sort(ranked.begin(), ranked.end(), [](const Firm* a, const Firm* b) {
    if (a->total_perf != b->total_perf) return a->total_perf > b->total_perf;
    return a->id < b->id;
  });

  StrategySnapshot snap;
  snap.cycle = cycle;
  snap.k = k;
  std::vector<double> io, rbv;
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    const bool is_io = ranked[i]->strategy == StrategyTag::IO;
    (is_io ? io : rbv).push_back(ranked[i]->total_perf);
    if (i < k) ++(is_io ? snap.io : snap.rbv).count_in_top;
  }
  const auto io_top = snap.io.count_in_top;
  const auto rbv_top = snap.rbv.count_in_top;
  snap.io = stats_for(io);
  snap.rbv = stats_for(rbv);
  snap.io.count_in_top = io_top;
  snap.rbv.count_in_top = rbv_top;
  return snap;
}

double relative_diff(double io_value, double rbv_value) {
  if (rbv_value == 0.0) throw std::domain_error("relative_diff: zero denominator");
  return (io_value - rbv_value) / rbv_value;
}

const char* to_string(RbvProfile p) {
  switch (p) {
    case RbvProfile::Wallflower: return "WALLFLOWER";
    case RbvProfile::ConvenienceMarriage: return "CONVENIENCE_MARRIAGE";
    case RbvProfile::SoulMate: return "SOUL_MATE";
  }
  return "WALLFLOWER";
}

namespace {

struct IoPresence {
  std::uint32_t count = 0;
  double perf_sum = 0.0;
};

RbvProfile classify_with(const Firm& firm, const std::vector<IoPresence>& io_by_market) {
  if (!firm.market) return RbvProfile::Wallflower;
  const IoPresence& io =
      *firm.market < io_by_market.size() ? io_by_market[*firm.market] : IoPresence{};
  if (io.count == 0) return RbvProfile::ConvenienceMarriage;
  return firm.total_perf > io.perf_sum / io.count ? RbvProfile::SoulMate
                                                  : RbvProfile::ConvenienceMarriage;
}

std::vector<IoPresence> io_presence(std::span<const Firm> firms) {
  std::vector<IoPresence> out;
  for (const auto& f : firms) {
    if (f.strategy != StrategyTag::IO || !f.alive || !f.market) continue;
    if (*f.market >= out.size()) out.resize(*f.market + 1);
    ++out[*f.market].count;
    out[*f.market].perf_sum += f.total_perf;
  }
  return out;
}

}  // namespace

RbvProfile classify_rbv(const Firm& firm, std::span<const Firm> firms) {
  if (firm.strategy != StrategyTag::RBV) throw std::invalid_argument("classify_rbv: not an RBV firm");
  return classify_with(firm, io_presence(firms));
}

ProfileStats profile_stats(std::span<const Firm> firms) {
  const auto presence = io_presence(firms);
  ProfileStats out;
  std::array<double, 3> sums{};
  for (const auto& f : firms) {
    if (f.strategy != StrategyTag::RBV) continue;
    const auto p = static_cast<std::size_t>(classify_with(f, presence));
    ++out.count[p];
    sums[p] += f.total_perf;
  }
  for (std::size_t p = 0; p < 3; ++p)
    out.mean_perf[p] = out.count[p] ? sums[p] / out.count[p] : kNaN;
  return out;
}

}  // namespace strategem
