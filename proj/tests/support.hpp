#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "strategem/model.hpp"

namespace strategem::testing {

inline Market market(MarketId id, std::uint32_t shares, double v, std::uint32_t nf,
                     ResourceBundle barrier = {}) {
  Market m;
  m.id = id;
  m.shares = shares;
  m.share_value = m.initial_share_value = v;
  m.occupants = nf;
  m.barrier = barrier;
  return m;
}

inline Firm firm(FirmId id, StrategyTag s, double cash, ResourceBundle r = {}) {
  Firm f;
  f.id = id;
  f.strategy = s;
  f.cash = cash;
  f.resources = r;
  return f;
}

inline SfmState sfm(double pr, double pg, double pb, double stock = 1e6) {
  SfmState s;
  s.price = {pr, pg, pb};
  s.stock = {stock, stock, stock};
  return s;
}

// Test-side random source, independent of the library's Rng.
struct Gen {
  std::mt19937_64 eng;
  explicit Gen(std::uint64_t seed) : eng(seed) {}
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng); }
  template <typename T>
  const T& pick(const std::vector<T>& xs) {
    return xs[static_cast<std::size_t>(integer(0, static_cast<int>(xs.size()) - 1))];
  }
};

}  // namespace strategem::testing
