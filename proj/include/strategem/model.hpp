#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace strategem {

using FirmId = std::size_t;
using MarketId = std::size_t;

/// Error raised when a configuration violates its invariants.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Quantities of the three resource types. Components are non-negative.
struct ResourceBundle {
  double red = 0.0;
  double green = 0.0;
  double blue = 0.0;

  static constexpr std::size_t kTypes = 3;

  double operator[](std::size_t k) const { return k == 0 ? red : (k == 1 ? green : blue); }
  double& operator[](std::size_t k) { return k == 0 ? red : (k == 1 ? green : blue); }

  double total() const { return red + green + blue; }
  bool is_zero() const { return red == 0.0 && green == 0.0 && blue == 0.0; }

  /// True when every component is at least the matching component of `floor`.
  bool covers(const ResourceBundle& floor) const {
    return red >= floor.red && green >= floor.green && blue >= floor.blue;
  }

  friend bool operator==(const ResourceBundle&, const ResourceBundle&) = default;
};

/// Component-wise max(floor - have, 0).
ResourceBundle shortfall_bundle(const ResourceBundle& have, const ResourceBundle& floor);

enum class StrategyTag : std::uint8_t { IO, RBV };

const char* to_string(StrategyTag s);

struct Firm {
  FirmId id = 0;
  StrategyTag strategy = StrategyTag::IO;
  double cash = 0.0;
  ResourceBundle resources;
  std::optional<MarketId> market;
  double instant_perf = 0.0;
  double total_perf = 0.0;
  std::uint32_t age = 0;
  bool alive = true;
  // consecutive cycles ended with cash <= 0
  std::uint32_t cycles_in_red = 0;
};

struct Market {
  MarketId id = 0;
  std::uint32_t shares = 0;
  double share_value = 1.0;
  double initial_share_value = 1.0;
  ResourceBundle barrier;
  std::uint32_t occupants = 0;
};

/// Strategic factor market: per-type stock and unit price.
struct SfmState {
  ResourceBundle stock;
  std::array<double, 3> price{1.0, 1.0, 1.0};
};

struct ProfitBreakdown {
  double total_revenue = 0.0;
  double total_cost = 0.0;
  double profit = 0.0;
  double quantity_sold = 0.0;
};

/// Which occupant counts a chooser sees when it scores markets.
enum class ChoiceVisibility : std::uint8_t {
  /// Counts as left by the previous cycle, identical for every chooser.
  Snapshot,
  /// Counts updated as each firm (in id order) acts within the cycle.
  Live,
};

struct SimConfig {
  std::uint32_t n_firms = 200;
  std::uint32_t n_markets = 20;
  std::uint32_t n_cycles = 200;
  std::vector<std::uint32_t> market_size_choices{10, 100, 1000};
  double initial_cash = 1000.0;
  double resource_init_min = 0.0;
  double resource_init_max = 100.0;
  double share_value_min = 0.5;
  double share_value_max = 2.0;

  // imperfect information: estimates scaled by U[1-e, 1+e], e = noise_amplitude / (1 + age)
  double noise_amplitude = 0.5;
  double maintenance_rate = 0.005;

  double crowding = 0.05;
  double share_noise = 0.05;
  double share_floor = 0.01;

  double price_alpha = 0.25;
  double price_floor = 0.01;
  double initial_price = 0.05;
  double initial_stock = 1e6;

  double output_fraction = 0.5;
  std::uint32_t bankruptcy_grace = 10;
  double discount = 1.0;

  ChoiceVisibility visibility = ChoiceVisibility::Live;
  // score non-current markets with the chooser added to the occupant count
  bool io_count_self = true;
  // use pos(have - barrier) as printed instead of the shortfall orientation
  bool literal_distance = false;

  std::uint64_t rng_seed = 1;
  std::vector<std::uint32_t> checkpoint_cycles{20, 200};

  /// Throws ConfigError on the first violated invariant.
  void validate() const;
};

double bundle_value(const ResourceBundle& b, const SfmState& sfm);

/// RES: cash plus the bundle valued at current SFM prices.
double total_asset_value(const Firm& f, const SfmState& sfm);

}  // namespace strategem
