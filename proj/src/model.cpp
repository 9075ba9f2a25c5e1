#include "strategem/model.hpp"

#include <algorithm>
#include <cmath>

namespace strategem {

ResourceBundle shortfall_bundle(const ResourceBundle& have, const ResourceBundle& floor) {
  return {std::max(floor.red - have.red, 0.0), std::max(floor.green - have.green, 0.0),
          std::max(floor.blue - have.blue, 0.0)};
}

const char* to_string(StrategyTag s) { return s == StrategyTag::IO ? "IO" : "RBV"; }

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

bool finite(double x) { return std::isfinite(x); }

}  // namespace

void SimConfig::validate() const {
  require(n_firms >= 1, "n_firms must be >= 1");
  require(n_firms % 2 == 0, "n_firms must be even (equal IO/RBV split)");
  require(n_markets >= 1, "n_markets must be >= 1");
  require(!market_size_choices.empty(), "market_size_choices must not be empty");
  for (auto s : market_size_choices) require(s >= 1, "market sizes must be >= 1");
  require(finite(initial_cash) && initial_cash >= 0.0, "initial_cash must be >= 0");
  require(finite(resource_init_min) && resource_init_min >= 0.0 &&
              resource_init_max >= resource_init_min && finite(resource_init_max),
          "resource_init range must satisfy 0 <= min <= max");
  require(share_value_min > 0.0 && share_value_max >= share_value_min && finite(share_value_max),
          "share_value range must satisfy 0 < min <= max");
  require(noise_amplitude >= 0.0 && noise_amplitude < 1.0, "noise_amplitude must be in [0, 1)");
  require(maintenance_rate >= 0.0 && maintenance_rate < 1.0, "maintenance_rate must be in [0, 1)");
  require(crowding >= 0.0 && finite(crowding), "crowding must be >= 0");
  require(share_noise >= 0.0 && share_noise < 1.0, "share_noise must be in [0, 1)");
  require(share_floor > 0.0 && finite(share_floor), "share_floor must be > 0");
  require(price_alpha >= 0.0 && price_alpha < 1.0, "price_alpha must be in [0, 1)");
  require(price_floor > 0.0 && finite(price_floor), "price_floor must be > 0");
  require(initial_price > 0.0 && finite(initial_price), "initial_price must be > 0");
  require(initial_stock >= 0.0 && finite(initial_stock), "initial_stock must be >= 0");
  require(output_fraction >= 0.0 && output_fraction <= 1.0, "output_fraction must be in [0, 1]");
  require(bankruptcy_grace >= 1, "bankruptcy_grace must be >= 1");
  require(discount > 0.0 && discount <= 1.0, "discount must be in (0, 1]");
}

double bundle_value(const ResourceBundle& b, const SfmState& sfm) {
  return b.red * sfm.price[0] + b.green * sfm.price[1] + b.blue * sfm.price[2];
}

double total_asset_value(const Firm& f, const SfmState& sfm) {
  return f.cash + bundle_value(f.resources, sfm);
}

}  // namespace strategem
