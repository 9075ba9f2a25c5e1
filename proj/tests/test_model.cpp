#include <doctest.h>

#include <algorithm>

#include "strategem/engine.hpp"
#include "support.hpp"

using namespace strategem;
using namespace strategem::testing;

TEST_CASE("bundle_value is the price-weighted sum") {
  CHECK(bundle_value({0, 0, 0}, sfm(3, 7, 11)) == 0.0);
  CHECK(bundle_value({1, 1, 1}, sfm(1, 1, 1)) == 3.0);
  // 2*1.5 + 0*9 + 5*0.2
  CHECK(bundle_value({2, 0, 5}, sfm(1.5, 9, 0.2)) == doctest::Approx(4.0).epsilon(1e-15));
}

TEST_CASE("total_asset_value adds cash to the bundle value") {
  CHECK(total_asset_value(firm(0, StrategyTag::IO, 10), sfm(1, 1, 1)) == 10.0);
  CHECK(total_asset_value(firm(0, StrategyTag::IO, 0, {1, 1, 1}), sfm(1, 1, 1)) == 3.0);
  CHECK(total_asset_value(firm(0, StrategyTag::IO, 5, {2, 0, 5}), sfm(1.5, 9, 0.2)) ==
        doctest::Approx(9.0).epsilon(1e-15));
}

TEST_CASE("shortfall_bundle clamps each component at zero") {
  const ResourceBundle s = shortfall_bundle({5, 2, 0}, {3, 4, 2});
  CHECK(s == ResourceBundle{0, 2, 2});
  CHECK(shortfall_bundle({1, 1, 1}, {0, 0, 0}).is_zero());
  CHECK(ResourceBundle{3, 4, 2}.covers({3, 4, 2}));
  CHECK_FALSE(ResourceBundle{3, 4, 1.5}.covers({3, 4, 2}));
}

TEST_CASE("SimConfig validation") {
  SimConfig c;
  CHECK_NOTHROW(c.validate());

  auto rejects = [](auto mutate) {
    SimConfig bad;
    mutate(bad);
    CHECK_THROWS_AS(bad.validate(), ConfigError);
  };
  rejects([](SimConfig& s) { s.n_firms = 3; });
  rejects([](SimConfig& s) { s.n_firms = 0; });
  rejects([](SimConfig& s) { s.n_markets = 0; });
  rejects([](SimConfig& s) { s.noise_amplitude = 1.0; });
  rejects([](SimConfig& s) { s.noise_amplitude = -0.1; });
  rejects([](SimConfig& s) { s.maintenance_rate = 1.0; });
  rejects([](SimConfig& s) { s.market_size_choices.clear(); });
  rejects([](SimConfig& s) { s.resource_init_min = 5, s.resource_init_max = 1; });
}

TEST_CASE("make_world splits strategies evenly and draws within ranges") {
  SimConfig c;
  c.rng_seed = 77;
  const World w = make_world(c);
  REQUIRE(w.firms.size() == 200);
  REQUIRE(w.markets.size() == 20);
  int io = 0;
  for (const auto& f : w.firms) {
    io += f.strategy == StrategyTag::IO;
    CHECK(f.cash == c.initial_cash);
    CHECK_FALSE(f.market.has_value());
    for (std::size_t k = 0; k < 3; ++k) {
      CHECK(f.resources[k] >= c.resource_init_min);
      CHECK(f.resources[k] < c.resource_init_max);
    }
  }
  CHECK(io == 100);
  for (const auto& m : w.markets) {
    const auto& sizes = c.market_size_choices;
    CHECK(std::find(sizes.begin(), sizes.end(), m.shares) != sizes.end());
    CHECK(m.share_value == m.initial_share_value);
    CHECK(m.share_value >= c.share_value_min);
    CHECK(m.share_value < c.share_value_max);
    CHECK(m.occupants == 0);
  }
}

TEST_CASE("make_world is a function of the seed") {
  SimConfig c;
  c.rng_seed = 5;
  const World a = make_world(c), b = make_world(c);
  c.rng_seed = 6;
  const World d = make_world(c);
  bool differs = false;
  for (std::size_t i = 0; i < a.firms.size(); ++i) {
    CHECK(a.firms[i].resources == b.firms[i].resources);
    CHECK(a.firms[i].strategy == b.firms[i].strategy);
    differs = differs || !(a.firms[i].resources == d.firms[i].resources);
  }
  CHECK(differs);
}

TEST_CASE("engine invariants hold on random worlds") {
  Gen g(2024);
  for (int trial = 0; trial < 12; ++trial) {
    SimConfig c;
    c.n_firms = 2 * static_cast<std::uint32_t>(g.integer(1, 40));
    c.n_markets = static_cast<std::uint32_t>(g.integer(1, 12));
    c.n_cycles = 60;
    c.initial_cash = g.real(10, 2000);
    c.maintenance_rate = g.real(0, 0.1);
    c.noise_amplitude = g.real(0, 0.9);
    c.visibility = trial % 3 == 0 ? ChoiceVisibility::Snapshot : ChoiceVisibility::Live;
    c.io_count_self = trial % 2 == 0;
    c.rng_seed = static_cast<std::uint64_t>(trial) + 1;
    World w = make_world(c);
    std::vector<StrategyTag> tags;
    for (const auto& f : w.firms) tags.push_back(f.strategy);

    for (std::uint32_t t = 0; t < c.n_cycles; ++t) {
      std::vector<double> before;
      for (const auto& f : w.firms) before.push_back(f.total_perf);
      const CycleReport r = step_cycle(w);
      const auto nf = recount_occupants(w);
      for (const auto& m : w.markets) REQUIRE(m.occupants == nf[m.id]);
      for (std::size_t i = 0; i < w.firms.size(); ++i) {
        const Firm& f = w.firms[i];
        REQUIRE(f.strategy == tags[i]);
        REQUIRE(f.resources.red >= 0.0);
        REQUIRE(f.resources.green >= 0.0);
        REQUIRE(f.resources.blue >= 0.0);
      }
      for (const auto& row : r.firms) REQUIRE(row.total_perf == before[row.id] + row.roa);
    }
  }
}
