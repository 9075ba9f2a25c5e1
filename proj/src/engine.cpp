#include "strategem/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace strategem {

World make_world(const SimConfig& cfg) {
  cfg.validate();
  World w(cfg);
  Rng& rng = w.rng;

  std::vector<StrategyTag> tags(cfg.n_firms, StrategyTag::IO);
  std::fill(tags.begin() + cfg.n_firms / 2, tags.end(), StrategyTag::RBV);
  for (std::size_t i = tags.size(); i > 1; --i) std::swap(tags[i - 1], tags[rng.below(i)]);

  w.firms.resize(cfg.n_firms);
  for (std::size_t i = 0; i < w.firms.size(); ++i) {
    Firm& f = w.firms[i];
    f.id = i;
    f.strategy = tags[i];
    f.cash = cfg.initial_cash;
    for (std::size_t k = 0; k < ResourceBundle::kTypes; ++k)
      f.resources[k] = rng.uniform(cfg.resource_init_min, cfg.resource_init_max);
  }

  w.markets.resize(cfg.n_markets);
  for (std::size_t j = 0; j < w.markets.size(); ++j) {
    Market& m = w.markets[j];
    m.id = j;
    m.shares = cfg.market_size_choices[rng.below(cfg.market_size_choices.size())];
    m.initial_share_value = m.share_value = rng.uniform(cfg.share_value_min, cfg.share_value_max);
    for (std::size_t k = 0; k < ResourceBundle::kTypes; ++k)
      m.barrier[k] = rng.uniform(cfg.resource_init_min, cfg.resource_init_max);
  }

  w.sfm.price = {cfg.initial_price, cfg.initial_price, cfg.initial_price};
  w.sfm.stock = {cfg.initial_stock, cfg.initial_stock, cfg.initial_stock};
  return w;
}

double allocate_market_profit(const Market& m) {
  if (m.occupants == 0) return 0.0;
  return m.shares * m.share_value / m.occupants;
}

double update_share_value(const Market& m, double crowding, double noise, double floor) {
  const double v = m.initial_share_value / (1.0 + crowding * m.occupants) * noise;
  return std::max(v, floor);
}

ProfitBreakdown charge_costs(Firm& firm, const SfmState& sfm, double revenue, double quantity,
                             double purchases, double maintenance_rate) {
  ProfitBreakdown pb;
  pb.total_revenue = revenue;
  pb.quantity_sold = quantity;
  const double maintenance = maintenance_rate * std::max(total_asset_value(firm, sfm), 0.0);
  pb.total_cost = maintenance + purchases;
  pb.profit = pb.total_revenue - pb.total_cost;
  firm.cash += revenue - maintenance;
  return pb;
}

TradeResult sfm_buy(Firm& firm, const ResourceBundle& wanted, SfmState& sfm) {
  TradeResult out;
  ResourceBundle take;
  double cost = 0.0;
  for (std::size_t k = 0; k < ResourceBundle::kTypes; ++k) {
    if (wanted[k] < 0.0) throw std::invalid_argument("sfm_buy: negative quantity");
    take[k] = std::min(wanted[k], sfm.stock[k]);
    cost += take[k] * sfm.price[k];
  }
  if (cost <= 0.0 || firm.cash <= 0.0) return out;
  if (cost > firm.cash) {
    const double fraction = firm.cash / cost;
    cost = 0.0;
    for (std::size_t k = 0; k < ResourceBundle::kTypes; ++k) {
      take[k] *= fraction;
      cost += take[k] * sfm.price[k];
    }
  }
  for (std::size_t k = 0; k < ResourceBundle::kTypes; ++k) {
    sfm.stock[k] -= take[k];
    firm.resources[k] += take[k];
  }
  // rounding in the fractional branch can overshoot by an ulp
  firm.cash = std::max(firm.cash - cost, 0.0);
  out.quantity = take;
  out.cost = cost;
  return out;
}

TradeResult sfm_sell(Firm& firm, const ResourceBundle& offered, SfmState& sfm) {
  for (std::size_t k = 0; k < ResourceBundle::kTypes; ++k) {
    if (offered[k] < 0.0) throw std::invalid_argument("sfm_sell: negative quantity");
    if (offered[k] > firm.resources[k])
      throw std::invalid_argument("sfm_sell: offer exceeds holdings");
  }
  TradeResult out;
  for (std::size_t k = 0; k < ResourceBundle::kTypes; ++k) {
    firm.resources[k] -= offered[k];
    sfm.stock[k] += offered[k];
    out.cost += offered[k] * sfm.price[k];
  }
  firm.cash += out.cost;
  out.quantity = offered;
  return out;
}

std::array<double, 3> update_sfm_prices(const SfmState& sfm, const std::array<double, 3>& demand,
                                        const std::array<double, 3>& supply, double alpha,
                                        const std::array<double, 3>& noise, double floor) {
  std::array<double, 3> out{};
  for (std::size_t k = 0; k < 3; ++k) {
    const double pressure = (demand[k] - supply[k]) / (demand[k] + supply[k] + 1.0);
    out[k] = std::max(sfm.price[k] * (1.0 + alpha * pressure) * noise[k], floor);
  }
  return out;
}

bool survival_check(Firm& firm, const SfmState& sfm, std::uint32_t grace) {
  if (!firm.alive) return false;
  firm.cycles_in_red = firm.cash <= 0.0 ? firm.cycles_in_red + 1 : 0;
  if (total_asset_value(firm, sfm) <= 0.0 || firm.cycles_in_red >= grace) firm.alive = false;
  return firm.alive;
}

std::vector<std::uint32_t> recount_occupants(const World& world) {
  std::vector<std::uint32_t> nf(world.markets.size(), 0);
  for (const auto& f : world.firms)
    if (f.alive && f.market) ++nf[*f.market];
  return nf;
}

namespace {

struct Scratch {
  Action action = Action::None;
  std::optional<MarketId> output_market;
  double purchases = 0.0;
  double revenue = 0.0;
  double quantity = 0.0;
};

class CycleRunner {
 public:
  explicit CycleRunner(World& w) : w_(w), cfg_(w.config), scratch_(w.firms.size()) {}

  CycleReport run() {
    report_.cycle = w_.cycle + 1;
    for (const auto& f : w_.firms)
      if (f.alive) acting_.push_back(f.id);

    if (cfg_.visibility == ChoiceVisibility::Live) {
      for (auto id : acting_) execute(w_.firms[id], choose(w_.firms[id], w_.markets));
    } else {
      const std::vector<Market> snapshot = w_.markets;
      std::vector<MarketChoice> choices;
      choices.reserve(acting_.size());
      for (auto id : acting_) choices.push_back(choose(w_.firms[id], snapshot));
      for (std::size_t i = 0; i < acting_.size(); ++i) execute(w_.firms[acting_[i]], choices[i]);
    }

    allocate();
    book_costs();
    update_markets();
    update_prices();
    update_performance();
    finish();
    return std::move(report_);
  }

 private:
  double eps_for(const Firm& f) const { return cfg_.noise_amplitude / (1.0 + f.age); }

  MarketChoice choose(const Firm& f, std::span<const Market> markets) {
    const double eps = eps_for(f);
    if (f.strategy == StrategyTag::IO) {
      noise_.resize(markets.size());
      for (auto& x : noise_) x = w_.rng.noise(eps);
      return io_choose_market(f, markets, cfg_.io_count_self, noise_);
    }
    if (f.market) return rbv_choose_market(f, markets, w_.sfm, rbv_params());
    // only the candidate's estimate is used
    noise_.assign(markets.size(), 1.0);
    if (auto cand = rbv_candidate(f.resources, markets, cfg_.literal_distance))
      noise_[*cand] = w_.rng.noise(eps);
    return rbv_choose_market(f, markets, w_.sfm, rbv_params(), noise_);
  }

  RbvParams rbv_params() const {
    return {cfg_.output_fraction, cfg_.maintenance_rate, cfg_.io_count_self, cfg_.literal_distance};
  }

  void leave(Firm& f) {
    if (f.market) {
      --w_.markets[*f.market].occupants;
      f.market.reset();
    }
  }

  void join(Firm& f, MarketId j) {
    f.market = j;
    ++w_.markets[j].occupants;
  }

  // Buys the barrier shortfall and joins when it is affordable; otherwise stays out.
  void try_enter(Firm& f, MarketId j) {
    leave(f);
    const Market& m = w_.markets[j];
    const ResourceBundle wanted = shortfall_bundle(f.resources, m.barrier);
    if (bundle_value(wanted, w_.sfm) > f.cash) return;
    if (!wanted.is_zero()) buy(f, wanted);
    if (f.resources.covers(m.barrier)) join(f, j);
  }

  void buy(Firm& f, const ResourceBundle& wanted) {
    TradeRecord rec = start_record(f, false);
    const TradeResult t = sfm_buy(f, wanted, w_.sfm);
    finish_record(rec, f, t);
    scratch_[f.id].purchases += t.cost;
    const double eps = eps_for(f);
    for (std::size_t k = 0; k < 3; ++k) {
      demand_[k] += t.quantity[k];
      weighted_eps_[k] += t.quantity[k] * eps;
    }
  }

  void sell(Firm& f, const ResourceBundle& offered) {
    TradeRecord rec = start_record(f, true);
    const TradeResult t = sfm_sell(f, offered, w_.sfm);
    finish_record(rec, f, t);
    for (std::size_t k = 0; k < 3; ++k) supply_[k] += t.quantity[k];
  }

  TradeRecord start_record(const Firm& f, bool is_sale) const {
    TradeRecord rec;
    rec.firm = f.id;
    rec.is_sale = is_sale;
    rec.firm_before = f.resources;
    rec.stock_before = w_.sfm.stock;
    rec.cash_before = f.cash;
    return rec;
  }

  void finish_record(TradeRecord& rec, const Firm& f, const TradeResult& t) {
    rec.quantity = t.quantity;
    rec.firm_after = f.resources;
    rec.stock_after = w_.sfm.stock;
    rec.cash_after = f.cash;
    report_.trades.push_back(rec);
  }

  void execute(Firm& f, const MarketChoice& c) {
    Scratch& s = scratch_[f.id];
    s.action = c.action;
    switch (c.action) {
      case Action::Enter:
        if (c.market == f.market) {
          s.action = Action::Stay;
        } else {
          try_enter(f, *c.market);
        }
        break;
      case Action::SellResource: {
        ResourceBundle offer;
        offer[c.resource_type] = std::min(c.quantity, f.resources[c.resource_type]);
        sell(f, offer);
        break;
      }
      case Action::SellOutput:
        s.output_market = c.market;
        break;
      case Action::Stay:
      case Action::None:
        break;
    }
  }

  void allocate() {
    report_.markets.reserve(w_.markets.size());
    for (const auto& m : w_.markets)
      report_.markets.push_back({m.id, m.occupants, m.share_value, 0.0, m.share_value});
    for (auto id : acting_) {
      const Firm& f = w_.firms[id];
      Scratch& s = scratch_[id];
      if (f.market) {
        const Market& m = w_.markets[*f.market];
        s.revenue = allocate_market_profit(m);
        s.quantity = static_cast<double>(m.shares) / m.occupants;
        report_.markets[m.id].revenue_paid += s.revenue;
      } else if (s.output_market) {
        const Market& m = w_.markets[*s.output_market];
        s.revenue = cfg_.output_fraction * m.shares * m.share_value / (m.occupants + 1.0);
        s.quantity = s.revenue;
      }
    }
  }

  void book_costs() {
    pnl_.resize(w_.firms.size());
    for (auto id : acting_) {
      const Scratch& s = scratch_[id];
      pnl_[id] = charge_costs(w_.firms[id], w_.sfm, s.revenue, s.quantity, s.purchases,
                              cfg_.maintenance_rate);
    }
  }

  void update_markets() {
    for (auto& m : w_.markets) {
      const double noise = w_.rng.noise(cfg_.share_noise);
      m.share_value = update_share_value(m, cfg_.crowding, noise, cfg_.share_floor);
      report_.markets[m.id].next_share_value = m.share_value;
    }
  }

  void update_prices() {
    std::array<double, 3> noise{1.0, 1.0, 1.0};
    for (std::size_t k = 0; k < 3; ++k) {
      const double eps = demand_[k] > 0.0 ? weighted_eps_[k] / demand_[k] : 0.0;
      noise[k] = w_.rng.noise(eps);
    }
    w_.sfm.price = update_sfm_prices(w_.sfm, demand_, supply_, cfg_.price_alpha, noise,
                                     cfg_.price_floor);
    report_.demand = demand_;
    report_.supply = supply_;
    report_.prices = w_.sfm.price;
    report_.stock = w_.sfm.stock;
  }

  void update_performance() {
    const double weight = std::pow(cfg_.discount, static_cast<double>(w_.cycle));
    for (auto id : acting_) {
      Firm& f = w_.firms[id];
      const double res = total_asset_value(f, w_.sfm);
      if (res <= 0.0) {
        f.instant_perf = 0.0;
        f.alive = false;
      } else {
        f.instant_perf = pnl_[id].profit / res;
      }
      f.total_perf += weight * f.instant_perf;
    }
  }

  void finish() {
    for (auto id : acting_) {
      Firm& f = w_.firms[id];
      if (f.alive) survival_check(f, w_.sfm, cfg_.bankruptcy_grace);
      // dead firms keep their attachment for classification but stop counting
      if (!f.alive) {
        if (f.market) --w_.markets[*f.market].occupants;
      } else {
        ++f.age;
      }
    }
    ++w_.cycle;
    report_.firms.reserve(acting_.size());
    for (auto id : acting_) {
      const Firm& f = w_.firms[id];
      report_.firms.push_back({f.id, f.strategy, f.market, scratch_[id].action, f.cash,
                               f.resources, pnl_[id], f.instant_perf, f.total_perf, f.alive});
    }
  }

  World& w_;
  const SimConfig& cfg_;
  std::vector<FirmId> acting_;
  std::vector<Scratch> scratch_;
  std::vector<ProfitBreakdown> pnl_;
  std::vector<double> noise_;
  std::array<double, 3> demand_{};
  std::array<double, 3> supply_{};
  std::array<double, 3> weighted_eps_{};
  CycleReport report_;
};

}  // namespace

CycleReport step_cycle(World& world) { return CycleRunner(world).run(); }

CycleReport initial_report(const World& world) {
  CycleReport r;
  r.cycle = world.cycle;
  for (const auto& f : world.firms)
    r.firms.push_back({f.id, f.strategy, f.market, Action::None, f.cash, f.resources, {},
                       f.instant_perf, f.total_perf, f.alive});
  for (const auto& m : world.markets)
    r.markets.push_back({m.id, m.occupants, m.share_value, 0.0, m.share_value});
  r.prices = world.sfm.price;
  r.stock = world.sfm.stock;
  return r;
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_trace_header(std::ostream& os) {
  os << "run_id,cycle,firm_id,strategy,market_id,cash,red,green,blue,tr,tc,profit,roa,"
        "total_perf,alive\n";
}

void write_trace_rows(std::ostream& os, std::uint64_t run_id, const CycleReport& report) {
  for (const auto& f : report.firms) {
    os << run_id << ',' << report.cycle << ',' << f.id << ',' << to_string(f.strategy) << ','
       << (f.market ? static_cast<long long>(*f.market) : -1LL) << ',' << format_double(f.cash)
       << ',' << format_double(f.resources.red) << ',' << format_double(f.resources.green) << ','
       << format_double(f.resources.blue) << ',' << format_double(f.pnl.total_revenue) << ','
       << format_double(f.pnl.total_cost) << ',' << format_double(f.pnl.profit) << ','
       << format_double(f.roa) << ',' << format_double(f.total_perf) << ','
       << (f.alive ? 1 : 0) << '\n';
  }
}

}  // namespace strategem
