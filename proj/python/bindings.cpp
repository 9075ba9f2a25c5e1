#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "strategem/config.hpp"
#include "strategem/engine.hpp"
#include "strategem/experiment.hpp"
#include "strategem/metrics.hpp"
#include "strategem/strategy.hpp"

namespace py = pybind11;
using namespace strategem;

namespace {

py::dict snapshot_dict(const StrategySnapshot& s) {
  auto side = [](const StrategyStats& st) {
    py::dict d;
    d["population"] = st.population;
    d["count_in_top"] = st.count_in_top;
    d["best"] = st.best;
    d["avg_top5"] = st.avg_top5;
    d["avg_top10"] = st.avg_top10;
    d["avg_all"] = st.avg_all;
    return d;
  };
  py::dict d;
  d["cycle"] = s.cycle;
  d["k"] = s.k;
  d["io"] = side(s.io);
  d["rbv"] = side(s.rbv);
  return d;
}

py::dict summary_dict(const RunSummary& r) {
  py::dict d;
  d["run_id"] = r.run_id;
  d["seed"] = r.seed;
  py::list cps;
  for (const auto& cs : r.checkpoints) {
    py::dict c;
    c["cycle"] = cs.cycle;
    c["snapshot"] = snapshot_dict(cs.snapshot);
    c["rel_diff"] = cs.rel_diff;
    c["profile_counts"] = cs.profiles.count;
    c["profile_mean_perf"] = cs.profiles.mean_perf;
    cps.append(c);
  }
  d["checkpoints"] = cps;
  return d;
}

}  // namespace

PYBIND11_MODULE(_strategem, m) {
  m.doc() = "IO vs RBV market-entry simulator";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<ResourceBundle>(m, "ResourceBundle")
      .def(py::init<>())
      .def(py::init([](double r, double g, double b) { return ResourceBundle{r, g, b}; }),
           py::arg("red"), py::arg("green"), py::arg("blue"))
      .def_readwrite("red", &ResourceBundle::red)
      .def_readwrite("green", &ResourceBundle::green)
      .def_readwrite("blue", &ResourceBundle::blue)
      .def("__repr__", [](const ResourceBundle& b) {
        std::ostringstream os;
        os << "ResourceBundle(" << b.red << ", " << b.green << ", " << b.blue << ")";
        return os.str();
      });

  py::enum_<StrategyTag>(m, "Strategy").value("IO", StrategyTag::IO).value("RBV", StrategyTag::RBV);
  py::enum_<Action>(m, "Action")
      .value("ENTER", Action::Enter)
      .value("SELL_RESOURCE", Action::SellResource)
      .value("SELL_OUTPUT", Action::SellOutput)
      .value("STAY", Action::Stay)
      .value("NONE", Action::None);
  py::enum_<RbvProfile>(m, "RbvProfile")
      .value("WALLFLOWER", RbvProfile::Wallflower)
      .value("CONVENIENCE_MARRIAGE", RbvProfile::ConvenienceMarriage)
      .value("SOUL_MATE", RbvProfile::SoulMate);

  py::class_<Firm>(m, "Firm")
      .def(py::init<>())
      .def_readwrite("id", &Firm::id)
      .def_readwrite("strategy", &Firm::strategy)
      .def_readwrite("cash", &Firm::cash)
      .def_readwrite("resources", &Firm::resources)
      .def_readwrite("market", &Firm::market)
      .def_readwrite("instant_perf", &Firm::instant_perf)
      .def_readwrite("total_perf", &Firm::total_perf)
      .def_readwrite("age", &Firm::age)
      .def_readwrite("alive", &Firm::alive);

  py::class_<Market>(m, "Market")
      .def(py::init<>())
      .def_readwrite("id", &Market::id)
      .def_readwrite("shares", &Market::shares)
      .def_readwrite("share_value", &Market::share_value)
      .def_readwrite("initial_share_value", &Market::initial_share_value)
      .def_readwrite("barrier", &Market::barrier)
      .def_readwrite("occupants", &Market::occupants);

  py::class_<SfmState>(m, "SfmState")
      .def(py::init<>())
      .def_readwrite("stock", &SfmState::stock)
      .def_readwrite("price", &SfmState::price);

  py::class_<MarketChoice>(m, "MarketChoice")
      .def_readonly("market", &MarketChoice::market)
      .def_readonly("score", &MarketChoice::score)
      .def_readonly("value", &MarketChoice::value)
      .def_readonly("action", &MarketChoice::action);

  py::class_<SimConfig>(m, "SimConfig")
      .def(py::init<>())
      .def_readwrite("n_firms", &SimConfig::n_firms)
      .def_readwrite("n_markets", &SimConfig::n_markets)
      .def_readwrite("n_cycles", &SimConfig::n_cycles)
      .def_readwrite("market_size_choices", &SimConfig::market_size_choices)
      .def_readwrite("initial_cash", &SimConfig::initial_cash)
      .def_readwrite("noise_amplitude", &SimConfig::noise_amplitude)
      .def_readwrite("maintenance_rate", &SimConfig::maintenance_rate)
      .def_readwrite("rng_seed", &SimConfig::rng_seed)
      .def_readwrite("checkpoint_cycles", &SimConfig::checkpoint_cycles)
      .def("validate", &SimConfig::validate)
      .def("set", [](SimConfig& c, const std::string& key, const std::string& value) {
        BatchConfig b;
        b.sim = c;
        apply_setting(b, key.find('.') == std::string::npos ? "sim." + key : key, value);
        c = b.sim;
      }, py::arg("key"), py::arg("value"), "Set any [sim] key from text, as in a config file.");

  py::class_<World>(m, "World")
      .def(py::init(&make_world), py::arg("config"))
      .def_readonly("firms", &World::firms)
      .def_readonly("markets", &World::markets)
      .def_readonly("sfm", &World::sfm)
      .def_readonly("cycle", &World::cycle)
      .def("step", [](World& w) {
        const CycleReport r = step_cycle(w);
        py::dict d;
        d["cycle"] = r.cycle;
        d["demand"] = r.demand;
        d["supply"] = r.supply;
        d["prices"] = r.prices;
        py::list revenue;
        for (const auto& mr : r.markets) revenue.append(mr.revenue_paid);
        d["market_revenue"] = revenue;
        py::list actions;
        for (const auto& fr : r.firms) actions.append(py::make_tuple(fr.id, fr.action));
        d["actions"] = actions;
        return d;
      }, "Advance one cycle; returns a summary dict of the cycle.")
      .def("snapshot", [](const World& w, std::uint32_t k) {
        return snapshot_dict(top_k_snapshot(w.firms, k, w.cycle));
      }, py::arg("k") = 10)
      .def("classify", [](const World& w, FirmId id) { return classify_rbv(w.firms.at(id), w.firms); });

  m.def("bundle_value", &bundle_value);
  m.def("io_choose_market", [](const Firm& f, const std::vector<Market>& ms, bool count_self) {
    return io_choose_market(f, ms, count_self);
  }, py::arg("firm"), py::arg("markets"), py::arg("count_self") = false);
  m.def("resource_shortfall",
        py::overload_cast<const ResourceBundle&, const ResourceBundle&, bool>(&resource_shortfall),
        py::arg("have"), py::arg("barrier"), py::arg("literal") = false);
  m.def("instant_roa", &instant_roa);
  m.def("relative_diff", &relative_diff);
  m.def("total_performance", [](const std::vector<double>& xs, double discount) {
    return total_performance(xs, discount);
  }, py::arg("series"), py::arg("discount") = 1.0);
  m.def("derive_seed", &derive_seed);

  m.def("run_one", [](std::uint64_t seed, const SimConfig& sim) {
    return summary_dict(run_one(0, seed, sim));
  }, py::arg("seed"), py::arg("config"));
  m.def("run_batch", [](std::uint32_t n_runs, std::uint64_t base_seed, const SimConfig& sim,
                        std::uint32_t workers) {
    BatchConfig b;
    b.n_runs = n_runs;
    b.base_seed = base_seed;
    b.sim = sim;
    b.workers = workers;
    BatchResult r;
    {
      py::gil_scoped_release release;
      r = run_batch(b);
    }
    std::ostringstream runs, agg;
    write_runs_csv(runs, r.table);
    write_aggregate_csv(agg, r.aggregate);
    return py::make_tuple(runs.str(), agg.str());
  }, py::arg("n_runs"), py::arg("base_seed"), py::arg("config"), py::arg("workers") = 1,
     "Runs a batch; returns (runs_csv, aggregate_csv) text.");
  m.def("aggregate_csv", [](const std::string& runs_csv) {
    std::istringstream is(runs_csv);
    std::ostringstream os;
    write_aggregate_csv(os, aggregate(read_runs_csv(is)));
    return os.str();
  });
}
