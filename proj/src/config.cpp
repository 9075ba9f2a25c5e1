#include "strategem/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

namespace strategem {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  const std::string s = trim(text);
  T v{};
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size() || s.empty())
    throw ConfigError(key + ": cannot parse '" + text + "'");
  return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
  const std::string s = trim(text);
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError(key + ": expected true/false, got '" + text + "'");
}

std::vector<std::uint32_t> parse_list(const std::string& key, const std::string& text) {
  std::vector<std::uint32_t> out;
  std::istringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number<std::uint32_t>(key, item));
  return out;
}

// shortest text that parses back to the same double
std::string show(double v) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::string show(const std::vector<std::uint32_t>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + std::to_string(xs[i]);
  return out;
}

struct Field {
  std::string section;
  std::string name;
  std::function<void(BatchConfig&, const std::string& key, const std::string&)> set;
  std::function<std::string(const BatchConfig&)> get;
};

template <typename Access>
Field real(std::string section, std::string name, Access acc) {
  return {std::move(section), std::move(name),
          [acc](BatchConfig& c, const std::string& k, const std::string& v) {
            acc(c) = parse_number<double>(k, v);
          },
          [acc](const BatchConfig& c) { return show(acc(c)); }};
}

template <typename Int, typename Access>
Field integer(std::string section, std::string name, Access acc) {
  return {std::move(section), std::move(name),
          [acc](BatchConfig& c, const std::string& k, const std::string& v) {
            acc(c) = parse_number<Int>(k, v);
          },
          [acc](const BatchConfig& c) { return std::to_string(acc(c)); }};
}

template <typename Access>
Field flag(std::string section, std::string name, Access acc) {
  return {std::move(section), std::move(name),
          [acc](BatchConfig& c, const std::string& k, const std::string& v) {
            acc(c) = parse_bool(k, v);
          },
          [acc](const BatchConfig& c) {
            return std::string(acc(c) ? "true" : "false");
          }};
}

template <typename Access>
Field list(std::string section, std::string name, Access acc) {
  return {std::move(section), std::move(name),
          [acc](BatchConfig& c, const std::string& k, const std::string& v) {
            acc(c) = parse_list(k, v);
          },
          [acc](const BatchConfig& c) { return show(acc(c)); }};
}

#define SIM(member) [](auto& c) -> auto& { return c.sim.member; }
#define BATCH(member) [](auto& c) -> auto& { return c.member; }

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      integer<std::uint32_t>("sim", "n_firms", SIM(n_firms)),
      integer<std::uint32_t>("sim", "n_markets", SIM(n_markets)),
      integer<std::uint32_t>("sim", "n_cycles", SIM(n_cycles)),
      list("sim", "market_size_choices", SIM(market_size_choices)),
      real("sim", "initial_cash", SIM(initial_cash)),
      real("sim", "resource_init_min", SIM(resource_init_min)),
      real("sim", "resource_init_max", SIM(resource_init_max)),
      real("sim", "share_value_min", SIM(share_value_min)),
      real("sim", "share_value_max", SIM(share_value_max)),
      real("sim", "noise_amplitude", SIM(noise_amplitude)),
      real("sim", "maintenance_rate", SIM(maintenance_rate)),
      real("sim", "crowding", SIM(crowding)),
      real("sim", "share_noise", SIM(share_noise)),
      real("sim", "share_floor", SIM(share_floor)),
      real("sim", "price_alpha", SIM(price_alpha)),
      real("sim", "price_floor", SIM(price_floor)),
      real("sim", "initial_price", SIM(initial_price)),
      real("sim", "initial_stock", SIM(initial_stock)),
      real("sim", "output_fraction", SIM(output_fraction)),
      integer<std::uint32_t>("sim", "bankruptcy_grace", SIM(bankruptcy_grace)),
      real("sim", "discount", SIM(discount)),
      Field{"sim", "visibility",
            [](BatchConfig& c, const std::string& k, const std::string& v) {
              const auto s = trim(v);
              if (s == "live") c.sim.visibility = ChoiceVisibility::Live;
              else if (s == "snapshot") c.sim.visibility = ChoiceVisibility::Snapshot;
              else throw ConfigError(k + ": expected live or snapshot, got '" + v + "'");
            },
            [](const BatchConfig& c) {
              return std::string(c.sim.visibility == ChoiceVisibility::Live ? "live" : "snapshot");
            }},
      flag("sim", "io_count_self", SIM(io_count_self)),
      flag("sim", "literal_distance", SIM(literal_distance)),
      integer<std::uint64_t>("sim", "rng_seed", SIM(rng_seed)),
      list("sim", "checkpoint_cycles", SIM(checkpoint_cycles)),
      integer<std::uint32_t>("batch", "n_runs", BATCH(n_runs)),
      integer<std::uint64_t>("batch", "base_seed", BATCH(base_seed)),
      integer<std::uint32_t>("batch", "workers", BATCH(workers)),
  };
  return table;
}

#undef SIM
#undef BATCH

const Field& find_field(const std::string& key) {
  const auto dot = key.find('.');
  const Field* hit = nullptr;
  for (const auto& f : fields()) {
    const bool match = dot == std::string::npos
                           ? f.name == key
                           : f.section == key.substr(0, dot) && f.name == key.substr(dot + 1);
    if (!match) continue;
    if (hit) throw ConfigError("ambiguous key '" + key + "'");
    hit = &f;
  }
  if (!hit) throw ConfigError("unknown key '" + key + "'");
  return *hit;
}

}  // namespace

void apply_setting(BatchConfig& cfg, const std::string& key, const std::string& value) {
  const Field& f = find_field(trim(key));
  f.set(cfg, f.section + "." + f.name, value);
}

BatchConfig parse_config(std::istream& is) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  BatchConfig cfg;
  for (const auto& [section, body] : tree) {
    if (section != "sim" && section != "batch") {
      if (body.empty()) throw ConfigError("config: key '" + section + "' outside a section");
      throw ConfigError("config: unknown section [" + section + "]");
    }
    for (const auto& [key, node] : body) apply_setting(cfg, section + "." + key, node.data());
  }
  return cfg;
}

BatchConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file " + path.string());
  return parse_config(is);
}

std::string to_ini(const BatchConfig& cfg) {
  std::string out;
  std::string section;
  for (const auto& f : fields()) {
    if (f.section != section) {
      if (!section.empty()) out += '\n';
      section = f.section;
      out += "[" + section + "]\n";
    }
    out += f.name + " = " + f.get(cfg) + "\n";
  }
  return out;
}

std::vector<std::string> config_keys() {
  std::vector<std::string> out;
  for (const auto& f : fields()) out.push_back(f.section + "." + f.name);
  return out;
}

}  // namespace strategem
