#include "run_config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "csv.hpp"
#include "twotier/error.hpp"

namespace twotier::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    throw InvalidConfiguration("config key '" + std::string(key) + "': cannot parse '" +
                               std::string(text) + "'");
  }
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(value)) {
      throw InvalidConfiguration("config key '" + std::string(key) + "' must be finite");
    }
  }
  return value;
}

using Setter = std::function<void(RunConfig&, std::string_view)>;
using Getter = std::function<std::string(const RunConfig&)>;

struct Field {
  std::string_view key;
  Setter set;
  Getter get;
};

template <typename T>
Field number(std::string_view key, T RunConfig::*member) {
  return {key,
          [key, member](RunConfig& c, std::string_view v) { c.*member = parse_number<T>(key, v); },
          [member](const RunConfig& c) {
            if constexpr (std::is_floating_point_v<T>) {
              return format_double(c.*member);
            } else {
              return std::to_string(c.*member);
            }
          }};
}

Field text(std::string_view key, std::string RunConfig::*member) {
  return {key, [member](RunConfig& c, std::string_view v) { c.*member = std::string(v); },
          [member](const RunConfig& c) { return c.*member; }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      number("r_macro_m", &RunConfig::r_macro_m),
      number("r_femto_m", &RunConfig::r_femto_m),
      number("rings", &RunConfig::rings),
      number("p_macro_dbm", &RunConfig::p_macro_dbm),
      number("p_femto_dbm", &RunConfig::p_femto_dbm),
      number("alpha", &RunConfig::alpha),
      number("beta", &RunConfig::beta),
      number("wall_loss_db", &RunConfig::wall_loss_db),
      number("gamma_macro", &RunConfig::gamma_macro),
      number("gamma_femto", &RunConfig::gamma_femto),
      number("eps_macro", &RunConfig::eps_macro),
      number("eps_macro_relaxed", &RunConfig::eps_macro_relaxed),
      number("eps_femto", &RunConfig::eps_femto),
      number("avg_femtocells", &RunConfig::avg_femtocells),
      number("subregions", &RunConfig::subregions),
      text("scenarios", &RunConfig::scenarios),
      number("distance_points", &RunConfig::distance_points),
      number("distance_start_fraction", &RunConfig::distance_start_fraction),
      number("capacity_max_femtocells", &RunConfig::capacity_max_femtocells),
      number("capacity_step_femtocells", &RunConfig::capacity_step_femtocells),
      number("capacity_curve_points", &RunConfig::capacity_curve_points),
      number("trials", &RunConfig::trials),
      number("configs", &RunConfig::configs),
      number("positions", &RunConfig::positions),
      number("capacity_configs", &RunConfig::capacity_configs),
      text("surrogates", &RunConfig::surrogates),
      text("correlation_table", &RunConfig::correlation_table),
      number("seed", &RunConfig::seed),
      text("out", &RunConfig::out),
  };
  return table;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw InvalidConfiguration("config: " + message);
}

}  // namespace

const std::vector<std::string_view>& run_config_keys() {
  static const std::vector<std::string_view> keys = [] {
    std::vector<std::string_view> k;
    for (const auto& f : fields()) k.push_back(f.key);
    return k;
  }();
  return keys;
}

void RunConfig::validate() const {
  require(r_macro_m > 0.0, "r_macro_m must be > 0");
  require(r_femto_m > 0.0 && r_femto_m < r_macro_m, "r_femto_m must lie in (0, r_macro_m)");
  require(rings >= 0 && rings <= 2, "rings must be 0, 1 or 2");
  powers().validate();
  pathloss().validate();
  require(gamma_macro > 0.0 && gamma_femto > 0.0, "SIR targets must be > 0");
  QosConstraint{eps_macro, eps_femto}.validate();
  QosConstraint{eps_macro_relaxed, eps_femto}.validate();
  require(avg_femtocells >= 0.0, "avg_femtocells must be >= 0");
  require(subregions >= 1, "subregions must be >= 1");
  require(scenarios == "figures" || scenarios == "base", "scenarios must be 'figures' or 'base'");
  require(distance_points >= 2, "distance_points must be >= 2");
  require(distance_start_fraction > 0.0 && distance_start_fraction < 1.0,
          "distance_start_fraction must lie in (0, 1)");
  require(capacity_max_femtocells > 0.0, "capacity_max_femtocells must be > 0");
  require(capacity_step_femtocells > 0.0 && capacity_step_femtocells <= capacity_max_femtocells,
          "capacity_step_femtocells must lie in (0, capacity_max_femtocells]");
  require(capacity_curve_points >= 2, "capacity_curve_points must be >= 2");
  require(trials >= 1 && configs >= 1 && positions >= 1 && capacity_configs >= 1,
          "trials, configs, positions and capacity_configs must be >= 1");
  require(surrogates == "fitted" || surrogates == "reported",
          "surrogates must be 'fitted' or 'reported'");
  require(!out.empty(), "out must not be empty");
}

RunConfig parse_run_config(std::istream& in, std::string_view source) {
  std::map<std::string_view, const Field*> by_key;
  for (const auto& f : fields()) by_key.emplace(f.key, &f);

  RunConfig cfg;
  std::set<std::string, std::less<>> seen;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view body = line;
    if (const auto hash = body.find('#'); hash != std::string_view::npos) body = body.substr(0, hash);
    body = trim(body);
    if (body.empty()) continue;
    const auto where = std::string(source) + ":" + std::to_string(line_no) + ": ";
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) throw InvalidConfiguration(where + "expected 'key = value'");
    const auto key = trim(body.substr(0, eq));
    const auto value = trim(body.substr(eq + 1));
    const auto it = by_key.find(key);
    if (it == by_key.end()) throw InvalidConfiguration(where + "unknown key '" + std::string(key) + "'");
    if (!seen.emplace(key).second) {
      throw InvalidConfiguration(where + "duplicate key '" + std::string(key) + "'");
    }
    try {
      it->second->set(cfg, value);
    } catch (const InvalidConfiguration& e) {
      throw InvalidConfiguration(where + e.what());
    }
  }
  cfg.validate();
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidConfiguration("cannot open config file " + path.string());
  return parse_run_config(in, path.string());
}

void write_run_config(std::ostream& out, const RunConfig& cfg) {
  for (const auto& f : fields()) out << f.key << " = " << f.get(cfg) << "\n";
}

}  // namespace twotier::cli
