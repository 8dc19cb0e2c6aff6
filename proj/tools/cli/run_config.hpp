#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "twotier/capacity.hpp"

namespace twotier::cli {

// Flat `key = value` run configuration. Defaults reproduce the reference
// deployment: R_m = 500 m, R_f = 20 m, 50/22 dBm, alpha 4, beta 3, W 12 dB.
struct RunConfig {
  // layout
  double r_macro_m = 500.0;
  double r_femto_m = 20.0;
  int rings = 2;
  // powers, dBm
  double p_macro_dbm = 50.0;
  double p_femto_dbm = 22.0;
  // path loss
  double alpha = 4.0;
  double beta = 3.0;
  double wall_loss_db = 12.0;
  // SIR targets, linear
  double gamma_macro = 1.0;
  double gamma_femto = 10.0;
  // QoS
  double eps_macro = 0.45;
  double eps_macro_relaxed = 0.475;
  double eps_femto = 0.045;
  // femtocell process
  double avg_femtocells = 20.0;  // lambda_f |H|
  int subregions = 400;
  // outage sweep
  std::string scenarios = "figures";  // figures | base
  int distance_points = 20;
  double distance_start_fraction = 0.1;  // first distance as a fraction of R_m
  // capacity sweep, in average femtocells per macrocell
  double capacity_max_femtocells = 40.0;
  double capacity_step_femtocells = 5.0;
  int capacity_curve_points = 9;
  // Monte Carlo effort
  std::size_t trials = 200000;
  std::size_t configs = 2000;
  std::size_t positions = 64;
  std::size_t capacity_configs = 400;
  // model inputs
  std::string surrogates = "fitted";  // fitted | reported
  std::string correlation_table;      // CSV path; empty means the reference table
  std::uint64_t seed = 1;
  std::string out = "out";

  void validate() const;

  PowerProfile powers() const { return {p_macro_dbm, p_femto_dbm}; }
  PathLossParams pathloss() const { return {alpha, beta, wall_loss_db}; }
  TargetSir targets() const { return {gamma_macro, gamma_femto}; }
};

// Documented keys in file order.
const std::vector<std::string_view>& run_config_keys();

// Throws InvalidConfiguration on unknown keys, duplicates, or bad values.
RunConfig parse_run_config(std::istream& in, std::string_view source = "<input>");
RunConfig load_run_config(const std::filesystem::path& path);

void write_run_config(std::ostream& out, const RunConfig& cfg);

}  // namespace twotier::cli
