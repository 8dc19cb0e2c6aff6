#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "run_config.hpp"
#include "twotier/capacity.hpp"

namespace twotier::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitRuntimeError = 1,
  kExitConfigError = 2,
  kExitValidationFailed = 3,
};

struct ModelInputs {
  SurrogateSet surrogates;
  CorrelationTable correlations;
};

// Fits or loads the surrogates and reads the optional correlation CSV.
ModelInputs load_model_inputs(const RunConfig& cfg);

struct Scenario {
  double p_femto_dbm = 22.0;
  double p_macro_dbm = 50.0;
  double r_macro_m = 500.0;
};

// "base" is the configured scenario alone. "figures" adds P_f + 3 dB,
// P_m + 3 dB, and 2 R_m variants of it.
std::vector<Scenario> sweep_scenarios(const RunConfig& cfg);

// distance_points values from distance_start_fraction * R_m to R_m.
std::vector<double> sweep_distances(const RunConfig& cfg, double r_macro_m);

Network make_network(const RunConfig& cfg, const Scenario& s);
AnalysisContext make_context(const RunConfig& cfg, const Scenario& s, const ModelInputs& inputs);

struct OutageRow {
  Tier tier = Tier::Macro;
  double distance_m = 0.0;
  Scenario scenario;
  double analytic_q = 0.0;
  double simulated_q = 0.0;
  double sim_stderr = 0.0;
};

// MUE rows then FUE rows, distances in the given order. Positions lie on the
// positive x-axis; for the FUE the distance locates the femtocell.
std::vector<OutageRow> outage_rows(const RunConfig& cfg, const ModelInputs& inputs,
                                   const Scenario& scenario, const std::vector<double>& distances);

// outage_rows over sweep_scenarios and sweep_distances.
std::vector<OutageRow> outage_sweep(const RunConfig& cfg, const ModelInputs& inputs);

struct CapacityRow {
  double avg_femtocells = 0.0;
  double spatial_throughput = 0.0;
  double tc_strict = 0.0;   // NaN when the QoS is infeasible
  double tc_relaxed = 0.0;  // NaN when the QoS is infeasible
};

struct CapacitySweep {
  double area_m2 = 0.0;
  std::optional<CapacityResult> strict;   // eps_macro
  std::optional<CapacityResult> relaxed;  // eps_macro_relaxed
  std::vector<CapacityRow> rows;
  std::vector<std::string> warnings;
};

CapacitySweep capacity_sweep(const RunConfig& cfg, const ModelInputs& inputs);

enum class CheckStatus { Pass, Fail, Warn };

struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::Pass;
  double measured = 0.0;
  std::string bound;  // e.g. "<= 0.05"
  std::string note;
};

struct ValidationReport {
  std::vector<CheckResult> checks;

  bool passed() const;  // no Fail entries
  std::string text() const;
};

// Monte Carlo checks use cfg.trials. Below kMinPrecisionTrials a check that
// would fail is reported as Warn instead.
inline constexpr std::size_t kMinPrecisionTrials = 10000;

ValidationReport run_validation(const RunConfig& cfg, const ModelInputs& inputs);

int cmd_fit_ratios(const RunConfig& cfg, std::ostream& log);
int cmd_outage_sweep(const RunConfig& cfg, std::ostream& log);
int cmd_capacity_sweep(const RunConfig& cfg, std::ostream& log);
int cmd_validate(const RunConfig& cfg, std::ostream& log);

// Dispatches by subcommand name and maps exceptions to exit codes.
int run_command(std::string_view name, const RunConfig& cfg, std::ostream& log);

}  // namespace twotier::cli
