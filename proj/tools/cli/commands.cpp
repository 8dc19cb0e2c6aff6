#include "commands.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "csv.hpp"
#include "twotier/error.hpp"
#include "twotier/simulation.hpp"

namespace twotier::cli {

namespace fs = std::filesystem;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Stream ids of the Monte Carlo oracles.
constexpr std::uint64_t kSimulationStream = 0x5100A000;
constexpr std::uint64_t kRatioKsStream = 0x5100B000;
constexpr std::uint64_t kFwCcdfStream = 0x5100C000;

fs::path prepare_out(const RunConfig& cfg) {
  fs::path dir(cfg.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

std::string_view tier_label(Tier t) { return t == Tier::Macro ? "macro" : "femto"; }

std::string file_slug(RatioKind k) {
  std::string s(to_string(k));
  std::replace(s.begin(), s.end(), '/', '_');
  return s;
}

std::string fmt(double v, const char* spec = "%.6g") {
  char buf[48];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

}  // namespace

ModelInputs load_model_inputs(const RunConfig& cfg) {
  ModelInputs in{cfg.surrogates == "fitted" ? SurrogateSet::fitted() : SurrogateSet::reported(),
                 CorrelationTable::reported()};
  if (!cfg.correlation_table.empty()) {
    std::ifstream f(cfg.correlation_table);
    if (!f) throw InvalidConfiguration("cannot open correlation table " + cfg.correlation_table);
    in.correlations = CorrelationTable::read_csv(f);
  }
  return in;
}

std::vector<Scenario> sweep_scenarios(const RunConfig& cfg) {
  const Scenario base{cfg.p_femto_dbm, cfg.p_macro_dbm, cfg.r_macro_m};
  if (cfg.scenarios == "base") return {base};
  Scenario pf = base, pm = base, rm = base;
  pf.p_femto_dbm += 3.0;
  pm.p_macro_dbm += 3.0;
  rm.r_macro_m *= 2.0;
  return {base, pf, pm, rm};
}

std::vector<double> sweep_distances(const RunConfig& cfg, double r_macro_m) {
  std::vector<double> d;
  const int n = cfg.distance_points;
  for (int i = 0; i < n; ++i) {
    const double frac =
        cfg.distance_start_fraction + (1.0 - cfg.distance_start_fraction) * i / (n - 1);
    d.push_back(frac * r_macro_m);
  }
  return d;
}

Network make_network(const RunConfig& cfg, const Scenario& s) {
  Network net;
  net.layout = build_layout(s.r_macro_m, cfg.rings, cfg.r_femto_m);
  net.grid = build_subregion_grid(net.layout, cfg.subregions,
                                  cfg.avg_femtocells / net.layout.area_m2);
  net.powers = {s.p_macro_dbm, s.p_femto_dbm};
  net.powers.validate();
  net.pathloss = cfg.pathloss();
  return net;
}

AnalysisContext make_context(const RunConfig& cfg, const Scenario& s, const ModelInputs& inputs) {
  return AnalysisContext{make_network(cfg, s), inputs.surrogates, inputs.correlations,
                         cfg.targets()};
}

std::vector<OutageRow> outage_rows(const RunConfig& cfg, const ModelInputs& inputs,
                                   const Scenario& scenario, const std::vector<double>& distances) {
  const AnalysisContext ctx = make_context(cfg, scenario, inputs);
  std::vector<OutageRow> rows;
  for (Tier tier : {Tier::Macro, Tier::Femto}) {
    // One stream per tier: every distance and scenario sees the same draws.
    const RandomStream sim(cfg.seed, kSimulationStream + static_cast<std::uint64_t>(tier));
    for (double d : distances) {
      const OutageQuery q{tier, {d, 0.0}, ctx.targets.of(tier), ctx.network.grid.intensity};
      const auto analytic = outage_probability(q, cfg.configs, cfg.seed, ctx);
      const auto simulated = simulate_outage(q, cfg.trials, sim, ctx.network);
      rows.push_back({tier, d, scenario, analytic.probability, simulated.probability,
                      simulated.std_error});
    }
  }
  return rows;
}

std::vector<OutageRow> outage_sweep(const RunConfig& cfg, const ModelInputs& inputs) {
  std::vector<OutageRow> all;
  for (const auto& s : sweep_scenarios(cfg)) {
    auto rows = outage_rows(cfg, inputs, s, sweep_distances(cfg, s.r_macro_m));
    all.insert(all.end(), rows.begin(), rows.end());
  }
  return all;
}

CapacitySweep capacity_sweep(const RunConfig& cfg, const ModelInputs& inputs) {
  const Scenario base{cfg.p_femto_dbm, cfg.p_macro_dbm, cfg.r_macro_m};
  const CapacityModel model{make_context(cfg, base, inputs),
                            {cfg.positions, cfg.capacity_configs, cfg.seed}};
  CapacitySweep out;
  out.area_m2 = model.area();
  const double search_max = cfg.capacity_max_femtocells / out.area_m2;
  const auto curves =
      build_outage_curves(model, search_max, static_cast<std::size_t>(cfg.capacity_curve_points));

  auto solve = [&](double eps_macro) -> std::optional<CapacityResult> {
    try {
      return transmission_capacity(model, curves, {eps_macro, cfg.eps_femto});
    } catch (const InfeasibleQos& e) {
      out.warnings.push_back("eps_macro=" + fmt(eps_macro) + ": " + e.what());
      return std::nullopt;
    }
  };
  out.strict = solve(cfg.eps_macro);
  out.relaxed = solve(cfg.eps_macro_relaxed);

  const auto steps = static_cast<int>(
      std::floor(cfg.capacity_max_femtocells / cfg.capacity_step_femtocells + 1e-9));
  for (int i = 0; i <= steps; ++i) {
    const double k = i * cfg.capacity_step_femtocells;
    const double lambda = k / out.area_m2;
    CapacityRow row{k, spatial_throughput(model, lambda), kNaN, kNaN};
    if (out.strict) row.tc_strict = capacity_at(model, *out.strict, lambda);
    if (out.relaxed) row.tc_relaxed = capacity_at(model, *out.relaxed, lambda);
    out.rows.push_back(row);
  }
  return out;
}

bool ValidationReport::passed() const {
  return std::none_of(checks.begin(), checks.end(),
                      [](const CheckResult& c) { return c.status == CheckStatus::Fail; });
}

std::string ValidationReport::text() const {
  std::ostringstream os;
  std::size_t counts[3] = {0, 0, 0};
  for (const auto& c : checks) {
    static constexpr std::array<const char*, 3> labels = {"PASS", "FAIL", "WARN"};
    ++counts[static_cast<int>(c.status)];
    os << labels[static_cast<int>(c.status)] << "  " << c.name << "  measured=" << fmt(c.measured)
       << "  bound " << c.bound;
    if (!c.note.empty()) os << "  (" << c.note << ")";
    os << "\n";
  }
  os << "summary: " << counts[0] << " pass, " << counts[1] << " fail, " << counts[2] << " warn\n";
  return os.str();
}

ValidationReport run_validation(const RunConfig& cfg, const ModelInputs& inputs) {
  ValidationReport report;
  const bool precise = cfg.trials >= kMinPrecisionTrials;
  auto add = [&](std::string name, double measured, bool ok, std::string bound, bool stochastic) {
    CheckResult c{std::move(name), ok ? CheckStatus::Pass : CheckStatus::Fail, measured,
                  std::move(bound), {}};
    if (stochastic && !precise) {
      c.status = CheckStatus::Warn;
      c.note = "insufficient precision: trials=" + std::to_string(cfg.trials) + " < " +
               std::to_string(kMinPrecisionTrials);
    }
    report.checks.push_back(std::move(c));
  };

  // Surrogate quality: KS distance between sampled log-ratios and the surrogate.
  const std::array<std::pair<RatioKind, double>, 2> ks_limits = {
      std::pair{RatioKind::RayleighOverRayleigh, 0.06},
      std::pair{RatioKind::LogNormalOverRayleigh, 0.08}};
  for (const auto& [kind, limit] : ks_limits) {
    RandomStream stream(cfg.seed, kRatioKsStream + static_cast<std::uint64_t>(kind));
    auto z = sample_log_ratio(kind, cfg.trials, stream);
    const auto& p = inputs.surrogates.at(kind);
    const double d = ks_distance_normal(z, p.m, p.s);
    add("ratio_ks[" + std::string(to_string(kind)) + "]", d, d <= limit, "<= " + fmt(limit), true);
  }

  // Two equal-weight psi/psi0 terms: combined CCDF against simulation.
  {
    const auto rr = RatioKind::RayleighOverRayleigh;
    const std::array<WeightedTerm, 2> terms = {WeightedTerm{1.0, rr, inputs.surrogates.at(rr)},
                                               WeightedTerm{1.0, rr, inputs.surrogates.at(rr)}};
    const auto combined = fenton_wilkinson_combine(terms, inputs.correlations);
    const auto thresholds = min_error_thresholds();
    const std::array<RatioKind, 2> kinds = {rr, rr};
    const std::array<double, 2> weights = {1.0, 1.0};
    RandomStream stream(cfg.seed, kFwCcdfStream);
    const auto sim = simulate_ratio_ccdf(kinds, weights, thresholds, cfg.trials, stream);
    double worst = 0.0;
    for (std::size_t i = 0; i < thresholds.size(); ++i) {
      worst = std::max(worst,
                       std::fabs(lognormal_ccdf(combined, thresholds[i]) - sim.probabilities[i]));
    }
    add("fw_ccdf[psi/psi0+psi/psi0]", worst, worst <= 0.05, "<= 0.05", true);
  }

  // Analytic against simulated outage at ten radii per tier.
  {
    const Scenario base{cfg.p_femto_dbm, cfg.p_macro_dbm, cfg.r_macro_m};
    std::vector<double> radii;
    for (int k = 1; k <= 10; ++k) radii.push_back(cfg.r_macro_m * k / 10.0);
    for (const auto& row : outage_rows(cfg, inputs, base, radii)) {
      const double gap = std::fabs(row.analytic_q - row.simulated_q);
      add("outage[" + std::string(tier_label(row.tier)) + ",d=" + fmt(row.distance_m) + "]", gap,
          gap <= 0.05, "<= 0.05", true);
    }
  }

  // Capacity behaviour, in units per macrocell area.
  {
    const auto cap = capacity_sweep(cfg, inputs);
    const double h = cap.area_m2;
    if (!cap.strict || !cap.relaxed) {
      add("capacity_qos_feasible", 0.0, false, "both QoS settings feasible", false);
    } else {
      double min_gain = std::numeric_limits<double>::infinity();
      for (const auto& r : cap.rows) min_gain = std::min(min_gain, (r.tc_relaxed - r.tc_strict) * h);
      add("capacity_tc_relaxed_ge_strict", min_gain, min_gain >= 0.0, ">= 0", false);
      for (const auto& [label, opt, pick] :
           {std::tuple{"strict", *cap.strict, &CapacityRow::tc_strict},
            std::tuple{"relaxed", *cap.relaxed, &CapacityRow::tc_relaxed}}) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (const auto& r : cap.rows) {
          if (r.avg_femtocells / h < opt.optimal_intensity) continue;
          lo = std::min(lo, r.*pick * h);
          hi = std::max(hi, r.*pick * h);
        }
        const double spread = hi >= lo ? hi - lo : 0.0;
        add(std::string("capacity_tc_flat_beyond_optimum[") + label + "]", spread, spread < 1e-9,
            "< 1e-9", false);
      }
    }
    const auto at = [&](double k) {
      for (const auto& r : cap.rows) {
        if (std::fabs(r.avg_femtocells - k) < 1e-9) return r.spatial_throughput * h;
      }
      return kNaN;
    };
    double st_gain = at(cfg.avg_femtocells) - at(0.0);
    if (std::isnan(st_gain)) {
      const Scenario base{cfg.p_femto_dbm, cfg.p_macro_dbm, cfg.r_macro_m};
      const CapacityModel model{make_context(cfg, base, inputs),
                                {cfg.positions, cfg.capacity_configs, cfg.seed}};
      st_gain = (spatial_throughput(model, cfg.avg_femtocells / h) - spatial_throughput(model, 0.0)) * h;
    }
    add("capacity_st_gain[" + fmt(cfg.avg_femtocells) + " vs 0]", st_gain, st_gain > 0.0, "> 0",
        false);
  }
  return report;
}

int cmd_fit_ratios(const RunConfig& cfg, std::ostream& log) {
  const auto dir = prepare_out(cfg);
  const auto reported = SurrogateSet::reported();
  CsvWriter fits(dir / "fits.csv", {"kind", "exact_mean", "exact_variance", "fitted_m", "fitted_s",
                                    "fit_error", "reference_m", "reference_s"});
  for (RatioKind kind : {RatioKind::RayleighOverRayleigh, RatioKind::LogNormalOverRayleigh}) {
    const auto a = fit_lognormal_surrogate(kind);
    const auto& pub = reported.at(kind);
    fits.row({std::string(to_string(kind)), format_double(a.exact_mean),
              format_double(a.exact_var), format_double(a.fitted.m), format_double(a.fitted.s),
              format_double(a.fit_error), format_double(pub.m), format_double(pub.s)});
    log << to_string(kind) << ": E[Z]=" << fmt(a.exact_mean) << " V[Z]=" << fmt(a.exact_var)
        << " fitted (m, s) = (" << fmt(a.fitted.m) << ", " << fmt(a.fitted.s) << ")\n";

    const double sd = std::sqrt(a.exact_var);
    const auto grid = FitConfig::around(a.exact_mean, sd).z_grid;
    CsvWriter pdf(dir / ("pdf_" + file_slug(kind) + ".csv"),
                  {"z", "exact", "moment_matched", "fitted"});
    for (double z : grid) {
      pdf.row({format_double(z), format_double(ratio_log_pdf(kind, z)),
               format_double(normal_pdf(z, a.exact_mean, sd)),
               format_double(normal_pdf(z, a.fitted.m, a.fitted.s))});
    }
    pdf.close();
  }
  fits.close();
  log << "wrote " << (dir / "fits.csv").string() << "\n";
  return kExitOk;
}

int cmd_outage_sweep(const RunConfig& cfg, std::ostream& log) {
  const auto dir = prepare_out(cfg);
  const auto inputs = load_model_inputs(cfg);
  const auto rows = outage_sweep(cfg, inputs);
  CsvWriter csv(dir / "outage_sweep.csv", {"tier", "distance_m", "P_f_dbm", "P_m_dbm", "R_m",
                                           "analytic_q", "simulated_q", "sim_stderr"});
  for (const auto& r : rows) {
    csv.row({std::string(tier_label(r.tier)), format_double(r.distance_m),
             format_double(r.scenario.p_femto_dbm), format_double(r.scenario.p_macro_dbm),
             format_double(r.scenario.r_macro_m), format_double(r.analytic_q),
             format_double(r.simulated_q), format_double(r.sim_stderr)});
  }
  csv.close();
  log << "wrote " << rows.size() << " rows to " << (dir / "outage_sweep.csv").string() << "\n";
  return kExitOk;
}

int cmd_capacity_sweep(const RunConfig& cfg, std::ostream& log) {
  const auto dir = prepare_out(cfg);
  const auto inputs = load_model_inputs(cfg);
  const auto cap = capacity_sweep(cfg, inputs);
  for (const auto& w : cap.warnings) log << "warning: " << w << "\n";
  CsvWriter csv(dir / "capacity_sweep.csv",
                {"avg_femtocells", "spatial_throughput", "tc_eps045", "tc_eps0475"});
  for (const auto& r : cap.rows) {
    csv.row({format_double(r.avg_femtocells), format_double(r.spatial_throughput),
             format_double(r.tc_strict), format_double(r.tc_relaxed)});
  }
  csv.close();
  CsvWriter opt(dir / "capacity_optimum.csv",
                {"eps_macro", "eps_femto", "optimal_avg_femtocells", "transmission_capacity"});
  for (const auto& [eps, res] : {std::pair{cfg.eps_macro, cap.strict},
                                 std::pair{cfg.eps_macro_relaxed, cap.relaxed}}) {
    opt.row({format_double(eps), format_double(cfg.eps_femto),
             format_double(res ? res->optimal_intensity * cap.area_m2 : kNaN),
             format_double(res ? res->transmission_capacity : kNaN)});
  }
  opt.close();
  log << "wrote " << (dir / "capacity_sweep.csv").string() << "\n";
  return kExitOk;
}

int cmd_validate(const RunConfig& cfg, std::ostream& log) {
  const auto dir = prepare_out(cfg);
  const auto inputs = load_model_inputs(cfg);
  const auto report = run_validation(cfg, inputs);
  const auto text = report.text();
  std::ofstream f(dir / "validation_report.txt", std::ios::binary);
  f << text;
  f.close();
  if (!f) throw Error("failed writing validation report");
  log << text;
  return report.passed() ? kExitOk : kExitValidationFailed;
}

int run_command(std::string_view name, const RunConfig& cfg, std::ostream& log) {
  try {
    cfg.validate();
    if (name == "fit-ratios") return cmd_fit_ratios(cfg, log);
    if (name == "outage-sweep") return cmd_outage_sweep(cfg, log);
    if (name == "capacity-sweep") return cmd_capacity_sweep(cfg, log);
    if (name == "validate") return cmd_validate(cfg, log);
    log << "error: unknown command '" << name << "'\n";
    return kExitConfigError;
  } catch (const InvalidConfiguration& e) {
    log << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const GeometryError& e) {
    log << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const IntensityTooHigh& e) {
    log << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return kExitRuntimeError;
  }
}

}  // namespace twotier::cli
