#include "edsense/cli/commands.hpp"

#include <cmath>
#include <ostream>

#include <fmt/format.h>

#include "edsense/cli/csv.hpp"
#include "edsense/detector.hpp"
#include "edsense/montecarlo.hpp"

namespace edsense::cli {
namespace {

std::filesystem::path output_path(const ExperimentConfig& config, const CommandOptions& options) {
  if (options.out) return *options.out;
  if (config.output.empty()) throw ConfigError("output", "no output path (set 'output' or --out)");
  return config.output;
}

// The document as it was effectively run, so replaying it reproduces the rows.
nlohmann::json effective_source(const ExperimentConfig& config, const std::filesystem::path& out) {
  nlohmann::json doc = config.source;
  doc["output"] = out.string();
  return doc;
}

void write_fingerprint(CsvWriter& csv, std::string_view command, const nlohmann::json& doc,
                       const ExperimentConfig& config) {
  const TrafficModel traffic = config.traffic.build();
  const SensingConfig& s = config.sensing;
  csv.comment(fmt::format("edsense {}", command));
  csv.comment(fmt::format("config: {}", doc.dump()));
  csv.comment(fmt::format("idle law: {}", traffic.idle.describe()));
  csv.comment(fmt::format("busy law: {}", traffic.busy.describe()));
  csv.comment(fmt::format("p_b: {:.17g}", traffic.p_busy));
  csv.comment(fmt::format("sensing: I={} t_s={:.17g}ms snr_db={:.17g} gamma_p={:.17g} N={} mode={}",
                          s.samples, s.sample_ms, s.snr_db, s.snr_linear(), s.max_changes,
                          to_string(s.mode)));
}

void write_roc_rows(CsvWriter& csv, const RocCurve& curve, const std::string* model) {
  for (const OperatingPoint& p : curve.points) {
    std::vector<CsvCell> cells;
    if (model) cells.emplace_back(*model);
    cells.insert(cells.end(), {p.eta, p.pfa, p.pd,
                               static_cast<long long>(curve.sensing.max_changes)});
    csv.row(cells);
  }
}

}  // namespace

std::filesystem::path per_n_path(const std::filesystem::path& base, int n) {
  std::filesystem::path p = base;
  p.replace_filename(fmt::format("{}_N{}{}", base.stem().string(), n, base.extension().string()));
  return p;
}

int cmd_roc(const ExperimentConfig& config, const CommandOptions& options, std::ostream& log) {
  const std::filesystem::path out = output_path(config, options);
  const RocSpec spec = config.roc.value_or(RocSpec{});
  const std::vector<int> ns = spec.n_list.empty() ? std::vector<int>{config.sensing.max_changes}
                                                  : spec.n_list;
  const TrafficModel traffic = config.traffic.build();
  const std::vector<double> grid = spec.eta.build(config.sensing);
  const nlohmann::json doc = effective_source(config, out);
  for (int n : ns) {
    SensingConfig sensing = config.sensing;
    sensing.max_changes = n;
    const RocCurve curve = roc(traffic, sensing, grid);
    const std::filesystem::path path = ns.size() == 1 ? out : per_n_path(out, n);
    CsvWriter csv(path);
    write_fingerprint(csv, "roc", doc, config);
    csv.header({"eta", "pfa", "pd", "N"});
    write_roc_rows(csv, curve, nullptr);
    csv.close();
    log << "wrote " << path.string() << '\n';
  }
  return kExitOk;
}

int cmd_threshold(const ExperimentConfig& config, const CommandOptions& options,
                  std::ostream& log) {
  if (!config.threshold) throw ConfigError("threshold", "block required for this command");
  const ThresholdSpec& spec = *config.threshold;
  const std::filesystem::path out = output_path(config, options);
  const TrafficModel traffic = config.traffic.build();
  CsvWriter csv(out);
  write_fingerprint(csv, "threshold", effective_source(config, out), config);
  csv.comment(fmt::format("target_pd: {:.17g}", spec.target_pd));
  csv.header({"snr_db", "N", "eta", "pfa", "pd", "status"});
  bool failed = false;
  for (double snr : spec.snr_db) {
    for (int n : spec.n_list) {
      SensingConfig sensing = config.sensing;
      sensing.snr_db = snr;
      sensing.max_changes = n;
      try {
        const OperatingPoint p = SensingAnalysis(traffic, sensing).np_threshold(spec.target_pd);
        csv.row({snr, static_cast<long long>(n), p.eta, p.pfa, p.pd, std::string("ok")});
      } catch (const ConvergenceError& e) {
        failed = true;
        log << fmt::format("threshold: snr_db={} N={}: {}\n", snr, n, e.what());
        csv.row({snr, static_cast<long long>(n), std::nan(""), std::nan(""), std::nan(""),
                 std::string("no_convergence")});
      }
    }
  }
  csv.close();
  log << "wrote " << out.string() << '\n';
  return failed ? kExitConvergence : kExitOk;
}

int cmd_models(const ExperimentConfig& config, const CommandOptions& options, std::ostream& log) {
  if (!config.models) throw ConfigError("models", "block required for this command");
  const ModelsSpec& spec = *config.models;
  for (const std::string& w : spec.warnings) log << "warning: " << w << '\n';
  const std::filesystem::path out = output_path(config, options);
  SensingConfig sensing = config.sensing;
  sensing.max_changes = spec.n;
  const std::vector<double> grid = spec.eta.build(sensing);

  CsvWriter csv(out);
  write_fingerprint(csv, "models", effective_source(config, out), config);
  csv.comment(fmt::format("models: mean={:.17g}ms N={}", spec.mean_ms, spec.n));
  std::vector<TrafficModel> models;
  for (HoldingKind kind : spec.kinds) {
    const HoldingDist law = HoldingDist::from_mean(kind, spec.mean_ms, spec.shape_for(kind));
    csv.comment(fmt::format("model {}: {} shape={:.17g}", to_string(kind), law.describe(),
                            law.shape()));
    models.push_back({law, law, config.traffic.p_busy});
  }
  csv.header({"model", "eta", "pfa", "pd", "N"});
  for (std::size_t i = 0; i < models.size(); ++i) {
    const std::string name(to_string(spec.kinds[i]));
    write_roc_rows(csv, roc(models[i], sensing, grid), &name);
  }
  csv.close();
  log << "wrote " << out.string() << '\n';
  return kExitOk;
}

int cmd_validate(const ExperimentConfig& config, const CommandOptions& options,
                 std::ostream& log) {
  ValidateSpec spec = config.validate.value_or(ValidateSpec{});
  if (options.seed) spec.seed = options.seed;
  if (!spec.seed) throw ConfigError("validate.seed", "required (set it or pass --seed)");
  const std::filesystem::path out = output_path(config, options);
  const TrafficModel traffic = config.traffic.build();
  const SensingAnalysis analysis(traffic, config.sensing);
  const std::vector<double> etas = spec.eta.build(config.sensing);

  mc::RunOptions run{mc::SimMode::gaussian_surrogate, spec.clock, *spec.seed};
  const mc::McGridEstimate sur = mc::run_trials_grid(traffic, config.sensing, etas, spec.trials, run);
  run.mode = mc::SimMode::full_sample;
  const mc::McGridEstimate full =
      mc::run_trials_grid(traffic, config.sensing, etas, spec.trials, run);

  nlohmann::json doc = effective_source(config, out);
  doc["validate"]["seed"] = *spec.seed;
  CsvWriter csv(out);
  write_fingerprint(csv, "validate", doc, config);
  csv.comment(fmt::format("trials={} clock={} sigma_bound={:.17g} full_sample_budget={}",
                          spec.trials, mc::to_string(spec.clock), spec.sigma_bound,
                          spec.full_sample_budget ? fmt::format("{:.17g}", *spec.full_sample_budget)
                                                  : std::string("exact-gap")));
  csv.comment(fmt::format("used idle={} busy={} discarded={} coincident={}", sur.trials_used_idle,
                          sur.trials_used_busy, sur.trials_discarded, sur.trials_coincident));
  csv.header({"eta", "pfa", "pd", "pfa_sur", "se_pfa_sur", "pd_sur", "se_pd_sur", "pfa_full",
              "se_pfa_full", "pd_full", "se_pd_full", "pfa_exact", "pd_exact", "ok_sur",
              "ok_full"});

  bool all_ok = true;
  for (std::size_t k = 0; k < etas.size(); ++k) {
    const OperatingPoint a = analysis.at(etas[k]);
    const mc::McPoint& s = sur.points[k];
    const mc::McPoint& f = full.points[k];
    const double bound_pfa = spec.sigma_bound * mc::binomial_stderr(a.pfa, sur.trials_used_idle);
    const double bound_pd = spec.sigma_bound * mc::binomial_stderr(a.pd, sur.trials_used_busy);
    const bool ok_sur = std::abs(s.pfa_hat - a.pfa) <= bound_pfa &&
                        std::abs(s.pd_hat - a.pd) <= bound_pd;
    const double exact_pfa = analysis.exact_pfa(etas[k]);
    const double exact_pd = analysis.exact_pd(etas[k]);
    const double budget_pfa =
        spec.full_sample_budget.value_or(std::abs(exact_pfa - a.pfa) +
                                         spec.sigma_bound *
                                             mc::binomial_stderr(exact_pfa, full.trials_used_idle));
    const double budget_pd =
        spec.full_sample_budget.value_or(std::abs(exact_pd - a.pd) +
                                         spec.sigma_bound *
                                             mc::binomial_stderr(exact_pd, full.trials_used_busy));
    const bool ok_full = std::abs(f.pfa_hat - a.pfa) <= budget_pfa &&
                         std::abs(f.pd_hat - a.pd) <= budget_pd;
    all_ok = all_ok && ok_sur && ok_full;
    csv.row({a.eta, a.pfa, a.pd, s.pfa_hat, s.stderr_pfa, s.pd_hat, s.stderr_pd, f.pfa_hat,
             f.stderr_pfa, f.pd_hat, f.stderr_pd, exact_pfa, exact_pd,
             static_cast<long long>(ok_sur), static_cast<long long>(ok_full)});
  }
  csv.close();
  log << "wrote " << out.string() << '\n';
  log << (all_ok ? "validate: all thresholds within bounds\n"
                 : "validate: some thresholds outside bounds\n");
  return all_ok ? kExitOk : kExitValidationMismatch;
}

int cmd_throughput(const ExperimentConfig& config, const CommandOptions& options,
                   std::ostream& log) {
  if (!config.throughput) throw ConfigError("throughput", "block required for this command");
  const ThroughputSpec& spec = *config.throughput;
  const std::filesystem::path out = output_path(config, options);
  const TrafficModel traffic = config.traffic.build();
  CsvWriter csv(out);
  write_fingerprint(csv, "throughput", effective_source(config, out), config);
  csv.comment(fmt::format("T={:.17g}ms gamma_s={:.17g} target_pd={:.17g}", spec.frame_ms,
                          spec.gamma_s, spec.target_pd));
  csv.header({"tau_ms", "eta", "R"});
  bool failed = false;
  for (double tau : spec.tau_ms) {
    SensingConfig sensing = config.sensing;
    sensing.samples = static_cast<int>(std::lround(tau / sensing.sample_ms));
    sensing.max_changes = std::min(sensing.max_changes, sensing.samples);
    const double tau_exact = sensing.window_ms();
    try {
      const SensingAnalysis analysis(traffic, sensing);
      const OperatingPoint p = analysis.np_threshold(spec.target_pd);
      csv.row({tau, p.eta, throughput(analysis, spec.frame_ms, tau_exact, spec.gamma_s, p.eta)});
    } catch (const ConvergenceError& e) {
      failed = true;
      log << fmt::format("throughput: tau={}: {}\n", tau, e.what());
      csv.row({tau, std::nan(""), std::nan("")});
    }
  }
  csv.close();
  log << "wrote " << out.string() << '\n';
  return failed ? kExitConvergence : kExitOk;
}

int run_command(std::string_view name, const std::filesystem::path& config_path,
                const CommandOptions& options, std::ostream& log) {
  try {
    const ExperimentConfig config = load_config(config_path);
    if (name == "roc") return cmd_roc(config, options, log);
    if (name == "threshold") return cmd_threshold(config, options, log);
    if (name == "models") return cmd_models(config, options, log);
    if (name == "validate") return cmd_validate(config, options, log);
    if (name == "throughput") return cmd_throughput(config, options, log);
    log << "error: unknown command '" << name << "'\n";
    return kExitConfig;
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DomainError& e) {
    log << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ConvergenceError& e) {
    log << "convergence failure: " << e.what() << '\n';
    return kExitConvergence;
  } catch (const EstimationError& e) {
    log << "estimation failure: " << e.what() << '\n';
    return kExitEstimation;
  }
}

}  // namespace edsense::cli
