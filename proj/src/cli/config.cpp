#include "edsense/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <set>

#include <fmt/format.h>

namespace edsense::cli {
namespace {

using nlohmann::json;

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
}

void reject_unknown(const json& j, const std::string& path,
                    std::initializer_list<std::string_view> allowed) {
  require_object(j, path);
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (auto a : allowed) known = known || key == a;
    if (!known) throw ConfigError(join(path, key), "unknown key");
  }
}

double number(const json& j, const std::string& path, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number()) throw ConfigError(join(path, key), "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(join(path, key), "must be finite");
  return d;
}

long long integer(const json& j, const std::string& path, const char* key, long long fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number_integer()) throw ConfigError(join(path, key), "expected an integer");
  return v.get<long long>();
}

std::string text(const json& j, const std::string& path, const char* key, std::string fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_string()) throw ConfigError(join(path, key), "expected a string");
  return v.get<std::string>();
}

std::vector<double> number_list(const json& v, const std::string& path) {
  if (!v.is_array()) throw ConfigError(path, "expected an array of numbers");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) throw ConfigError(path, "expected an array of numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

std::vector<int> int_list(const json& v, const std::string& path) {
  if (!v.is_array()) throw ConfigError(path, "expected an array of integers");
  std::vector<int> out;
  for (const auto& e : v) {
    if (!e.is_number_integer()) throw ConfigError(path, "expected an array of integers");
    out.push_back(e.get<int>());
  }
  return out;
}

template <class F>
auto rethrow_as_config(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const DomainError& e) {
    throw ConfigError(path, e.what());
  }
}

LawSpec parse_law(const json& j, const std::string& path) {
  reject_unknown(j, path, {"kind", "mean_ms", "shape"});
  LawSpec law;
  law.kind = rethrow_as_config(join(path, "kind"), [&] {
    return parse_holding_kind(text(j, path, "kind", "exponential"));
  });
  law.mean_ms = number(j, path, "mean_ms", 5.0);
  if (j.contains("shape")) law.shape = number(j, path, "shape", 0.0);
  rethrow_as_config(path, [&] { return law.build(); });
  return law;
}

TrafficSpec parse_traffic(const json& j, const std::string& path) {
  reject_unknown(j, path, {"idle", "busy", "p_b"});
  TrafficSpec t;
  if (j.contains("idle")) t.idle = parse_law(j.at("idle"), join(path, "idle"));
  if (j.contains("busy")) t.busy = parse_law(j.at("busy"), join(path, "busy"));
  t.p_busy = number(j, path, "p_b", 0.5);
  if (t.p_busy < 0.0 || t.p_busy > 1.0) throw ConfigError(join(path, "p_b"), "must lie in [0, 1]");
  return t;
}

SensingConfig parse_sensing(const json& j, const std::string& path) {
  reject_unknown(j, path, {"I", "t_s_ms", "snr_db", "N", "mode"});
  SensingConfig s;
  const long long I = integer(j, path, "I", 20);
  if (I < 1 || I > 100000) throw ConfigError(join(path, "I"), "must be a positive sample count");
  s.samples = static_cast<int>(I);
  s.sample_ms = number(j, path, "t_s_ms", 1.0);
  if (!(s.sample_ms > 0.0)) throw ConfigError(join(path, "t_s_ms"), "must be positive");
  s.snr_db = number(j, path, "snr_db", -5.0);
  const long long N = integer(j, path, "N", 0);
  if (N < 0 || N > I) throw ConfigError(join(path, "N"), fmt::format("must lie in [0, I={}]", I));
  s.max_changes = static_cast<int>(N);
  s.mode = rethrow_as_config(join(path, "mode"),
                             [&] { return parse_weight_mode(text(j, path, "mode", "renewal")); });
  return s;
}

EtaGridSpec parse_eta(const json& j, const std::string& path, EtaGridSpec defaults) {
  if (j.is_array()) {
    defaults.explicit_points = number_list(j, path);
    if (defaults.explicit_points.empty()) throw ConfigError(path, "eta grid is empty");
    return defaults;
  }
  reject_unknown(j, path, {"points", "span_sigma"});
  const long long points = integer(j, path, "points", defaults.points);
  if (points < 1) throw ConfigError(join(path, "points"), "eta grid is empty");
  if (points < 2) throw ConfigError(join(path, "points"), "need at least two points");
  defaults.points = static_cast<int>(points);
  defaults.span_sigma = number(j, path, "span_sigma", defaults.span_sigma);
  if (!(defaults.span_sigma > 0.0)) throw ConfigError(join(path, "span_sigma"), "must be positive");
  return defaults;
}

void check_n_list(const std::vector<int>& ns, const std::string& path, int I) {
  if (ns.empty()) throw ConfigError(path, "list is empty");
  for (int n : ns) {
    if (n < 0 || n > I) throw ConfigError(path, fmt::format("N={} outside [0, I={}]", n, I));
  }
}

RocSpec parse_roc(const json& j, const std::string& path, const SensingConfig& s) {
  reject_unknown(j, path, {"N", "eta"});
  RocSpec r;
  if (j.contains("N")) {
    r.n_list = int_list(j.at("N"), join(path, "N"));
    check_n_list(r.n_list, join(path, "N"), s.samples);
  }
  if (j.contains("eta")) r.eta = parse_eta(j.at("eta"), join(path, "eta"), r.eta);
  return r;
}

ThresholdSpec parse_threshold(const json& j, const std::string& path, const SensingConfig& s) {
  reject_unknown(j, path, {"target_pd", "snr_db", "N"});
  ThresholdSpec t;
  t.target_pd = number(j, path, "target_pd", 0.9);
  if (!(t.target_pd > 0.0 && t.target_pd < 1.0)) {
    throw ConfigError(join(path, "target_pd"), "must lie in (0, 1)");
  }
  if (!j.contains("snr_db")) throw ConfigError(join(path, "snr_db"), "required");
  t.snr_db = number_list(j.at("snr_db"), join(path, "snr_db"));
  if (t.snr_db.empty()) throw ConfigError(join(path, "snr_db"), "list is empty");
  for (double v : t.snr_db) {
    if (!std::isfinite(v)) throw ConfigError(join(path, "snr_db"), "must be finite");
  }
  if (j.contains("N")) {
    t.n_list = int_list(j.at("N"), join(path, "N"));
    check_n_list(t.n_list, join(path, "N"), s.samples);
  } else {
    t.n_list = {s.max_changes};
  }
  return t;
}

ModelsSpec parse_models(const json& j, const std::string& path, const SensingConfig& s) {
  reject_unknown(j, path, {"kinds", "mean_ms", "N", "shapes", "eta"});
  ModelsSpec m;
  if (!j.contains("kinds") || !j.at("kinds").is_array() || j.at("kinds").empty()) {
    throw ConfigError(join(path, "kinds"), "expected a nonempty array of model names");
  }
  for (const auto& k : j.at("kinds")) {
    if (!k.is_string()) throw ConfigError(join(path, "kinds"), "expected model names");
    const HoldingKind kind = rethrow_as_config(
        join(path, "kinds"), [&] { return parse_holding_kind(k.get<std::string>()); });
    if (std::find(m.kinds.begin(), m.kinds.end(), kind) != m.kinds.end()) {
      m.warnings.push_back(
          fmt::format("duplicate model '{}' in {} ignored", to_string(kind), join(path, "kinds")));
      continue;
    }
    m.kinds.push_back(kind);
  }
  m.mean_ms = number(j, path, "mean_ms", 5.0);
  if (!(m.mean_ms > 0.0)) throw ConfigError(join(path, "mean_ms"), "must be positive");
  const long long n = integer(j, path, "N", 5);
  if (n < 0 || n > s.samples) {
    throw ConfigError(join(path, "N"), fmt::format("must lie in [0, I={}]", s.samples));
  }
  m.n = static_cast<int>(n);
  if (j.contains("shapes")) {
    const json& sh = j.at("shapes");
    const std::string sp = join(path, "shapes");
    reject_unknown(sh, sp, {"lognormal", "gamma", "erlang"});
    for (const char* key : {"lognormal", "gamma", "erlang"}) {
      if (sh.contains(key)) m.shapes[parse_holding_kind(key)] = number(sh, sp, key, 0.0);
    }
  }
  for (const auto& [kind, shape] : m.shapes) {
    rethrow_as_config(join(path, "shapes"),
                      [&] { return HoldingDist::from_mean(kind, m.mean_ms, shape); });
  }
  for (HoldingKind kind : m.kinds) {
    rethrow_as_config(join(path, "shapes"), [&] {
      return HoldingDist::from_mean(kind, m.mean_ms, m.shape_for(kind));
    });
  }
  if (j.contains("eta")) m.eta = parse_eta(j.at("eta"), join(path, "eta"), m.eta);
  return m;
}

ValidateSpec parse_validate(const json& j, const std::string& path) {
  reject_unknown(j, path, {"trials", "seed", "eta", "clock", "sigma_bound", "full_sample_budget"});
  ValidateSpec v;
  const long long trials = integer(j, path, "trials", 200000);
  if (trials < 10000) throw ConfigError(join(path, "trials"), "must be at least 10000");
  v.trials = static_cast<std::uint64_t>(trials);
  if (j.contains("seed")) {
    const json& s = j.at("seed");
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0)) {
      throw ConfigError(join(path, "seed"), "expected a nonnegative integer");
    }
    v.seed = s.get<std::uint64_t>();
  }
  if (j.contains("eta")) v.eta = parse_eta(j.at("eta"), join(path, "eta"), v.eta);
  const std::string clock = text(j, path, "clock", "lattice");
  if (clock == "lattice") {
    v.clock = mc::TraceClock::lattice;
  } else if (clock == "continuous") {
    v.clock = mc::TraceClock::continuous;
  } else {
    throw ConfigError(join(path, "clock"), "expected 'lattice' or 'continuous'");
  }
  v.sigma_bound = number(j, path, "sigma_bound", 3.0);
  if (!(v.sigma_bound > 0.0)) throw ConfigError(join(path, "sigma_bound"), "must be positive");
  if (j.contains("full_sample_budget") && !j.at("full_sample_budget").is_null()) {
    v.full_sample_budget = number(j, path, "full_sample_budget", 0.0);
    if (!(*v.full_sample_budget > 0.0)) {
      throw ConfigError(join(path, "full_sample_budget"), "must be positive");
    }
  }
  return v;
}

ThroughputSpec parse_throughput(const json& j, const std::string& path, const SensingConfig& s) {
  reject_unknown(j, path, {"T_ms", "tau_ms", "gamma_s", "target_pd"});
  ThroughputSpec t;
  t.frame_ms = number(j, path, "T_ms", 100.0);
  if (!(t.frame_ms > 0.0)) throw ConfigError(join(path, "T_ms"), "must be positive");
  if (!j.contains("tau_ms")) throw ConfigError(join(path, "tau_ms"), "required");
  t.tau_ms = number_list(j.at("tau_ms"), join(path, "tau_ms"));
  if (t.tau_ms.empty()) throw ConfigError(join(path, "tau_ms"), "list is empty");
  for (double tau : t.tau_ms) {
    if (!(tau > 0.0) || tau > t.frame_ms) {
      throw ConfigError(join(path, "tau_ms"),
                        fmt::format("tau={} escapes (0, T={}]", tau, t.frame_ms));
    }
    const double samples = tau / s.sample_ms;
    if (std::abs(samples - std::round(samples)) > 1e-9 * std::max(1.0, samples)) {
      throw ConfigError(join(path, "tau_ms"),
                        fmt::format("tau={} is not a whole number of {} ms samples", tau, s.sample_ms));
    }
  }
  t.gamma_s = number(j, path, "gamma_s", 10.0);
  if (!(t.gamma_s >= 0.0)) throw ConfigError(join(path, "gamma_s"), "must be nonnegative");
  t.target_pd = number(j, path, "target_pd", 0.9);
  if (!(t.target_pd > 0.0 && t.target_pd < 1.0)) {
    throw ConfigError(join(path, "target_pd"), "must lie in (0, 1)");
  }
  return t;
}

}  // namespace

std::vector<double> EtaGridSpec::build(const SensingConfig& sensing) const {
  if (!explicit_points.empty()) {
    std::vector<double> pts = explicit_points;
    std::sort(pts.begin(), pts.end(), std::greater<>());
    return pts;
  }
  return default_eta_grid(sensing, points, span_sigma);
}

double ModelsSpec::shape_for(HoldingKind kind) const {
  const auto it = shapes.find(kind);
  return it == shapes.end() ? HoldingDist::default_shape(kind) : it->second;
}

ExperimentConfig parse_config(const json& doc) {
  reject_unknown(doc, "",
                 {"traffic", "sensing", "roc", "threshold", "models", "validate", "throughput",
                  "output"});
  ExperimentConfig c;
  c.source = doc;
  if (doc.contains("traffic")) c.traffic = parse_traffic(doc.at("traffic"), "traffic");
  if (doc.contains("sensing")) c.sensing = parse_sensing(doc.at("sensing"), "sensing");
  if (doc.contains("roc")) c.roc = parse_roc(doc.at("roc"), "roc", c.sensing);
  if (doc.contains("threshold")) {
    c.threshold = parse_threshold(doc.at("threshold"), "threshold", c.sensing);
  }
  if (doc.contains("models")) c.models = parse_models(doc.at("models"), "models", c.sensing);
  if (doc.contains("validate")) c.validate = parse_validate(doc.at("validate"), "validate");
  if (doc.contains("throughput")) {
    c.throughput = parse_throughput(doc.at("throughput"), "throughput", c.sensing);
  }
  c.output = text(doc, "", "output", "");
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", fmt::format("cannot open config file '{}'", path.string()));
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("", fmt::format("malformed config '{}': {}", path.string(), e.what()));
  }
  return parse_config(doc);
}

}  // namespace edsense::cli
