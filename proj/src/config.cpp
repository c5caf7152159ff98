#include "shapeservo/config.hpp"

#include <charconv>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

namespace shapeservo::config {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(int line, const std::string& msg) {
  throw std::invalid_argument("line " + std::to_string(line) + ": " + msg);
}

double to_double(const std::string& v, int line) {
  try {
    size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) fail(line, "trailing characters in number '" + v + "'");
    return d;
  } catch (const std::invalid_argument&) {
    fail(line, "expected a number, got '" + v + "'");
  } catch (const std::out_of_range&) {
    fail(line, "number out of range: '" + v + "'");
  }
}

int to_int(const std::string& v, int line) {
  const double d = to_double(v, line);
  const int i = static_cast<int>(d);
  if (static_cast<double>(i) != d) fail(line, "expected an integer, got '" + v + "'");
  return i;
}

// scalar broadcast or comma-separated 6-list
Vector6 to_vec6(const std::string& v, int line) {
  std::vector<double> vals;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    vals.push_back(to_double(trim(item), line));
  }
  if (vals.size() == 1) return Vector6::Constant(vals[0]);
  if (vals.size() != 6) fail(line, "expected 1 or 6 comma-separated values");
  Vector6 out;
  for (int i = 0; i < 6; ++i) out[i] = vals[i];
  return out;
}

double positive(double d, const std::string& key, int line) {
  if (!(d > 0.0)) fail(line, key + " must be strictly positive");
  return d;
}

}  // namespace

ScenarioConfig parse_config(const std::string& text,
                            const ScenarioConfig& base) {
  ScenarioConfig cfg = base;

  using Handler = std::function<void(const std::string&, int)>;
  const std::map<std::string, Handler> handlers = {
      {"scenario.kind",
       [&](const std::string& v, int ln) {
         if (v == "closed-loop") cfg.kind = ScenarioKind::kClosedLoop;
         else if (v == "saturation-demo") cfg.kind = ScenarioKind::kSaturationDemo;
         else fail(ln, "scenario.kind must be closed-loop or saturation-demo");
       }},
      {"seed",
       [&](const std::string& v, int ln) {
         const int s = to_int(v, ln);
         if (s < 0) fail(ln, "seed must be >= 0");
         cfg.seed = static_cast<unsigned>(s);
       }},
      {"dt", [&](const std::string& v, int ln) { cfg.dt = positive(to_double(v, ln), "dt", ln); }},
      {"duration",
       [&](const std::string& v, int ln) {
         cfg.duration = to_double(v, ln);
         if (cfg.duration < 0.0) fail(ln, "duration must be >= 0");
       }},
      {"plant.kind",
       [&](const std::string& v, int ln) {
         if (v == "linear") cfg.plant = PlantKind::kLinear;
         else if (v == "chain") cfg.plant = PlantKind::kChain;
         else fail(ln, "plant.kind must be linear or chain");
       }},
      {"feature.map",
       [&](const std::string& v, int ln) {
         if (v == "subsample") cfg.feature_map = plant::FeatureMapKind::kSubsample;
         else if (v == "fourier") cfg.feature_map = plant::FeatureMapKind::kFourier;
         else fail(ln, "feature.map must be subsample or fourier");
       }},
      {"feature.p",
       [&](const std::string& v, int ln) {
         cfg.p = to_int(v, ln);
         if (cfg.p < 2 || cfg.p % 2 != 0) fail(ln, "feature.p must be even and >= 2");
       }},
      {"limits.u_max", [&](const std::string& v, int ln) { cfg.u_max = to_vec6(v, ln); }},
      {"limits.u_min", [&](const std::string& v, int ln) { cfg.u_min = to_vec6(v, ln); }},
      {"gains.eps1", [&](const std::string& v, int ln) { cfg.eps1 = positive(to_double(v, ln), "gains.eps1", ln); }},
      {"gains.eps2", [&](const std::string& v, int ln) { cfg.eps2 = positive(to_double(v, ln), "gains.eps2", ln); }},
      {"gains.gamma1", [&](const std::string& v, int ln) { cfg.gamma1 = positive(to_double(v, ln), "gains.gamma1", ln); }},
      {"gains.gamma2", [&](const std::string& v, int ln) { cfg.gamma2 = positive(to_double(v, ln), "gains.gamma2", ln); }},
      {"gains.lambda", [&](const std::string& v, int ln) { cfg.lambda = positive(to_double(v, ln), "gains.lambda", ln); }},
      {"gains.sigma_guard", [&](const std::string& v, int ln) { cfg.sigma_guard = positive(to_double(v, ln), "gains.sigma_guard", ln); }},
      {"gains.v_guard", [&](const std::string& v, int ln) { cfg.v_guard = positive(to_double(v, ln), "gains.v_guard", ln); }},
      {"gains.filter_cutoff", [&](const std::string& v, int ln) { cfg.filter_cutoff = positive(to_double(v, ln), "gains.filter_cutoff", ln); }},
      {"gains.jdot_max", [&](const std::string& v, int ln) { cfg.jdot_max = positive(to_double(v, ln), "gains.jdot_max", ln); }},
      {"target.kind",
       [&](const std::string& v, int ln) {
         if (v == "constant") cfg.target = TargetKind::kConstant;
         else if (v == "sinusoid") cfg.target = TargetKind::kSinusoid;
         else fail(ln, "target.kind must be constant or sinusoid");
       }},
      {"target.offset", [&](const std::string& v, int ln) { cfg.target_offset = to_double(v, ln); }},
      {"target.amplitude", [&](const std::string& v, int ln) { cfg.target_amplitude = to_double(v, ln); }},
      {"target.frequency", [&](const std::string& v, int ln) { cfg.target_frequency = positive(to_double(v, ln), "target.frequency", ln); }},
      {"estimator.j0_perturbation",
       [&](const std::string& v, int ln) {
         cfg.j0_perturbation = to_double(v, ln);
         if (cfg.j0_perturbation < 0.0) fail(ln, "estimator.j0_perturbation must be >= 0");
       }},
      {"estimator.chain_id_step", [&](const std::string& v, int ln) { cfg.chain_id_step = positive(to_double(v, ln), "estimator.chain_id_step", ln); }},
      {"plant.linear.tv_amplitude", [&](const std::string& v, int ln) { cfg.linear_tv_amplitude = to_double(v, ln); }},
      {"plant.linear.tv_frequency", [&](const std::string& v, int ln) { cfg.linear_tv_frequency = to_double(v, ln); }},
      {"chain.nodes",
       [&](const std::string& v, int ln) {
         cfg.chain_nodes = to_int(v, ln);
         if (cfg.chain_nodes < 3) fail(ln, "chain.nodes must be >= 3");
       }},
      {"chain.gravity",
       [&](const std::string& v, int ln) {
         cfg.chain_gravity = to_double(v, ln);
         if (cfg.chain_gravity < 0.0) fail(ln, "chain.gravity must be >= 0");
       }},
      {"chain.stiffness", [&](const std::string& v, int ln) { cfg.chain_stiffness = positive(to_double(v, ln), "chain.stiffness", ln); }},
      {"chain.bending", [&](const std::string& v, int ln) { cfg.chain_bending = positive(to_double(v, ln), "chain.bending", ln); }},
      {"chain.mass", [&](const std::string& v, int ln) { cfg.chain_mass = positive(to_double(v, ln), "chain.mass", ln); }},
      {"chain.rest_length", [&](const std::string& v, int ln) { cfg.chain_rest_length = positive(to_double(v, ln), "chain.rest_length", ln); }},
      {"chain.fd_step", [&](const std::string& v, int ln) { cfg.chain_fd_step = positive(to_double(v, ln), "chain.fd_step", ln); }},
      {"demo.amplitude", [&](const std::string& v, int ln) { cfg.demo_amplitude = to_double(v, ln); }},
      {"demo.omega", [&](const std::string& v, int ln) { cfg.demo_omega = to_double(v, ln); }},
      {"demo.duration", [&](const std::string& v, int ln) { cfg.demo_duration = positive(to_double(v, ln), "demo.duration", ln); }},
      {"demo.dt", [&](const std::string& v, int ln) { cfg.demo_dt = positive(to_double(v, ln), "demo.dt", ln); }},
      {"report.convergence_threshold", [&](const std::string& v, int ln) { cfg.convergence_threshold = positive(to_double(v, ln), "report.convergence_threshold", ln); }},
  };

  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw = raw.substr(0, hash);
    const std::string stripped = trim(raw);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) fail(line, "expected 'key = value'");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) fail(line, "empty key");
    if (value.empty()) fail(line, "empty value for key '" + key + "'");
    const auto it = handlers.find(key);
    if (it == handlers.end()) fail(line, "unknown key '" + key + "'");
    it->second(value, line);
  }

  validate(cfg);
  return cfg;
}

void validate(const ScenarioConfig& cfg) {
  for (int i = 0; i < 6; ++i) {
    if (!(cfg.u_min[i] < 0.0 && 0.0 < cfg.u_max[i])) {
      throw std::invalid_argument(
          "limits must satisfy u_min < 0 < u_max per axis");
    }
  }
  if (cfg.plant == PlantKind::kChain && cfg.p > 2 * cfg.chain_nodes) {
    throw std::invalid_argument("feature.p exceeds 2N for the chain plant");
  }
}

ScenarioConfig preset(const std::string& name) {
  ScenarioConfig cfg;
  if (name == "regulation-linear") {
    // defaults are exactly this preset
  } else if (name == "tracking-linear") {
    cfg.target = TargetKind::kSinusoid;
    cfg.target_amplitude = 0.5;
    cfg.target_frequency = 0.2;
  } else if (name == "regulation-chain") {
    cfg.plant = PlantKind::kChain;
    cfg.duration = 5.0;
    cfg.target_offset = 5.0;  // pixels
    cfg.convergence_threshold = 0.5;
  } else if (name == "fig1-saturation") {
    cfg.kind = ScenarioKind::kSaturationDemo;
  } else {
    throw std::invalid_argument("unknown preset '" + name + "'");
  }
  validate(cfg);
  return cfg;
}

}  // namespace shapeservo::config
