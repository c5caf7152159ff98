#include "shapeservo.h"

#include <fstream>
#include <sstream>
#include <string>

#include "shapeservo/config.hpp"
#include "shapeservo/plant.hpp"
#include "shapeservo/simulation.hpp"

struct ss_config {
  shapeservo::config::ScenarioConfig cfg;
};

namespace {

thread_local std::string g_last_error;

ss_status set_error(ss_status code, const std::string& msg) {
  g_last_error = msg;
  return code;
}

template <typename Fn>
ss_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const shapeservo::plant::EquilibriumFailure& e) {
    return set_error(SS_ERR_SOLVER, e.what());
  } catch (const std::invalid_argument& e) {
    return set_error(SS_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::exception& e) {
    return set_error(SS_ERR_INVALID_ARGUMENT, e.what());
  }
}

void fill_summary(const shapeservo::sim::RunSummary& s, ss_summary* out) {
  if (!out) return;
  out->steps = s.steps;
  out->convergence_time = s.convergence_time;
  out->final_e1_norm = s.final_e1_norm;
  out->sup_eta1_hat = s.sup_eta1_hat;
  out->sup_eta2_hat = s.sup_eta2_hat;
  out->sup_jhat_fro = s.sup_jhat_fro;
  out->true_j_fro = s.true_j_fro;
  out->eta1_ref = s.eta1_ref;
  out->eta2_ref = s.eta2_ref;
  out->uub_a = s.uub_a;
  out->uub_b = s.uub_b;
  out->uub_ball = s.uub_ball;
  out->decrease_violation_fraction = s.decrease_violation_fraction;
  out->decrease_worst_margin = s.decrease_worst_margin;
  out->max_sat_slew = s.max_sat_slew;
  out->saturation_ok = s.saturation_ok ? 1 : 0;
  out->all_finite = s.all_finite ? 1 : 0;
}

}  // namespace

extern "C" {

const char* ss_last_error(void) { return g_last_error.c_str(); }

ss_config* ss_config_new(void) { return new ss_config{}; }

void ss_config_free(ss_config* cfg) { delete cfg; }

ss_status ss_config_preset(ss_config* cfg, const char* name) {
  if (!cfg || !name) return set_error(SS_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    cfg->cfg = shapeservo::config::preset(name);
    return SS_OK;
  });
}

ss_status ss_config_parse_string(ss_config* cfg, const char* text) {
  if (!cfg || !text) return set_error(SS_ERR_INVALID_ARGUMENT, "null argument");
  try {
    cfg->cfg = shapeservo::config::parse_config(text, cfg->cfg);
    return SS_OK;
  } catch (const std::exception& e) {
    return set_error(SS_ERR_PARSE, e.what());
  }
}

ss_status ss_config_parse_file(ss_config* cfg, const char* path) {
  if (!cfg || !path) return set_error(SS_ERR_INVALID_ARGUMENT, "null argument");
  std::ifstream in(path);
  if (!in) return set_error(SS_ERR_IO, std::string("cannot open ") + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return ss_config_parse_string(cfg, buf.str().c_str());
}

ss_status ss_config_set(ss_config* cfg, const char* key, const char* value) {
  if (!cfg || !key || !value) {
    return set_error(SS_ERR_INVALID_ARGUMENT, "null argument");
  }
  try {
    cfg->cfg = shapeservo::config::parse_config(
        std::string(key) + " = " + value, cfg->cfg);
    return SS_OK;
  } catch (const std::exception& e) {
    return set_error(SS_ERR_PARSE, e.what());
  }
}

ss_status ss_config_set_seed(ss_config* cfg, unsigned seed) {
  if (!cfg) return set_error(SS_ERR_INVALID_ARGUMENT, "null argument");
  cfg->cfg.seed = seed;
  return SS_OK;
}

ss_status ss_run(const ss_config* cfg, const char* out_dir,
                 ss_summary* summary) {
  if (!cfg || !out_dir) {
    return set_error(SS_ERR_INVALID_ARGUMENT, "null argument");
  }
  return guarded([&] {
    const auto s = shapeservo::sim::run_to_files(cfg->cfg, out_dir);
    fill_summary(s, summary);
    return SS_OK;
  });
}

ss_status ss_demo_saturation(double u_min, double u_max, double amplitude,
                             double omega, double duration, double dt,
                             const char* csv_path) {
  if (!csv_path) return set_error(SS_ERR_INVALID_ARGUMENT, "null csv_path");
  return guarded([&] {
    using namespace shapeservo;
    const saturation::SaturationLimits limits =
        saturation::SaturationLimits::uniform(u_min, u_max);
    const auto demo = sim::saturation_demo(limits, amplitude, omega, duration, dt);
    std::ofstream out(csv_path);
    if (!out) return set_error(SS_ERR_IO, std::string("cannot open ") + csv_path);
    out << sim::demo_csv(demo);
    return SS_OK;
  });
}

}  // extern "C"
