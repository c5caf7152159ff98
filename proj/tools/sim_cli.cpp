// Command-line harness for the shapeservo shared library. Talks to the
// core exclusively through the C API in shapeservo.h.

#include <cstdio>
#include <future>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "shapeservo.h"

namespace {

struct ConfigDeleter {
  void operator()(ss_config* c) const { ss_config_free(c); }
};
using ConfigPtr = std::unique_ptr<ss_config, ConfigDeleter>;

int die(ss_status st) {
  std::fprintf(stderr, "error: %s\n", ss_last_error());
  return static_cast<int>(st);
}

ConfigPtr build_config(const std::string& preset, const std::string& file,
                       int seed, ss_status* st) {
  ConfigPtr cfg(ss_config_new());
  *st = SS_OK;
  if (!preset.empty()) {
    *st = ss_config_preset(cfg.get(), preset.c_str());
    if (*st != SS_OK) return cfg;
  }
  if (!file.empty()) {
    *st = ss_config_parse_file(cfg.get(), file.c_str());
    if (*st != SS_OK) return cfg;
  }
  if (seed >= 0) {
    *st = ss_config_set_seed(cfg.get(), static_cast<unsigned>(seed));
  }
  return cfg;
}

void print_summary(const ss_summary& s) {
  std::printf("steps = %ld\n", s.steps);
  std::printf("convergence_time = %g\n", s.convergence_time);
  std::printf("final_e1_norm = %g\n", s.final_e1_norm);
  std::printf("sup_eta1_hat = %g\n", s.sup_eta1_hat);
  std::printf("sup_eta2_hat = %g\n", s.sup_eta2_hat);
  std::printf("sup_jhat_fro = %g\n", s.sup_jhat_fro);
  std::printf("uub_a = %g, uub_b = %g, ball = %g\n", s.uub_a, s.uub_b,
              s.uub_ball);
  std::printf("decrease_violation_fraction = %g\n",
              s.decrease_violation_fraction);
  std::printf("saturation_ok = %d, all_finite = %d\n", s.saturation_ok,
              s.all_finite);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sliding-mode shape-servoing simulator"};
  app.require_subcommand(1);

  // demo-saturation
  auto* demo = app.add_subcommand(
      "demo-saturation", "Hard vs smooth saturation of a sinusoidal command");
  std::string demo_out = "fig1.csv";
  double d_umax = 5.0, d_umin = -6.0, d_amp = 10.0, d_omega = 2.0;
  double d_duration = 6.283185307179586, d_dt = 1e-3;
  demo->add_option("--out", demo_out, "output CSV path");
  demo->add_option("--umax", d_umax, "upper velocity limit");
  demo->add_option("--umin", d_umin, "lower velocity limit");
  demo->add_option("--amplitude", d_amp, "command amplitude");
  demo->add_option("--omega", d_omega, "command angular frequency (rad/s)");
  demo->add_option("--duration", d_duration, "demo duration (s)");
  demo->add_option("--dt", d_dt, "sample step (s)");

  // run
  auto* run = app.add_subcommand("run", "Run a closed-loop scenario");
  std::string run_config, run_preset, run_out = "out";
  int run_seed = -1;
  run->add_option("--config", run_config, "config file (key = value)");
  run->add_option("--preset", run_preset,
                  "preset name (fig1-saturation, regulation-linear, "
                  "tracking-linear, regulation-chain)");
  run->add_option("--out-dir", run_out, "output directory");
  run->add_option("--seed", run_seed, "override random seed");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Parameter sweep over scenarios");
  std::string sw_config, sw_preset, sw_out = "sweep", sw_param, sw_values;
  int sw_seed = -1;
  sweep->add_option("--config", sw_config, "config file");
  sweep->add_option("--preset", sw_preset, "preset name");
  sweep->add_option("--param", sw_param, "config key to sweep")->required();
  sweep->add_option("--values", sw_values, "comma-separated values")
      ->required();
  sweep->add_option("--out-dir", sw_out, "output directory root");
  sweep->add_option("--seed", sw_seed, "override random seed");

  CLI11_PARSE(app, argc, argv);

  if (demo->parsed()) {
    const ss_status st = ss_demo_saturation(d_umin, d_umax, d_amp, d_omega,
                                            d_duration, d_dt, demo_out.c_str());
    if (st != SS_OK) return die(st);
    std::printf("wrote %s\n", demo_out.c_str());
    return 0;
  }

  if (run->parsed()) {
    ss_status st;
    ConfigPtr cfg = build_config(run_preset, run_config, run_seed, &st);
    if (st != SS_OK) return die(st);
    ss_summary sum{};
    st = ss_run(cfg.get(), run_out.c_str(), &sum);
    if (st != SS_OK) return die(st);
    print_summary(sum);
    std::printf("outputs in %s/\n", run_out.c_str());
    return 0;
  }

  // sweep: scenarios share nothing mutable, run them concurrently
  std::vector<std::string> values;
  std::stringstream ss(sw_values);
  std::string item;
  while (std::getline(ss, item, ',')) values.push_back(item);
  if (values.empty()) {
    std::fprintf(stderr, "error: --values is empty\n");
    return 1;
  }
  struct JobResult {
    ss_status st;
    std::string error;  // ss_last_error is thread-local
  };
  std::vector<std::future<JobResult>> jobs;
  for (const auto& value : values) {
    jobs.push_back(std::async(std::launch::async, [&, value]() -> JobResult {
      ss_status st;
      ConfigPtr cfg = build_config(sw_preset, sw_config, sw_seed, &st);
      if (st == SS_OK) {
        st = ss_config_set(cfg.get(), sw_param.c_str(), value.c_str());
      }
      if (st == SS_OK) {
        const std::string dir = sw_out + "/" + sw_param + "=" + value;
        st = ss_run(cfg.get(), dir.c_str(), nullptr);
      }
      return {st, st == SS_OK ? "" : ss_last_error()};
    }));
  }
  int failures = 0;
  for (size_t i = 0; i < jobs.size(); ++i) {
    const JobResult res = jobs[i].get();
    if (res.st != SS_OK) {
      std::fprintf(stderr, "sweep value %s failed: %s\n", values[i].c_str(),
                   res.error.c_str());
      ++failures;
    } else {
      std::printf("done %s=%s\n", sw_param.c_str(), values[i].c_str());
    }
  }
  return failures == 0 ? 0 : 1;
}
