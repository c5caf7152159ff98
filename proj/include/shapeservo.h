/* C interface to the shapeservo simulation library.
 *
 * All entry points return ss_status; on failure ss_last_error() holds a
 * human-readable message for the calling thread. Configurations are
 * opaque handles created by ss_config_new / ss_config_preset and freed
 * with ss_config_free.
 */
#ifndef SHAPESERVO_H
#define SHAPESERVO_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ss_status {
  SS_OK = 0,
  SS_ERR_INVALID_ARGUMENT = 1,
  SS_ERR_PARSE = 2,
  SS_ERR_SOLVER = 3,
  SS_ERR_IO = 4
} ss_status;

typedef struct ss_config ss_config;

typedef struct ss_summary {
  long steps;
  double convergence_time; /* -1 if the threshold was never reached */
  double final_e1_norm;
  double sup_eta1_hat;
  double sup_eta2_hat;
  double sup_jhat_fro;
  double true_j_fro;
  double eta1_ref;
  double eta2_ref;
  double uub_a;
  double uub_b;
  double uub_ball;
  double decrease_violation_fraction;
  double decrease_worst_margin;
  double max_sat_slew;
  int saturation_ok;
  int all_finite;
} ss_summary;

const char* ss_last_error(void);

ss_config* ss_config_new(void);
void ss_config_free(ss_config* cfg);

/* Loads one of: fig1-saturation, regulation-linear, tracking-linear,
 * regulation-chain. */
ss_status ss_config_preset(ss_config* cfg, const char* name);

/* Parses a `key = value` document (see README for the key list) on top
 * of the current contents of cfg. */
ss_status ss_config_parse_string(ss_config* cfg, const char* text);
ss_status ss_config_parse_file(ss_config* cfg, const char* path);

/* Applies a single `key = value` override. */
ss_status ss_config_set(ss_config* cfg, const char* key, const char* value);

ss_status ss_config_set_seed(ss_config* cfg, unsigned seed);

/* Runs the configured scenario, writing trajectory.csv and report.txt
 * (closed loop) or fig1.csv (saturation demo) into out_dir. summary may
 * be NULL. */
ss_status ss_run(const ss_config* cfg, const char* out_dir,
                 ss_summary* summary);

/* Writes the smooth-vs-hard saturation comparison for a sinusoidal
 * command v(t) = amplitude*sin(omega*t) on one axis. */
ss_status ss_demo_saturation(double u_min, double u_max, double amplitude,
                             double omega, double duration, double dt,
                             const char* csv_path);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SHAPESERVO_H */
