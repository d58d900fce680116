#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "divergence.hpp"
#include "model.hpp"
#include "spectral.hpp"

namespace clsbm {

// One swept parameter. Supported paths:
//   "n"        - node count (values rounded to integers)
//   "mu_scale" - scalar multiplier applied to mu
//   "p_interp" - interpolation of every P slice toward its block-uniform
//                average (0 = original, 1 = fully uniform blocks)
struct SweepSpec {
  std::string path;
  std::vector<double> values;
};

struct DetectPolicy {
  int restarts = 25;
  std::optional<Eigen::VectorXd> weights;  // fixed weights; empty = Uniform[0,1]
};

struct ExperimentConfig {
  ModelParams model;
  std::vector<SweepSpec> sweep;
  int replications = 1;
  std::uint64_t master_seed = 0;
  DetectPolicy detect;
  double bound_constant = 4.0;
  BlockVariant snr_variant = BlockVariant::half_label_mean;
};

// Parses the config document: keys "model", "sweep" (array of {path,values}),
// "replications", "master_seed", "detect" ({restarts, weights}),
// "bound_constant", optional "snr_variant". Validates every sweep point.
ExperimentConfig experiment_config_from_json_text(const std::string &text);

// Applies one sweep step to a copy of base; the result is validated.
ModelParams apply_sweep(const ModelParams &base, const std::string &path, double value);

struct ReplicationRow {
  int point_index = 0;
  std::string sweep_param;
  double sweep_value = 0.0;
  int replication = 0;
  std::uint64_t seed = 0;
  int n = 0;
  int K = 0;
  int misclassified = -1;
  double rate = 0.0;
  long long runtime_ms = 0;
  bool failed = false;
  std::string error;
};

struct PointSummary {
  int point_index = 0;
  std::string sweep_param;
  double sweep_value = 0.0;
  int n = 0;
  int K = 0;
  int completed = 0;
  int failed = 0;
  double mean_rate = 0.0;
  double stderr_rate = 0.0;
  double divergence = 0.0;
  double snr_value = 0.0;
  double lower = 0.0;  // n exp(-n D)
  double upper = 0.0;  // c K / (n SNR)
};

struct ExperimentResult {
  std::vector<ReplicationRow> rows;        // sorted by (point, replication)
  std::vector<PointSummary> summaries;
};

// Runs every sweep point x replication on a worker pool (threads <= 0 uses
// hardware concurrency). Replication seeds derive from
// (master_seed, point index, replication index), so rows are identical for
// any schedule. A failed replication is recorded, not dropped; aggregates
// skip failures. Runtime columns are wall-clock and excluded from the
// determinism guarantee.
ExperimentResult run_experiment(const ExperimentConfig &config, int threads = 0);

// header: sweep_param,sweep_value,replication,seed,n,K,misclassified,rate,runtime_ms,failed
void emit_csv(const ExperimentResult &result, const std::string &path);

// header: sweep_value,mean_rate,stderr,lower_bound_rate,upper_bound_rate,D,SNR
void emit_plot_data(const ExperimentResult &result, const std::string &path);

}  // namespace clsbm
