// clsbm command line: sample | detect | divergence | score | experiment.
// Thin argument-parsing layer over the shared library's C API.
// Exit codes: 0 success, 1 validation error, 2 runtime failure.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "clsbm/clsbm.h"

namespace {

int exit_code_for(clsbm_status status) {
  if (status == CLSBM_OK) return 0;
  std::fprintf(stderr, "error: %s\n", clsbm_last_error());
  return status == CLSBM_ERR_INVALID ? 1 : 2;
}

struct ParamsHandle {
  clsbm_params_t *p = nullptr;
  ~ParamsHandle() { clsbm_params_free(p); }
};

struct DatasetHandle {
  clsbm_dataset_t *d = nullptr;
  ~DatasetHandle() { clsbm_dataset_free(d); }
};

struct AssignmentHandle {
  clsbm_assignment_t *a = nullptr;
  ~AssignmentHandle() { clsbm_assignment_free(a); }
};

int write_or_print(char *json, const std::string &out_path) {
  int rc = 0;
  if (out_path.empty()) {
    std::printf("%s\n", json);
  } else {
    std::FILE *f = std::fopen(out_path.c_str(), "w");
    if (!f) {
      std::fprintf(stderr, "error: cannot open for writing: %s\n", out_path.c_str());
      rc = 2;
    } else {
      std::fprintf(f, "%s\n", json);
      std::fclose(f);
    }
  }
  clsbm_string_free(json);
  return rc;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"clsbm: labeled stochastic block models with node attributes"};
  app.require_subcommand(1);

  // sample
  std::string sample_config, sample_out;
  std::uint64_t sample_seed = 0;
  auto *sample = app.add_subcommand(
      "sample", "Sample an instance and write graph/attrs/truth CSV files");
  sample->add_option("--config", sample_config, "model parameter JSON")
      ->required()
      ->check(CLI::ExistingFile);
  sample->add_option("--seed", sample_seed, "master seed");
  sample->add_option("--out", sample_out, "output directory")->required();

  // detect
  std::string det_graph, det_attrs, det_out, det_dump_s;
  std::uint64_t det_seed = 0;
  int det_k = 2, det_restarts = 25;
  std::vector<double> det_weights;
  auto *det = app.add_subcommand("detect", "Spectral community detection");
  det->add_option("--graph", det_graph, "graph CSV (i,j,label)")
      ->required()
      ->check(CLI::ExistingFile);
  det->add_option("--attrs", det_attrs, "attribute CSV")
      ->required()
      ->check(CLI::ExistingFile);
  det->add_option("-K,--communities", det_k, "number of communities")->required();
  det->add_option("--seed", det_seed, "seed for weights and k-means");
  det->add_option("--restarts", det_restarts, "k-means restarts");
  det->add_option("--weights", det_weights,
                  "fixed label weights (comma separated, overrides the "
                  "Uniform[0,1] draw)")
      ->delimiter(',');
  det->add_option("--dump-s", det_dump_s, "binary dump of the aggregated matrix");
  det->add_option("--out", det_out, "assignment CSV output")->required();

  // divergence
  std::string div_config, div_method = "closed", div_out;
  int div_n = 0;
  auto *div = app.add_subcommand("divergence", "Model divergence report");
  div->add_option("--config", div_config, "model parameter JSON")
      ->required()
      ->check(CLI::ExistingFile);
  div->add_option("--n", div_n, "node count for the 1/n attribute scaling "
                                "(defaults to the model's n)");
  div->add_option("--method", div_method, "closed | oracle | both")
      ->check(CLI::IsMember({"closed", "oracle", "both"}));
  div->add_option("--out", div_out, "report JSON path (stdout when omitted)");

  // score
  std::string score_truth, score_est, score_out;
  auto *score = app.add_subcommand("score", "Permutation-matched misclassification");
  score->add_option("--truth", score_truth, "truth CSV (i,community)")
      ->required()
      ->check(CLI::ExistingFile);
  score->add_option("--est", score_est, "estimate CSV (i,community)")
      ->required()
      ->check(CLI::ExistingFile);
  score->add_option("--out", score_out, "JSON path (stdout when omitted)");

  // experiment
  std::string exp_config, exp_out, exp_plot;
  int exp_threads = 0;
  auto *exp = app.add_subcommand("experiment", "Replicated sweep against bounds");
  exp->add_option("--config", exp_config, "experiment config JSON")
      ->required()
      ->check(CLI::ExistingFile);
  exp->add_option("--out", exp_out, "replication CSV output")->required();
  exp->add_option("--plot", exp_plot, "plot-data CSV output");
  exp->add_option("--threads", exp_threads, "worker threads (0 = hardware)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  if (sample->parsed()) {
    ParamsHandle params;
    if (auto st = clsbm_params_load(sample_config.c_str(), &params.p);
        st != CLSBM_OK)
      return exit_code_for(st);
    DatasetHandle ds;
    if (auto st = clsbm_sample(params.p, sample_seed, &ds.d); st != CLSBM_OK)
      return exit_code_for(st);
    std::error_code ec;
    std::filesystem::create_directories(sample_out, ec);
    if (ec) {
      std::fprintf(stderr, "error: cannot create directory %s\n", sample_out.c_str());
      return 2;
    }
    const auto graph = (std::filesystem::path(sample_out) / "graph.csv").string();
    const auto attrs = (std::filesystem::path(sample_out) / "attrs.csv").string();
    const auto truth = (std::filesystem::path(sample_out) / "truth.csv").string();
    const auto st =
        clsbm_dataset_save(ds.d, graph.c_str(), attrs.c_str(), truth.c_str());
    if (st != CLSBM_OK) return exit_code_for(st);
    std::printf("wrote %s, %s, %s\n", graph.c_str(), attrs.c_str(), truth.c_str());
    return 0;
  }

  if (det->parsed()) {
    AssignmentHandle assignment;
    const auto st = clsbm_detect_files(
        det_graph.c_str(), det_attrs.c_str(), det_k, det_seed, det_restarts,
        det_weights.empty() ? nullptr : det_weights.data(), det_weights.size(),
        det_dump_s.empty() ? nullptr : det_dump_s.c_str(), &assignment.a);
    if (st != CLSBM_OK) return exit_code_for(st);
    if (auto save = clsbm_assignment_save(assignment.a, det_out.c_str());
        save != CLSBM_OK)
      return exit_code_for(save);
    std::printf("wrote %s (%zu nodes)\n", det_out.c_str(),
                clsbm_assignment_size(assignment.a));
    return 0;
  }

  if (div->parsed()) {
    ParamsHandle params;
    if (auto st = clsbm_params_load(div_config.c_str(), &params.p); st != CLSBM_OK)
      return exit_code_for(st);
    const int n = div_n > 0 ? div_n : clsbm_params_n(params.p);
    char *json = nullptr;
    if (auto st = clsbm_divergence_json(params.p, n, div_method.c_str(), &json);
        st != CLSBM_OK)
      return exit_code_for(st);
    return write_or_print(json, div_out);
  }

  if (score->parsed()) {
    char *json = nullptr;
    if (auto st = clsbm_score_files(score_truth.c_str(), score_est.c_str(), &json);
        st != CLSBM_OK)
      return exit_code_for(st);
    return write_or_print(json, score_out);
  }

  if (exp->parsed()) {
    char *summary = nullptr;
    const auto st = clsbm_experiment_run(exp_config.c_str(), exp_out.c_str(),
                                         exp_plot.empty() ? nullptr : exp_plot.c_str(),
                                         exp_threads, &summary);
    if (st != CLSBM_OK) return exit_code_for(st);
    std::printf("wrote %s\n", exp_out.c_str());
    if (!exp_plot.empty()) std::printf("wrote %s\n", exp_plot.c_str());
    if (summary) {
      std::printf("%s\n", summary);
      clsbm_string_free(summary);
    }
    return 0;
  }

  return 0;
}
