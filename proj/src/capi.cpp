#include "clsbm/clsbm.h"

#include <cstring>
#include <string>

#include <json.hpp>

#include "aggregate.hpp"
#include "divergence.hpp"
#include "harness.hpp"
#include "io.hpp"
#include "metrics.hpp"
#include "model.hpp"
#include "rng.hpp"
#include "sampler.hpp"
#include "spectral.hpp"

struct clsbm_params_t {
  clsbm::ModelParams rep;
};
struct clsbm_dataset_t {
  clsbm::Dataset rep;
};
struct clsbm_assignment_t {
  clsbm::CommunityAssignment rep;
};

namespace {

thread_local std::string g_last_error;

void set_error(const char *what) { g_last_error = what ? what : "unknown error"; }

template <typename F>
clsbm_status guarded(F &&fn) noexcept {
  try {
    fn();
    return CLSBM_OK;
  } catch (const clsbm::ValidationError &e) {
    set_error(e.what());
    return CLSBM_ERR_INVALID;
  } catch (const clsbm::IoError &e) {
    set_error(e.what());
    return CLSBM_ERR_IO;
  } catch (const clsbm::NumericError &e) {
    set_error(e.what());
    return CLSBM_ERR_NUMERIC;
  } catch (const std::exception &e) {
    set_error(e.what());
    return CLSBM_ERR_INTERNAL;
  } catch (...) {
    set_error("unknown error");
    return CLSBM_ERR_INTERNAL;
  }
}

char *dup_string(const std::string &s) {
  char *out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

clsbm_status require(bool ok, const char *message) {
  if (ok) return CLSBM_OK;
  set_error(message);
  return CLSBM_ERR_INVALID;
}

nlohmann::json report_json(const clsbm::DivergenceReport &rep) {
  return nlohmann::json{
      {"D", rep.D},
      {"k1", rep.k1 + 1},
      {"k2", rep.k2 + 1},
      {"t_star", rep.t_star},
      {"DA", rep.DA},
      {"DX_over_n", rep.DX_over_n},
      {"method", rep.method == clsbm::DivergenceMethod::closed_form
                     ? "closed_form"
                     : "numeric_oracle"},
  };
}

std::optional<Eigen::VectorXd> weights_arg(const double *weights, size_t len) {
  if (!weights || len == 0) return std::nullopt;
  Eigen::VectorXd w(static_cast<Eigen::Index>(len));
  for (size_t i = 0; i < len; ++i) w[static_cast<Eigen::Index>(i)] = weights[i];
  return w;
}

clsbm_status detect_common(const clsbm::LabeledGraph &graph,
                           const Eigen::MatrixXd &attrs, int k, uint64_t seed,
                           int restarts, const double *weights, size_t weights_len,
                           const char *dump_s_path, clsbm_assignment_t **out) {
  return guarded([&] {
    clsbm::DetectOptions opts;
    opts.seed = seed;
    opts.restarts = restarts > 0 ? restarts : 25;
    opts.weights = weights_arg(weights, weights_len);
    if (dump_s_path) {
      Eigen::VectorXd w =
          opts.weights ? *opts.weights
                       : clsbm::sample_weights(
                             std::max(graph.L, 1),
                             clsbm::derive_seed(seed, clsbm::kSeedWeights, 0));
      clsbm::write_matrix_binary(clsbm::build_S(graph, attrs, w).S, dump_s_path);
    }
    auto *a = new clsbm_assignment_t{clsbm::detect(graph, attrs, k, opts)};
    *out = a;
  });
}

}  // namespace

extern "C" {

const char *clsbm_version(void) { return "0.1.0"; }

const char *clsbm_last_error(void) { return g_last_error.c_str(); }

void clsbm_string_free(char *s) { delete[] s; }

clsbm_status clsbm_params_parse_json(const char *json_text, clsbm_params_t **out) {
  if (auto st = require(json_text && out, "NULL argument"); st != CLSBM_OK) return st;
  return guarded([&] {
    *out = new clsbm_params_t{clsbm::params_from_json_text(json_text)};
  });
}

clsbm_status clsbm_params_load(const char *path, clsbm_params_t **out) {
  if (auto st = require(path && out, "NULL argument"); st != CLSBM_OK) return st;
  return guarded([&] {
    *out = new clsbm_params_t{
        clsbm::params_from_json_text(clsbm::read_text_file(path))};
  });
}

void clsbm_params_free(clsbm_params_t *params) { delete params; }

int clsbm_params_n(const clsbm_params_t *params) { return params ? params->rep.n : -1; }
int clsbm_params_k(const clsbm_params_t *params) { return params ? params->rep.K : -1; }
int clsbm_params_l(const clsbm_params_t *params) { return params ? params->rep.L : -1; }
int clsbm_params_d(const clsbm_params_t *params) { return params ? params->rep.d : -1; }

clsbm_status clsbm_sample(const clsbm_params_t *params, uint64_t seed,
                          clsbm_dataset_t **out) {
  if (auto st = require(params && out, "NULL argument"); st != CLSBM_OK) return st;
  return guarded([&] {
    *out = new clsbm_dataset_t{clsbm::sample_clsbm(params->rep, seed)};
  });
}

void clsbm_dataset_free(clsbm_dataset_t *dataset) { delete dataset; }

clsbm_status clsbm_dataset_save(const clsbm_dataset_t *dataset,
                                const char *graph_csv, const char *attrs_csv,
                                const char *truth_csv) {
  if (auto st = require(dataset != nullptr, "NULL dataset"); st != CLSBM_OK) return st;
  return guarded([&] {
    if (graph_csv) clsbm::write_graph_csv(dataset->rep.graph, graph_csv);
    if (attrs_csv) clsbm::write_attrs_csv(dataset->rep.attrs, attrs_csv);
    if (truth_csv) clsbm::write_assignment_csv(dataset->rep.sigma, truth_csv);
  });
}

size_t clsbm_dataset_size(const clsbm_dataset_t *dataset) {
  return dataset ? dataset->rep.sigma.size() : 0;
}

clsbm_status clsbm_dataset_truth(const clsbm_dataset_t *dataset, int *out,
                                 size_t cap) {
  if (auto st = require(dataset && out, "NULL argument"); st != CLSBM_OK) return st;
  if (auto st = require(cap >= dataset->rep.sigma.size(), "buffer too small");
      st != CLSBM_OK)
    return st;
  for (size_t i = 0; i < dataset->rep.sigma.size(); ++i)
    out[i] = dataset->rep.sigma[i] + 1;
  return CLSBM_OK;
}

clsbm_status clsbm_detect_files(const char *graph_csv, const char *attrs_csv,
                                int k, uint64_t seed, int restarts,
                                const double *weights, size_t weights_len,
                                const char *dump_s_path, clsbm_assignment_t **out) {
  if (auto st = require(graph_csv && attrs_csv && out, "NULL argument");
      st != CLSBM_OK)
    return st;
  clsbm::LabeledGraph graph;
  Eigen::MatrixXd attrs;
  if (auto st = guarded([&] {
        attrs = clsbm::read_attrs_csv(attrs_csv);
        graph = clsbm::read_graph_csv(graph_csv, static_cast<int>(attrs.cols()));
      });
      st != CLSBM_OK)
    return st;
  return detect_common(graph, attrs, k, seed, restarts, weights, weights_len,
                       dump_s_path, out);
}

clsbm_status clsbm_detect_dataset(const clsbm_dataset_t *dataset, int k,
                                  uint64_t seed, int restarts,
                                  const double *weights, size_t weights_len,
                                  clsbm_assignment_t **out) {
  if (auto st = require(dataset && out, "NULL argument"); st != CLSBM_OK) return st;
  return detect_common(dataset->rep.graph, dataset->rep.attrs, k, seed, restarts,
                       weights, weights_len, nullptr, out);
}

void clsbm_assignment_free(clsbm_assignment_t *assignment) { delete assignment; }

size_t clsbm_assignment_size(const clsbm_assignment_t *assignment) {
  return assignment ? assignment->rep.size() : 0;
}

int clsbm_assignment_label(const clsbm_assignment_t *assignment, size_t node) {
  if (!assignment || node >= assignment->rep.size()) return -1;
  return assignment->rep[node] + 1;
}

clsbm_status clsbm_assignment_save(const clsbm_assignment_t *assignment,
                                   const char *csv_path) {
  if (auto st = require(assignment && csv_path, "NULL argument"); st != CLSBM_OK)
    return st;
  return guarded([&] { clsbm::write_assignment_csv(assignment->rep, csv_path); });
}

clsbm_status clsbm_score_files(const char *truth_csv, const char *est_csv,
                               char **json_out) {
  if (auto st = require(truth_csv && est_csv && json_out, "NULL argument");
      st != CLSBM_OK)
    return st;
  return guarded([&] {
    const auto truth = clsbm::read_assignment_csv(truth_csv);
    const auto est = clsbm::read_assignment_csv(est_csv);
    int k = 0;
    for (int v : truth) k = std::max(k, v + 1);
    for (int v : est) k = std::max(k, v + 1);
    const auto res = clsbm::misclassified_count(truth, est, k);
    nlohmann::json doc;
    doc["count"] = res.count;
    doc["rate"] = res.rate;
    nlohmann::json perm = nlohmann::json::array();
    for (int p : res.best_perm) perm.push_back(p + 1);
    doc["perm"] = std::move(perm);
    nlohmann::json confusion = nlohmann::json::array();
    for (int a = 0; a < res.confusion.rows(); ++a) {
      nlohmann::json row = nlohmann::json::array();
      for (int b = 0; b < res.confusion.cols(); ++b)
        row.push_back(res.confusion(a, b));
      confusion.push_back(std::move(row));
    }
    doc["confusion"] = std::move(confusion);
    *json_out = dup_string(doc.dump(2));
  });
}

clsbm_status clsbm_divergence_json(const clsbm_params_t *params, int n,
                                   const char *method, char **json_out) {
  if (auto st = require(params && method && json_out, "NULL argument");
      st != CLSBM_OK)
    return st;
  if (auto st = require(n >= 1, "n must be positive"); st != CLSBM_OK) return st;
  return guarded([&] {
    const std::string m = method;
    nlohmann::json doc;
    if (m == "closed") {
      doc = report_json(clsbm::divergence_closed_form(params->rep, n));
    } else if (m == "oracle") {
      doc = report_json(clsbm::divergence_numeric_oracle(params->rep, n));
    } else if (m == "both") {
      doc["closed_form"] = report_json(clsbm::divergence_closed_form(params->rep, n));
      doc["numeric_oracle"] =
          report_json(clsbm::divergence_numeric_oracle(params->rep, n));
    } else {
      throw clsbm::ValidationError("method must be 'closed', 'oracle' or 'both'");
    }
    *json_out = dup_string(doc.dump(2));
  });
}

clsbm_status clsbm_experiment_run(const char *config_path, const char *csv_out,
                                  const char *plot_out, int threads,
                                  char **summary_json) {
  if (auto st = require(config_path && csv_out, "NULL argument"); st != CLSBM_OK)
    return st;
  return guarded([&] {
    const auto cfg = clsbm::experiment_config_from_json_text(
        clsbm::read_text_file(config_path));
    const auto result = clsbm::run_experiment(cfg, threads);
    clsbm::emit_csv(result, csv_out);
    if (plot_out) clsbm::emit_plot_data(result, plot_out);
    if (summary_json) {
      nlohmann::json points = nlohmann::json::array();
      for (const auto &s : result.summaries) {
        points.push_back({{"sweep_param", s.sweep_param},
                          {"sweep_value", s.sweep_value},
                          {"n", s.n},
                          {"K", s.K},
                          {"completed", s.completed},
                          {"failed", s.failed},
                          {"mean_rate", s.mean_rate},
                          {"stderr", s.stderr_rate},
                          {"D", s.divergence},
                          {"SNR", s.snr_value},
                          {"lower_bound", s.lower},
                          {"upper_bound", s.upper}});
      }
      *summary_json = dup_string(nlohmann::json{{"points", points}}.dump(2));
    }
  });
}

}  // extern "C"
