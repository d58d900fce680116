#include "harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <thread>

#include <json.hpp>

#include "io.hpp"
#include "metrics.hpp"
#include "rng.hpp"
#include "sampler.hpp"

namespace clsbm {

ModelParams apply_sweep(const ModelParams &base, const std::string &path, double value) {
  ModelParams p = base;
  if (path == "n") {
    p.n = static_cast<int>(std::llround(value));
  } else if (path == "mu_scale") {
    p.mu *= value;
  } else if (path == "p_interp") {
    if (value < 0.0 || value > 1.0)
      throw ValidationError("p_interp values must lie in [0,1]");
    for (int l = 0; l <= p.L; ++l) {
      const double mean = p.P[l].mean();
      p.P[l] = (1.0 - value) * p.P[l] +
               value * Eigen::MatrixXd::Constant(p.K, p.K, mean);
    }
  } else {
    throw ValidationError("unknown sweep path '" + path + "'");
  }
  return validate_params(std::move(p));
}

ExperimentConfig experiment_config_from_json_text(const std::string &text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception &e) {
    throw ValidationError(std::string("experiment JSON parse error: ") + e.what());
  }
  ExperimentConfig cfg;
  try {
    cfg.model = params_from_json_text(doc.at("model").dump());
    for (const auto &s : doc.at("sweep")) {
      SweepSpec spec;
      spec.path = s.at("path").get<std::string>();
      for (const auto &v : s.at("values")) spec.values.push_back(v.get<double>());
      if (spec.values.empty())
        throw ValidationError("sweep '" + spec.path + "' has no values");
      cfg.sweep.push_back(std::move(spec));
    }
    cfg.replications = doc.at("replications").get<int>();
    if (cfg.replications < 1)
      throw ValidationError("replications must be at least 1");
    cfg.master_seed = doc.value("master_seed", std::uint64_t{0});
    if (doc.contains("detect")) {
      const auto &d = doc["detect"];
      cfg.detect.restarts = d.value("restarts", 25);
      if (d.contains("weights") && !d["weights"].is_null()) {
        const auto &w = d["weights"];
        Eigen::VectorXd weights(static_cast<Eigen::Index>(w.size()));
        for (size_t i = 0; i < w.size(); ++i)
          weights[static_cast<Eigen::Index>(i)] = w[i].get<double>();
        cfg.detect.weights = std::move(weights);
      }
    }
    cfg.bound_constant = doc.value("bound_constant", 4.0);
    const std::string variant =
        doc.value("snr_variant", std::string("half_label_mean"));
    if (variant == "half_label_mean")
      cfg.snr_variant = BlockVariant::half_label_mean;
    else if (variant == "expectation")
      cfg.snr_variant = BlockVariant::expectation;
    else
      throw ValidationError(
          "snr_variant must be 'half_label_mean' or 'expectation'");
  } catch (const nlohmann::json::exception &e) {
    throw ValidationError(std::string("experiment JSON schema error: ") + e.what());
  }
  // Every sweep point must yield valid parameters; fail at parse time.
  for (const auto &spec : cfg.sweep)
    for (double v : spec.values) apply_sweep(cfg.model, spec.path, v);
  return cfg;
}

namespace {

struct SweepPoint {
  std::string param;
  double value = 0.0;
  ModelParams params;
};

std::vector<SweepPoint> expand_points(const ExperimentConfig &cfg) {
  std::vector<SweepPoint> points;
  for (const auto &spec : cfg.sweep)
    for (double v : spec.values)
      points.push_back({spec.path, v, apply_sweep(cfg.model, spec.path, v)});
  if (points.empty()) points.push_back({"none", 0.0, validate_params(cfg.model)});
  return points;
}

ReplicationRow run_one(const ExperimentConfig &cfg, const SweepPoint &point,
                       int point_index, int rep) {
  ReplicationRow row;
  row.point_index = point_index;
  row.sweep_param = point.param;
  row.sweep_value = point.value;
  row.replication = rep;
  row.seed = derive_seed(cfg.master_seed, static_cast<std::uint64_t>(point_index),
                         static_cast<std::uint64_t>(rep));
  row.n = point.params.n;
  row.K = point.params.K;
  const auto start = std::chrono::steady_clock::now();
  try {
    const Dataset ds = sample_clsbm(point.params, row.seed);
    DetectOptions opts;
    opts.seed = derive_seed(row.seed, kSeedDetect, 0);
    opts.restarts = cfg.detect.restarts;
    opts.weights = cfg.detect.weights;
    const CommunityAssignment est = detect(ds.graph, ds.attrs, point.params.K, opts);
    const MisclassificationResult mis =
        misclassified_count(ds.sigma, est, point.params.K);
    row.misclassified = mis.count;
    row.rate = mis.rate;
  } catch (const std::exception &e) {
    row.failed = true;
    row.error = e.what();
    row.misclassified = -1;
    row.rate = std::numeric_limits<double>::quiet_NaN();
  }
  row.runtime_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  return row;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig &config, int threads) {
  const std::vector<SweepPoint> points = expand_points(config);
  const int reps = config.replications;
  const size_t total = points.size() * static_cast<size_t>(reps);

  ExperimentResult result;
  result.rows.resize(total);

  if (threads <= 0)
    threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = static_cast<int>(std::min<size_t>(threads, total));

  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const size_t task = next.fetch_add(1);
      if (task >= total) return;
      const int point_index = static_cast<int>(task / reps);
      const int rep = static_cast<int>(task % reps);
      result.rows[task] = run_one(config, points[point_index], point_index, rep);
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto &t : pool) t.join();
  }

  for (size_t p = 0; p < points.size(); ++p) {
    PointSummary s;
    s.point_index = static_cast<int>(p);
    s.sweep_param = points[p].param;
    s.sweep_value = points[p].value;
    s.n = points[p].params.n;
    s.K = points[p].params.K;
    double sum = 0.0, sum_sq = 0.0;
    for (int r = 0; r < reps; ++r) {
      const auto &row = result.rows[p * reps + r];
      if (row.failed) {
        ++s.failed;
        continue;
      }
      ++s.completed;
      sum += row.rate;
      sum_sq += row.rate * row.rate;
    }
    if (s.completed > 0) s.mean_rate = sum / s.completed;
    if (s.completed > 1) {
      const double var =
          (sum_sq - sum * sum / s.completed) / (s.completed - 1);
      s.stderr_rate = std::sqrt(std::max(var, 0.0) / s.completed);
    }
    s.divergence = divergence_closed_form(points[p].params, s.n).D;
    const BoundCurve curve =
        bound_curves(points[p].params, s.n, config.bound_constant, config.snr_variant);
    s.snr_value = curve.snr;
    s.lower = curve.lower;
    s.upper = curve.upper;
    result.summaries.push_back(std::move(s));
  }
  return result;
}

void emit_csv(const ExperimentResult &result, const std::string &path) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot open for writing: " + path);
  f << "sweep_param,sweep_value,replication,seed,n,K,misclassified,rate,"
       "runtime_ms,failed\n";
  for (const auto &row : result.rows) {
    f << row.sweep_param << ',' << format_double(row.sweep_value) << ','
      << row.replication << ',' << row.seed << ',' << row.n << ',' << row.K << ','
      << row.misclassified << ',' << format_double(row.rate) << ','
      << row.runtime_ms << ',' << (row.failed ? 1 : 0) << '\n';
  }
  if (!f) throw IoError("write failed: " + path);
}

void emit_plot_data(const ExperimentResult &result, const std::string &path) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot open for writing: " + path);
  f << "sweep_value,mean_rate,stderr,lower_bound_rate,upper_bound_rate,D,SNR\n";
  for (const auto &s : result.summaries) {
    f << format_double(s.sweep_value) << ',' << format_double(s.mean_rate) << ','
      << format_double(s.stderr_rate) << ',' << format_double(s.lower / s.n) << ','
      << format_double(s.upper / s.n) << ',' << format_double(s.divergence) << ','
      << format_double(s.snr_value) << '\n';
  }
  if (!f) throw IoError("write failed: " + path);
}

}  // namespace clsbm
