#include "spectral.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "aggregate.hpp"
#include "rng.hpp"

namespace clsbm {

namespace {

// Full symmetric eigendecomposition by cyclic Jacobi sweeps. Machine
// precision; used directly up to n=512 and for the small Rayleigh-Ritz
// blocks of the iterative path. Values come back unordered.
void jacobi_eigen(Eigen::MatrixXd a, Eigen::VectorXd &values, Eigen::MatrixXd &vecs) {
  const int n = static_cast<int>(a.rows());
  vecs = Eigen::MatrixXd::Identity(n, n);
  values.resize(n);
  const double norm_f = a.norm();
  if (norm_f == 0.0) {
    values.setZero();
    return;
  }
  const double tol = 1e-10;  // relative off-diagonal mass
  const long long max_rotations = 10LL * n * n;
  long long rotations = 0;
  Eigen::VectorXd tp(n), tq(n);
  for (int sweep = 0; sweep < 100 && rotations < max_rotations; ++sweep) {
    double off2 = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off2 += a(p, q) * a(p, q);
    if (std::sqrt(2.0 * off2) <= tol * norm_f) break;
    for (int p = 0; p < n && rotations < max_rotations; ++p)
      for (int q = p + 1; q < n && rotations < max_rotations; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) < 1e-300) continue;
        const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        tp = a.col(p);
        tq = a.col(q);
        a.col(p) = c * tp - s * tq;
        a.col(q) = s * tp + c * tq;
        tp = a.row(p);
        tq = a.row(q);
        a.row(p) = (c * tp - s * tq).transpose();
        a.row(q) = (s * tp + c * tq).transpose();
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        tp = vecs.col(p);
        tq = vecs.col(q);
        vecs.col(p) = c * tp - s * tq;
        vecs.col(q) = s * tp + c * tq;
        ++rotations;
      }
  }
  values = a.diagonal();
}

// Orders eigenpair indices by (|value| desc, value desc).
std::vector<int> magnitude_order(const Eigen::VectorXd &values) {
  std::vector<int> idx(values.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int i, int j) {
    const double ai = std::abs(values[i]), aj = std::abs(values[j]);
    if (ai != aj) return ai > aj;
    return values[i] > values[j];
  });
  return idx;
}

void fix_signs(Eigen::MatrixXd &vecs) {
  for (int k = 0; k < vecs.cols(); ++k) {
    int arg = 0;
    double best = -1.0;
    for (int i = 0; i < vecs.rows(); ++i) {
      const double v = std::abs(vecs(i, k));
      if (v > best) {
        best = v;
        arg = i;
      }
    }
    if (vecs(arg, k) < 0.0) vecs.col(k) = -vecs.col(k);
  }
}

EigenBasis jacobi_top_k(const Eigen::MatrixXd &s, int k) {
  Eigen::VectorXd values;
  Eigen::MatrixXd vecs;
  jacobi_eigen(s, values, vecs);
  const auto order = magnitude_order(values);
  EigenBasis basis;
  basis.values.resize(k);
  basis.vectors.resize(s.rows(), k);
  for (int j = 0; j < k; ++j) {
    basis.values[j] = values[order[j]];
    basis.vectors.col(j) = vecs.col(order[j]);
  }
  fix_signs(basis.vectors);
  return basis;
}

Eigen::MatrixXd thin_q(const Eigen::MatrixXd &m) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  return qr.householderQ() * Eigen::MatrixXd::Identity(m.rows(), m.cols());
}

struct SubspaceOutcome {
  bool converged = false;
  double residual = std::numeric_limits<double>::infinity();
  EigenBasis basis;
};

// Block power (orthogonal) iteration with Rayleigh-Ritz extraction, on an
// oversampled block so the top-K pairs converge by the bulk gap rather than
// internal eigenvalue separations. allow_stall_exit lets the caller bail to
// the Jacobi fallback when the residual stops improving.
SubspaceOutcome subspace_top_k(const Eigen::MatrixXd &s, int k, int max_iters,
                               double tol, bool allow_stall_exit) {
  const int n = static_cast<int>(s.rows());
  const int m = std::min(n, k + 4);
  // Fixed internal stream: the decomposition is a deterministic function of S.
  Rng rng(0x0c15b3a75eedULL);
  Eigen::MatrixXd q(n, m);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < n; ++i) q(i, j) = rng.normal();
  q = thin_q(q);

  SubspaceOutcome out;
  const int check_every = 5;
  double best_residual = std::numeric_limits<double>::infinity();
  int checks_since_improvement = 0;
  Eigen::MatrixXd z;
  for (int iter = 1; iter <= max_iters; ++iter) {
    z.noalias() = s * q;
    if (iter % check_every == 0 || iter == max_iters) {
      Eigen::MatrixXd t = q.transpose() * z;
      t = 0.5 * (t + t.transpose()).eval();
      Eigen::VectorXd theta;
      Eigen::MatrixXd w;
      jacobi_eigen(t, theta, w);
      const auto order = magnitude_order(theta);
      Eigen::MatrixXd wk(m, k);
      Eigen::VectorXd vals(k);
      for (int j = 0; j < k; ++j) {
        wk.col(j) = w.col(order[j]);
        vals[j] = theta[order[j]];
      }
      Eigen::MatrixXd y = q * wk;
      Eigen::MatrixXd r = z * wk - y * vals.asDiagonal();
      double resid = 0.0;
      for (int j = 0; j < k; ++j) resid = std::max(resid, r.col(j).norm());
      const double scale = std::abs(theta[order[0]]);
      out.residual = resid;
      if (resid <= tol * scale + 1e-300) {
        out.converged = true;
        out.basis.values = vals;
        out.basis.vectors = y;
        fix_signs(out.basis.vectors);
        return out;
      }
      if (resid < 0.9 * best_residual) {
        best_residual = resid;
        checks_since_improvement = 0;
      } else if (++checks_since_improvement >= 6 && allow_stall_exit) {
        return out;
      }
    }
    q = thin_q(z);
  }
  return out;
}

}  // namespace

EigenBasis top_k_eigen(const Eigen::MatrixXd &s, int k) {
  const int n = static_cast<int>(s.rows());
  if (s.cols() != n) throw ValidationError("matrix must be square");
  if (k < 1 || k > n) throw ValidationError("K must satisfy 1 <= K <= n");
  const double scale = s.cwiseAbs().maxCoeff();
  if ((s - s.transpose()).cwiseAbs().maxCoeff() > 1e-10 * (1.0 + scale))
    throw ValidationError("matrix must be symmetric");

  if (n <= 32) return jacobi_top_k(s, k);
  const bool small = n <= 512;
  auto outcome = subspace_top_k(s, k, small ? 400 : 10000, 1e-9, small);
  if (outcome.converged) return outcome.basis;
  if (small) return jacobi_top_k(s, k);
  std::ostringstream os;
  os << "eigensolver failed to converge within 10000 iterations (residual="
     << outcome.residual << ")";
  throw NumericError(os.str());
}

Eigen::MatrixXd project(const EigenBasis &basis, const Eigen::MatrixXd &s) {
  if (basis.vectors.rows() != s.rows())
    throw ValidationError("basis and matrix dimensions do not match");
  return basis.vectors.transpose() * s;
}

Eigen::MatrixXd best_rank_k(const Eigen::MatrixXd &s, int k) {
  const EigenBasis basis = top_k_eigen(s, k);
  Eigen::MatrixXd approx =
      basis.vectors * basis.values.asDiagonal() * basis.vectors.transpose();
  return 0.5 * (approx + approx.transpose()).eval();
}

namespace {

double sq_dist(const Eigen::MatrixXd &pts, int i, const Eigen::MatrixXd &centers, int k) {
  return (pts.col(i) - centers.col(k)).squaredNorm();
}

Eigen::MatrixXd kmeanspp_init(const Eigen::MatrixXd &pts, int k, Rng &rng) {
  const int n = static_cast<int>(pts.cols());
  Eigen::MatrixXd centers(pts.rows(), k);
  centers.col(0) = pts.col(static_cast<int>(rng.uniform_int(n)));
  Eigen::VectorXd d2(n);
  for (int i = 0; i < n; ++i) d2[i] = (pts.col(i) - centers.col(0)).squaredNorm();
  for (int c = 1; c < k; ++c) {
    const double total = d2.sum();
    int pick;
    if (total <= 0.0) {
      pick = static_cast<int>(rng.uniform_int(n));
    } else {
      const double u = rng.uniform() * total;
      double acc = 0.0;
      pick = n - 1;
      for (int i = 0; i < n; ++i) {
        acc += d2[i];
        if (u < acc) {
          pick = i;
          break;
        }
      }
    }
    centers.col(c) = pts.col(pick);
    for (int i = 0; i < n; ++i)
      d2[i] = std::min(d2[i], (pts.col(i) - centers.col(c)).squaredNorm());
  }
  return centers;
}

void assign_nearest(const Eigen::MatrixXd &pts, const Eigen::MatrixXd &centers,
                    std::vector<int> &labels) {
  const int n = static_cast<int>(pts.cols());
  const int k = static_cast<int>(centers.cols());
  for (int i = 0; i < n; ++i) {
    int arg = 0;
    double best = sq_dist(pts, i, centers, 0);
    for (int c = 1; c < k; ++c) {
      const double d = sq_dist(pts, i, centers, c);
      if (d < best) {  // ties keep the lowest center index
        best = d;
        arg = c;
      }
    }
    labels[i] = arg;
  }
}

// Moves the farthest point of the largest-inertia cluster into each empty
// cluster. Only clusters with at least two members donate, so every move
// strictly grows the number of nonempty clusters and the loop terminates.
// No-op when every remaining cluster is a point mass.
void repair_empty_clusters(const Eigen::MatrixXd &pts, const Eigen::MatrixXd &centers,
                           std::vector<int> &labels, int k) {
  const int n = static_cast<int>(pts.cols());
  for (;;) {
    std::vector<int> counts(k, 0);
    for (int i = 0; i < n; ++i) ++counts[labels[i]];
    int empty = -1;
    for (int c = 0; c < k; ++c)
      if (counts[c] == 0) {
        empty = c;
        break;
      }
    if (empty < 0) return;
    std::vector<double> inertia(k, 0.0);
    for (int i = 0; i < n; ++i) inertia[labels[i]] += sq_dist(pts, i, centers, labels[i]);
    int donor = -1;
    for (int c = 0; c < k; ++c)
      if (counts[c] >= 2 && (donor < 0 || inertia[c] > inertia[donor])) donor = c;
    if (donor < 0 || inertia[donor] <= 0.0) return;
    int farthest = -1;
    double best = -1.0;
    for (int i = 0; i < n; ++i)
      if (labels[i] == donor) {
        const double d = sq_dist(pts, i, centers, donor);
        if (d > best) {
          best = d;
          farthest = i;
        }
      }
    labels[farthest] = empty;
  }
}

double objective_of(const Eigen::MatrixXd &pts, const Eigen::MatrixXd &centers,
                    const std::vector<int> &labels) {
  double obj = 0.0;
  for (int i = 0; i < pts.cols(); ++i) obj += sq_dist(pts, i, centers, labels[i]);
  return obj;
}

KMeansResult lloyd_run(const Eigen::MatrixXd &pts, int k, Rng &rng, int max_iters,
                       std::vector<double> *trace) {
  const int n = static_cast<int>(pts.cols());
  Eigen::MatrixXd centers = kmeanspp_init(pts, k, rng);
  std::vector<int> labels(n, 0), prev(n, -1);
  for (int iter = 0; iter < max_iters; ++iter) {
    assign_nearest(pts, centers, labels);
    repair_empty_clusters(pts, centers, labels, k);
    if (trace) trace->push_back(objective_of(pts, centers, labels));
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(pts.rows(), k);
    std::vector<int> counts(k, 0);
    for (int i = 0; i < n; ++i) {
      sums.col(labels[i]) += pts.col(i);
      ++counts[labels[i]];
    }
    for (int c = 0; c < k; ++c)
      if (counts[c] > 0) centers.col(c) = sums.col(c) / counts[c];
    if (labels == prev) break;
    prev = labels;
  }
  KMeansResult res;
  res.labels = labels;
  res.centers = centers;
  res.objective = objective_of(pts, centers, labels);
  return res;
}

}  // namespace

KMeansResult kmeans(const Eigen::MatrixXd &points, int K, int restarts,
                    std::uint64_t seed, int max_iters,
                    std::vector<double> *objective_trace) {
  const int n = static_cast<int>(points.cols());
  if (K < 1 || n < K) throw ValidationError("k-means requires n >= K >= 1");
  if (restarts < 1) restarts = 1;
  KMeansResult best;
  best.objective = std::numeric_limits<double>::infinity();
  std::vector<double> trace;
  for (int r = 0; r < restarts; ++r) {
    Rng rng(derive_seed(seed, kSeedKMeans, static_cast<std::uint64_t>(r)));
    std::vector<double> run_trace;
    KMeansResult res = lloyd_run(points, K, rng, max_iters,
                                 objective_trace ? &run_trace : nullptr);
    if (res.objective < best.objective) {
      best = std::move(res);
      trace = std::move(run_trace);
    }
  }
  if (objective_trace) *objective_trace = trace;
  return best;
}

KMeansResult kmeans_exhaustive(const Eigen::MatrixXd &points, int K) {
  const int n = static_cast<int>(points.cols());
  if (K < 1 || n < 1) throw ValidationError("k-means requires n >= 1, K >= 1");
  if (n * std::log(static_cast<double>(K)) > std::log(1e7))
    throw ValidationError("instance too large for exhaustive k-means (K^n > 1e7)");

  const int dim = static_cast<int>(points.rows());
  double total_sq = 0.0;
  for (int i = 0; i < n; ++i) total_sq += points.col(i).squaredNorm();

  std::vector<int> labels(n, 0), best_labels;
  double best_obj = std::numeric_limits<double>::infinity();
  Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(dim, K);
  std::vector<int> counts(K, 0);

  // Canonical DFS: cluster ids appear in first-occurrence order, so each
  // partition is visited once and ties resolve to the lexicographically
  // smallest labeling.
  auto dfs = [&](auto &&self, int i, int max_used) -> void {
    if (i == n) {
      double reduced = 0.0;
      for (int c = 0; c < K; ++c)
        if (counts[c] > 0) reduced += sums.col(c).squaredNorm() / counts[c];
      const double obj = total_sq - reduced;
      if (obj < best_obj) {
        best_obj = obj;
        best_labels = labels;
      }
      return;
    }
    const int limit = std::min(max_used + 1, K - 1);
    for (int c = 0; c <= limit; ++c) {
      labels[i] = c;
      sums.col(c) += points.col(i);
      ++counts[c];
      self(self, i + 1, std::max(max_used, c));
      --counts[c];
      sums.col(c) -= points.col(i);
    }
  };
  dfs(dfs, 0, -1);

  KMeansResult res;
  res.labels = best_labels;
  res.centers = Eigen::MatrixXd::Zero(dim, K);
  std::vector<int> cnt(K, 0);
  for (int i = 0; i < n; ++i) {
    res.centers.col(best_labels[i]) += points.col(i);
    ++cnt[best_labels[i]];
  }
  for (int c = 0; c < K; ++c)
    if (cnt[c] > 0) res.centers.col(c) /= cnt[c];
  res.objective = objective_of(points, res.centers, best_labels);
  return res;
}

CommunityAssignment detect(const LabeledGraph &graph, const Eigen::MatrixXd &attrs,
                           int K, const DetectOptions &options) {
  const int n = graph.n();
  if (attrs.cols() != n)
    throw ValidationError("attribute matrix does not match graph size");
  if (K < 1 || K > n) throw ValidationError("K must satisfy 1 <= K <= n");

  Eigen::VectorXd weights;
  if (options.weights) {
    weights = *options.weights;
  } else {
    const int l_eff = std::max(graph.L, 1);
    weights = sample_weights(l_eff, derive_seed(options.seed, kSeedWeights, 0));
  }
  const int max_label = graph.labels.maxCoeff();
  if (max_label > weights.size())
    throw ValidationError("graph labels exceed the provided weight vector");

  const AggregatedMatrix agg = build_S(graph, attrs, weights);
  const EigenBasis basis = top_k_eigen(agg.S, K);
  const Eigen::MatrixXd q = project(basis, agg.S);
  const KMeansResult km = kmeans(q, K, options.restarts,
                                 derive_seed(options.seed, kSeedDetect, 0));
  return km.labels;
}

}  // namespace clsbm
