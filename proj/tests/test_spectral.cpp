#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <vector>

#include "aggregate.hpp"
#include "helpers.hpp"
#include "metrics.hpp"
#include "spectral.hpp"

using namespace clsbm;

namespace {

// Library-backed full-spectrum oracle, independent of the solver under test.
Eigen::VectorXd oracle_spectrum(const Eigen::MatrixXd &s) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
  return es.eigenvalues();
}

double op_norm(const Eigen::MatrixXd &s) {
  const Eigen::VectorXd ev = oracle_spectrum(s);
  return std::max(std::abs(ev[0]), std::abs(ev[ev.size() - 1]));
}

void check_basis(const Eigen::MatrixXd &s, const EigenBasis &basis) {
  const int k = static_cast<int>(basis.values.size());
  const Eigen::MatrixXd gram =
      basis.vectors.transpose() * basis.vectors - Eigen::MatrixXd::Identity(k, k);
  CHECK(gram.cwiseAbs().maxCoeff() <= 1e-10);
  const double scale = op_norm(s);
  for (int j = 0; j < k; ++j) {
    const double resid =
        (s * basis.vectors.col(j) - basis.values[j] * basis.vectors.col(j)).norm();
    CHECK(resid <= 1e-8 * scale + 1e-12);
  }
}

}  // namespace

TEST_SUITE("spectral") {

TEST_CASE("diagonal matrix: top-2 of diag(3,2,1)") {
  Eigen::MatrixXd s = Eigen::Vector3d(3, 2, 1).asDiagonal();
  const EigenBasis basis = top_k_eigen(s, 2);
  CHECK(basis.values[0] == doctest::Approx(3.0));
  CHECK(basis.values[1] == doctest::Approx(2.0));
  CHECK(std::abs(basis.vectors(0, 0)) == doctest::Approx(1.0));
  CHECK(std::abs(basis.vectors(1, 1)) == doctest::Approx(1.0));
  // sign convention: largest-magnitude coordinate positive
  CHECK(basis.vectors(0, 0) > 0);
  CHECK(basis.vectors(1, 1) > 0);
}

TEST_CASE("largest magnitude wins over largest value") {
  Eigen::MatrixXd s = Eigen::Vector2d(-5, 1).asDiagonal();
  const EigenBasis basis = top_k_eigen(s, 1);
  CHECK(basis.values[0] == doctest::Approx(-5.0));
}

TEST_CASE("random 8x8 matches the full-spectrum oracle") {
  Rng rng(3);
  const Eigen::MatrixXd s = helpers::random_symmetric(rng, 8);
  const EigenBasis basis = top_k_eigen(s, 8);
  check_basis(s, basis);

  Eigen::VectorXd ours = basis.values;
  std::sort(ours.data(), ours.data() + ours.size());
  const Eigen::VectorXd expected = oracle_spectrum(s);
  for (int i = 0; i < 8; ++i)
    CHECK(ours[i] == doctest::Approx(expected[i]).epsilon(1e-9));
}

TEST_CASE("iterative path agrees with the oracle beyond the Jacobi range") {
  // n > 512 exercises the subspace iteration without fallback
  Rng rng(17);
  const int n = 540;
  Eigen::MatrixXd noise = helpers::random_symmetric(rng, n, 0.5 / std::sqrt(n));
  // planted rank-2 signal with a clear gap
  Eigen::VectorXd u = Eigen::VectorXd::Zero(n), v = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i) {
    u[i] = (i % 2 == 0) ? 1.0 : -1.0;
    v[i] = (i < n / 2) ? 1.0 : -1.0;
  }
  u /= u.norm();
  v /= v.norm();
  const Eigen::MatrixXd s =
      8.0 * u * u.transpose() - 5.0 * v * v.transpose() + noise;
  const EigenBasis basis = top_k_eigen(s, 2);
  check_basis(s, basis);
  const Eigen::VectorXd full = oracle_spectrum(s);
  CHECK(basis.values[0] == doctest::Approx(full[n - 1]).epsilon(1e-8));
  CHECK(basis.values[1] == doctest::Approx(full[0]).epsilon(1e-8));
}

TEST_CASE("gapless two-value spectrum falls back to the exact path") {
  // S = c (2P - I) for a random projector P: eigenvalues are exactly +-c, so
  // the iterative path cannot separate anything and the Jacobi fallback must
  // deliver the basis
  Rng rng(97);
  const int n = 100, r = 50;
  Eigen::MatrixXd g(n, r);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < r; ++j) g(i, j) = rng.normal();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  const Eigen::MatrixXd u = qr.householderQ() * Eigen::MatrixXd::Identity(n, r);
  const double c = 3.0;
  Eigen::MatrixXd s =
      c * (2.0 * u * u.transpose() - Eigen::MatrixXd::Identity(n, n));
  s = 0.5 * (s + s.transpose()).eval();
  const EigenBasis basis = top_k_eigen(s, 4);
  for (int j = 0; j < 4; ++j) {
    CHECK(std::abs(std::abs(basis.values[j]) - c) <= 1e-9);
    const double resid =
        (s * basis.vectors.col(j) - basis.values[j] * basis.vectors.col(j)).norm();
    CHECK(resid <= 1e-8 * c);
  }
}

TEST_CASE("zero matrix yields a zero basis without failure") {
  const Eigen::MatrixXd s = Eigen::MatrixXd::Zero(40, 40);
  const EigenBasis basis = top_k_eigen(s, 3);
  CHECK(basis.values.cwiseAbs().maxCoeff() == 0.0);
  const Eigen::MatrixXd q = project(basis, s);
  CHECK(q.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("eigen residual invariant holds on sampled aggregates") {
  Rng rng(23);
  for (int trial = 0; trial < 3; ++trial) {
    const ModelParams mp = helpers::random_params(rng, 3, 2, 2, 80, 0.6, 1.0);
    const Dataset ds = sample_clsbm(mp, 1000 + trial);
    const auto agg = build_S(ds.graph, ds.attrs, sample_weights(mp.L, trial));
    check_basis(agg.S, top_k_eigen(agg.S, 3));
  }
}

TEST_CASE("project with identity basis picks the top rows") {
  Eigen::MatrixXd s = Eigen::Vector3d(5, 4, 3).asDiagonal();
  EigenBasis basis;
  basis.values = Eigen::Vector2d(5, 4);
  basis.vectors = Eigen::MatrixXd::Identity(3, 2);
  const Eigen::MatrixXd q = project(basis, s);
  CHECK(q.rows() == 2);
  CHECK(q(0, 0) == doctest::Approx(5));
  CHECK(q(1, 1) == doctest::Approx(4));
  CHECK(q(0, 1) == doctest::Approx(0));
}

TEST_CASE("projection is an isometry on the rank-K part") {
  Rng rng(29);
  const Eigen::MatrixXd s = helpers::random_symmetric(rng, 6);
  const int k = 2;
  const EigenBasis basis = top_k_eigen(s, k);
  const Eigen::MatrixXd q = project(basis, s);
  const Eigen::MatrixXd sk = best_rank_k(s, k);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) {
      const double lhs = (q.col(i) - q.col(j)).norm();
      const double rhs = (sk.col(i) - sk.col(j)).norm();
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
    }
}

TEST_CASE("best rank-n reproduces the matrix") {
  Rng rng(37);
  const Eigen::MatrixXd s = helpers::random_symmetric(rng, 7);
  const Eigen::MatrixXd sk = best_rank_k(s, 7);
  CHECK((sk - s).cwiseAbs().maxCoeff() <= 1e-9 * op_norm(s));
}

TEST_CASE("best rank-1 of diag(3,2,1)") {
  Eigen::MatrixXd s = Eigen::Vector3d(3, 2, 1).asDiagonal();
  const Eigen::MatrixXd sk = best_rank_k(s, 1);
  CHECK(sk(0, 0) == doctest::Approx(3.0));
  CHECK(sk(1, 1) == doctest::Approx(0.0));
  CHECK(sk(2, 2) == doctest::Approx(0.0));
}

TEST_CASE("rank-K truncation dominates random rank-K candidates") {
  Rng rng(41);
  const Eigen::MatrixXd s = helpers::random_symmetric(rng, 7);
  const int k = 2;
  const double err = (s - best_rank_k(s, k)).norm();
  for (int c = 0; c < 200; ++c) {
    Eigen::MatrixXd b(7, k), w(7, k);
    for (int i = 0; i < 7; ++i)
      for (int j = 0; j < k; ++j) {
        b(i, j) = rng.normal();
        w(i, j) = rng.normal();
      }
    const Eigen::MatrixXd candidate = b * w.transpose();
    CHECK(err <= (s - candidate).norm() + 1e-12);
  }
}

TEST_CASE("well-separated clouds are recovered perfectly") {
  Rng rng(43);
  const int n = 60;
  Eigen::MatrixXd pts(2, n);
  for (int i = 0; i < n; ++i) {
    const double cx = (i % 2 == 0) ? 0.0 : 10.0;
    pts(0, i) = cx + 0.1 * rng.normal();
    pts(1, i) = 0.1 * rng.normal();
  }
  const KMeansResult res = kmeans(pts, 2, 5, 99);
  CHECK(res.objective < n * 0.01 * 2);
  const int first = res.labels[0];
  for (int i = 0; i < n; ++i)
    CHECK(res.labels[i] == ((i % 2 == 0) ? first : 1 - first));
}

TEST_CASE("n distinct points with K=n clusters reach objective zero") {
  Eigen::MatrixXd pts(1, 4);
  pts << 0, 1, 2, 3;
  const KMeansResult res = kmeans(pts, 4, 3, 7);
  CHECK(res.objective == doctest::Approx(0.0));
  std::vector<int> sorted = res.labels;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == std::vector<int>({0, 1, 2, 3}));
}

TEST_CASE("k-means matches the exhaustive optimum on a planted instance") {
  Rng rng(47);
  const int n = 9;
  Eigen::MatrixXd pts(2, n);
  for (int i = 0; i < n; ++i) {
    pts(0, i) = (i % 3) * 4.0 + 0.2 * rng.normal();
    pts(1, i) = (i % 3 == 2 ? 3.0 : 0.0) + 0.2 * rng.normal();
  }
  const KMeansResult lloyd = kmeans(pts, 3, 10, 17);
  const KMeansResult global = kmeans_exhaustive(pts, 3);
  CHECK(lloyd.objective == doctest::Approx(global.objective).epsilon(1e-9));
}

TEST_CASE("k-means objective recomputes to the reported value") {
  Rng rng(53);
  Eigen::MatrixXd pts(3, 20);
  for (int i = 0; i < 20; ++i)
    for (int r = 0; r < 3; ++r) pts(r, i) = rng.normal();
  const KMeansResult res = kmeans(pts, 4, 6, 23);
  double recomputed = 0.0;
  for (int i = 0; i < 20; ++i)
    recomputed += (pts.col(i) - res.centers.col(res.labels[i])).squaredNorm();
  CHECK(res.objective == doctest::Approx(recomputed).epsilon(1e-9));
  for (int label : res.labels) {
    CHECK(label >= 0);
    CHECK(label < 4);
  }
}

TEST_CASE("Lloyd objective never increases across iterations") {
  Rng rng(59);
  Eigen::MatrixXd pts(2, 40);
  for (int i = 0; i < 40; ++i)
    for (int r = 0; r < 2; ++r) pts(r, i) = rng.normal();
  std::vector<double> trace;
  kmeans(pts, 3, 1, 31, 300, &trace);
  REQUIRE(trace.size() >= 2);
  for (size_t t = 1; t < trace.size(); ++t)
    CHECK(trace[t] <= trace[t - 1] + 1e-9 * std::max(1.0, trace[t - 1]));
}

TEST_CASE("top_k_eigen is deterministic for a given matrix") {
  Rng rng(83);
  for (int n : {20, 100}) {
    const Eigen::MatrixXd s = helpers::random_symmetric(rng, n);
    const EigenBasis a = top_k_eigen(s, 3);
    const EigenBasis b = top_k_eigen(s, 3);
    CHECK((a.values - b.values).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.vectors - b.vectors).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("k-means terminates on degenerate duplicate-heavy inputs") {
  // near-duplicate point masses with K close to n force empty-cluster repair
  Rng rng(89);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 6;
    Eigen::MatrixXd pts(1, n);
    for (int i = 0; i < n; ++i)
      pts(0, i) = static_cast<double>(rng.uniform_int(2)) +
                  (rng.uniform() < 0.2 ? 0.3 * rng.normal() : 0.0);
    const KMeansResult res = kmeans(pts, 4, 2, trial);
    CHECK(res.labels.size() == n);
    for (int label : res.labels) {
      CHECK(label >= 0);
      CHECK(label < 4);
    }
    double recomputed = 0.0;
    for (int i = 0; i < n; ++i)
      recomputed += (pts.col(i) - res.centers.col(res.labels[i])).squaredNorm();
    CHECK(res.objective == doctest::Approx(recomputed).epsilon(1e-9));
  }
}

TEST_CASE("exhaustive k-means handles duplicates and the trivial case") {
  Eigen::MatrixXd dup(2, 5);
  dup << 1, 1, 1, 1, 1, 2, 2, 2, 2, 2;
  CHECK(kmeans_exhaustive(dup, 2).objective == doctest::Approx(0.0));
  Eigen::MatrixXd single(2, 1);
  single << 3, 4;
  CHECK(kmeans_exhaustive(single, 1).objective == doctest::Approx(0.0));
}

TEST_CASE("exhaustive k-means rejects oversized instances") {
  const Eigen::MatrixXd pts = Eigen::MatrixXd::Zero(1, 40);
  CHECK_THROWS_AS(kmeans_exhaustive(pts, 3), ValidationError);
}

TEST_CASE("exhaustive and restarted k-means agree on a 6-point instance") {
  Rng rng(61);
  Eigen::MatrixXd pts(2, 6);
  for (int i = 0; i < 6; ++i) {
    pts(0, i) = (i < 3) ? 0.0 + 0.3 * rng.normal() : 6.0 + 0.3 * rng.normal();
    pts(1, i) = 0.3 * rng.normal();
  }
  const KMeansResult a = kmeans_exhaustive(pts, 2);
  const KMeansResult b = kmeans(pts, 2, 10, 3);
  CHECK(a.objective == doctest::Approx(b.objective).epsilon(1e-9));
}

TEST_CASE("detect with K=1 puts everything in one community") {
  const ModelParams mp = helpers::two_block(30, 0.4, 0.1, 2.0);
  const Dataset ds = sample_clsbm(mp, 5);
  const auto est = detect(ds.graph, ds.attrs, 1, {});
  for (int label : est) CHECK(label == 0);
}

TEST_CASE("strong-signal instances are recovered with low error") {
  // consistent with the K/(n SNR) polynomial rate at this scale
  const ModelParams mp = helpers::two_block(400, 0.5, 0.05, 4.0, 2);
  int good = 0;
  for (int rep = 0; rep < 10; ++rep) {
    const Dataset ds = sample_clsbm(mp, derive_seed(99, 0, rep));
    DetectOptions opts;
    opts.seed = derive_seed(99, 1, rep);
    const auto est = detect(ds.graph, ds.attrs, 2, opts);
    const auto mis = misclassified_count(ds.sigma, est, 2);
    if (mis.rate <= 0.02) ++good;
  }
  CHECK(good >= 9);
}

TEST_CASE("zero-signal input still yields a legal assignment") {
  const ModelParams mp = helpers::two_block(50, 0.2, 0.2, 0.0);
  const Dataset ds = sample_clsbm(mp, 8);
  const auto est = detect(ds.graph, ds.attrs, 2, {});
  CHECK(est.size() == 50);
  for (int label : est) {
    CHECK(label >= 0);
    CHECK(label < 2);
  }
}

TEST_CASE("detect is equivariant under node relabeling") {
  // well-separated instance, so both runs land in the global optimum
  const int n = 120;
  const ModelParams mp = helpers::two_block(n, 0.6, 0.05, 4.0, 2);
  const Dataset ds = sample_clsbm(mp, 2718);

  std::vector<int> perm(n);
  Rng rng(65);
  for (int i = 0; i < n; ++i) perm[i] = i;
  for (int i = n - 1; i > 0; --i)
    std::swap(perm[i], perm[static_cast<int>(rng.uniform_int(i + 1))]);

  LabeledGraph pg;
  pg.L = ds.graph.L;
  pg.labels.resize(n, n);
  Eigen::MatrixXd pattrs(mp.d, n);
  for (int i = 0; i < n; ++i) {
    pattrs.col(perm[i]) = ds.attrs.col(i);
    for (int j = 0; j < n; ++j) pg.labels(perm[i], perm[j]) = ds.graph.labels(i, j);
  }

  DetectOptions opts;
  opts.seed = 31337;
  const auto base = detect(ds.graph, ds.attrs, 2, opts);
  const auto permuted = detect(pg, pattrs, 2, opts);
  std::vector<int> unpermuted(n);
  for (int i = 0; i < n; ++i) unpermuted[i] = permuted[perm[i]];
  CHECK(helpers::canonical_partition(unpermuted) ==
        helpers::canonical_partition(base));
}

TEST_CASE("rank-K k-means equivalence on small instances") {
  // exhaustive clustering of the projected columns and of the rank-K
  // approximation columns induce the same partition
  Rng rng(71);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 8;
    const Eigen::MatrixXd s = helpers::random_symmetric(rng, n);
    const EigenBasis basis = top_k_eigen(s, 2);
    const Eigen::MatrixXd q = project(basis, s);
    const Eigen::MatrixXd sk = best_rank_k(s, 2);
    const auto part_q = kmeans_exhaustive(q, 2).labels;
    const auto part_sk = kmeans_exhaustive(sk, 2).labels;
    CHECK(helpers::canonical_partition(part_q) ==
          helpers::canonical_partition(part_sk));
  }
}

TEST_CASE("invalid inputs are rejected") {
  Eigen::MatrixXd bad(2, 3);
  bad.setZero();
  CHECK_THROWS_AS(top_k_eigen(bad, 1), ValidationError);
  Eigen::MatrixXd asym(3, 3);
  asym << 0, 1, 0, 0, 0, 0, 0, 0, 0;
  CHECK_THROWS_AS(top_k_eigen(asym, 1), ValidationError);
  const Eigen::MatrixXd ok = Eigen::MatrixXd::Identity(3, 3);
  CHECK_THROWS_AS(top_k_eigen(ok, 0), ValidationError);
  CHECK_THROWS_AS(top_k_eigen(ok, 4), ValidationError);
  CHECK_THROWS_AS(kmeans(Eigen::MatrixXd::Zero(2, 3), 4, 1, 0), ValidationError);
}

}  // TEST_SUITE
