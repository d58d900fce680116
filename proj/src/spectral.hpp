#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <vector>

#include "sampler.hpp"

namespace clsbm {

// Top-K eigenpairs of a symmetric matrix, selected by largest |eigenvalue|
// (the selection that matches the best rank-K approximation). Columns of
// vectors are orthonormal, signs fixed so the largest-magnitude coordinate of
// each vector is positive.
struct EigenBasis {
  Eigen::VectorXd values;   // K
  Eigen::MatrixXd vectors;  // n x K
};

EigenBasis top_k_eigen(const Eigen::MatrixXd &S, int K);

// Q = U_K^T S, the K x n coordinates the clustering step runs on.
Eigen::MatrixXd project(const EigenBasis &basis, const Eigen::MatrixXd &S);

// Best rank-K approximation: sum of lambda v v^T over the selected pairs.
Eigen::MatrixXd best_rank_k(const Eigen::MatrixXd &S, int K);

struct KMeansResult {
  CommunityAssignment labels;
  Eigen::MatrixXd centers;  // dim x K
  double objective = 0.0;
};

// Lloyd iterations from distance-weighted seeding, best of `restarts` runs by
// objective. Ties in nearest-center go to the lowest center index; an emptied
// cluster is repaired by splitting off the farthest point of the
// largest-inertia cluster. Deterministic given seed. If objective_trace is
// non-null it receives the per-iteration objective of the winning restart.
KMeansResult kmeans(const Eigen::MatrixXd &points, int K, int restarts,
                    std::uint64_t seed, int max_iters = 300,
                    std::vector<double> *objective_trace = nullptr);

// Global optimum by canonical enumeration of all assignments. Requires
// K^n <= 1e7.
KMeansResult kmeans_exhaustive(const Eigen::MatrixXd &points, int K);

struct DetectOptions {
  std::uint64_t seed = 0;
  int restarts = 25;
  // Overrides the Uniform[0,1] label-weight draw when set; length defines the
  // number of nonzero labels and must cover every label present in the graph.
  std::optional<Eigen::VectorXd> weights;
};

// The full pipeline: aggregate S, top-K eigenvectors, project, k-means.
CommunityAssignment detect(const LabeledGraph &graph, const Eigen::MatrixXd &attrs,
                           int K, const DetectOptions &options);

}  // namespace clsbm
