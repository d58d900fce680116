#pragma once

#include <Eigen/Core>
#include <utility>
#include <vector>

#include "model.hpp"

namespace clsbm {

// Permutation-matched disagreement between a ground truth and an estimate.
// best_perm maps estimate labels to truth labels (0-based internally).
struct MisclassificationResult {
  int count = 0;
  double rate = 0.0;
  std::vector<int> best_perm;
  Eigen::MatrixXi confusion;  // (a,b) = #{i : truth_i = a, est_i = b}
};

Eigen::MatrixXi confusion_matrix(const CommunityAssignment &truth,
                                 const CommunityAssignment &est, int K);

// Exact minimum over all K! relabelings of the estimate. K <= 12 enumerates
// permutations (lexicographically smallest wins ties); larger K solves the
// optimal assignment on the confusion matrix. Both paths are exact.
MisclassificationResult misclassified_count(const CommunityAssignment &truth,
                                            const CommunityAssignment &est, int K);

// The two matching routes, exposed so they can be cross-checked: each returns
// (perm mapping est label -> truth label, matched mass).
std::pair<std::vector<int>, long long> best_permutation_exhaustive(
    const Eigen::MatrixXi &confusion);
std::pair<std::vector<int>, long long> best_permutation_assignment(
    const Eigen::MatrixXi &confusion);

}  // namespace clsbm
