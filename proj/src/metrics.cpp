#include "metrics.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace clsbm {

Eigen::MatrixXi confusion_matrix(const CommunityAssignment &truth,
                                 const CommunityAssignment &est, int K) {
  if (truth.size() != est.size())
    throw ValidationError("assignment length mismatch: " +
                          std::to_string(truth.size()) + " vs " +
                          std::to_string(est.size()));
  Eigen::MatrixXi c = Eigen::MatrixXi::Zero(K, K);
  for (size_t i = 0; i < truth.size(); ++i) {
    const int a = truth[i], b = est[i];
    if (a < 0 || a >= K || b < 0 || b >= K)
      throw ValidationError("community label out of range at node " +
                            std::to_string(i + 1));
    ++c(a, b);
  }
  return c;
}

std::pair<std::vector<int>, long long> best_permutation_exhaustive(
    const Eigen::MatrixXi &confusion) {
  const int k = static_cast<int>(confusion.rows());
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> best = perm;
  long long best_mass = -1;
  do {
    long long mass = 0;
    for (int b = 0; b < k; ++b) mass += confusion(perm[b], b);
    if (mass > best_mass) {  // strict: lexicographically smallest wins ties
      best_mass = mass;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return {best, best_mass};
}

namespace {

// Hungarian algorithm with potentials, O(K^3), minimizing cost.
// Returns match[row] = column.
std::vector<int> hungarian_min(const std::vector<std::vector<long long>> &cost) {
  const int n = static_cast<int>(cost.size());
  const long long inf = std::numeric_limits<long long>::max() / 4;
  std::vector<long long> u(n + 1, 0), v(n + 1, 0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<long long> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      long long delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j)
        if (!used[j]) {
          const long long cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
          if (cur < minv[j]) {
            minv[j] = cur;
            way[j] = j0;
          }
          if (minv[j] < delta) {
            delta = minv[j];
            j1 = j;
          }
        }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> match(n, -1);
  for (int j = 1; j <= n; ++j)
    if (p[j] != 0) match[p[j] - 1] = j - 1;
  return match;
}

}  // namespace

std::pair<std::vector<int>, long long> best_permutation_assignment(
    const Eigen::MatrixXi &confusion) {
  const int k = static_cast<int>(confusion.rows());
  const long long max_entry = confusion.maxCoeff();
  // rows = estimate labels, columns = truth labels, maximize matched mass
  std::vector<std::vector<long long>> cost(k, std::vector<long long>(k));
  for (int b = 0; b < k; ++b)
    for (int a = 0; a < k; ++a) cost[b][a] = max_entry - confusion(a, b);
  const std::vector<int> perm = hungarian_min(cost);
  long long mass = 0;
  for (int b = 0; b < k; ++b) mass += confusion(perm[b], b);
  return {perm, mass};
}

MisclassificationResult misclassified_count(const CommunityAssignment &truth,
                                            const CommunityAssignment &est, int K) {
  MisclassificationResult res;
  res.confusion = confusion_matrix(truth, est, K);
  const auto [perm, mass] = K <= 12 ? best_permutation_exhaustive(res.confusion)
                                    : best_permutation_assignment(res.confusion);
  res.best_perm = perm;
  res.count = static_cast<int>(static_cast<long long>(truth.size()) - mass);
  res.rate = truth.empty() ? 0.0 : static_cast<double>(res.count) / truth.size();
  return res;
}

}  // namespace clsbm
