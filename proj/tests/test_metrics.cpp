#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <vector>

#include "helpers.hpp"
#include "metrics.hpp"
#include "rng.hpp"

using namespace clsbm;

namespace {

// Direct brute-force oracle: smallest disagreement over all K! relabelings,
// computed on the raw label vectors without the confusion-matrix reduction.
int brute_force_count(const CommunityAssignment &truth,
                      const CommunityAssignment &est, int k) {
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  int best = static_cast<int>(truth.size()) + 1;
  do {
    int mism = 0;
    for (size_t i = 0; i < truth.size(); ++i)
      if (perm[est[i]] != truth[i]) ++mism;
    best = std::min(best, mism);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

CommunityAssignment random_labels(Rng &rng, int n, int k) {
  CommunityAssignment v(n);
  for (int i = 0; i < n; ++i) v[i] = static_cast<int>(rng.uniform_int(k));
  return v;
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("confusion of a perfect estimate is diagonal") {
  const CommunityAssignment truth = {0, 0, 1, 1, 1};
  const auto c = confusion_matrix(truth, truth, 2);
  CHECK(c(0, 0) == 2);
  CHECK(c(1, 1) == 3);
  CHECK(c(0, 1) == 0);
  CHECK(c(1, 0) == 0);
}

TEST_CASE("confusion of a full swap is anti-diagonal") {
  const CommunityAssignment truth = {0, 0, 1, 1};
  const CommunityAssignment est = {1, 1, 0, 0};
  const auto c = confusion_matrix(truth, est, 2);
  CHECK(c(0, 0) == 0);
  CHECK(c(0, 1) == 2);
  CHECK(c(1, 0) == 2);
  CHECK(c(1, 1) == 0);
}

TEST_CASE("confusion row sums equal true community sizes") {
  Rng rng(2);
  const int n = 100, k = 4;
  const auto truth = random_labels(rng, n, k);
  const auto est = random_labels(rng, n, k);
  const auto c = confusion_matrix(truth, est, k);
  std::vector<int> sizes(k, 0);
  for (int v : truth) ++sizes[v];
  for (int a = 0; a < k; ++a) {
    long long row = 0;
    for (int b = 0; b < k; ++b) row += c(a, b);
    CHECK(row == sizes[a]);
  }
  CHECK(c.sum() == n);
}

TEST_CASE("perfect estimate scores zero with the identity permutation") {
  const CommunityAssignment truth = {0, 1, 2, 0, 1, 2};
  const auto res = misclassified_count(truth, truth, 3);
  CHECK(res.count == 0);
  CHECK(res.rate == doctest::Approx(0.0));
  CHECK(res.best_perm == std::vector<int>({0, 1, 2}));
}

TEST_CASE("a global label swap is absorbed by the permutation") {
  const CommunityAssignment truth = {0, 0, 1, 1};
  const CommunityAssignment est = {1, 1, 0, 0};
  CHECK(misclassified_count(truth, est, 2).count == 0);
}

TEST_CASE("single disagreement example") {
  const CommunityAssignment truth = {0, 0, 1, 1};
  const CommunityAssignment est = {0, 1, 1, 1};
  const auto res = misclassified_count(truth, est, 2);
  CHECK(res.count == 1);  // identity gives 1, the swap gives 3
  CHECK(res.best_perm == std::vector<int>({0, 1}));
  CHECK(res.rate == doctest::Approx(0.25));
}

TEST_CASE("count matches the brute-force oracle on random pairs") {
  Rng rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    const int k = 2 + static_cast<int>(rng.uniform_int(5));
    const int n = k + static_cast<int>(rng.uniform_int(40));
    const auto truth = random_labels(rng, n, k);
    const auto est = random_labels(rng, n, k);
    const auto res = misclassified_count(truth, est, k);
    CHECK(res.count == brute_force_count(truth, est, k));
    // invariant: count = n - matched mass selected by best_perm
    long long matched = 0;
    for (int b = 0; b < k; ++b) matched += res.confusion(res.best_perm[b], b);
    CHECK(res.count == n - matched);
  }
}

TEST_CASE("exhaustive and assignment-solver routes agree") {
  Rng rng(101);
  for (int trial = 0; trial < 60; ++trial) {
    const int k = 2 + static_cast<int>(rng.uniform_int(5));
    const int n = k + static_cast<int>(rng.uniform_int(60));
    const auto truth = random_labels(rng, n, k);
    const auto est = random_labels(rng, n, k);
    const auto c = confusion_matrix(truth, est, k);
    const auto [pe, me] = best_permutation_exhaustive(c);
    const auto [pa, ma] = best_permutation_assignment(c);
    CHECK(me == ma);
  }
}

TEST_CASE("count is invariant under relabeling the estimate") {
  Rng rng(103);
  const int k = 4, n = 50;
  const auto truth = random_labels(rng, n, k);
  const auto est = random_labels(rng, n, k);
  const int base = misclassified_count(truth, est, k).count;
  std::vector<int> perm = {2, 0, 3, 1};
  CommunityAssignment relabeled(n);
  for (int i = 0; i < n; ++i) relabeled[i] = perm[est[i]];
  CHECK(misclassified_count(truth, relabeled, k).count == base);
}

TEST_CASE("partition distance is symmetric on balanced instances") {
  Rng rng(107);
  const int k = 3, n = 60;
  CommunityAssignment truth(n), est(n);
  for (int i = 0; i < n; ++i) truth[i] = i % k;  // equal sizes
  // estimate keeps the sizes balanced too: shuffle within a size-preserving map
  std::vector<int> shuffled(n);
  std::iota(shuffled.begin(), shuffled.end(), 0);
  for (int i = n - 1; i > 0; --i)
    std::swap(shuffled[i], shuffled[static_cast<int>(rng.uniform_int(i + 1))]);
  for (int i = 0; i < n; ++i) est[i] = shuffled[i] % k;
  CHECK(misclassified_count(truth, est, k).count ==
        misclassified_count(est, truth, k).count);
}

TEST_CASE("estimates using fewer than K labels are legal") {
  const CommunityAssignment truth = {0, 1, 2, 0, 1, 2};
  const CommunityAssignment est = {0, 0, 1, 0, 0, 1};
  const auto res = misclassified_count(truth, est, 3);
  CHECK(res.count >= 0);
  long long col2 = 0;
  for (int a = 0; a < 3; ++a) col2 += res.confusion(a, 2);
  CHECK(col2 == 0);  // unused estimate label leaves a zero column
}

TEST_CASE("length and range errors are reported") {
  CHECK_THROWS_AS(misclassified_count({0, 1}, {0}, 2), ValidationError);
  CHECK_THROWS_AS(misclassified_count({0, 2}, {0, 1}, 2), ValidationError);
}

TEST_CASE("single community scoring is trivial") {
  const CommunityAssignment truth(5, 0);
  const auto res = misclassified_count(truth, truth, 1);
  CHECK(res.count == 0);
  CHECK(res.best_perm == std::vector<int>({0}));
}

TEST_CASE("assignment solver handles K above the exhaustive threshold") {
  Rng rng(113);
  const int k = 15, n = 300;
  const auto truth = random_labels(rng, n, k);
  CommunityAssignment est = truth;
  // permute labels and corrupt a few nodes
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  for (int i = k - 1; i > 0; --i)
    std::swap(perm[i], perm[static_cast<int>(rng.uniform_int(i + 1))]);
  for (int i = 0; i < n; ++i) est[i] = perm[est[i]];
  for (int c = 0; c < 7; ++c) est[static_cast<int>(rng.uniform_int(n))] = 0;
  const auto res = misclassified_count(truth, est, k);
  CHECK(res.count <= 7);
}

}  // TEST_SUITE
