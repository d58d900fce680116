#pragma once

#include <Eigen/Core>
#include <vector>

#include "model.hpp"
#include "rng.hpp"

namespace helpers {

// Symmetric two-community instance: one nonzero label with within-probability
// p and between-probability q, means +/- (sep/2) e_1.
inline clsbm::ModelParams two_block(int n, double p, double q, double mu_sep,
                                    int d = 2) {
  clsbm::ModelParams mp;
  mp.n = n;
  mp.K = 2;
  mp.L = 1;
  mp.d = d;
  mp.alpha = Eigen::VectorXd::Constant(2, 0.5);
  Eigen::MatrixXd p1(2, 2);
  p1 << p, q, q, p;
  mp.P = {Eigen::MatrixXd::Ones(2, 2) - p1, p1};
  mp.mu = Eigen::MatrixXd::Zero(d, 2);
  mp.mu(0, 0) = mu_sep / 2.0;
  mp.mu(0, 1) = -mu_sep / 2.0;
  return clsbm::validate_params(mp);
}

// Random valid parameters. Nonzero labels carry at most pbar_cap each; the
// remaining mass goes to label 0.
inline clsbm::ModelParams random_params(clsbm::Rng &rng, int K, int L, int d,
                                        int n, double pbar_cap,
                                        double mu_scale) {
  clsbm::ModelParams mp;
  mp.n = n;
  mp.K = K;
  mp.L = L;
  mp.d = d;
  mp.alpha.resize(K);
  for (int k = 0; k < K; ++k) mp.alpha[k] = 0.5 + rng.uniform();
  mp.alpha /= mp.alpha.sum();

  mp.P.assign(L + 1, Eigen::MatrixXd::Zero(K, K));
  for (int l = 1; l <= L; ++l)
    for (int i = 0; i < K; ++i)
      for (int j = i; j < K; ++j) {
        const double v = (0.2 + 0.8 * rng.uniform()) * pbar_cap / L;
        mp.P[l](i, j) = v;
        mp.P[l](j, i) = v;
      }
  for (int i = 0; i < K; ++i)
    for (int j = 0; j < K; ++j) {
      double s = 0.0;
      for (int l = 1; l <= L; ++l) s += mp.P[l](i, j);
      mp.P[0](i, j) = 1.0 - s;
    }

  mp.mu.resize(d, K);
  for (int k = 0; k < K; ++k)
    for (int r = 0; r < d; ++r) mp.mu(r, k) = mu_scale * rng.normal();
  return clsbm::validate_params(mp);
}

inline Eigen::MatrixXd random_symmetric(clsbm::Rng &rng, int n, double scale = 1.0) {
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const double v = scale * rng.normal();
      a(i, j) = v;
      a(j, i) = v;
    }
  return a;
}

// Canonical form of a partition: labels renumbered by first occurrence, so two
// assignments compare equal iff they induce the same partition.
inline std::vector<int> canonical_partition(const std::vector<int> &labels) {
  std::vector<int> map_to(labels.size(), -1);
  std::vector<int> out(labels.size());
  int next = 0;
  for (size_t i = 0; i < labels.size(); ++i) {
    if (map_to[labels[i]] < 0) map_to[labels[i]] = next++;
    out[i] = map_to[labels[i]];
  }
  return out;
}

}  // namespace helpers
