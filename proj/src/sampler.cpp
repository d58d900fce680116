#include "sampler.hpp"

#include <vector>

#include "rng.hpp"

namespace clsbm {

Eigen::MatrixXd LabeledGraph::adjacency(int l) const {
  const int nn = n();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(nn, nn);
  for (int i = 0; i < nn; ++i)
    for (int j = 0; j < nn; ++j)
      if (labels(i, j) == l && i != j) a(i, j) = 1.0;
  return a;
}

namespace {

// Cumulative label weights, renormalized so the last entry is exactly 1 and a
// single uniform draw always lands in a bucket.
std::vector<double> cumulative_weights(const ModelParams &params, int a, int b) {
  std::vector<double> cum(params.L + 1);
  double s = 0.0;
  for (int l = 0; l <= params.L; ++l) {
    s += params.P[l](a, b);
    cum[l] = s;
  }
  for (int l = 0; l <= params.L; ++l) cum[l] /= s;
  cum[params.L] = 1.0;
  return cum;
}

int draw_from_cumulative(const std::vector<double> &cum, double u) {
  for (size_t l = 0; l + 1 < cum.size(); ++l)
    if (u < cum[l]) return static_cast<int>(l);
  return static_cast<int>(cum.size()) - 1;
}

}  // namespace

CommunityAssignment sample_assignment(const ModelParams &params, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> cum(params.K);
  double s = 0.0;
  for (int k = 0; k < params.K; ++k) {
    s += params.alpha[k];
    cum[k] = s;
  }
  for (int k = 0; k < params.K; ++k) cum[k] /= s;
  cum[params.K - 1] = 1.0;

  CommunityAssignment sigma(params.n);
  for (int i = 0; i < params.n; ++i)
    sigma[i] = draw_from_cumulative(cum, rng.uniform());
  return sigma;
}

LabeledGraph sample_graph(const ModelParams &params, const CommunityAssignment &sigma,
                          std::uint64_t seed) {
  const int n = params.n;
  if (static_cast<int>(sigma.size()) != n)
    throw ValidationError("sigma length does not match n");
  Rng rng(seed);

  std::vector<std::vector<double>> cum(params.K * params.K);
  for (int a = 0; a < params.K; ++a)
    for (int b = 0; b < params.K; ++b)
      cum[a * params.K + b] = cumulative_weights(params, a, b);

  LabeledGraph g;
  g.L = params.L;
  g.labels = Eigen::MatrixXi::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const auto &c = cum[sigma[i] * params.K + sigma[j]];
      const int l = draw_from_cumulative(c, rng.uniform());
      g.labels(i, j) = l;
      g.labels(j, i) = l;
    }
  return g;
}

Eigen::MatrixXd sample_attributes(const ModelParams &params,
                                  const CommunityAssignment &sigma,
                                  std::uint64_t seed) {
  const int n = params.n;
  if (static_cast<int>(sigma.size()) != n)
    throw ValidationError("sigma length does not match n");
  Rng rng(seed);
  Eigen::MatrixXd x(params.d, n);
  for (int i = 0; i < n; ++i)
    for (int r = 0; r < params.d; ++r)
      x(r, i) = params.mu(r, sigma[i]) + rng.normal();
  return x;
}

Dataset sample_clsbm(const ModelParams &params, std::uint64_t seed) {
  Dataset ds;
  ds.seed = seed;
  ds.sigma = sample_assignment(params, derive_seed(seed, kSeedAssignment, 0));
  ds.graph = sample_graph(params, ds.sigma, derive_seed(seed, kSeedGraph, 0));
  ds.attrs = sample_attributes(params, ds.sigma, derive_seed(seed, kSeedAttributes, 0));
  return ds;
}

}  // namespace clsbm
