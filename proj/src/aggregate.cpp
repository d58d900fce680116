#include "aggregate.hpp"

#include "rng.hpp"

namespace clsbm {

Eigen::VectorXd sample_weights(int L, std::uint64_t seed) {
  if (L < 1) throw ValidationError("L must be at least 1");
  Rng rng(seed);
  Eigen::VectorXd w(L);
  for (int l = 0; l < L; ++l) w[l] = rng.uniform();
  return w;
}

AggregatedMatrix build_S(const LabeledGraph &graph, const Eigen::MatrixXd &attrs,
                         const Eigen::VectorXd &weights) {
  const int n = graph.n();
  if (graph.labels.cols() != n)
    throw ValidationError("graph label matrix must be square");
  if (attrs.cols() != n)
    throw ValidationError("attribute matrix has " + std::to_string(attrs.cols()) +
                          " columns, expected n=" + std::to_string(n));

  AggregatedMatrix out;
  out.weights = weights;
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const int l = graph.labels(i, j);
      if (l == 0) continue;
      if (l < 0 || l > weights.size())
        throw ValidationError("graph label " + std::to_string(l) +
                              " exceeds weight vector length " +
                              std::to_string(weights.size()));
      s(i, j) = weights[l - 1];
      s(j, i) = weights[l - 1];
    }
  s.selfadjointView<Eigen::Lower>().rankUpdate(attrs.transpose(),
                                               1.0 / static_cast<double>(n));
  out.S = s.selfadjointView<Eigen::Lower>();
  return out;
}

Eigen::MatrixXd expected_S(const ModelParams &params, const CommunityAssignment &sigma,
                           const Eigen::VectorXd &weights) {
  const int n = params.n;
  if (static_cast<int>(sigma.size()) != n)
    throw ValidationError("sigma length does not match n");
  if (weights.size() != params.L)
    throw ValidationError("weights length does not match L");

  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(params.K, params.K);
  for (int l = 1; l <= params.L; ++l) g += weights[l - 1] * params.P[l];
  g += (params.mu.transpose() * params.mu) / static_cast<double>(n);

  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = g(sigma[i], sigma[j]);
    m(i, i) = (params.mu.col(sigma[i]).squaredNorm() + params.d) /
              static_cast<double>(n);
  }
  return m;
}

}  // namespace clsbm
