#pragma once

#include <Eigen/Core>
#include <cstdint>

#include "sampler.hpp"

namespace clsbm {

// S = sum_l w_l A_l + (1/n) X^T X together with the weights that built it.
struct AggregatedMatrix {
  Eigen::MatrixXd S;
  Eigen::VectorXd weights;  // length L, weight for labels 1..L
};

// L i.i.d. Uniform[0,1] draws, deterministic given seed. Fixed user weights
// can be passed to build_S directly instead.
Eigen::VectorXd sample_weights(int L, std::uint64_t seed);

// S(i,j) = w_{label(i,j)} 1{label>=1} + x_i^T x_j / n. The Gram term is a
// symmetric rank-d update, so S is exactly symmetric and the diagonal equals
// ||x_i||^2 / n.
AggregatedMatrix build_S(const LabeledGraph &graph, const Eigen::MatrixXd &attrs,
                         const Eigen::VectorXd &weights);

// Exact conditional mean of build_S given sigma and w:
// off-diagonal sum_l w_l P(sigma_i, sigma_j, l) + mu_si^T mu_sj / n,
// diagonal (||mu_si||^2 + d) / n.
Eigen::MatrixXd expected_S(const ModelParams &params, const CommunityAssignment &sigma,
                           const Eigen::VectorXd &weights);

}  // namespace clsbm
