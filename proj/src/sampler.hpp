#pragma once

#include <Eigen/Core>
#include <cstdint>

#include "model.hpp"

namespace clsbm {

// One labeled graph stored as a single n x n label matrix: entry (i,j) is the
// unique l with A_l(i,j)=1. Symmetric, zero diagonal. Loss-free because the
// edge law is one-hot over labels {0,...,L}.
struct LabeledGraph {
  Eigen::MatrixXi labels;
  int L = 0;

  int n() const { return static_cast<int>(labels.rows()); }

  // Reconstructs the dense 0/1 indicator matrix A_l on demand.
  Eigen::MatrixXd adjacency(int l) const;
};

// One sampled instance. attrs is d x n (column i = node i's attribute vector).
struct Dataset {
  CommunityAssignment sigma;
  LabeledGraph graph;
  Eigen::MatrixXd attrs;
  std::uint64_t seed = 0;
};

// n i.i.d. categorical draws from alpha. Deterministic given seed.
CommunityAssignment sample_assignment(const ModelParams &params, std::uint64_t seed);

// One categorical draw over {0,...,L} per unordered pair i<j with weights
// P(sigma_i, sigma_j, .), mirrored; zero diagonal. Deterministic given seed.
LabeledGraph sample_graph(const ModelParams &params, const CommunityAssignment &sigma,
                          std::uint64_t seed);

// Column i = mu_{sigma(i)} + standard normal noise. Deterministic given seed.
Eigen::MatrixXd sample_attributes(const ModelParams &params,
                                  const CommunityAssignment &sigma,
                                  std::uint64_t seed);

// Composes the three samplers with domain-separated sub-streams derived from
// the master seed, so graph and attributes are independent given sigma.
Dataset sample_clsbm(const ModelParams &params, std::uint64_t seed);

}  // namespace clsbm
