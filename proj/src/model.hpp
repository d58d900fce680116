#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "errors.hpp"

namespace clsbm {

// Community labels, 0-based internally. File formats and the C API use
// 1-based labels.
using CommunityAssignment = std::vector<int>;

// Generative parameters of the model. P is stored as L+1 dense KxK slices,
// slice 0 being the no-edge label. mu's column k is the attribute mean of
// community k.
struct ModelParams {
  int n = 0;
  int K = 0;
  int L = 0;
  int d = 0;
  Eigen::VectorXd alpha;             // K
  std::vector<Eigen::MatrixXd> P;    // L+1 slices of K x K
  Eigen::MatrixXd mu;                // d x K
};

// Tight constants for the ratio/norm assumptions the theory rests on.
// eta1 is +inf (eta1_finite=false) when some P(i,j,l), l>=1, vanishes.
struct AssumptionCertificate {
  double eta1 = 1.0;   // max over i,j,k,l>=1 of P(i,j,l)/P(i,k,l)
  double eta2 = 0.0;   // max_k ||mu_k||_2
  double pbar = 0.0;   // max over i,j,l>=1 of P(i,j,l)
  bool eta1_finite = true;
};

// Two normalizations of the label-aggregated block matrix:
//   half_label_mean: (1/(2L)) * sum_l P(.,.,l) - half the per-label average
//   expectation:     (1/2)    * sum_l P(.,.,l) - mean of sum_l w_l A_l under
//                                                w ~ Uniform[0,1]
// They coincide at L=1.
enum class BlockVariant { half_label_mean, expectation };

// Checks every ModelParams invariant and returns the parameters unchanged.
// Throws ValidationError naming the first violated invariant with indices.
ModelParams validate_params(ModelParams params);

AssumptionCertificate assumption_certificate(const ModelParams &params);

Eigen::MatrixXd block_matrix(const ModelParams &params, BlockVariant variant);

// M = Z (P_block + mu^T mu / n) Z^T for the one-hot assignment matrix Z of
// sigma. Symmetric with rank <= K.
Eigen::MatrixXd population_matrix(const ModelParams &params,
                                  const CommunityAssignment &sigma,
                                  BlockVariant variant);

// JSON document round-trip. Schema: keys "n","K","L","d","alpha","P","mu";
// "P" is an array of L+1 KxK matrices (nested rows or flat row-major),
// "mu" an array of K length-d arrays. parse throws ValidationError.
ModelParams params_from_json_text(const std::string &text);
std::string params_to_json_text(const ModelParams &params);

}  // namespace clsbm
