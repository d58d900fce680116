#pragma once

#include <Eigen/Core>

#include "model.hpp"

namespace clsbm {

enum class DivergenceMethod { closed_form, numeric_oracle };

// The divergence value with its minimizing pair and the split into the
// topological part DA and the attribute part DX/n evaluated at the optimal t.
// Invariant: D == DA + DX_over_n. k1 < k2, 0-based internally.
struct DivergenceReport {
  double D = 0.0;
  int k1 = 0;
  int k2 = 1;
  double t_star = 0.0;
  double DA = 0.0;
  double DX_over_n = 0.0;
  DivergenceMethod method = DivergenceMethod::closed_form;
};

// KL divergence between two unit-covariance Gaussians: ||mu1 - mu2||^2 / 2.
double gaussian_kl(const Eigen::VectorXd &mu1, const Eigen::VectorXd &mu2);

// The closed-form integrand for one ordered pair at mixing parameter t:
//   sum_k alpha_k [ sum_{l>=1} ((1-t)P(k,k1,l) + tP(k,k2,l)
//                               - P(k,k1,l)^{1-t} P(k,k2,l)^t)
//                   + t(1-t)/(2n) ||mu_k1 - mu_k2||^2 ].
// Power convention 0^positive = 0, x^0 = 1 (continuous extension), so sparse
// slices never produce NaN. Vanishes at t = 0 and t = 1.
double pair_objective(const ModelParams &params, int k1, int k2, double t, int n);

// min over pairs of max over t of pair_objective; t maximized on a 1001-point
// grid refined by golden section (the objective is concave in t).
DivergenceReport divergence_closed_form(const ModelParams &params, int n);

// Independent evaluation without the small-pbar approximation: for each t the
// minimizing q_A(k,.) is the normalized geometric mixture of the two target
// columns over ALL labels 0..L and q_X the Gaussian at the interpolated mean;
// t is bisected until the two KL sums (categorical + Gaussian/n against k1
// resp. k2) agree within 1e-12. Requires strictly positive P entries in both
// target columns.
DivergenceReport divergence_oracle_pair(const ModelParams &params, int k1, int k2,
                                        int n);

// Minimum of divergence_oracle_pair over all unordered pairs.
DivergenceReport divergence_numeric_oracle(const ModelParams &params, int n);

// The divergence of the attribute-free model: closed form with mu forced to 0.
double ch_divergence_lsbm(const ModelParams &params, int n);

// min over pairs k1 != k2 of
//   || (P_block)_{.k1} - (P_block)_{.k2} + (mu_k1 - mu_k2)^T mu / n ||^2.
double snr(const ModelParams &params, int n, BlockVariant variant);

// lower = n exp(-n D), upper = c K / (n SNR), both clamped to [0, n].
// SNR = 0 makes the upper bound vacuous (n).
struct BoundCurve {
  double lower = 0.0;
  double upper = 0.0;
  double snr = 0.0;
};

BoundCurve bound_curves(const ModelParams &params, int n, double constant_c,
                        BlockVariant variant = BlockVariant::half_label_mean);

}  // namespace clsbm
