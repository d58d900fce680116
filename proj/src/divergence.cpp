#include "divergence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace clsbm {

double gaussian_kl(const Eigen::VectorXd &mu1, const Eigen::VectorXd &mu2) {
  if (mu1.size() != mu2.size())
    throw ValidationError("gaussian_kl: mean dimension mismatch");
  return 0.5 * (mu1 - mu2).squaredNorm();
}

namespace {

// a^{1-t} b^t with the continuity convention: zero base with positive
// exponent gives 0, exponent 0 gives the other factor. Equal bases short-
// circuit so that indistinguishable entries contribute exactly zero.
double geometric_term(double a, double b, double t) {
  if (a == b) return a;
  if (t <= 0.0) return a;
  if (t >= 1.0) return b;
  if (a == 0.0 || b == 0.0) return 0.0;
  return std::pow(a, 1.0 - t) * std::pow(b, t);
}

double topo_part(const ModelParams &p, int k1, int k2, double t) {
  double total = 0.0;
  for (int k = 0; k < p.K; ++k) {
    double s = 0.0;
    for (int l = 1; l <= p.L; ++l) {
      const double a = p.P[l](k, k1);
      const double b = p.P[l](k, k2);
      const double g = geometric_term(a, b, t);
      // factored form of (1-t)a + tb - g: exact cancellation at the
      // endpoints and for equal entries
      s += (1.0 - t) * (a - g) + t * (b - g);
    }
    total += p.alpha[k] * s;
  }
  return total;
}

// Maximizes a concave scalar function on [0,1]: best point of a 1001-point
// grid refined by golden section to 1e-10 in t.
template <typename F>
double maximize_concave(const F &f, double *t_out) {
  constexpr int kGrid = 1000;
  double best_t = 0.0, best_v = f(0.0);
  for (int i = 1; i <= kGrid; ++i) {
    const double t = static_cast<double>(i) / kGrid;
    const double v = f(t);
    if (v > best_v) {
      best_v = v;
      best_t = t;
    }
  }
  double lo = std::max(0.0, best_t - 1.0 / kGrid);
  double hi = std::min(1.0, best_t + 1.0 / kGrid);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  while (hi - lo > 1e-10) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    }
  }
  const double t = 0.5 * (lo + hi);
  const double v = f(t);
  *t_out = v >= best_v ? t : best_t;
  return std::max(v, best_v);
}

}  // namespace

double pair_objective(const ModelParams &params, int k1, int k2, double t, int n) {
  if (k1 < 0 || k1 >= params.K || k2 < 0 || k2 >= params.K || k1 == k2)
    throw ValidationError("pair_objective: invalid community pair");
  const double dmu2 = (params.mu.col(k1) - params.mu.col(k2)).squaredNorm();
  return topo_part(params, k1, k2, t) + t * (1.0 - t) / (2.0 * n) * dmu2;
}

DivergenceReport divergence_closed_form(const ModelParams &params, int n) {
  DivergenceReport best;
  best.D = std::numeric_limits<double>::infinity();
  best.method = DivergenceMethod::closed_form;
  for (int k1 = 0; k1 < params.K; ++k1)
    for (int k2 = k1 + 1; k2 < params.K; ++k2) {
      const double dmu2 = (params.mu.col(k1) - params.mu.col(k2)).squaredNorm();
      auto f = [&](double t) {
        return topo_part(params, k1, k2, t) + t * (1.0 - t) / (2.0 * n) * dmu2;
      };
      double t_star = 0.0;
      const double value = maximize_concave(f, &t_star);
      if (value < best.D) {
        best.k1 = k1;
        best.k2 = k2;
        best.t_star = t_star;
        best.DX_over_n = t_star * (1.0 - t_star) / (2.0 * n) * dmu2;
        best.DA = topo_part(params, k1, k2, t_star);
        best.D = best.DA + best.DX_over_n;
      }
    }
  return best;
}

namespace {

double categorical_kl(const Eigen::VectorXd &q, const Eigen::VectorXd &p) {
  double s = 0.0;
  for (int l = 0; l < q.size(); ++l)
    if (q[l] > 0.0) s += q[l] * std::log(q[l] / p[l]);
  return s;
}

}  // namespace

DivergenceReport divergence_oracle_pair(const ModelParams &params, int k1, int k2,
                                        int n) {
  if (k1 < 0 || k1 >= params.K || k2 < 0 || k2 >= params.K || k1 == k2)
    throw ValidationError("divergence oracle: invalid community pair");
  // normalize so the reported t measures the mix from k1 toward k2, k1 < k2
  if (k1 > k2) std::swap(k1, k2);
  for (int l = 0; l <= params.L; ++l)
    for (int k = 0; k < params.K; ++k)
      if (!(params.P[l](k, k1) > 0.0) || !(params.P[l](k, k2) > 0.0))
        throw ValidationError(
            "numeric oracle requires strictly positive label probabilities in "
            "both target columns (zero at l=" +
            std::to_string(l) + ", k=" + std::to_string(k + 1) + ")");

  const int labels = params.L + 1;

  // Both sides of the equalization at mixing parameter t: the alpha-weighted
  // categorical KL sums of the geometric-mixture q_A against columns k1/k2
  // plus the Gaussian KL of q_X = N((1-t) mu_k1 + t mu_k2, I) scaled by 1/n.
  struct Sides {
    double a1, a2;  // categorical sums
    double x1, x2;  // Gaussian parts, already divided by n
  };
  auto eval = [&](double t) {
    Sides s{0.0, 0.0, 0.0, 0.0};
    Eigen::VectorXd q(labels), p1(labels), p2(labels);
    for (int k = 0; k < params.K; ++k) {
      for (int l = 0; l < labels; ++l) {
        p1[l] = params.P[l](k, k1);
        p2[l] = params.P[l](k, k2);
        q[l] = geometric_term(p1[l], p2[l], t);
      }
      q /= q.sum();
      s.a1 += params.alpha[k] * categorical_kl(q, p1);
      s.a2 += params.alpha[k] * categorical_kl(q, p2);
    }
    const Eigen::VectorXd mid =
        (1.0 - t) * params.mu.col(k1) + t * params.mu.col(k2);
    s.x1 = gaussian_kl(mid, params.mu.col(k1)) / n;
    s.x2 = gaussian_kl(mid, params.mu.col(k2)) / n;
    return s;
  };

  double lo = 0.0, hi = 1.0, t = 0.5;
  Sides s = eval(t);
  for (int iter = 0; iter < 200; ++iter) {
    const double gap = (s.a1 + s.x1) - (s.a2 + s.x2);
    if (std::abs(gap) <= 1e-12) break;
    if (gap >= 0.0)
      hi = t;
    else
      lo = t;
    t = 0.5 * (lo + hi);
    s = eval(t);
  }

  DivergenceReport rep;
  rep.method = DivergenceMethod::numeric_oracle;
  rep.k1 = k1;
  rep.k2 = k2;
  rep.t_star = t;
  rep.DA = (1.0 - t) * s.a1 + t * s.a2;
  rep.DX_over_n = (1.0 - t) * s.x1 + t * s.x2;
  rep.D = rep.DA + rep.DX_over_n;
  return rep;
}

DivergenceReport divergence_numeric_oracle(const ModelParams &params, int n) {
  DivergenceReport best;
  bool first = true;
  for (int k1 = 0; k1 < params.K; ++k1)
    for (int k2 = k1 + 1; k2 < params.K; ++k2) {
      DivergenceReport rep = divergence_oracle_pair(params, k1, k2, n);
      if (first || rep.D < best.D) {
        best = rep;
        first = false;
      }
    }
  return best;
}

double ch_divergence_lsbm(const ModelParams &params, int n) {
  ModelParams p = params;
  p.mu.setZero();
  return divergence_closed_form(p, n).D;
}

double snr(const ModelParams &params, int n, BlockVariant variant) {
  const Eigen::MatrixXd block = block_matrix(params, variant);
  double best = std::numeric_limits<double>::infinity();
  for (int k1 = 0; k1 < params.K; ++k1)
    for (int k2 = k1 + 1; k2 < params.K; ++k2) {
      const Eigen::VectorXd dmu = params.mu.col(k1) - params.mu.col(k2);
      Eigen::VectorXd v = block.col(k1) - block.col(k2);
      v += (params.mu.transpose() * dmu) / static_cast<double>(n);
      best = std::min(best, v.squaredNorm());
    }
  return best;
}

BoundCurve bound_curves(const ModelParams &params, int n, double constant_c,
                        BlockVariant variant) {
  if (!(constant_c > 0.0)) throw ValidationError("bound constant must be positive");
  BoundCurve curve;
  const double d = divergence_closed_form(params, n).D;
  curve.snr = snr(params, n, variant);
  const double nn = static_cast<double>(n);
  curve.lower = std::clamp(nn * std::exp(-nn * d), 0.0, nn);
  curve.upper = curve.snr > 0.0
                    ? std::clamp(constant_c * params.K / (nn * curve.snr), 0.0, nn)
                    : nn;
  return curve;
}

}  // namespace clsbm
