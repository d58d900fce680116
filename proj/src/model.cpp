#include "model.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace clsbm {

namespace {

constexpr double kSimplexTol = 1e-12;

std::string index_pair(int i, int j) {
  std::ostringstream os;
  os << "(i=" << i + 1 << ", j=" << j + 1 << ")";
  return os.str();
}

}  // namespace

ModelParams validate_params(ModelParams params) {
  if (params.n < 1) throw ValidationError("n must be a positive integer");
  if (params.K < 2) throw ValidationError("K must be at least 2");
  if (params.L < 1) throw ValidationError("L must be at least 1");
  if (params.d < 1) throw ValidationError("d must be a positive integer");

  if (params.alpha.size() != params.K)
    throw ValidationError("alpha must have length K");
  double alpha_sum = 0.0;
  for (int k = 0; k < params.K; ++k) {
    if (!(params.alpha[k] > 0.0))
      throw ValidationError("alpha not a probability vector: entry " +
                            std::to_string(k + 1) + " is not strictly positive");
    alpha_sum += params.alpha[k];
  }
  if (std::abs(alpha_sum - 1.0) > kSimplexTol) {
    std::ostringstream os;
    os << "alpha not a probability vector (sum=" << alpha_sum << ")";
    throw ValidationError(os.str());
  }

  if (static_cast<int>(params.P.size()) != params.L + 1)
    throw ValidationError("P must have L+1 label slices");
  for (int l = 0; l <= params.L; ++l) {
    const auto &slice = params.P[l];
    if (slice.rows() != params.K || slice.cols() != params.K)
      throw ValidationError("P slice " + std::to_string(l) + " is not K x K");
    for (int i = 0; i < params.K; ++i)
      for (int j = 0; j < params.K; ++j) {
        const double v = slice(i, j);
        if (!(v >= 0.0 && v <= 1.0)) {
          std::ostringstream os;
          os << "P entry out of [0,1] at " << index_pair(i, j) << ", l=" << l;
          throw ValidationError(os.str());
        }
      }
  }
  for (int i = 0; i < params.K; ++i)
    for (int j = 0; j < params.K; ++j) {
      double s = 0.0;
      for (int l = 0; l <= params.L; ++l) s += params.P[l](i, j);
      if (std::abs(s - 1.0) > kSimplexTol) {
        std::ostringstream os;
        os << "P" << index_pair(i, j) << " label probabilities sum to " << s
           << ", expected 1";
        throw ValidationError(os.str());
      }
    }
  for (int l = 0; l <= params.L; ++l)
    for (int i = 0; i < params.K; ++i)
      for (int j = i + 1; j < params.K; ++j)
        if (params.P[l](i, j) != params.P[l](j, i)) {
          std::ostringstream os;
          os << "P not symmetric in first two indices at " << index_pair(i, j)
             << ", l=" << l;
          throw ValidationError(os.str());
        }

  if (params.mu.rows() != params.d || params.mu.cols() != params.K)
    throw ValidationError("mu must be d x K");
  if (!params.mu.allFinite()) throw ValidationError("mu has non-finite entries");

  return params;
}

AssumptionCertificate assumption_certificate(const ModelParams &params) {
  AssumptionCertificate cert;
  cert.eta2 = 0.0;
  for (int k = 0; k < params.K; ++k)
    cert.eta2 = std::max(cert.eta2, params.mu.col(k).norm());

  cert.pbar = 0.0;
  bool positive = true;
  for (int l = 1; l <= params.L; ++l)
    for (int i = 0; i < params.K; ++i)
      for (int j = 0; j < params.K; ++j) {
        cert.pbar = std::max(cert.pbar, params.P[l](i, j));
        if (!(params.P[l](i, j) > 0.0)) positive = false;
      }

  if (!positive) {
    cert.eta1 = std::numeric_limits<double>::infinity();
    cert.eta1_finite = false;
    return cert;
  }
  cert.eta1 = 1.0;
  for (int l = 1; l <= params.L; ++l)
    for (int i = 0; i < params.K; ++i)
      for (int j = 0; j < params.K; ++j)
        for (int k = 0; k < params.K; ++k)
          cert.eta1 = std::max(cert.eta1, params.P[l](i, j) / params.P[l](i, k));
  cert.eta1_finite = true;
  return cert;
}

Eigen::MatrixXd block_matrix(const ModelParams &params, BlockVariant variant) {
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(params.K, params.K);
  for (int l = 1; l <= params.L; ++l) sum += params.P[l];
  const double scale =
      variant == BlockVariant::half_label_mean ? 1.0 / (2.0 * params.L) : 0.5;
  return scale * sum;
}

Eigen::MatrixXd population_matrix(const ModelParams &params,
                                  const CommunityAssignment &sigma,
                                  BlockVariant variant) {
  const int n = params.n;
  if (static_cast<int>(sigma.size()) != n)
    throw ValidationError("sigma length " + std::to_string(sigma.size()) +
                          " does not match n=" + std::to_string(n));
  Eigen::MatrixXd g = block_matrix(params, variant);
  g += (params.mu.transpose() * params.mu) / static_cast<double>(n);
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = g(sigma[i], sigma[j]);
  return m;
}

ModelParams params_from_json_text(const std::string &text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception &e) {
    throw ValidationError(std::string("model JSON parse error: ") + e.what());
  }
  ModelParams p;
  try {
    p.n = doc.at("n").get<int>();
    p.K = doc.at("K").get<int>();
    p.L = doc.at("L").get<int>();
    p.d = doc.at("d").get<int>();

    const auto &alpha = doc.at("alpha");
    p.alpha.resize(static_cast<Eigen::Index>(alpha.size()));
    for (size_t k = 0; k < alpha.size(); ++k) p.alpha[static_cast<int>(k)] = alpha[k].get<double>();

    const auto &pj = doc.at("P");
    for (const auto &slice : pj) {
      Eigen::MatrixXd s(p.K, p.K);
      if (!slice.empty() && slice[0].is_array()) {
        if (static_cast<int>(slice.size()) != p.K)
          throw ValidationError("P slice row count mismatch");
        for (int i = 0; i < p.K; ++i) {
          if (static_cast<int>(slice[i].size()) != p.K)
            throw ValidationError("P slice column count mismatch");
          for (int j = 0; j < p.K; ++j) s(i, j) = slice[i][j].get<double>();
        }
      } else {
        // flat row-major K*K array
        if (static_cast<int>(slice.size()) != p.K * p.K)
          throw ValidationError("flat P slice must have K*K entries");
        for (int i = 0; i < p.K; ++i)
          for (int j = 0; j < p.K; ++j) s(i, j) = slice[i * p.K + j].get<double>();
      }
      p.P.push_back(std::move(s));
    }

    const auto &mj = doc.at("mu");
    if (static_cast<int>(mj.size()) != p.K)
      throw ValidationError("mu must list K community means");
    p.mu.resize(p.d, p.K);
    for (int k = 0; k < p.K; ++k) {
      if (static_cast<int>(mj[k].size()) != p.d)
        throw ValidationError("mu[" + std::to_string(k + 1) + "] must have d entries");
      for (int r = 0; r < p.d; ++r) p.mu(r, k) = mj[k][r].get<double>();
    }
  } catch (const nlohmann::json::exception &e) {
    throw ValidationError(std::string("model JSON schema error: ") + e.what());
  }
  return validate_params(std::move(p));
}

std::string params_to_json_text(const ModelParams &params) {
  nlohmann::json doc;
  doc["n"] = params.n;
  doc["K"] = params.K;
  doc["L"] = params.L;
  doc["d"] = params.d;
  doc["alpha"] = std::vector<double>(params.alpha.data(),
                                     params.alpha.data() + params.alpha.size());
  nlohmann::json pj = nlohmann::json::array();
  for (const auto &slice : params.P) {
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < params.K; ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (int j = 0; j < params.K; ++j) row.push_back(slice(i, j));
      rows.push_back(std::move(row));
    }
    pj.push_back(std::move(rows));
  }
  doc["P"] = std::move(pj);
  nlohmann::json mj = nlohmann::json::array();
  for (int k = 0; k < params.K; ++k) {
    nlohmann::json col = nlohmann::json::array();
    for (int r = 0; r < params.d; ++r) col.push_back(params.mu(r, k));
    mj.push_back(std::move(col));
  }
  doc["mu"] = std::move(mj);
  return doc.dump(2);
}

}  // namespace clsbm
