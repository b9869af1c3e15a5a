#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <cmath>

#include "eventlift/errors.hpp"
#include "eventlift/ssm.hpp"

namespace eventlift {

/// Dense reference log-likelihood: builds the joint Gaussian distribution of
/// the whole observation vector by explicit propagation of state means,
/// covariances and cross-covariances, then evaluates the density of the
/// post-burn-in observations conditional on the first d = state_dim ones --
/// the same conditioning the filter's burn-in skip performs. O(T^2 * dim^2),
/// intended as an independent oracle for kalman_filter on short series.
inline double loglik_bruteforce(const ModelSpec& spec, const VarianceParams& params,
                                const Eigen::VectorXd& y, const Eigen::MatrixXd& X) {
  const int T = static_cast<int>(y.size());
  if (T > 12) throw validation_error("loglik_bruteforce: series longer than 12");
  detail::validate_inputs(spec, params, y, X);

  const int m = spec.state_dim();
  const int d = m;
  if (T <= d) return 0.0;  // mirrors the filter: no post-burn-in terms

  const auto sys = detail::build_system(spec, params);
  const Eigen::MatrixXd RQR = sys.R * sys.Q * sys.R.transpose();
  const double kappa = spec.diffuse_kappa * detail::diffuse_scale(y);

  // state covariances V_t and observation rows
  std::vector<Eigen::MatrixXd> V(static_cast<size_t>(T));
  std::vector<Eigen::RowVectorXd> z(static_cast<size_t>(T));
  V[0] = kappa * Eigen::MatrixXd::Identity(m, m);
  z[0] = detail::obs_row(spec, X, 0);
  for (int t = 1; t < T; ++t) {
    V[static_cast<size_t>(t)] =
        sys.T * V[static_cast<size_t>(t - 1)] * sys.T.transpose() + RQR;
    z[static_cast<size_t>(t)] = detail::obs_row(spec, X, t);
  }

  // joint covariance of y: Sigma(s,t) = z_s Cov(a_s, a_t) z_t' + delta * obs_var,
  // with Cov(a_s, a_t) = V_s (T')^{t-s} for s <= t. State means are all zero
  // under the diffuse prior, so E[y] = 0.
  Eigen::MatrixXd Sigma(T, T);
  for (int s = 0; s < T; ++s) {
    Eigen::MatrixXd M = V[static_cast<size_t>(s)];
    for (int t = s; t < T; ++t) {
      double cov = z[static_cast<size_t>(s)] * M * z[static_cast<size_t>(t)].transpose();
      if (s == t) cov += params.obs_var;
      Sigma(s, t) = cov;
      Sigma(t, s) = cov;
      M = M * sys.T.transpose();
    }
  }

  const int nb = T - d;
  const Eigen::MatrixXd Saa = Sigma.topLeftCorner(d, d);
  const Eigen::MatrixXd Sab = Sigma.topRightCorner(d, nb);
  const Eigen::MatrixXd Sbb = Sigma.bottomRightCorner(nb, nb);
  const Eigen::VectorXd ya = y.head(d);
  const Eigen::VectorXd yb = y.tail(nb);

  Eigen::LLT<Eigen::MatrixXd> llt_aa(Saa);
  if (llt_aa.info() != Eigen::Success) {
    throw numeric_error("loglik_bruteforce: head covariance not positive definite");
  }
  const Eigen::VectorXd mu_cond = Sab.transpose() * llt_aa.solve(ya);
  const Eigen::MatrixXd S_cond = Sbb - Sab.transpose() * llt_aa.solve(Sab);

  Eigen::LLT<Eigen::MatrixXd> llt_c(0.5 * (S_cond + S_cond.transpose()));
  if (llt_c.info() != Eigen::Success) {
    throw numeric_error("loglik_bruteforce: conditional covariance not positive definite");
  }
  double logdet = 0.0;
  for (int i = 0; i < nb; ++i) logdet += 2.0 * std::log(llt_c.matrixL()(i, i));
  const Eigen::VectorXd r = yb - mu_cond;
  const double quad = r.dot(llt_c.solve(r));
  return -0.5 * (nb * std::log(2.0 * M_PI) + logdet + quad);
}

}  // namespace eventlift
