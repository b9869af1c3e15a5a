#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "eventlift/errors.hpp"
#include "eventlift/neldermead.hpp"
#include "eventlift/stats.hpp"

namespace eventlift {

// Structural (unobserved-components) state-space model
//
//   y_t      = Z_t a_t + eps_t,            eps_t ~ N(0, obs_var)
//   a_{t+1}  = T a_t + R eta_t,            eta_t ~ N(0, Q)
//
// State layout: [level, (trend), (weekly seasonal x6), (regression x k)].
// The weekly seasonal is the period-7 sum-to-zero dummy form; regression
// coefficients are carried as constant states so one filter handles
// everything, and Z_t carries the covariate row for time t.

struct ModelSpec {
  bool has_level = true;  // always on
  bool has_trend = false;
  bool has_weekly_seasonal = false;
  int n_covariates = 0;
  double diffuse_kappa = 1e6;  // initial state covariance scale

  int state_dim() const {
    return 1 + (has_trend ? 1 : 0) + (has_weekly_seasonal ? 6 : 0) + n_covariates;
  }
  int n_disturbances() const { return 1 + (has_trend ? 1 : 0) + (has_weekly_seasonal ? 1 : 0); }
};

struct VarianceParams {
  double obs_var = 1.0;
  double level_var = 0.0;
  double trend_var = 0.0;     // used iff has_trend
  double seasonal_var = 0.0;  // used iff has_weekly_seasonal
};

struct FilterResult {
  double loglik = 0.0;               // burn-in-adjusted prediction error decomposition
  Eigen::VectorXd one_step_means;    // Z_t a_t for every t (including burn-in steps)
  Eigen::VectorXd one_step_vars;     // F_t for every t, all > 0
  Eigen::VectorXd final_state_mean;  // predicted state for step T+1
  Eigen::MatrixXd final_state_cov;
};

/// Optional per-step covariance history for diagnostics/property checks.
struct FilterTrace {
  std::vector<Eigen::MatrixXd> predicted_cov;  // P_t before the update at t
  std::vector<Eigen::MatrixXd> updated_cov;    // P_{t|t} after the update at t
};

namespace detail {

struct SystemMatrices {
  Eigen::MatrixXd T;  // m x m transition
  Eigen::MatrixXd R;  // m x q disturbance selection
  Eigen::MatrixXd Q;  // q x q disturbance covariance
};

inline SystemMatrices build_system(const ModelSpec& spec, const VarianceParams& p) {
  const int m = spec.state_dim();
  const int q = spec.n_disturbances();
  SystemMatrices sys;
  sys.T = Eigen::MatrixXd::Zero(m, m);
  sys.R = Eigen::MatrixXd::Zero(m, q);
  sys.Q = Eigen::MatrixXd::Zero(q, q);

  int idx = 0, qi = 0;
  const int level = idx++;
  sys.T(level, level) = 1.0;
  sys.R(level, qi) = 1.0;
  sys.Q(qi, qi) = p.level_var;
  ++qi;
  if (spec.has_trend) {
    const int trend = idx++;
    sys.T(level, trend) = 1.0;
    sys.T(trend, trend) = 1.0;
    sys.R(trend, qi) = 1.0;
    sys.Q(qi, qi) = p.trend_var;
    ++qi;
  }
  if (spec.has_weekly_seasonal) {
    const int s0 = idx;
    for (int j = 0; j < 6; ++j) sys.T(s0, s0 + j) = -1.0;
    for (int j = 1; j < 6; ++j) sys.T(s0 + j, s0 + j - 1) = 1.0;
    sys.R(s0, qi) = 1.0;
    sys.Q(qi, qi) = p.seasonal_var;
    ++qi;
    idx += 6;
  }
  for (int j = 0; j < spec.n_covariates; ++j) {
    sys.T(idx + j, idx + j) = 1.0;  // constant regression states
  }
  return sys;
}

/// Observation row for time t: [1, 0, (1,0,0,0,0,0), x_t...].
inline Eigen::RowVectorXd obs_row(const ModelSpec& spec, const Eigen::MatrixXd& X, int t) {
  Eigen::RowVectorXd z = Eigen::RowVectorXd::Zero(spec.state_dim());
  int idx = 0;
  z(idx++) = 1.0;  // level
  if (spec.has_trend) ++idx;
  if (spec.has_weekly_seasonal) {
    z(idx) = 1.0;
    idx += 6;
  }
  for (int j = 0; j < spec.n_covariates; ++j) z(idx + j) = X(t, j);
  return z;
}

inline void validate_inputs(const ModelSpec& spec, const VarianceParams& p,
                            const Eigen::VectorXd& y, const Eigen::MatrixXd& X) {
  if (!(p.obs_var > 0.0) || !std::isfinite(p.obs_var)) {
    throw validation_error("obs_var must be finite and > 0");
  }
  if (p.level_var < 0 || !std::isfinite(p.level_var) ||
      (spec.has_trend && (p.trend_var < 0 || !std::isfinite(p.trend_var))) ||
      (spec.has_weekly_seasonal && (p.seasonal_var < 0 || !std::isfinite(p.seasonal_var)))) {
    throw validation_error("state variances must be finite and >= 0");
  }
  if (!y.allFinite()) throw validation_error("y contains non-finite values");
  if (spec.n_covariates > 0) {
    if (X.rows() != y.size() || X.cols() != spec.n_covariates) {
      throw validation_error("covariate matrix must be T x n_covariates");
    }
    if (!X.allFinite()) throw validation_error("X contains non-finite values");
  } else if (X.size() != 0 && X.rows() != y.size()) {
    throw validation_error("covariate matrix row count must match y");
  }
}

inline double diffuse_scale(const Eigen::VectorXd& y) {
  std::vector<double> v(y.data(), y.data() + y.size());
  // max(.,1) keeps the prior diffuse for constant or near-constant series
  return std::max(sample_variance(v), 1.0);
}

}  // namespace detail

/// Kalman filter with approximate-diffuse initialization (mean 0, covariance
/// kappa*I). The returned loglik skips the first d = state_dim terms, which
/// neutralizes the influence of the diffuse prior.
inline FilterResult kalman_filter(const ModelSpec& spec, const VarianceParams& params,
                                  const Eigen::VectorXd& y, const Eigen::MatrixXd& X,
                                  FilterTrace* trace = nullptr) {
  detail::validate_inputs(spec, params, y, X);
  const int T = static_cast<int>(y.size());
  const int m = spec.state_dim();
  const int d = m;  // burn-in terms excluded from the likelihood
  const auto sys = detail::build_system(spec, params);
  const Eigen::MatrixXd RQR = sys.R * sys.Q * sys.R.transpose();
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(m, m);

  Eigen::VectorXd a = Eigen::VectorXd::Zero(m);
  Eigen::MatrixXd P = spec.diffuse_kappa * detail::diffuse_scale(y) * I;

  FilterResult res;
  res.one_step_means.resize(T);
  res.one_step_vars.resize(T);

  for (int t = 0; t < T; ++t) {
    const Eigen::RowVectorXd z = detail::obs_row(spec, X, t);
    if (trace) trace->predicted_cov.push_back(P);

    const double f_mean = z * a;
    const double F = (z * P * z.transpose())(0, 0) + params.obs_var;
    if (!(F > 0.0) || !std::isfinite(F)) {
      throw numeric_error("prediction variance collapsed (F=" + std::to_string(F) +
                          " at t=" + std::to_string(t) + ")");
    }
    res.one_step_means(t) = f_mean;
    res.one_step_vars(t) = F;

    const double v = y(t) - f_mean;
    if (t >= d) {
      res.loglik += -0.5 * (std::log(2.0 * M_PI * F) + v * v / F);
    }

    // Joseph-form update keeps P symmetric PSD
    const Eigen::VectorXd K = P * z.transpose() / F;
    a += K * v;
    const Eigen::MatrixXd ImKZ = I - K * z;
    P = ImKZ * P * ImKZ.transpose() + params.obs_var * (K * K.transpose());
    P = 0.5 * (P + P.transpose());
    if (trace) trace->updated_cov.push_back(P);

    a = sys.T * a;
    P = sys.T * P * sys.T.transpose() + RQR;
    P = 0.5 * (P + P.transpose());
  }

  res.final_state_mean = a;
  res.final_state_cov = P;
  if (!std::isfinite(res.loglik)) throw numeric_error("non-finite log-likelihood");
  return res;
}

// --- maximum likelihood fitting ---------------------------------------------

struct FitOptions {
  int n_starts = 3;
  double tol = 1e-6;
  int max_iter = 500;
};

struct FittedModel {
  ModelSpec spec;
  VarianceParams params;
  double loglik = 0.0;
  FilterResult filter;
  int n_obs = 0;
};

namespace detail {

inline int n_variance_params(const ModelSpec& spec) {
  return 2 + (spec.has_trend ? 1 : 0) + (spec.has_weekly_seasonal ? 1 : 0);
}

inline VarianceParams unpack_params(const ModelSpec& spec, const Eigen::VectorXd& theta,
                                    double lo, double hi) {
  auto bounded = [&](double t) { return std::exp(std::clamp(t, lo, hi)); };
  VarianceParams p;
  int i = 0;
  p.obs_var = bounded(theta(i++));
  p.level_var = bounded(theta(i++));
  if (spec.has_trend) p.trend_var = bounded(theta(i++));
  if (spec.has_weekly_seasonal) p.seasonal_var = bounded(theta(i++));
  return p;
}

}  // namespace detail

/// Fits the disturbance variances by maximizing the filter log-likelihood
/// over log-variances, Nelder-Mead from several deterministic starts
/// (variances at {1e-2, 1, 1e2, ...} times the sample variance of y).
/// Log-variances are box-bounded inside the objective so degenerate series
/// pin parameters at the bound instead of diverging.
inline FittedModel fit_mle(const ModelSpec& spec, const Eigen::VectorXd& y,
                           const Eigen::MatrixXd& X, const FitOptions& opt = {}) {
  if (y.size() < spec.state_dim() + 5) {
    throw validation_error("fit_mle: need at least state_dim + 5 observations, got " +
                           std::to_string(y.size()));
  }
  if (opt.n_starts < 1) throw validation_error("fit_mle: n_starts must be >= 1");

  std::vector<double> yv(y.data(), y.data() + y.size());
  const double vy = std::max(sample_variance(yv), 1e-8);
  const double lo = std::log(1e-10 * vy);
  const double hi = std::log(1e10 * vy);
  const int np = detail::n_variance_params(spec);

  const double bad = 1e30;
  auto objective = [&](const Eigen::VectorXd& theta) -> double {
    try {
      VarianceParams p = detail::unpack_params(spec, theta, lo, hi);
      return -kalman_filter(spec, p, y, X).loglik;
    } catch (const numeric_error&) {
      return bad;
    }
  };

  double best_f = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_theta;
  for (int s = 0; s < opt.n_starts; ++s) {
    // start exponents 0, -2, +2, -4, +4, ... around variance(y)
    const int k = (s + 1) / 2;
    const double exponent = (s % 2 == 1) ? -2.0 * k : 2.0 * k;
    Eigen::VectorXd theta0 =
        Eigen::VectorXd::Constant(np, std::log(vy) + exponent * std::log(10.0));
    auto r = nelder_mead(objective, theta0, 0.5, opt.tol, opt.max_iter);
    // polish: restart once from the incumbent with a tighter simplex
    auto r2 = nelder_mead(objective, r.x, 0.05, opt.tol, opt.max_iter);
    if (r2.f < r.f) r = r2;
    if (r.f < best_f) {
      best_f = r.f;
      best_theta = r.x;
    }
  }

  if (!std::isfinite(best_f) || best_f >= bad) {
    throw numeric_error("fit_mle: no start produced a finite log-likelihood (T=" +
                        std::to_string(y.size()) + ", var(y)=" + std::to_string(vy) + ")");
  }

  FittedModel fit;
  fit.spec = spec;
  fit.params = detail::unpack_params(spec, best_theta, lo, hi);
  fit.filter = kalman_filter(spec, fit.params, y, X);
  fit.loglik = fit.filter.loglik;
  fit.n_obs = static_cast<int>(y.size());
  return fit;
}

// --- forecasting -------------------------------------------------------------

struct ForecastDraws {
  int horizon = 0;
  Eigen::VectorXd mean_path;  // deterministic Kalman prediction
  Eigen::MatrixXd draws;      // n_draws x horizon sampled trajectories
  uint64_t seed = 0;
};

/// Multi-step forecast from the fitted model's final predicted state.
/// mean_path is the deterministic prediction; draws sample the initial state,
/// the state disturbances, and the observation noise, deterministically from
/// `seed`.
inline ForecastDraws forecast(const FittedModel& model, const Eigen::MatrixXd& X_post,
                              int horizon, int n_draws, uint64_t seed) {
  const ModelSpec& spec = model.spec;
  if (horizon < 0) throw validation_error("forecast: horizon must be >= 0");
  if (n_draws < 100) throw validation_error("forecast: n_draws must be >= 100");
  if (spec.n_covariates > 0 && (X_post.rows() != horizon || X_post.cols() != spec.n_covariates)) {
    throw validation_error("forecast: X_post must be horizon x n_covariates");
  }

  const auto sys = detail::build_system(spec, model.params);
  const int m = spec.state_dim();
  const int q = spec.n_disturbances();

  ForecastDraws out;
  out.horizon = horizon;
  out.seed = seed;
  out.mean_path.resize(horizon);
  out.draws.resize(n_draws, horizon);

  Eigen::VectorXd a = model.filter.final_state_mean;
  for (int h = 0; h < horizon; ++h) {
    const Eigen::RowVectorXd z = detail::obs_row(spec, X_post, h);
    out.mean_path(h) = z * a;
    a = sys.T * a;
  }
  if (horizon == 0) return out;

  // factor of the final state covariance for sampling (eigen clip handles
  // the exactly singular regression block)
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(model.filter.final_state_cov);
  Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Eigen::MatrixXd state_factor = es.eigenvectors() * lam.asDiagonal();
  const Eigen::VectorXd q_sd =
      sys.Q.diagonal().cwiseMax(0.0).cwiseSqrt();
  const double obs_sd = std::sqrt(model.params.obs_var);

  for (int j = 0; j < n_draws; ++j) {
    std::mt19937_64 rng(derive_seed(seed, "draw", std::to_string(j)));
    std::normal_distribution<double> N01(0.0, 1.0);
    Eigen::VectorXd u(m);
    for (int i = 0; i < m; ++i) u(i) = N01(rng);
    Eigen::VectorXd alpha = model.filter.final_state_mean + state_factor * u;
    for (int h = 0; h < horizon; ++h) {
      const Eigen::RowVectorXd z = detail::obs_row(spec, X_post, h);
      out.draws(j, h) = z * alpha + obs_sd * N01(rng);
      Eigen::VectorXd eta(q);
      for (int i = 0; i < q; ++i) eta(i) = q_sd(i) * N01(rng);
      alpha = sys.T * alpha + sys.R * eta;
    }
  }
  return out;
}

}  // namespace eventlift
