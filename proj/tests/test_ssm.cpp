#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "eventlift/ssm.hpp"
#include "eventlift/ssm_dense.hpp"

using namespace eventlift;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

struct RandomCase {
  ModelSpec spec;
  VarianceParams params;
  VectorXd y;
  MatrixXd X;
};

RandomCase random_case(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(0, 3);
  std::uniform_real_distribution<double> logvar(-3.0, 2.0);
  std::uniform_real_distribution<double> unif(-2.0, 2.0);

  RandomCase c;
  switch (pick(rng)) {
    case 0: break;  // local level
    case 1: c.spec.has_trend = true; break;
    case 2: c.spec.n_covariates = 1; break;
    case 3:
      c.spec.has_trend = true;
      c.spec.n_covariates = 1;
      break;
  }
  c.params.obs_var = std::exp(logvar(rng));
  c.params.level_var = std::exp(logvar(rng));
  if (c.spec.has_trend) c.params.trend_var = std::exp(logvar(rng));

  const int d = c.spec.state_dim();
  std::uniform_int_distribution<int> len(d + 2, 8);
  const int T = len(rng);
  c.y.resize(T);
  for (int t = 0; t < T; ++t) c.y(t) = 3.0 * unif(rng);
  c.X.resize(T, c.spec.n_covariates);
  for (int t = 0; t < T; ++t) {
    for (int j = 0; j < c.spec.n_covariates; ++j) c.X(t, j) = unif(rng);
  }
  return c;
}

}  // namespace

TEST_CASE("filter log-likelihood matches the dense joint-Gaussian oracle") {
  std::mt19937_64 rng(20160612);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    auto c = random_case(rng);
    const double filt = kalman_filter(c.spec, c.params, c.y, c.X).loglik;
    const double dense = loglik_bruteforce(c.spec, c.params, c.y, c.X);
    const double rel = std::abs(filt - dense) / std::max(1.0, std::abs(dense));
    worst = std::max(worst, rel);
  }
  INFO("worst relative discrepancy " << worst);
  CHECK(worst <= 1e-8);
}

TEST_CASE("worked dense-oracle case at T=6") {
  ModelSpec spec;  // local level
  VarianceParams p;
  p.obs_var = 1.0;
  p.level_var = 0.5;
  VectorXd y(6);
  y << 1.1, 0.7, 1.9, 1.4, 0.2, 1.0;
  MatrixXd X(6, 0);
  const double filt = kalman_filter(spec, p, y, X).loglik;
  const double dense = loglik_bruteforce(spec, p, y, X);
  CHECK(std::abs(filt - dense) <= 1e-8 * std::max(1.0, std::abs(dense)));
}

TEST_CASE("noiseless constant state pins one-step predictions at zero") {
  ModelSpec spec;
  VarianceParams p;
  p.obs_var = 1.0;
  p.level_var = 0.0;
  VectorXd y = VectorXd::Zero(8);
  auto r = kalman_filter(spec, p, y, MatrixXd(8, 0));
  // after burn-in the level is pinned at 0; the residuals are exactly zero so
  // each included term is -log(2*pi*v_t)/2 with v_t = 1 + 1/t decaying to 1
  double expected = 0.0;
  for (int t = 1; t < 8; ++t) {
    CHECK(std::abs(r.one_step_means(t)) < 1e-6);
    CHECK(r.one_step_vars(t) == Catch::Approx(1.0 + 1.0 / t).margin(1e-4));
    expected += -0.5 * std::log(2.0 * M_PI * r.one_step_vars(t));
  }
  CHECK(r.one_step_vars(7) < 1.15);  // v_t -> 1
  CHECK(r.loglik == Catch::Approx(expected).epsilon(1e-12));
}

TEST_CASE("filtered regression coefficients recover a linear signal") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> noise(0.0, 0.1);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  const int T = 200;
  ModelSpec spec;
  spec.n_covariates = 2;
  MatrixXd X(T, 2);
  VectorXd y(T);
  for (int t = 0; t < T; ++t) {
    X(t, 0) = unif(rng);
    X(t, 1) = unif(rng);
    y(t) = 3.0 + 2.0 * X(t, 0) - 1.0 * X(t, 1) + noise(rng);
  }
  VarianceParams p;
  p.obs_var = 0.01;
  p.level_var = 0.0;
  auto r = kalman_filter(spec, p, y, X);
  // state layout: [level, beta1, beta2]
  CHECK(r.final_state_mean(1) == Catch::Approx(2.0).margin(0.1));
  CHECK(r.final_state_mean(2) == Catch::Approx(-1.0).margin(0.1));
  CHECK(r.final_state_mean(0) == Catch::Approx(3.0).margin(0.1));
}

TEST_CASE("update never grows the covariance past the prediction (PSD order)") {
  std::mt19937_64 rng(99);
  for (int rep = 0; rep < 20; ++rep) {
    auto c = random_case(rng);
    FilterTrace trace;
    kalman_filter(c.spec, c.params, c.y, c.X, &trace);
    REQUIRE(trace.predicted_cov.size() == trace.updated_cov.size());
    for (size_t t = 0; t < trace.predicted_cov.size(); ++t) {
      Eigen::MatrixXd diff = trace.predicted_cov[t] - trace.updated_cov[t];
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (diff + diff.transpose()));
      CHECK(es.eigenvalues().minCoeff() >= -1e-7 * std::max(1.0, trace.predicted_cov[t].norm()));
    }
  }
}

TEST_CASE("a level-bearing model absorbs constant shifts of y") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> noise(0.0, 1.0);
  const int T = 40;
  VectorXd y(T);
  double level = 10.0;
  for (int t = 0; t < T; ++t) {
    level += 0.3 * noise(rng);
    y(t) = level + noise(rng);
  }
  ModelSpec spec;
  spec.diffuse_kappa = 1e8;  // config knob; larger prior tightens the absorption
  VarianceParams p;
  p.obs_var = 1.0;
  p.level_var = 0.09;
  MatrixXd X(T, 0);
  const double base = kalman_filter(spec, p, y, X).loglik;
  const double shifted = kalman_filter(spec, p, y.array() + 1.0, X).loglik;
  CHECK(std::abs(shifted - base) <= 1e-6);
}

TEST_CASE("non-finite input and bad variances are rejected") {
  ModelSpec spec;
  VarianceParams p;
  VectorXd y(6);
  y << 1, 2, 3, 4, 5, 6;
  MatrixXd X(6, 0);
  p.obs_var = 0.0;
  CHECK_THROWS_AS(kalman_filter(spec, p, y, X), validation_error);
  p.obs_var = 1.0;
  p.level_var = -1.0;
  CHECK_THROWS_AS(kalman_filter(spec, p, y, X), validation_error);
  p.level_var = 0.0;
  y(2) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(kalman_filter(spec, p, y, X), validation_error);
}

TEST_CASE("dense oracle rejects long series") {
  ModelSpec spec;
  VarianceParams p;
  CHECK_THROWS_AS(loglik_bruteforce(spec, p, VectorXd::Zero(13), MatrixXd(13, 0)),
                  validation_error);
}

TEST_CASE("fit_mle on a constant series pins level variance at the bound") {
  VectorXd y = VectorXd::Constant(40, 7.0);
  ModelSpec spec;
  auto fit = fit_mle(spec, y, MatrixXd(40, 0));
  CHECK(fit.params.level_var <= 1e-6);
  // one-step predictions settle on the constant
  CHECK(fit.filter.one_step_means(20) == Catch::Approx(7.0).margin(1e-3));
  CHECK(fit.filter.one_step_means(39) == Catch::Approx(7.0).margin(1e-3));
}

TEST_CASE("fit_mle beats the generating parameters and is deterministic") {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> noise(0.0, 1.0);
  const int T = 300;
  VectorXd y(T);
  double level = 0.0;
  for (int t = 0; t < T; ++t) {
    level += std::sqrt(0.1) * noise(rng);
    y(t) = level + noise(rng);
  }
  ModelSpec spec;
  MatrixXd X(T, 0);
  auto fit1 = fit_mle(spec, y, X);
  auto fit2 = fit_mle(spec, y, X);
  CHECK(fit1.params.obs_var == fit2.params.obs_var);
  CHECK(fit1.params.level_var == fit2.params.level_var);

  VarianceParams truth;
  truth.obs_var = 1.0;
  truth.level_var = 0.1;
  const double ll_truth = kalman_filter(spec, truth, y, X).loglik;
  CHECK(fit1.loglik >= ll_truth - 1e-6);
}

TEST_CASE("fit_mle validates input length") {
  ModelSpec spec;
  CHECK_THROWS_AS(fit_mle(spec, VectorXd::Zero(4), MatrixXd(4, 0)), validation_error);
}

TEST_CASE("forecast of a near-deterministic model is flat at the level") {
  VectorXd y = VectorXd::Constant(30, 7.0);
  ModelSpec spec;
  VarianceParams p;
  p.obs_var = 1e-8;
  p.level_var = 0.0;
  FittedModel model;
  model.spec = spec;
  model.params = p;
  model.filter = kalman_filter(spec, p, y, MatrixXd(30, 0));
  model.loglik = model.filter.loglik;
  model.n_obs = 30;
  auto fc = forecast(model, MatrixXd(5, 0), 5, 200, 123);
  for (int h = 0; h < 5; ++h) {
    CHECK(fc.mean_path(h) == Catch::Approx(7.0).margin(1e-3));
    for (int j = 0; j < 200; ++j) CHECK(fc.draws(j, h) == Catch::Approx(7.0).margin(0.05));
  }
}

TEST_CASE("forecast determinism and seed sensitivity") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> noise(0.0, 1.0);
  VectorXd y(50);
  for (int t = 0; t < 50; ++t) y(t) = 10 + noise(rng);
  ModelSpec spec;
  auto model = fit_mle(spec, y, MatrixXd(50, 0));

  auto a = forecast(model, MatrixXd(7, 0), 7, 150, 42);
  auto b = forecast(model, MatrixXd(7, 0), 7, 150, 42);
  auto c = forecast(model, MatrixXd(7, 0), 7, 150, 43);
  CHECK(a.draws == b.draws);  // bit-identical
  CHECK(a.draws != c.draws);

  auto empty = forecast(model, MatrixXd(0, 0), 0, 150, 1);
  CHECK(empty.mean_path.size() == 0);

  CHECK_THROWS_AS(forecast(model, MatrixXd(7, 0), 7, 99, 1), validation_error);
}

TEST_CASE("draw variance grows with horizon for a random-walk level") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> noise(0.0, 1.0);
  const int T = 120;
  VectorXd y(T);
  double level = 5.0;
  for (int t = 0; t < T; ++t) {
    level += 0.5 * noise(rng);
    y(t) = level + 0.3 * noise(rng);
  }
  ModelSpec spec;
  VarianceParams p;
  p.obs_var = 0.09;
  p.level_var = 0.25;
  FittedModel model;
  model.spec = spec;
  model.params = p;
  model.filter = kalman_filter(spec, p, y, MatrixXd(T, 0));
  model.n_obs = T;

  auto fc = forecast(model, MatrixXd(10, 0), 10, 10000, 77);
  std::vector<double> vars(10);
  for (int h = 0; h < 10; ++h) {
    std::vector<double> col(10000);
    for (int j = 0; j < 10000; ++j) col[static_cast<size_t>(j)] = fc.draws(j, h);
    vars[static_cast<size_t>(h)] = sample_variance(col);
  }
  for (int h = 1; h < 10; ++h) {
    CHECK(vars[static_cast<size_t>(h)] >= vars[static_cast<size_t>(h - 1)] * 0.93);
  }
  // and the mean of draws tracks the deterministic path
  for (int h = 0; h < 10; ++h) {
    std::vector<double> col(10000);
    for (int j = 0; j < 10000; ++j) col[static_cast<size_t>(j)] = fc.draws(j, h);
    CHECK(mean(col) == Catch::Approx(fc.mean_path(h)).margin(4.0 * std::sqrt(vars[static_cast<size_t>(h)] / 10000.0) + 0.05));
  }
}

TEST_CASE("weekly seasonal component tracks a period-7 pattern") {
  const int T = 140;
  VectorXd y(T);
  const double pattern[7] = {3, -1, -2, 0, 1, 2, -3};
  for (int t = 0; t < T; ++t) y(t) = 20.0 + pattern[t % 7];
  ModelSpec spec;
  spec.has_weekly_seasonal = true;
  VarianceParams p;
  p.obs_var = 0.01;
  p.level_var = 0.0;
  p.seasonal_var = 0.0;
  auto r = kalman_filter(spec, p, y, MatrixXd(T, 0));
  // predictions near the end reproduce the deterministic pattern
  for (int t = T - 14; t < T; ++t) {
    CHECK(r.one_step_means(t) == Catch::Approx(y(t)).margin(0.05));
  }
}
