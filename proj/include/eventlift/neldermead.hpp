#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace eventlift {

struct NelderMeadResult {
  Eigen::VectorXd x;
  double f = std::numeric_limits<double>::infinity();
  int evaluations = 0;
  bool converged = false;
};

/// Derivative-free simplex minimization (standard reflect/expand/contract/
/// shrink coefficients). Deterministic: the initial simplex is x0 plus a
/// fixed step along each coordinate, and ties never depend on address order.
inline NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& fn,
                                    const Eigen::VectorXd& x0, double step, double tol,
                                    int max_iter) {
  const int n = static_cast<int>(x0.size());
  const double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;

  NelderMeadResult res;
  std::vector<Eigen::VectorXd> xs(static_cast<size_t>(n) + 1, x0);
  std::vector<double> fs(static_cast<size_t>(n) + 1);
  for (int i = 1; i <= n; ++i) xs[static_cast<size_t>(i)](i - 1) += step;
  for (int i = 0; i <= n; ++i) {
    fs[static_cast<size_t>(i)] = fn(xs[static_cast<size_t>(i)]);
    ++res.evaluations;
  }

  std::vector<int> order(static_cast<size_t>(n) + 1);
  auto sort_simplex = [&] {
    for (int i = 0; i <= n; ++i) order[static_cast<size_t>(i)] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return fs[static_cast<size_t>(a)] < fs[static_cast<size_t>(b)]; });
  };

  for (int iter = 0; iter < max_iter; ++iter) {
    sort_simplex();
    double f_best = fs[static_cast<size_t>(order[0])];
    double f_worst = fs[static_cast<size_t>(order[static_cast<size_t>(n)])];
    if (std::isfinite(f_best) && std::isfinite(f_worst) && f_worst - f_best <= tol) {
      res.converged = true;
      break;
    }

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i) centroid += xs[static_cast<size_t>(order[static_cast<size_t>(i)])];
    centroid /= static_cast<double>(n);

    int iw = order[static_cast<size_t>(n)];
    int i2 = order[static_cast<size_t>(n - 1)];
    Eigen::VectorXd xr = centroid + alpha * (centroid - xs[static_cast<size_t>(iw)]);
    double fr = fn(xr);
    ++res.evaluations;

    if (fr < fs[static_cast<size_t>(order[0])]) {
      Eigen::VectorXd xe = centroid + gamma * (xr - centroid);
      double fe = fn(xe);
      ++res.evaluations;
      if (fe < fr) {
        xs[static_cast<size_t>(iw)] = xe;
        fs[static_cast<size_t>(iw)] = fe;
      } else {
        xs[static_cast<size_t>(iw)] = xr;
        fs[static_cast<size_t>(iw)] = fr;
      }
    } else if (fr < fs[static_cast<size_t>(i2)]) {
      xs[static_cast<size_t>(iw)] = xr;
      fs[static_cast<size_t>(iw)] = fr;
    } else {
      bool outside = fr < fs[static_cast<size_t>(iw)];
      Eigen::VectorXd xc;
      if (outside) {
        xc = centroid + rho * (xr - centroid);
      } else {
        xc = centroid - rho * (centroid - xs[static_cast<size_t>(iw)]);
      }
      double fc = fn(xc);
      ++res.evaluations;
      if (fc < std::min(fr, fs[static_cast<size_t>(iw)])) {
        xs[static_cast<size_t>(iw)] = xc;
        fs[static_cast<size_t>(iw)] = fc;
      } else {
        // shrink toward best
        const Eigen::VectorXd xb = xs[static_cast<size_t>(order[0])];
        for (int i = 1; i <= n; ++i) {
          int idx = order[static_cast<size_t>(i)];
          xs[static_cast<size_t>(idx)] = xb + sigma * (xs[static_cast<size_t>(idx)] - xb);
          fs[static_cast<size_t>(idx)] = fn(xs[static_cast<size_t>(idx)]);
          ++res.evaluations;
        }
      }
    }
  }

  sort_simplex();
  res.x = xs[static_cast<size_t>(order[0])];
  res.f = fs[static_cast<size_t>(order[0])];
  return res;
}

}  // namespace eventlift
