#include "vqpe/optimize.hpp"

#include <cmath>
#include <deque>

namespace vqpe {

namespace {

Eigen::VectorXd fd_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                            const Eigen::VectorXd& x, double step) {
  Eigen::VectorXd g(x.size());
  Eigen::VectorXd probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + step;
    const double fp = f(probe);
    probe[i] = x[i] - step;
    const double fm = f(probe);
    probe[i] = x[i];
    g[i] = (fp - fm) / (2.0 * step);
  }
  return g;
}

}  // namespace

LbfgsResult minimize_lbfgs(const std::function<double(const Eigen::VectorXd&)>& f,
                           Eigen::VectorXd x0, const LbfgsOptions& opts) {
  LbfgsResult res;
  res.x = std::move(x0);
  res.value = f(res.x);
  res.trace.push_back(res.value);
  if (!std::isfinite(res.value)) {
    res.finite = false;
    return res;
  }

  std::deque<Eigen::VectorXd> s_hist, y_hist;
  std::deque<double> rho_hist;
  Eigen::VectorXd grad = fd_gradient(f, res.x, opts.fd_step);

  for (int iter = 0; iter < opts.max_iterations; ++iter) {
    res.iterations = iter + 1;
    // two-loop recursion
    Eigen::VectorXd q = grad;
    std::vector<double> alpha(s_hist.size());
    for (int i = static_cast<int>(s_hist.size()) - 1; i >= 0; --i) {
      alpha[i] = rho_hist[i] * s_hist[i].dot(q);
      q -= alpha[i] * y_hist[i];
    }
    if (!s_hist.empty()) {
      const double gamma =
          s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
      q *= gamma;
    }
    for (std::size_t i = 0; i < s_hist.size(); ++i) {
      const double beta = rho_hist[i] * y_hist[i].dot(q);
      q += (alpha[i] - beta) * s_hist[i];
    }
    Eigen::VectorXd direction = -q;
    double slope = grad.dot(direction);
    if (slope >= 0.0) {  // not a descent direction, fall back to steepest
      direction = -grad;
      slope = -grad.squaredNorm();
    }
    if (-slope < opts.tolerance) break;

    // Armijo backtracking
    double step = 1.0;
    double new_value = res.value;
    Eigen::VectorXd x_new = res.x;
    bool accepted = false;
    for (int ls = 0; ls < opts.max_line_search; ++ls) {
      x_new = res.x + step * direction;
      new_value = f(x_new);
      if (std::isfinite(new_value) &&
          new_value <= res.value + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;

    const Eigen::VectorXd grad_new = fd_gradient(f, x_new, opts.fd_step);
    const Eigen::VectorXd s = x_new - res.x;
    const Eigen::VectorXd y = grad_new - grad;
    const double sy = s.dot(y);
    if (sy > 1e-14) {
      s_hist.push_back(s);
      y_hist.push_back(y);
      rho_hist.push_back(1.0 / sy);
      if (static_cast<int>(s_hist.size()) > opts.history) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
    }
    const double change = res.value - new_value;
    res.x = std::move(x_new);
    res.value = new_value;
    res.trace.push_back(res.value);
    grad = grad_new;
    if (!std::isfinite(res.value)) {
      res.finite = false;
      return res;
    }
    if (change < opts.tolerance) break;
  }
  return res;
}

}  // namespace vqpe
