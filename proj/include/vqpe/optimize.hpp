#pragma once

#include <Eigen/Dense>
#include <functional>

namespace vqpe {

struct LbfgsOptions {
  int max_iterations = 500;
  double tolerance = 1e-12;     // stop when the cost change drops below this
  double fd_step = 1e-6;        // central-difference gradient step
  int history = 8;
  int max_line_search = 40;
};

struct LbfgsResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int iterations = 0;
  bool finite = true;           // false if the cost diverged
  std::vector<double> trace;
};

// Limited-memory BFGS with central finite-difference gradients and a
// backtracking Armijo line search.
LbfgsResult minimize_lbfgs(const std::function<double(const Eigen::VectorXd&)>& f,
                           Eigen::VectorXd x0, const LbfgsOptions& opts = {});

}  // namespace vqpe
