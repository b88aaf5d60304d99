#pragma once

#include <functional>

#include <Eigen/Dense>

namespace qres {

using Objective = std::function<double(const Eigen::VectorXd&)>;
// returns f(x) and writes the gradient
using ObjectiveGrad = std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&)>;

struct MinimizeOptions {
  int max_iterations = 500;
  double grad_tol = 1e-6;  // infinity norm
  int history = 12;
};

struct MinimizeResult {
  Eigen::VectorXd x;
  double f = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
};

// L-BFGS with Armijo backtracking; never returns a point worse than x0
MinimizeResult lbfgs(const ObjectiveGrad& fg, const Eigen::VectorXd& x0, const MinimizeOptions& opt = {});

// central differences
ObjectiveGrad numeric_gradient(const Objective& f, double step = 1e-6);

// derivative-free pattern search along coordinate axes, halving steps down to tol
MinimizeResult coordinate_search(const Objective& f, const Eigen::VectorXd& x0, const Eigen::VectorXd& step,
                                 double tol = 1e-6, int max_evaluations = 200000);

}  // namespace qres
