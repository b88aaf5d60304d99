#include "qres/optimize.hpp"

#include <cmath>
#include <deque>

namespace qres {

MinimizeResult lbfgs(const ObjectiveGrad& fg, const Eigen::VectorXd& x0, const MinimizeOptions& opt) {
  MinimizeResult r;
  const Eigen::Index n = x0.size();
  Eigen::VectorXd x = x0, g(n);
  double f = fg(x, g);
  r.evaluations = 1;
  std::deque<Eigen::VectorXd> ss, ys;
  int flat = 0;
  int it = 0;
  for (; it < opt.max_iterations; ++it) {
    if (n == 0 || g.lpNorm<Eigen::Infinity>() <= opt.grad_tol) {
      r.converged = true;
      break;
    }
    // two-loop recursion
    Eigen::VectorXd q = g;
    std::vector<double> alpha(ss.size());
    for (int i = static_cast<int>(ss.size()) - 1; i >= 0; --i) {
      double rho = 1.0 / ys[i].dot(ss[i]);
      alpha[i] = rho * ss[i].dot(q);
      q -= alpha[i] * ys[i];
    }
    if (!ss.empty()) q *= ss.back().dot(ys.back()) / ys.back().squaredNorm();
    for (std::size_t i = 0; i < ss.size(); ++i) {
      double rho = 1.0 / ys[i].dot(ss[i]);
      double beta = rho * ys[i].dot(q);
      q += ss[i] * (alpha[i] - beta);
    }
    Eigen::VectorXd d = -q;
    double slope = g.dot(d);
    if (!(slope < 0.0)) {
      ss.clear();
      ys.clear();
      d = -g;
      slope = g.dot(d);
    }
    double a = ss.empty() ? std::min(1.0, 1.0 / std::max(1e-12, g.lpNorm<Eigen::Infinity>())) : 1.0;
    Eigen::VectorXd xn, gn(n);
    double fn = f;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      xn = x + a * d;
      fn = fg(xn, gn);
      ++r.evaluations;
      if (std::isfinite(fn) && fn <= f + 1e-4 * a * slope) {
        accepted = true;
        break;
      }
      a *= 0.5;
    }
    if (!accepted) {
      if (!ss.empty()) {
        ss.clear();
        ys.clear();
        continue;
      }
      break;
    }
    Eigen::VectorXd s = xn - x, y = gn - g;
    if (s.dot(y) > 1e-12 * s.norm() * y.norm()) {
      ss.push_back(s);
      ys.push_back(y);
      if (static_cast<int>(ss.size()) > opt.history) {
        ss.pop_front();
        ys.pop_front();
      }
    }
    flat = (std::abs(f - fn) <= 1e-15 * std::max(1.0, std::abs(f))) ? flat + 1 : 0;
    x = xn;
    f = fn;
    g = gn;
    if (flat >= 5) break;
  }
  r.x = x;
  r.f = f;
  r.grad_norm = n ? g.lpNorm<Eigen::Infinity>() : 0.0;
  r.iterations = it;
  if (r.grad_norm <= opt.grad_tol) r.converged = true;
  return r;
}

ObjectiveGrad numeric_gradient(const Objective& f, double step) {
  return [f, step](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
    g.resize(x.size());
    Eigen::VectorXd t = x;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      double h = step * std::max(1.0, std::abs(x[i]));
      t[i] = x[i] + h;
      double fp = f(t);
      t[i] = x[i] - h;
      double fm = f(t);
      t[i] = x[i];
      g[i] = (fp - fm) / (2.0 * h);
    }
    return f(x);
  };
}

MinimizeResult coordinate_search(const Objective& f, const Eigen::VectorXd& x0, const Eigen::VectorXd& step,
                                 double tol, int max_evaluations) {
  MinimizeResult r;
  Eigen::VectorXd x = x0, h = step;
  double fx = f(x);
  r.evaluations = 1;
  while (r.evaluations < max_evaluations) {
    bool improved = false;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      for (double dir : {1.0, -1.0}) {
        // keep stepping while it helps
        while (r.evaluations < max_evaluations) {
          Eigen::VectorXd t = x;
          t[i] += dir * h[i];
          double ft = f(t);
          ++r.evaluations;
          if (ft < fx - 1e-15 * std::max(1.0, std::abs(fx))) {
            x = t;
            fx = ft;
            improved = true;
          } else {
            break;
          }
        }
      }
    }
    ++r.iterations;
    if (!improved) {
      if (h.maxCoeff() <= tol) {
        r.converged = true;
        break;
      }
      h *= 0.5;
    }
  }
  r.x = x;
  r.f = fx;
  return r;
}

}  // namespace qres
