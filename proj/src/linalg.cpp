#include "qres/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <vector>

#include "qres/errors.hpp"

namespace qres {

namespace {

// project v out of the first m columns of basis, twice for stability; returns remaining norm
double orthogonalize(const Eigen::MatrixXcd& basis, Eigen::Index m, Eigen::VectorXcd& v) {
  for (int pass = 0; pass < 2; ++pass) {
    if (m > 0) v -= basis.leftCols(m) * (basis.leftCols(m).adjoint() * v);
  }
  return v.norm();
}

}  // namespace

EigenResult dense_eigen(const Eigen::MatrixXcd& a) {
  Eigen::MatrixXcd h = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  if (es.info() != Eigen::Success) throw SolverError("dense eigensolver failed");
  EigenResult r;
  r.values = es.eigenvalues();
  r.vectors = es.eigenvectors();
  r.residuals = Eigen::VectorXd::Zero(r.values.size());
  return r;
}

EigenResult davidson(const SparseMatrix& a, int k, const DavidsonOptions& opt) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n) throw DimensionError("davidson needs a square matrix");
  if (k < 1 || k > n) throw ArgumentError("davidson: k must lie in [1, dim]");

  if (n <= 24) {
    EigenResult d = dense_eigen(Eigen::MatrixXcd(a));
    EigenResult r;
    r.values = d.values.head(k);
    r.vectors = d.vectors.leftCols(k);
    r.residuals = Eigen::VectorXd::Zero(k);
    return r;
  }

  Eigen::VectorXd diag(n);
  for (Eigen::Index i = 0; i < n; ++i) diag[i] = a.coeff(i, i).real();

  const Eigen::Index nb = std::min<Eigen::Index>(n, std::max<Eigen::Index>(k + 2, std::min<Eigen::Index>(2 * k, k + 8)));
  Eigen::Index cap = opt.max_subspace > 0 ? opt.max_subspace : std::max<Eigen::Index>(6 * nb, 48);
  cap = std::min(cap, n);

  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto random_vector = [&]() {
    Eigen::VectorXcd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = cplx(gauss(rng), 0.0);
    return v;
  };

  // start: unit vectors on the lowest diagonal entries, lightly perturbed
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) { return diag[i] < diag[j]; });
  Eigen::MatrixXcd guess(n, nb);
  for (Eigen::Index c = 0; c < nb; ++c) {
    Eigen::VectorXcd v = 1e-3 * random_vector() / std::sqrt(static_cast<double>(n));
    v[order[c]] += 1.0;
    guess.col(c) = v;
  }

  EigenResult best;
  int total_iter = 0;
  for (int attempt = 0; attempt <= opt.max_restarts; ++attempt) {
    Eigen::MatrixXcd v(n, cap), av(n, cap);
    Eigen::Index m = 0;
    for (Eigen::Index c = 0; c < guess.cols() && m < cap; ++c) {
      Eigen::VectorXcd t = guess.col(c);
      double nrm = orthogonalize(v, m, t);
      if (nrm < 1e-10) continue;
      v.col(m) = t / nrm;
      av.col(m) = a * v.col(m);
      ++m;
    }
    Eigen::VectorXd theta;
    Eigen::MatrixXcd ritz, ritz_a;
    Eigen::VectorXd res(k);
    for (int it = 0; it < opt.max_iterations; ++it, ++total_iter) {
      Eigen::MatrixXcd t = v.leftCols(m).adjoint() * av.leftCols(m);
      t = 0.5 * (t + t.adjoint()).eval();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(t);
      const Eigen::Index keep = std::min(nb, m);
      theta = es.eigenvalues().head(keep);
      ritz = v.leftCols(m) * es.eigenvectors().leftCols(keep);
      ritz_a = av.leftCols(m) * es.eigenvectors().leftCols(keep);

      std::vector<Eigen::VectorXcd> fresh;
      bool done = keep >= k;
      for (Eigen::Index i = 0; i < keep; ++i) {
        Eigen::VectorXcd r = ritz_a.col(i) - theta[i] * ritz.col(i);
        double rn = r.norm();
        if (i < k) res[i] = rn;
        if (rn <= opt.tol) continue;
        if (i < k) done = false;
        Eigen::VectorXcd c(n);
        for (Eigen::Index j = 0; j < n; ++j) {
          double d = theta[i] - diag[j];
          if (std::abs(d) < 1e-8) d = d < 0 ? -1e-8 : 1e-8;
          c[j] = r[j] / d;
        }
        fresh.push_back(c);
      }
      if (done || m == n) {
        best.values = theta.head(k);
        best.vectors = ritz.leftCols(k);
        best.residuals = res;
        if (m == n) {
          for (Eigen::Index i = 0; i < k; ++i)
            best.residuals[i] = (a * best.vectors.col(i) - best.values[i] * best.vectors.col(i)).norm();
        }
        best.iterations = total_iter;
        best.restarts = attempt;
        if ((best.residuals.array() <= std::max(opt.tol, 1e-12)).all() || m == n) return best;
      }

      // collapse when the next block would not fit
      if (m + static_cast<Eigen::Index>(fresh.size()) > cap) {
        m = 0;
        Eigen::MatrixXcd nv = ritz, nav = ritz_a;
        for (Eigen::Index c = 0; c < nv.cols(); ++c) {
          Eigen::VectorXcd t = nv.col(c);
          double nrm = orthogonalize(v, m, t);
          if (nrm < 1e-10) continue;
          v.col(m) = t / nrm;
          av.col(m) = a * v.col(m);
          ++m;
        }
      }
      Eigen::Index added = 0;
      for (auto& c : fresh) {
        if (m >= cap) break;
        double before = c.norm();
        if (!(before > 0.0) || !std::isfinite(before)) continue;
        c /= before;
        double nrm = orthogonalize(v, m, c);
        if (nrm < 1e-8) continue;
        v.col(m) = c / nrm;
        av.col(m) = a * v.col(m);
        ++m;
        ++added;
      }
      if (added == 0 && m < cap) {
        Eigen::VectorXcd c = random_vector();
        double nrm = orthogonalize(v, m, c);
        if (nrm > 1e-10) {
          v.col(m) = c / nrm;
          av.col(m) = a * v.col(m);
          ++m;
        }
      }
    }
    // not converged: restart from current Ritz vectors with a larger subspace
    best.values = theta.head(std::min<Eigen::Index>(k, theta.size()));
    best.vectors = ritz;
    best.residuals = res;
    guess = ritz;
    cap = std::min<Eigen::Index>(n, 2 * cap);
  }
  std::ostringstream msg;
  msg << "davidson did not converge after " << opt.max_restarts << " restarts (" << total_iter
      << " iterations); residuals:";
  for (Eigen::Index i = 0; i < best.residuals.size(); ++i) msg << ' ' << best.residuals[i];
  throw SolverError(msg.str());
}

double lowest_eigenvalue(const SparseMatrix& a, const DavidsonOptions& opt) { return davidson(a, 1, opt).values[0]; }

double highest_eigenvalue(const SparseMatrix& a, const DavidsonOptions& opt) {
  SparseMatrix neg = -a;
  return -davidson(neg, 1, opt).values[0];
}

double hermitian_spectral_norm(const SparseMatrix& a, const DavidsonOptions& opt) {
  if (a.nonZeros() == 0) return 0.0;
  return std::max(std::abs(lowest_eigenvalue(a, opt)), std::abs(highest_eigenvalue(a, opt)));
}

}  // namespace qres
