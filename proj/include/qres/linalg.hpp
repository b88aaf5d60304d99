#pragma once

#include <cstdint>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "qres/wave_vector.hpp"

namespace qres {

using SparseMatrix = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;

struct DavidsonOptions {
  double tol = 1e-8;          // residual 2-norm per eigenpair
  int max_iterations = 300;   // per attempt
  int max_restarts = 5;       // attempts with a doubled subspace cap
  Eigen::Index max_subspace = 0;  // 0: automatic
  std::uint64_t seed = 20240601;
};

struct EigenResult {
  Eigen::VectorXd values;
  Eigen::MatrixXcd vectors;
  Eigen::VectorXd residuals;
  int iterations = 0;
  int restarts = 0;
};

// lowest k eigenpairs of a Hermitian sparse matrix, block Davidson with diagonal preconditioner
EigenResult davidson(const SparseMatrix& a, int k, const DavidsonOptions& opt = {});

// all eigenpairs, dense; used as oracle and for tiny problems
EigenResult dense_eigen(const Eigen::MatrixXcd& a);

double lowest_eigenvalue(const SparseMatrix& a, const DavidsonOptions& opt = {});
double highest_eigenvalue(const SparseMatrix& a, const DavidsonOptions& opt = {});
// largest singular value of a Hermitian matrix = max |eigenvalue|
double hermitian_spectral_norm(const SparseMatrix& a, const DavidsonOptions& opt = {});

}  // namespace qres
