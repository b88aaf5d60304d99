#pragma once

#include <functional>
#include <vector>

#include "qres/fragments.hpp"
#include "qres/integrals.hpp"
#include "qres/optimize.hpp"
#include "qres/pauli_frag.hpp"
#include "qres/wave_vector.hpp"

namespace qres {

// eigen-decomposition of a spin-block-diagonal symmetric matrix; columns stay spin-pure
// (column 2k+s lives on spin s) whenever the off-spin blocks vanish
void diagonalize_spin_blocks(const Eigen::MatrixXd& m, Eigen::MatrixXd& rotation, Eigen::VectorXd& values);

// fragment 0 is the one-body part, the rest are eps*(sum_pq L_pq E_pq)^2 terms in occupation form.
// supermatrix eigenvalues below tol are dropped.
std::vector<FermionFragment> low_rank_decompose(const FermionicOperator& op, double tol = 1e-6);
std::vector<FermionFragment> low_rank_decompose(const SpinOrbitalIntegrals& ints, double tol = 1e-6);

struct GivensDecomposition {
  std::vector<GivensRotation> rotations;
  Eigen::VectorXd signs;  // trailing diagonal of +-1
};

GivensDecomposition givens_decompose(const Eigen::MatrixXd& rotation);
Eigen::MatrixXd givens_matrix(const GivensRotation& g, std::size_t n);
Eigen::MatrixXd givens_product(const GivensDecomposition& d, std::size_t n);
GateCounts givens_cost(const GivensDecomposition& d, std::size_t n);

// one-body contributions collected into a single re-diagonalized fragment, two-body fragments centered
// (n_p - 1/2)(n_q - 1/2); the operator sum is unchanged up to the returned constant shift
std::vector<FermionFragment> to_reflection_form(const std::vector<FermionFragment>& frags, double* constant_shift = nullptr);

// lambda = sum_p |l'_p|/2 + sum over two-body fragments of sum_{same-spin pq} |L_pq|/4
LcuNorm lcu_norm_lr(const std::vector<FermionFragment>& frags);

struct FluidResult {
  std::vector<FermionFragment> fragments;
  double initial = 0.0;   // objective at zero fluid coefficients
  double final = 0.0;
  bool converged = false;
  std::vector<Eigen::VectorXd> coefficients;  // per two-body fragment
};

// moves c_k n_k (rotated frame) from each two-body fragment into the one-body fragment to
// minimise sum_a sqrt(Var_proxy(H_a))
FluidResult f3_repartition(const std::vector<FermionFragment>& frags, const WaveVector& proxy,
                           const MinimizeOptions& opt = {});

// same fluid mechanism, minimising the LCU 1-norm of the reflection form
FluidResult lr_lcu_optimize(const std::vector<FermionFragment>& frags, const MinimizeOptions& opt = {});

struct SymmetryShift {
  double s0 = 0.0;
  double s1 = 0.0;
  double s2 = 0.0;

  double sector_eigenvalue(int n_electrons) const {
    return s0 + s1 * n_electrons + s2 * static_cast<double>(n_electrons) * n_electrons;
  }
  FermionicOperator fermionic(std::size_t n) const;
  PauliPolynomial qubit(std::size_t n) const;
};

FermionicOperator apply_symmetry_shift(const FermionicOperator& h, const SymmetryShift& shift);
PauliPolynomial apply_symmetry_shift(const PauliPolynomial& h, const SymmetryShift& shift);

struct ShiftSearch {
  SymmetryShift shift;
  double value = 0.0;
  double unshifted = 0.0;
  int evaluations = 0;
};

// coarse grid over (s1, s2) then coordinate search from the best few points; never worse than (0,0)
ShiftSearch optimize_shift(const std::function<double(const SymmetryShift&)>& objective, double s1_range = 3.0,
                           double s2_range = 0.5, double tol = 1e-6);

}  // namespace qres
