#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qres {

// dense rank-4 tensor, index order (p,q,r,s)
class Tensor4 {
 public:
  Tensor4() = default;
  explicit Tensor4(std::size_t n) : n_(n), data_(n * n * n * n, 0.0) {}

  double& operator()(std::size_t p, std::size_t q, std::size_t r, std::size_t s) {
    return data_[((p * n_ + q) * n_ + r) * n_ + s];
  }
  double operator()(std::size_t p, std::size_t q, std::size_t r, std::size_t s) const {
    return data_[((p * n_ + q) * n_ + r) * n_ + s];
  }
  std::size_t dim() const { return n_; }
  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }
  double max_abs() const;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

enum class ReferenceKind { restricted, unrestricted };

// h and g live on interleaved spin orbitals: spatial p -> 2p (alpha), 2p+1 (beta).
// g holds chemists' integrals (pq|rs); entries that mix spin inside a pair are zero.
struct SpinOrbitalIntegrals {
  std::size_t n_spin_orbitals = 0;
  int n_electrons = 0;
  Eigen::MatrixXd h;
  Tensor4 g;
  double e_core = 0.0;
  ReferenceKind reference_kind = ReferenceKind::restricted;
  int ms2 = 0;

  std::size_t n_spatial() const { return n_spin_orbitals / 2; }
  // throws ConsistencyError when a type invariant is broken
  void validate(double tol = 1e-10) const;
};

SpinOrbitalIntegrals parse_fcidump(std::istream& in);
SpinOrbitalIntegrals parse_fcidump_string(const std::string& text);
SpinOrbitalIntegrals load_fcidump(const std::string& path);
void write_fcidump(std::ostream& out, const SpinOrbitalIntegrals& ints);

// H = constant + sum h_pq E_pq + sum g_pqrs E_pq E_rs, E_pq = a+_p a_q over spin orbitals
struct FermionicOperator {
  std::size_t n_spin_orbitals = 0;
  double constant = 0.0;
  Eigen::MatrixXd h;
  Tensor4 g;

  static FermionicOperator zero(std::size_t n);
  FermionicOperator& operator+=(const FermionicOperator& o);
  FermionicOperator operator-(const FermionicOperator& o) const;
};

FermionicOperator assemble_fermionic_hamiltonian(const SpinOrbitalIntegrals& ints);

// electron number N = sum_p E_pp and its square, in the same E form
FermionicOperator number_operator(std::size_t n);
FermionicOperator number_squared_operator(std::size_t n);

// rotated one-body operator sum_k c_k n~_k, n~_k = sum_pq U_pk U_qk E_pq
Eigen::MatrixXd rotated_one_body(const Eigen::MatrixXd& rotation, const Eigen::VectorXd& diag);

}  // namespace qres
