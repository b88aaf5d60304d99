#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qres/integrals.hpp"
#include "qres/pauli.hpp"

namespace qres {

enum class FragmentKind { commuting, anticommuting, fermionic };
const char* to_string(FragmentKind k);

enum class GateKind { hadamard, phase, cnot };

struct Gate {
  GateKind kind = GateKind::hadamard;
  std::size_t q0 = 0;
  std::size_t q1 = 0;  // target for cnot
};

struct GateCounts {
  double one_qubit = 0.0;
  double two_qubit = 0.0;
  double depth = 0.0;
};

// greedy earliest-slot schedule of unit-time gates on the given qubits
class DepthTracker {
 public:
  explicit DepthTracker(std::size_t n) : free_at_(n, 0) {}
  void add(std::size_t q) { free_at_[q] += 1; }
  void add(std::size_t a, std::size_t b) {
    std::size_t t = std::max(free_at_[a], free_at_[b]) + 1;
    free_at_[a] = free_at_[b] = t;
  }
  std::size_t depth() const;

 private:
  std::vector<std::size_t> free_at_;
};

struct CliffordCircuit {
  std::size_t n_qubits = 0;
  std::vector<Gate> gates;

  void h(std::size_t q) { gates.push_back({GateKind::hadamard, q, 0}); }
  void s(std::size_t q) { gates.push_back({GateKind::phase, q, 0}); }
  void cx(std::size_t c, std::size_t t) { gates.push_back({GateKind::cnot, c, t}); }

  // U P U^dagger, tableau update with exact sign
  PauliProduct conjugate(const PauliProduct& p) const;
  Eigen::MatrixXcd dense() const;
  GateCounts counts() const;
  Eigen::VectorXcd apply(const Eigen::VectorXcd& state) const;
};

struct PauliFragment {
  FragmentKind kind = FragmentKind::commuting;
  std::vector<std::pair<PauliProduct, double>> members;
  std::optional<CliffordCircuit> diagonalizer;

  PauliPolynomial op(std::size_t n_qubits) const;
  double coefficient_norm() const;  // sqrt(sum c^2)
};

struct GivensRotation {
  std::size_t p = 0;
  std::size_t q = 0;
  double angle = 0.0;
};

// operator U^dagger (sum_k l_k n_k + sum_kl L_kl n_k n_l + c) U with n_k built from column k of rotation.
// centered: the quadratic part uses (n_k - 1/2)(n_l - 1/2) instead
struct FermionFragment {
  std::size_t index = 0;
  Eigen::MatrixXd rotation;
  Eigen::VectorXd diag_one_body;
  Eigen::MatrixXd diag_two_body;
  double constant = 0.0;
  bool centered = false;

  std::size_t n() const { return static_cast<std::size_t>(rotation.rows()); }
  bool has_two_body() const { return diag_two_body.size() > 0 && diag_two_body.cwiseAbs().maxCoeff() > 0.0; }
  FermionicOperator to_operator() const;
  // same operator with an occupation-form quadratic part
  FermionFragment uncentered() const;
};

struct FragmentSet {
  FragmentKind kind = FragmentKind::commuting;
  std::string method;
  std::size_t n_qubits = 0;
  double constant = 0.0;
  std::vector<PauliFragment> pauli;
  std::vector<FermionFragment> fermion;
  std::vector<PauliPolynomial> operators;  // qubit form, one per fragment

  std::size_t size() const { return operators.size(); }
  PauliPolynomial total() const;  // sum of fragments plus constant
};

FragmentSet make_fermion_fragment_set(std::vector<FermionFragment> frags, double constant, std::size_t n_qubits,
                                      std::string method);

}  // namespace qres
