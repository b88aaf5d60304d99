#pragma once

#include <bit>
#include <complex>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qres/integrals.hpp"
#include "qres/wave_vector.hpp"

namespace qres {

// Hermitian convention: a qubit with x=1,z=1 carries Y (not XZ). phase is a power of i.
struct PauliProduct {
  std::size_t n_qubits = 0;
  std::uint64_t x = 0;
  std::uint64_t z = 0;
  int phase = 0;

  bool is_identity() const { return x == 0 && z == 0; }
  int weight() const { return std::popcount(x | z); }
  int y_count() const { return std::popcount(x & z); }
  bool operator==(const PauliProduct& o) const {
    return n_qubits == o.n_qubits && x == o.x && z == o.z && (phase & 3) == (o.phase & 3);
  }
};

// "XIZY": character k acts on qubit k; an optional leading sign or "i"/"-i" sets the phase
PauliProduct parse_pauli(const std::string& label);
std::string pauli_label(const PauliProduct& p);  // letters only
std::string pauli_label(std::size_t n, std::uint64_t x, std::uint64_t z);

PauliProduct multiply(const PauliProduct& a, const PauliProduct& b);
bool commutes(const PauliProduct& a, const PauliProduct& b);
bool anticommutes(const PauliProduct& a, const PauliProduct& b);

// power of i picked up by P(x1,z1) * P(x2,z2) in the Hermitian convention
inline int product_phase(std::uint64_t x1, std::uint64_t z1, std::uint64_t x2, std::uint64_t z2) {
  const std::uint64_t y1 = x1 & z1, xo = x1 & ~z1, zo = ~x1 & z1;
  int g = std::popcount(y1 & z2 & ~x2) - std::popcount(y1 & x2 & ~z2) + std::popcount(xo & z2 & x2) -
          std::popcount(xo & z2 & ~x2) + std::popcount(zo & x2 & ~z2) - std::popcount(zo & x2 & z2);
  return ((g % 4) + 4) % 4;
}

inline bool symplectic_commute(std::uint64_t x1, std::uint64_t z1, std::uint64_t x2, std::uint64_t z2) {
  return ((std::popcount(x1 & z2) + std::popcount(z1 & x2)) & 1) == 0;
}

inline cplx ipow(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

struct PauliKey {
  std::uint64_t x = 0;
  std::uint64_t z = 0;
  // (z, x) as unsigned integers; this is also the tie-break order used by grouping
  bool operator<(const PauliKey& o) const { return z != o.z ? z < o.z : x < o.x; }
  bool operator==(const PauliKey& o) const { return x == o.x && z == o.z; }
};

class PauliPolynomial {
 public:
  static constexpr double kDropTol = 1e-12;

  PauliPolynomial() = default;
  explicit PauliPolynomial(std::size_t n_qubits);

  std::size_t n_qubits() const { return n_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  const std::map<PauliKey, double>& terms() const { return terms_; }

  void add(std::uint64_t x, std::uint64_t z, double c);
  void add(const PauliProduct& p, double c);  // phase must be +-1
  double coefficient(std::uint64_t x, std::uint64_t z) const;
  double constant() const { return coefficient(0, 0); }
  PauliPolynomial without_identity() const;
  double one_norm(bool include_identity = false) const;

  void simplify(double tol = kDropTol);

  PauliPolynomial& operator+=(const PauliPolynomial& o);
  PauliPolynomial& operator-=(const PauliPolynomial& o);
  PauliPolynomial& operator*=(double s);

 private:
  std::size_t n_ = 0;
  std::map<PauliKey, double> terms_;
};

PauliPolynomial operator+(PauliPolynomial a, const PauliPolynomial& b);
PauliPolynomial operator-(PauliPolynomial a, const PauliPolynomial& b);
PauliPolynomial operator*(double s, PauliPolynomial a);

// complex-coefficient sum, used for products and commutators
class PauliSum {
 public:
  PauliSum() = default;
  explicit PauliSum(std::size_t n_qubits) : n_(n_qubits) {}
  static PauliSum from(const PauliPolynomial& p);

  std::size_t n_qubits() const { return n_; }
  const std::map<PauliKey, cplx>& terms() const { return terms_; }
  void add(std::uint64_t x, std::uint64_t z, cplx c) { terms_[{x, z}] += c; }
  void add(const PauliProduct& p, cplx c) { terms_[{p.x, p.z}] += c * ipow(p.phase); }
  void simplify(double tol = PauliPolynomial::kDropTol);
  PauliSum& operator+=(const PauliSum& o);
  PauliSum& operator*=(cplx s);
  double max_abs() const;
  // throws ConsistencyError if an imaginary part exceeds tol
  PauliPolynomial to_hermitian(double tol = 1e-10) const;

 private:
  std::size_t n_ = 0;
  std::map<PauliKey, cplx> terms_;
};

PauliSum operator*(const PauliSum& a, const PauliSum& b);
PauliSum product(const PauliPolynomial& a, const PauliPolynomial& b);
PauliSum commutator(const PauliPolynomial& a, const PauliPolynomial& b);
// i[A,B], Hermitian when A and B are
PauliPolynomial hermitian_commutator(const PauliPolynomial& a, const PauliPolynomial& b);

// E_pq = a+_p a_q under Jordan-Wigner, occupied = bit 1
PauliSum jw_excitation(std::size_t n, std::size_t p, std::size_t q);
PauliPolynomial jordan_wigner(const FermionicOperator& op);
PauliPolynomial jw_number_operator(std::size_t n);

// P|b> = i^{phase + |x&z|} (-1)^{|z&b|} |b^x>
inline cplx pauli_action_phase(std::uint64_t x, std::uint64_t z, std::uint64_t b) {
  int k = std::popcount(x & z) + 2 * (std::popcount(z & b) & 1);
  return ipow(k);
}

WaveVector apply(const PauliPolynomial& h, const WaveVector& psi);
WaveVector apply(const PauliProduct& p, const WaveVector& psi);
double expectation(const PauliPolynomial& h, const WaveVector& psi);
double variance(const PauliPolynomial& h, const WaveVector& psi);

// dense statevector helpers (length 2^n)
Eigen::VectorXcd apply_dense(const PauliPolynomial& h, const Eigen::VectorXcd& v);
Eigen::MatrixXcd dense_matrix(const PauliPolynomial& h);
Eigen::MatrixXcd dense_matrix(const PauliProduct& p);

void write_pauli(std::ostream& out, const PauliPolynomial& h);
PauliPolynomial read_pauli(std::istream& in);

}  // namespace qres
