#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>

#include <Eigen/Dense>

namespace qres {

using cplx = std::complex<double>;

// sparse amplitudes over computational basis states; bit q of the index is qubit q
class WaveVector {
 public:
  WaveVector() = default;
  explicit WaveVector(std::size_t n_qubits) : n_(n_qubits) {}

  static WaveVector basis_state(std::size_t n_qubits, std::uint64_t index);
  static WaveVector from_dense(std::size_t n_qubits, const Eigen::VectorXcd& v, double drop = 0.0);

  std::size_t n_qubits() const { return n_; }
  const std::map<std::uint64_t, cplx>& amplitudes() const { return amp_; }
  std::size_t support() const { return amp_.size(); }

  cplx amplitude(std::uint64_t index) const;
  void set(std::uint64_t index, cplx value);
  void add(std::uint64_t index, cplx value);

  double norm() const;
  void normalize();
  bool is_normalized(double tol = 1e-10) const;
  void require_normalized(double tol = 1e-10) const;

  cplx inner(const WaveVector& other) const;  // <this|other>
  Eigen::VectorXcd dense() const;

  void write(std::ostream& out) const;  // "index re im" lines

 private:
  std::size_t n_ = 0;
  std::map<std::uint64_t, cplx> amp_;
};

}  // namespace qres
