#include "qres/wave_vector.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>

#include "qres/errors.hpp"

namespace qres {

WaveVector WaveVector::basis_state(std::size_t n_qubits, std::uint64_t index) {
  if (n_qubits > 64 || (n_qubits < 64 && (index >> n_qubits) != 0))
    throw DimensionError("basis index does not fit the qubit count");
  WaveVector w(n_qubits);
  w.amp_[index] = 1.0;
  return w;
}

WaveVector WaveVector::from_dense(std::size_t n_qubits, const Eigen::VectorXcd& v, double drop) {
  if (n_qubits >= 63 || static_cast<std::uint64_t>(v.size()) != (std::uint64_t{1} << n_qubits))
    throw DimensionError("dense vector length is not 2^n");
  WaveVector w(n_qubits);
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (std::abs(v[i]) > drop && v[i] != cplx(0.0)) w.amp_[static_cast<std::uint64_t>(i)] = v[i];
  return w;
}

cplx WaveVector::amplitude(std::uint64_t index) const {
  auto it = amp_.find(index);
  return it == amp_.end() ? cplx(0.0) : it->second;
}

void WaveVector::set(std::uint64_t index, cplx value) {
  if (value == cplx(0.0)) amp_.erase(index);
  else amp_[index] = value;
}

void WaveVector::add(std::uint64_t index, cplx value) { amp_[index] += value; }

double WaveVector::norm() const {
  double s = 0.0;
  for (const auto& [i, a] : amp_) s += std::norm(a);
  return std::sqrt(s);
}

void WaveVector::normalize() {
  double n = norm();
  if (n == 0.0) throw NormalizationError("cannot normalize a zero vector");
  for (auto& [i, a] : amp_) a /= n;
}

bool WaveVector::is_normalized(double tol) const { return std::abs(norm() - 1.0) <= tol; }

void WaveVector::require_normalized(double tol) const {
  if (!is_normalized(tol))
    throw NormalizationError("state is not normalized (norm " + std::to_string(norm()) + ")");
}

cplx WaveVector::inner(const WaveVector& other) const {
  if (other.n_ != n_) throw DimensionError("qubit count mismatch in inner product");
  cplx s = 0.0;
  const auto& small = amp_.size() <= other.amp_.size() ? amp_ : other.amp_;
  const auto& big = amp_.size() <= other.amp_.size() ? other.amp_ : amp_;
  bool this_small = &small == &amp_;
  for (const auto& [i, a] : small) {
    auto it = big.find(i);
    if (it == big.end()) continue;
    s += this_small ? std::conj(a) * it->second : std::conj(it->second) * a;
  }
  return s;
}

Eigen::VectorXcd WaveVector::dense() const {
  if (n_ > 30) throw DimensionError("dense export limited to 30 qubits");
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(Eigen::Index{1} << n_);
  for (const auto& [i, a] : amp_) v[static_cast<Eigen::Index>(i)] = a;
  return v;
}

void WaveVector::write(std::ostream& out) const {
  out << std::setprecision(17);
  for (const auto& [i, a] : amp_) out << i << ' ' << a.real() << ' ' << a.imag() << '\n';
}

}  // namespace qres
