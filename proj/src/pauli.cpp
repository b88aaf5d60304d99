#include "qres/pauli.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "qres/errors.hpp"

namespace qres {

PauliProduct parse_pauli(const std::string& label) {
  std::string s = label;
  int phase = 0;
  std::size_t pos = 0;
  if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
    if (s[pos] == '-') phase = 2;
    ++pos;
  }
  if (pos < s.size() && s[pos] == 'i') {
    phase += 1;
    ++pos;
  }
  PauliProduct p;
  p.n_qubits = s.size() - pos;
  if (p.n_qubits > 64) throw DimensionError("Pauli label longer than 64 qubits");
  for (std::size_t q = 0; pos < s.size(); ++pos, ++q) {
    std::uint64_t bit = std::uint64_t{1} << q;
    switch (s[pos]) {
      case 'I': break;
      case 'X': p.x |= bit; break;
      case 'Y': p.x |= bit; p.z |= bit; break;
      case 'Z': p.z |= bit; break;
      default: throw ParseError("bad Pauli label '" + label + "'");
    }
  }
  p.phase = phase % 4;
  return p;
}

std::string pauli_label(std::size_t n, std::uint64_t x, std::uint64_t z) {
  std::string s(n, 'I');
  for (std::size_t q = 0; q < n; ++q) {
    bool xb = (x >> q) & 1, zb = (z >> q) & 1;
    s[q] = xb ? (zb ? 'Y' : 'X') : (zb ? 'Z' : 'I');
  }
  return s;
}

std::string pauli_label(const PauliProduct& p) { return pauli_label(p.n_qubits, p.x, p.z); }

PauliProduct multiply(const PauliProduct& a, const PauliProduct& b) {
  if (a.n_qubits != b.n_qubits) throw DimensionError("Pauli products act on different qubit counts");
  PauliProduct r;
  r.n_qubits = a.n_qubits;
  r.x = a.x ^ b.x;
  r.z = a.z ^ b.z;
  r.phase = (a.phase + b.phase + product_phase(a.x, a.z, b.x, b.z)) & 3;
  return r;
}

bool commutes(const PauliProduct& a, const PauliProduct& b) {
  if (a.n_qubits != b.n_qubits) throw DimensionError("Pauli products act on different qubit counts");
  return symplectic_commute(a.x, a.z, b.x, b.z);
}

bool anticommutes(const PauliProduct& a, const PauliProduct& b) { return !commutes(a, b); }

PauliPolynomial::PauliPolynomial(std::size_t n_qubits) : n_(n_qubits) {
  if (n_qubits > 64) throw DimensionError("at most 64 qubits supported");
}

void PauliPolynomial::add(std::uint64_t x, std::uint64_t z, double c) {
  if (c == 0.0) return;
  terms_[{x, z}] += c;
}

void PauliPolynomial::add(const PauliProduct& p, double c) {
  if (p.n_qubits != n_) throw DimensionError("Pauli product does not match polynomial qubit count");
  int ph = p.phase & 3;
  if (ph == 1 || ph == 3) throw ConsistencyError("imaginary phase in a real Pauli polynomial");
  add(p.x, p.z, ph == 2 ? -c : c);
}

double PauliPolynomial::coefficient(std::uint64_t x, std::uint64_t z) const {
  auto it = terms_.find({x, z});
  return it == terms_.end() ? 0.0 : it->second;
}

PauliPolynomial PauliPolynomial::without_identity() const {
  PauliPolynomial r = *this;
  r.terms_.erase({0, 0});
  return r;
}

double PauliPolynomial::one_norm(bool include_identity) const {
  double s = 0.0;
  for (const auto& [k, c] : terms_)
    if (include_identity || k.x || k.z) s += std::abs(c);
  return s;
}

void PauliPolynomial::simplify(double tol) {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (std::abs(it->second) < tol) it = terms_.erase(it);
    else ++it;
  }
}

PauliPolynomial& PauliPolynomial::operator+=(const PauliPolynomial& o) {
  if (o.n_ != n_) throw DimensionError("qubit count mismatch");
  for (const auto& [k, c] : o.terms_) terms_[k] += c;
  simplify();
  return *this;
}

PauliPolynomial& PauliPolynomial::operator-=(const PauliPolynomial& o) {
  if (o.n_ != n_) throw DimensionError("qubit count mismatch");
  for (const auto& [k, c] : o.terms_) terms_[k] -= c;
  simplify();
  return *this;
}

PauliPolynomial& PauliPolynomial::operator*=(double s) {
  for (auto& [k, c] : terms_) c *= s;
  simplify();
  return *this;
}

PauliPolynomial operator+(PauliPolynomial a, const PauliPolynomial& b) { return a += b; }
PauliPolynomial operator-(PauliPolynomial a, const PauliPolynomial& b) { return a -= b; }
PauliPolynomial operator*(double s, PauliPolynomial a) { return a *= s; }

PauliSum PauliSum::from(const PauliPolynomial& p) {
  PauliSum s(p.n_qubits());
  for (const auto& [k, c] : p.terms()) s.terms_[k] = c;
  return s;
}

void PauliSum::simplify(double tol) {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (std::abs(it->second) < tol) it = terms_.erase(it);
    else ++it;
  }
}

PauliSum& PauliSum::operator+=(const PauliSum& o) {
  if (o.n_ != n_) throw DimensionError("qubit count mismatch");
  for (const auto& [k, c] : o.terms_) terms_[k] += c;
  return *this;
}

PauliSum& PauliSum::operator*=(cplx s) {
  for (auto& [k, c] : terms_) c *= s;
  return *this;
}

double PauliSum::max_abs() const {
  double m = 0.0;
  for (const auto& [k, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

PauliPolynomial PauliSum::to_hermitian(double tol) const {
  PauliPolynomial p(n_);
  for (const auto& [k, c] : terms_) {
    if (std::abs(c.imag()) > tol)
      throw ConsistencyError("operator is not Hermitian: imaginary coefficient " + std::to_string(c.imag()) +
                             " on " + pauli_label(n_, k.x, k.z));
    p.add(k.x, k.z, c.real());
  }
  p.simplify();
  return p;
}

PauliSum operator*(const PauliSum& a, const PauliSum& b) {
  if (a.n_qubits() != b.n_qubits()) throw DimensionError("qubit count mismatch");
  PauliSum r(a.n_qubits());
  for (const auto& [ka, ca] : a.terms())
    for (const auto& [kb, cb] : b.terms())
      r.add(ka.x ^ kb.x, ka.z ^ kb.z, ca * cb * ipow(product_phase(ka.x, ka.z, kb.x, kb.z)));
  r.simplify();
  return r;
}

PauliSum product(const PauliPolynomial& a, const PauliPolynomial& b) {
  return PauliSum::from(a) * PauliSum::from(b);
}

PauliSum commutator(const PauliPolynomial& a, const PauliPolynomial& b) {
  if (a.n_qubits() != b.n_qubits()) throw DimensionError("qubit count mismatch");
  // only anticommuting pairs survive: [P,Q] = 2PQ
  PauliSum r(a.n_qubits());
  for (const auto& [ka, ca] : a.terms())
    for (const auto& [kb, cb] : b.terms()) {
      if (symplectic_commute(ka.x, ka.z, kb.x, kb.z)) continue;
      r.add(ka.x ^ kb.x, ka.z ^ kb.z, 2.0 * ca * cb * ipow(product_phase(ka.x, ka.z, kb.x, kb.z)));
    }
  r.simplify();
  return r;
}

PauliPolynomial hermitian_commutator(const PauliPolynomial& a, const PauliPolynomial& b) {
  PauliSum c = commutator(a, b);
  c *= cplx(0.0, 1.0);
  return c.to_hermitian();
}

PauliSum jw_excitation(std::size_t n, std::size_t p, std::size_t q) {
  if (p >= n || q >= n) throw IndexError("spin-orbital index out of range");
  auto ladder = [n](std::size_t k, bool create) {
    PauliSum s(n);
    std::uint64_t bit = std::uint64_t{1} << k;
    std::uint64_t tail = bit - 1;
    s.add(bit, tail, 0.5);
    s.add(bit, tail | bit, create ? cplx(0.0, -0.5) : cplx(0.0, 0.5));
    return s;
  };
  return ladder(p, true) * ladder(q, false);
}

PauliPolynomial jordan_wigner(const FermionicOperator& op) {
  const std::size_t n = op.n_spin_orbitals;
  std::vector<PauliSum> e(n * n);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q) e[p * n + q] = jw_excitation(n, p, q);

  PauliSum total(n);
  total.add(0, 0, op.constant);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q) {
      double h = op.h(p, q);
      if (h != 0.0) {
        PauliSum t = e[p * n + q];
        t *= h;
        total += t;
      }
      PauliSum b(n);
      bool any = false;
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = 0; s < n; ++s) {
          double v = op.g(p, q, r, s);
          if (v == 0.0) continue;
          any = true;
          for (const auto& [k, c] : e[r * n + s].terms()) b.add(k.x, k.z, v * c);
        }
      if (any) total += e[p * n + q] * b;
    }
  total.simplify();
  return total.to_hermitian(1e-9);
}

PauliPolynomial jw_number_operator(std::size_t n) {
  PauliPolynomial p(n);
  p.add(0, 0, 0.5 * static_cast<double>(n));
  for (std::size_t q = 0; q < n; ++q) p.add(0, std::uint64_t{1} << q, -0.5);
  return p;
}

WaveVector apply(const PauliPolynomial& h, const WaveVector& psi) {
  if (h.n_qubits() != psi.n_qubits()) throw DimensionError("operator and state qubit counts differ");
  WaveVector out(psi.n_qubits());
  for (const auto& [b, a] : psi.amplitudes())
    for (const auto& [k, c] : h.terms()) out.add(b ^ k.x, c * a * pauli_action_phase(k.x, k.z, b));
  WaveVector clean(psi.n_qubits());
  for (const auto& [b, a] : out.amplitudes())
    if (std::abs(a) > 1e-15) clean.set(b, a);
  return clean;
}

WaveVector apply(const PauliProduct& p, const WaveVector& psi) {
  if (p.n_qubits != psi.n_qubits()) throw DimensionError("operator and state qubit counts differ");
  WaveVector out(psi.n_qubits());
  cplx ph = ipow(p.phase);
  for (const auto& [b, a] : psi.amplitudes()) out.set(b ^ p.x, ph * a * pauli_action_phase(p.x, p.z, b));
  return out;
}

double expectation(const PauliPolynomial& h, const WaveVector& psi) {
  psi.require_normalized();
  return psi.inner(apply(h, psi)).real();
}

double variance(const PauliPolynomial& h, const WaveVector& psi) {
  psi.require_normalized();
  WaveVector hp = apply(h, psi);
  double e = psi.inner(hp).real();
  double v = hp.inner(hp).real() - e * e;
  return v < 0.0 ? 0.0 : v;
}

Eigen::VectorXcd apply_dense(const PauliPolynomial& h, const Eigen::VectorXcd& v) {
  const std::uint64_t dim = static_cast<std::uint64_t>(v.size());
  if (h.n_qubits() >= 63 || dim != (std::uint64_t{1} << h.n_qubits()))
    throw DimensionError("dense vector length is not 2^n");
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(v.size());
  for (const auto& [k, c] : h.terms()) {
    cplx base = c * ipow(std::popcount(k.x & k.z));
    for (std::uint64_t b = 0; b < dim; ++b) {
      cplx t = base * v[b];
      if (std::popcount(k.z & b) & 1) t = -t;
      out[b ^ k.x] += t;
    }
  }
  return out;
}

Eigen::MatrixXcd dense_matrix(const PauliPolynomial& h) {
  if (h.n_qubits() > 14) throw DimensionError("dense matrices limited to 14 qubits");
  const std::uint64_t dim = std::uint64_t{1} << h.n_qubits();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& [k, c] : h.terms())
    for (std::uint64_t b = 0; b < dim; ++b) m(b ^ k.x, b) += c * pauli_action_phase(k.x, k.z, b);
  return m;
}

Eigen::MatrixXcd dense_matrix(const PauliProduct& p) {
  if (p.n_qubits > 14) throw DimensionError("dense matrices limited to 14 qubits");
  const std::uint64_t dim = std::uint64_t{1} << p.n_qubits;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::uint64_t b = 0; b < dim; ++b) m(b ^ p.x, b) = ipow(p.phase) * pauli_action_phase(p.x, p.z, b);
  return m;
}

void write_pauli(std::ostream& out, const PauliPolynomial& h) {
  std::ostringstream ss;
  ss << std::setprecision(17);
  for (const auto& [k, c] : h.terms()) ss << c << ' ' << pauli_label(h.n_qubits(), k.x, k.z) << '\n';
  out << ss.str();
}

PauliPolynomial read_pauli(std::istream& in) {
  PauliPolynomial p;
  bool first = true;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    double c;
    std::string label;
    if (!(ls >> c)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      throw ParseError("bad Pauli polynomial line: " + line);
    }
    if (!(ls >> label)) throw ParseError("missing Pauli label: " + line);
    PauliProduct pp = parse_pauli(label);
    if (first) {
      p = PauliPolynomial(pp.n_qubits);
      first = false;
    }
    p.add(pp, c);
  }
  p.simplify();
  return p;
}

}  // namespace qres
