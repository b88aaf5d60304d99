#include "qres/fragments.hpp"

#include <algorithm>
#include <cmath>

#include "qres/errors.hpp"

namespace qres {

const char* to_string(FragmentKind k) {
  switch (k) {
    case FragmentKind::commuting: return "commuting";
    case FragmentKind::anticommuting: return "anticommuting";
    default: return "fermionic";
  }
}

std::size_t DepthTracker::depth() const {
  std::size_t d = 0;
  for (auto t : free_at_) d = std::max(d, t);
  return d;
}

PauliProduct CliffordCircuit::conjugate(const PauliProduct& p) const {
  if (p.n_qubits != n_qubits) throw DimensionError("circuit and Pauli act on different qubit counts");
  PauliProduct r = p;
  auto bit = [](std::uint64_t w, std::size_t q) { return static_cast<int>((w >> q) & 1); };
  for (const Gate& g : gates) {
    const std::uint64_t m0 = std::uint64_t{1} << g.q0;
    if (g.kind == GateKind::hadamard) {
      int x = bit(r.x, g.q0), z = bit(r.z, g.q0);
      if (x & z) r.phase += 2;
      r.x = (r.x & ~m0) | (z ? m0 : 0);
      r.z = (r.z & ~m0) | (x ? m0 : 0);
    } else if (g.kind == GateKind::phase) {
      int x = bit(r.x, g.q0), z = bit(r.z, g.q0);
      if (x & z) r.phase += 2;
      if (x) r.z ^= m0;
    } else {
      const std::uint64_t m1 = std::uint64_t{1} << g.q1;
      int xc = bit(r.x, g.q0), zc = bit(r.z, g.q0), xt = bit(r.x, g.q1), zt = bit(r.z, g.q1);
      if (xc & zt & (xt ^ zc ^ 1)) r.phase += 2;
      if (xc) r.x ^= m1;
      if (zt) r.z ^= m0;
    }
  }
  r.phase &= 3;
  return r;
}

Eigen::VectorXcd CliffordCircuit::apply(const Eigen::VectorXcd& state) const {
  const std::uint64_t dim = static_cast<std::uint64_t>(state.size());
  if (n_qubits >= 40 || dim != (std::uint64_t{1} << n_qubits)) throw DimensionError("state length is not 2^n");
  Eigen::VectorXcd v = state;
  const double r = 1.0 / std::sqrt(2.0);
  for (const Gate& g : gates) {
    const std::uint64_t m0 = std::uint64_t{1} << g.q0;
    if (g.kind == GateKind::hadamard) {
      for (std::uint64_t b = 0; b < dim; ++b) {
        if (b & m0) continue;
        cplx a0 = v[b], a1 = v[b | m0];
        v[b] = r * (a0 + a1);
        v[b | m0] = r * (a0 - a1);
      }
    } else if (g.kind == GateKind::phase) {
      for (std::uint64_t b = 0; b < dim; ++b)
        if (b & m0) v[b] *= cplx(0.0, 1.0);
    } else {
      const std::uint64_t m1 = std::uint64_t{1} << g.q1;
      for (std::uint64_t b = 0; b < dim; ++b)
        if ((b & m0) && !(b & m1)) std::swap(v[b], v[b | m1]);
    }
  }
  return v;
}

Eigen::MatrixXcd CliffordCircuit::dense() const {
  if (n_qubits > 12) throw DimensionError("dense circuit limited to 12 qubits");
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  Eigen::MatrixXcd u(dim, dim);
  for (Eigen::Index c = 0; c < dim; ++c) {
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(dim);
    e[c] = 1.0;
    u.col(c) = apply(e);
  }
  return u;
}

GateCounts CliffordCircuit::counts() const {
  GateCounts c;
  DepthTracker d(std::max<std::size_t>(n_qubits, 1));
  for (const Gate& g : gates) {
    if (g.kind == GateKind::cnot) {
      c.two_qubit += 1;
      d.add(g.q0, g.q1);
    } else {
      c.one_qubit += 1;
      d.add(g.q0);
    }
  }
  c.depth = static_cast<double>(d.depth());
  return c;
}

PauliPolynomial PauliFragment::op(std::size_t n_qubits) const {
  PauliPolynomial p(n_qubits);
  for (const auto& [pp, c] : members) p.add(pp, c);
  p.simplify();
  return p;
}

double PauliFragment::coefficient_norm() const {
  double s = 0.0;
  for (const auto& m : members) s += m.second * m.second;
  return std::sqrt(s);
}

FermionicOperator FermionFragment::to_operator() const {
  const std::size_t N = n();
  FermionicOperator f = FermionicOperator::zero(N);
  f.constant = constant;
  Eigen::VectorXd d1 = diag_one_body.size() ? diag_one_body : Eigen::VectorXd::Zero(N);
  const bool two = diag_two_body.size() > 0;
  if (two && centered) {
    d1 -= diag_two_body.rowwise().sum();
    f.constant += 0.25 * diag_two_body.sum();
  }
  f.h = rotation * d1.asDiagonal() * rotation.transpose();
  if (two) {
    const Eigen::Index K = rotation.cols(), NN = static_cast<Eigen::Index>(N * N);
    Eigen::MatrixXd m(K, NN);
    for (Eigen::Index k = 0; k < K; ++k)
      for (std::size_t p = 0; p < N; ++p)
        for (std::size_t q = 0; q < N; ++q)
          m(k, static_cast<Eigen::Index>(p * N + q)) = rotation(p, k) * rotation(q, k);
    Eigen::MatrixXd big = m.transpose() * diag_two_body * m;
    auto& g = f.g.data();
    for (Eigen::Index i = 0; i < NN; ++i)
      for (Eigen::Index j = 0; j < NN; ++j) g[static_cast<std::size_t>(i * NN + j)] = big(i, j);
  }
  return f;
}

FermionFragment FermionFragment::uncentered() const {
  FermionFragment f = *this;
  if (centered && diag_two_body.size()) {
    if (f.diag_one_body.size() == 0) f.diag_one_body = Eigen::VectorXd::Zero(n());
    f.diag_one_body -= diag_two_body.rowwise().sum();
    f.constant += 0.25 * diag_two_body.sum();
  }
  f.centered = false;
  return f;
}

PauliPolynomial FragmentSet::total() const {
  PauliPolynomial t(n_qubits);
  t.add(0, 0, constant);
  for (const auto& op : operators) t += op;
  t.simplify();
  return t;
}

FragmentSet make_fermion_fragment_set(std::vector<FermionFragment> frags, double constant, std::size_t n_qubits,
                                      std::string method) {
  FragmentSet fs;
  fs.kind = FragmentKind::fermionic;
  fs.method = std::move(method);
  fs.n_qubits = n_qubits;
  fs.constant = constant;
  for (auto& f : frags) fs.operators.push_back(jordan_wigner(f.to_operator()));
  fs.fermion = std::move(frags);
  return fs;
}

}  // namespace qres
