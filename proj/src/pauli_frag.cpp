#include "qres/pauli_frag.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "qres/errors.hpp"

namespace qres {

namespace {

bool fits(const PauliFragment& g, const PauliProduct& p, FragmentKind kind) {
  for (const auto& [m, c] : g.members) {
    bool com = symplectic_commute(m.x, m.z, p.x, p.z);
    if (kind == FragmentKind::commuting ? !com : com) return false;
  }
  return true;
}

}  // namespace

FragmentSet sorted_insertion(const PauliPolynomial& h, FragmentKind kind) {
  if (kind == FragmentKind::fermionic) throw KindError("sorted_insertion groups Pauli terms only");
  const std::size_t n = h.n_qubits();
  struct Term {
    std::int64_t mag;
    PauliKey key;
    double c;
  };
  std::vector<Term> terms;
  for (const auto& [k, c] : h.terms()) {
    if (k.x == 0 && k.z == 0) continue;
    // magnitudes equal to 1e-10 count as ties, broken by (z, x)
    terms.push_back({std::llround(std::abs(c) * 1e10), k, c});
  }
  std::stable_sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) {
    if (a.mag != b.mag) return a.mag > b.mag;
    return a.key < b.key;
  });

  FragmentSet fs;
  fs.kind = kind;
  fs.method = kind == FragmentKind::commuting ? "fc-si" : "ac-si";
  fs.n_qubits = n;
  fs.constant = h.constant();
  for (const Term& t : terms) {
    PauliProduct p{n, t.key.x, t.key.z, 0};
    bool placed = false;
    for (auto& g : fs.pauli) {
      if (fits(g, p, kind)) {
        g.members.push_back({p, t.c});
        placed = true;
        break;
      }
    }
    if (!placed) {
      PauliFragment g;
      g.kind = kind;
      g.members.push_back({p, t.c});
      fs.pauli.push_back(std::move(g));
    }
  }
  for (auto& g : fs.pauli) {
    if (kind == FragmentKind::commuting) g.diagonalizer = synthesize_diagonalizer(g, n);
    fs.operators.push_back(g.op(n));
  }
  return fs;
}

CliffordCircuit synthesize_diagonalizer(const PauliFragment& frag, std::size_t n_qubits) {
  for (std::size_t i = 0; i < frag.members.size(); ++i)
    for (std::size_t j = i + 1; j < frag.members.size(); ++j)
      if (!commutes(frag.members[i].first, frag.members[j].first))
        throw KindError("synthesize_diagonalizer: fragment members do not commute");

  CliffordCircuit c;
  c.n_qubits = n_qubits;
  for (const auto& [m, coef] : frag.members) {
    PauliProduct p = c.conjugate(m);
    if (p.x == 0) continue;
    const std::size_t q = static_cast<std::size_t>(std::countr_zero(p.x));
    for (std::size_t r = 0; r < n_qubits; ++r)
      if (r != q && ((p.x >> r) & 1)) c.cx(q, r);
    p = c.conjugate(m);
    if ((p.z >> q) & 1) c.s(q);
    c.h(q);
  }
  for (const auto& [m, coef] : frag.members)
    if (c.conjugate(m).x != 0) throw StateError("diagonalizer synthesis failed");
  return c;
}

LcuNorm lcu_norm_ac(const FragmentSet& fs) {
  if (fs.kind != FragmentKind::anticommuting) throw KindError("lcu_norm_ac needs anticommuting groups");
  LcuNorm r;
  for (const auto& g : fs.pauli) r.lambda += g.coefficient_norm();
  r.count = fs.pauli.size();
  return r;
}

double DiagonalForm::value(std::uint64_t b) const {
  double v = 0.0;
  for (const auto& [z, c] : z_terms) v += (std::popcount(z & b) & 1) ? -c : c;
  return v;
}

DiagonalForm diagonal_form(const PauliFragment& frag) {
  if (!frag.diagonalizer) throw StateError("fragment has no diagonalizer");
  DiagonalForm d;
  for (const auto& [m, c] : frag.members) {
    PauliProduct p = frag.diagonalizer->conjugate(m);
    d.z_terms.push_back({p.z, (p.phase & 3) == 2 ? -c : c});
  }
  return d;
}

}  // namespace qres
