#include "qres/states.hpp"

#include <algorithm>
#include <bitset>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "qres/errors.hpp"

namespace qres {

namespace {

// fix the global phase: largest amplitude real and positive (first index on ties)
void fix_phase(Eigen::VectorXcd& v) {
  Eigen::Index best = 0;
  double m = -1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    double a = std::abs(v[i]);
    if (a > m + 1e-12) {
      m = a;
      best = i;
    }
  }
  if (m > 0) v *= std::conj(v[best]) / m;
}

struct BasisIndex {
  const std::vector<std::uint64_t>& basis;
  bool contiguous;
  explicit BasisIndex(const std::vector<std::uint64_t>& b) : basis(b) {
    contiguous = !b.empty() && b.front() == 0 && b.back() == b.size() - 1;
  }
  std::int64_t find(std::uint64_t s) const {
    if (contiguous) return s < basis.size() ? static_cast<std::int64_t>(s) : -1;
    auto it = std::lower_bound(basis.begin(), basis.end(), s);
    if (it == basis.end() || *it != s) return -1;
    return it - basis.begin();
  }
};

}  // namespace

std::vector<std::uint64_t> sector_basis(std::size_t n_qubits, const SymmetrySector& sector) {
  if (n_qubits > 26) throw DimensionError("sector enumeration limited to 26 qubits");
  if (sector.generators.size() != sector.eigenvalues.size())
    throw ArgumentError("sector needs one eigenvalue per generator");
  for (const auto& g : sector.generators)
    if (g.x != 0) throw SymmetryError("only Z-type symmetry generators define a basis sector");
  const std::uint64_t dim = std::uint64_t{1} << n_qubits;
  std::vector<std::uint64_t> out;
  for (std::uint64_t b = 0; b < dim; ++b) {
    if (sector.electron_count && std::popcount(b) != *sector.electron_count) continue;
    bool ok = true;
    for (std::size_t i = 0; i < sector.generators.size() && ok; ++i) {
      int ev = (std::popcount(sector.generators[i].z & b) & 1) ? -1 : 1;
      if (sector.generators[i].phase == 2) ev = -ev;
      ok = ev == sector.eigenvalues[i];
    }
    if (ok) out.push_back(b);
  }
  return out;
}

SparseMatrix sector_matrix(const PauliPolynomial& h, const std::vector<std::uint64_t>& basis, bool strict) {
  BasisIndex index(basis);
  // group terms sharing a flip pattern
  std::map<std::uint64_t, std::vector<std::pair<std::uint64_t, double>>> by_x;
  for (const auto& [k, c] : h.terms()) by_x[k.x].push_back({k.z, c});

  std::vector<Eigen::Triplet<cplx>> trip;
  trip.reserve(basis.size() * std::min<std::size_t>(by_x.size(), 64));
  for (std::size_t j = 0; j < basis.size(); ++j) {
    const std::uint64_t b = basis[j];
    for (const auto& [x, zs] : by_x) {
      cplx v = 0.0;
      for (const auto& [z, c] : zs) v += c * pauli_action_phase(x, z, b);
      if (std::abs(v) < 1e-14) continue;
      std::int64_t i = index.find(b ^ x);
      if (i < 0) {
        if (strict && std::abs(v) > 1e-10) throw SymmetryError("operator leaks out of the requested sector");
        continue;
      }
      trip.emplace_back(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j), v);
    }
  }
  SparseMatrix m(static_cast<Eigen::Index>(basis.size()), static_cast<Eigen::Index>(basis.size()));
  m.setFromTriplets(trip.begin(), trip.end());
  m.prune(cplx(0.0), 1e-300);
  return m;
}

WaveVector embed(std::size_t n_qubits, const std::vector<std::uint64_t>& basis, const Eigen::VectorXcd& v) {
  WaveVector w(n_qubits);
  for (std::size_t i = 0; i < basis.size(); ++i)
    if (std::abs(v[static_cast<Eigen::Index>(i)]) > 1e-14) w.set(basis[i], v[static_cast<Eigen::Index>(i)]);
  return w;
}

Eigen::VectorXcd restrict_to(const WaveVector& psi, const std::vector<std::uint64_t>& basis) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) v[static_cast<Eigen::Index>(i)] = psi.amplitude(basis[i]);
  return v;
}

void check_sector_commutes(const PauliPolynomial& op, const SymmetrySector& sector) {
  for (const auto& g : sector.generators) {
    PauliPolynomial gp(op.n_qubits());
    gp.add(g.x, g.z, 1.0);
    if (commutator(op, gp).max_abs() > 1e-10) throw SymmetryError("symmetry generator " + pauli_label(g) + " does not commute with a fragment");
  }
  if (sector.electron_count) {
    if (commutator(op, jw_number_operator(op.n_qubits())).max_abs() > 1e-10)
      throw SymmetryError("fragment does not conserve the electron number");
  }
}

std::vector<EigenPair> eigensolve(const PauliPolynomial& h, int k, const SymmetrySector& sector,
                                  const DavidsonOptions& opt) {
  if (k < 1) throw ArgumentError("eigensolve: k must be at least 1");
  auto basis = sector_basis(h.n_qubits(), sector);
  if (basis.empty()) throw ArgumentError("eigensolve: empty sector");
  k = std::min<int>(k, static_cast<int>(basis.size()));
  SparseMatrix m = sector_matrix(h, basis);
  EigenResult r = davidson(m, k, opt);
  std::vector<EigenPair> out;
  for (int i = 0; i < k; ++i) {
    Eigen::VectorXcd v = r.vectors.col(i);
    fix_phase(v);
    out.push_back({r.values[i], embed(h.n_qubits(), basis, v), r.residuals[i]});
  }
  return out;
}

std::vector<EigenPair> eigenpairs_within(const PauliPolynomial& h, double eps, const SymmetrySector& sector) {
  auto basis = sector_basis(h.n_qubits(), sector);
  const int dim = static_cast<int>(basis.size());
  int k = std::min(dim, 4);
  while (true) {
    auto pairs = eigensolve(h, k, sector);
    const double e0 = pairs.front().energy;
    std::size_t last = 0;
    for (std::size_t i = 1; i < pairs.size(); ++i) {
      if (pairs[i].energy - e0 <= eps + 1e-9 || pairs[i].energy - pairs[i - 1].energy <= 1e-9) last = i;
      else break;
    }
    if (last + 1 < pairs.size() || k == dim) {
      pairs.resize(last + 1);
      return pairs;
    }
    k = std::min(dim, 2 * k);
  }
}

WaveVector hf_state(std::size_t n_qubits, int n_electrons) {
  if (n_electrons < 0 || static_cast<std::size_t>(n_electrons) > n_qubits || n_qubits > 64)
    throw DimensionError("hf_state: electron count exceeds qubit count");
  std::uint64_t b = n_electrons == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n_electrons) - 1;
  return WaveVector::basis_state(n_qubits, b);
}

CisdResult cisd_state(const PauliPolynomial& hq, const WaveVector& reference, std::optional<double> e0,
                      double keep_weight) {
  if (reference.support() != 1) throw ArgumentError("cisd_state: reference must be a single determinant");
  const std::size_t n = hq.n_qubits();
  const std::uint64_t ref = reference.amplitudes().begin()->first;
  std::uint64_t alpha = 0;
  for (std::size_t q = 0; q < n; q += 2) alpha |= std::uint64_t{1} << q;
  const int ne = std::popcount(ref), na = std::popcount(ref & alpha);

  std::vector<std::uint64_t> basis;
  for (std::uint64_t b = 0; b < (std::uint64_t{1} << n); ++b)
    if (std::popcount(b) == ne && std::popcount(b & alpha) == na && std::popcount(b ^ ref) <= 4) basis.push_back(b);

  SparseMatrix m = sector_matrix(hq, basis);
  EigenResult r;
  try {
    r = davidson(m, 1);
  } catch (const SolverError& e) {
    throw SolverError(std::string("cisd_state: ") + e.what());
  }
  Eigen::VectorXcd v = r.vectors.col(0);
  fix_phase(v);

  CisdResult out;
  out.energy = r.values[0];
  out.space_dimension = basis.size();
  out.full = embed(n, basis, v);
  if (e0) out.error = out.energy - *e0;

  std::vector<std::size_t> order(basis.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    double wa = std::norm(v[static_cast<Eigen::Index>(a)]), wb = std::norm(v[static_cast<Eigen::Index>(b)]);
    if (std::abs(wa - wb) > 1e-14) return wa > wb;
    return basis[a] < basis[b];
  });
  WaveVector kept(n);
  double w = 0.0;
  for (std::size_t i : order) {
    if (w >= keep_weight) break;
    cplx a = v[static_cast<Eigen::Index>(i)];
    kept.set(basis[i], a);
    w += std::norm(a);
  }
  out.kept_weight = w;
  out.determinants_kept = kept.support();
  kept.normalize();
  out.state = kept;
  return out;
}

CisdResult cisd_state(const SpinOrbitalIntegrals& ints, const WaveVector& reference, std::optional<double> e0,
                      double keep_weight) {
  return cisd_state(jordan_wigner(assemble_fermionic_hamiltonian(ints)), reference, e0, keep_weight);
}

namespace {

using Row = std::bitset<128>;

// basis of {v : row.v = 0 for all rows} over GF(2), columns [0, ncols)
std::vector<Row> gf2_kernel(std::vector<Row> rows, std::size_t ncols) {
  std::vector<int> pivot_col;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < ncols && rank < rows.size(); ++c) {
    std::size_t p = rank;
    while (p < rows.size() && !rows[p][c]) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[p], rows[rank]);
    for (std::size_t r = 0; r < rows.size(); ++r)
      if (r != rank && rows[r][c]) rows[r] ^= rows[rank];
    pivot_col.push_back(static_cast<int>(c));
    ++rank;
  }
  std::vector<bool> is_pivot(ncols, false);
  for (int c : pivot_col) is_pivot[static_cast<std::size_t>(c)] = true;
  std::vector<Row> kernel;
  for (std::size_t f = 0; f < ncols; ++f) {
    if (is_pivot[f]) continue;
    Row v;
    v[f] = true;
    for (std::size_t r = 0; r < rank; ++r)
      if (rows[r][f]) v[static_cast<std::size_t>(pivot_col[r])] = true;
    kernel.push_back(v);
  }
  return kernel;
}

}  // namespace

std::vector<PauliProduct> find_pauli_symmetries(const std::vector<PauliPolynomial>& ops) {
  if (ops.empty()) return {};
  const std::size_t n = ops.front().n_qubits();
  std::vector<Row> rows;
  for (const auto& op : ops) {
    if (op.n_qubits() != n) throw DimensionError("fragments act on different qubit counts");
    for (const auto& [k, c] : op.terms()) {
      if (k.x == 0 && k.z == 0) continue;
      Row r;
      for (std::size_t q = 0; q < n; ++q) {
        r[q] = (k.z >> q) & 1;       // pairs with the candidate's x bits
        r[n + q] = (k.x >> q) & 1;   // pairs with the candidate's z bits
      }
      rows.push_back(r);
    }
  }
  std::vector<PauliProduct> out;
  for (const Row& v : gf2_kernel(rows, 2 * n)) {
    PauliProduct p;
    p.n_qubits = n;
    for (std::size_t q = 0; q < n; ++q) {
      if (v[q]) p.x |= std::uint64_t{1} << q;
      if (v[n + q]) p.z |= std::uint64_t{1} << q;
    }
    out.push_back(p);
  }
  return out;
}

std::vector<PauliProduct> find_z_symmetries(const std::vector<PauliPolynomial>& ops) {
  if (ops.empty()) return {};
  const std::size_t n = ops.front().n_qubits();
  std::vector<Row> rows;
  for (const auto& op : ops)
    for (const auto& [k, c] : op.terms()) {
      if (k.x == 0) continue;
      Row r;
      for (std::size_t q = 0; q < n; ++q) r[q] = (k.x >> q) & 1;
      rows.push_back(r);
    }
  std::vector<PauliProduct> out;
  for (const Row& v : gf2_kernel(rows, n)) {
    PauliProduct p;
    p.n_qubits = n;
    for (std::size_t q = 0; q < n; ++q)
      if (v[q]) p.z |= std::uint64_t{1} << q;
    out.push_back(p);
  }
  return out;
}

SymmetrySector sector_from_reference(const std::vector<PauliProduct>& symmetries, const WaveVector& reference) {
  if (reference.support() != 1) throw ArgumentError("sector_from_reference: reference must be a basis state");
  const std::uint64_t b = reference.amplitudes().begin()->first;
  SymmetrySector s;
  for (const auto& p : symmetries) {
    if (p.x != 0) continue;
    PauliProduct g = p;
    g.phase = 0;
    s.generators.push_back(g);
    s.eigenvalues.push_back((std::popcount(p.z & b) & 1) ? -1 : 1);
  }
  return s;
}

double overlap_sum(const WaveVector& phi, const std::vector<EigenPair>& pairs, double eps) {
  if (pairs.empty()) throw ArgumentError("overlap_sum: no eigenpairs supplied");
  if (eps < 0) throw ArgumentError("overlap_sum: eps must be non-negative");
  const double e0 = pairs.front().energy;
  double s = 0.0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    bool in = pairs[i].energy - e0 <= eps + 1e-12;
    if (!in && i > 0 && pairs[i].energy - pairs[i - 1].energy <= 1e-9 && pairs[i - 1].energy - e0 <= eps + 1e-9) in = true;
    if (!in) break;
    s += std::norm(pairs[i].state.inner(phi));
  }
  return s;
}

}  // namespace qres
