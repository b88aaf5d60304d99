#include "qres/qcc.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "qres/errors.hpp"

namespace qres {

namespace {

void apply_pauli_inplace(std::uint64_t x, std::uint64_t z, const Eigen::VectorXcd& in, Eigen::VectorXcd& out) {
  for (Eigen::Index b = 0; b < in.size(); ++b) {
    const auto ub = static_cast<std::uint64_t>(b);
    out[static_cast<Eigen::Index>(ub ^ x)] = pauli_action_phase(x, z, ub) * in[b];
  }
}

// v <- exp(-i s theta P) v, s = +1 for U, -1 for U^dagger
void rotate(const PauliProduct& p, double theta, Eigen::VectorXcd& v, Eigen::VectorXcd& scratch) {
  apply_pauli_inplace(p.x, p.z, v, scratch);
  v = std::cos(theta) * v - cplx(0.0, std::sin(theta)) * ipow(p.phase) * scratch;
}

std::uint64_t reference_index(const WaveVector& ref) {
  if (ref.support() != 1) throw ArgumentError("reference must be a computational basis state");
  return ref.amplitudes().begin()->first;
}

SparseMatrix full_matrix(const PauliPolynomial& h) {
  std::vector<std::uint64_t> basis(std::size_t{1} << h.n_qubits());
  for (std::size_t i = 0; i < basis.size(); ++i) basis[i] = i;
  return sector_matrix(h, basis);
}

}  // namespace

Eigen::VectorXcd QccAnsatz::state(const Eigen::VectorXd& theta) const {
  if (static_cast<std::size_t>(theta.size()) != generators.size())
    throw DimensionError("amplitude count differs from generator count");
  Eigen::VectorXcd v = reference.dense();
  Eigen::VectorXcd scratch(v.size());
  for (std::size_t k = generators.size(); k-- > 0;) rotate(generators[k], theta[static_cast<Eigen::Index>(k)], v, scratch);
  return v;
}

Eigen::VectorXcd QccAnsatz::state() const {
  return state(Eigen::Map<const Eigen::VectorXd>(amplitudes.data(), static_cast<Eigen::Index>(amplitudes.size())));
}

double generator_gradient(const PauliPolynomial& h, std::uint64_t ref, const PauliProduct& p) {
  // -i<b|[H,P]|b> = 2 Im <b|H P|b>
  const std::uint64_t flipped = ref ^ p.x;
  cplx pb = ipow(p.phase) * pauli_action_phase(p.x, p.z, ref);
  cplx hb = 0.0;
  for (const auto& [k, c] : h.terms())
    if (k.x == p.x) hb += c * pauli_action_phase(k.x, k.z, flipped);
  return 2.0 * (hb * pb).imag();
}

std::vector<RankedGenerator> rank_generators(const PauliPolynomial& h, const WaveVector& reference,
                                             std::size_t pool_size) {
  const std::uint64_t ref = reference_index(reference);
  const std::size_t n = h.n_qubits();
  std::set<std::uint64_t> masks;
  double e_ref = 0.0;
  for (const auto& [k, c] : h.terms()) {
    if (k.x) masks.insert(k.x);
    else e_ref += (std::popcount(k.z & ref) & 1) ? -c : c;
  }
  if (masks.empty()) throw PoolError("Hamiltonian is diagonal; no generator connects the reference");

  std::vector<RankedGenerator> out;
  for (std::uint64_t x : masks) {
    // z restricted to the flipped qubits with an odd number of Y
    std::vector<std::size_t> bits;
    for (std::size_t q = 0; q < n; ++q)
      if ((x >> q) & 1) bits.push_back(q);
    RankedGenerator best;
    bool have = false;
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << bits.size()); ++s) {
      if (!(std::popcount(s) & 1)) continue;
      std::uint64_t z = 0;
      for (std::size_t i = 0; i < bits.size(); ++i)
        if ((s >> i) & 1) z |= std::uint64_t{1} << bits[i];
      PauliProduct p{n, x, z, 0};
      double g = generator_gradient(h, ref, p);
      if (!have || std::abs(g) > std::abs(best.gradient) + 1e-12) {
        best.generator = p;
        best.gradient = g;
        have = true;
      }
    }
    double diag = 0.0;
    for (const auto& [k, c] : h.terms())
      if (!k.x) diag += (std::popcount(k.z & (ref ^ x)) & 1) ? -c : c;
    best.secondary = std::abs(diag - e_ref);
    out.push_back(best);
  }
  std::stable_sort(out.begin(), out.end(), [](const RankedGenerator& a, const RankedGenerator& b) {
    double ga = std::round(std::abs(a.gradient) * 1e10), gb = std::round(std::abs(b.gradient) * 1e10);
    if (ga != gb) return ga > gb;
    if (ga == 0.0 && a.secondary != b.secondary) return a.secondary < b.secondary;
    return false;
  });
  if (out.size() > pool_size) out.resize(pool_size);
  return out;
}

double qcc_energy(const SparseMatrix& h, const QccAnsatz& a, const Eigen::VectorXd& theta, Eigen::VectorXd* grad) {
  Eigen::VectorXcd psi = a.state(theta);
  Eigen::VectorXcd hpsi = h * psi;
  const double e = psi.dot(hpsi).real();
  if (grad) {
    const std::size_t K = a.generators.size();
    grad->resize(static_cast<Eigen::Index>(K));
    // phi = U_k..U_K|ref>, chi = U_{k-1}^+..U_1^+ H psi
    Eigen::VectorXcd phi = psi, chi = hpsi, scratch(psi.size()), pphi(psi.size());
    for (std::size_t k = 0; k < K; ++k) {
      const auto& p = a.generators[k];
      apply_pauli_inplace(p.x, p.z, phi, pphi);
      pphi *= ipow(p.phase);
      (*grad)[static_cast<Eigen::Index>(k)] = 2.0 * (chi.dot(cplx(0.0, -1.0) * pphi)).real();
      rotate(p, -theta[static_cast<Eigen::Index>(k)], phi, scratch);
      rotate(p, -theta[static_cast<Eigen::Index>(k)], chi, scratch);
    }
  }
  return e;
}

VqeResult vqe_minimize(const SparseMatrix& h, const QccAnsatz& a, const Eigen::VectorXd& theta0,
                       const MinimizeOptions& opt) {
  VqeResult r;
  if (a.generators.empty()) {
    r.theta = theta0;
    r.energy = qcc_energy(h, a, theta0, nullptr);
    r.converged = true;
    return r;
  }
  ObjectiveGrad fg = [&](const Eigen::VectorXd& t, Eigen::VectorXd& g) { return qcc_energy(h, a, t, &g); };
  MinimizeResult m = lbfgs(fg, theta0, opt);
  r.theta = m.x;
  r.energy = m.f;
  r.converged = m.converged;
  r.iterations = m.iterations;
  return r;
}

VqeResult vqe_minimize(const PauliPolynomial& h, const QccAnsatz& a, const Eigen::VectorXd& theta0,
                       const MinimizeOptions& opt) {
  return vqe_minimize(full_matrix(h), a, theta0, opt);
}

PauliPolynomial iqcc_dress(const PauliPolynomial& h, const PauliProduct& p, double theta) {
  PauliPolynomial out(h.n_qubits());
  const double c2 = std::cos(2.0 * theta), s2 = std::sin(2.0 * theta);
  for (const auto& [k, c] : h.terms()) {
    if (symplectic_commute(p.x, p.z, k.x, k.z)) {
      out.add(k.x, k.z, c);
      continue;
    }
    // anticommuting T: cos(2t) T + i sin(2t) P T
    out.add(k.x, k.z, c * c2);
    PauliProduct t{h.n_qubits(), k.x, k.z, 0};
    PauliProduct pt = multiply(p, t);
    pt.phase += 1;
    out.add(pt, c * s2);
  }
  out.simplify();
  return out;
}

std::vector<QccRow> qcc_run(const PauliPolynomial& h, int n_electrons, const QccOptions& opt) {
  const std::size_t n = h.n_qubits();
  if (n > 20) throw DimensionError("qcc_run statevector limited to 20 qubits");
  std::vector<std::size_t> schedule = opt.schedule;
  std::sort(schedule.begin(), schedule.end());
  if (schedule.empty()) throw ArgumentError("qcc_run: empty N_ent schedule");

  const SparseMatrix hm = full_matrix(h);
  auto pairs = eigenpairs_within(h, opt.window, SymmetrySector::electrons(n_electrons));
  const double e0 = pairs.front().energy;

  QccAnsatz a;
  a.reference = hf_state(n, n_electrons);
  std::vector<double> theta;
  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> noise(0.0, 0.1);
  PauliPolynomial dressed = h;
  std::vector<QccRow> rows;

  for (std::size_t target : schedule) {
    while (a.generators.size() < target) {
      std::size_t want = std::min(opt.batch, target - a.generators.size());
      std::vector<RankedGenerator> ranked;
      try {
        ranked = rank_generators(dressed, a.reference, std::numeric_limits<std::size_t>::max());
      } catch (const PoolError&) {
        break;
      }
      std::size_t added = 0;
      for (const auto& r : ranked) {
        if (added == want) break;
        bool dup = std::any_of(a.generators.begin(), a.generators.end(), [&](const PauliProduct& g) {
          return g.x == r.generator.x && g.z == r.generator.z;
        });
        if (dup) continue;
        a.generators.push_back(r.generator);
        theta.push_back(0.0);
        ++added;
      }
      if (added == 0) break;
      Eigen::VectorXd t0 = Eigen::Map<Eigen::VectorXd>(theta.data(), static_cast<Eigen::Index>(theta.size()));
      VqeResult v = vqe_minimize(hm, a, t0, opt.minimize);
      for (int rs = 0; rs < opt.restarts && v.energy - e0 > opt.restart_threshold; ++rs) {
        Eigen::VectorXd tp = v.theta;
        for (Eigen::Index i = 0; i < tp.size(); ++i) tp[i] += noise(rng);
        VqeResult w = vqe_minimize(hm, a, tp, opt.minimize);
        if (w.energy < v.energy) v = w;
      }
      theta.assign(v.theta.data(), v.theta.data() + v.theta.size());
      // selection for the next batch uses H dressed by every generator at its current amplitude
      dressed = h;
      for (std::size_t k = 0; k < a.generators.size(); ++k) dressed = iqcc_dress(dressed, a.generators[k], theta[k]);
      dressed.simplify(1e-10);
    }
    a.amplitudes = theta;
    Eigen::VectorXd t = Eigen::Map<Eigen::VectorXd>(theta.data(), static_cast<Eigen::Index>(theta.size()));
    QccRow row;
    row.n_ent = target;
    Eigen::VectorXd g;
    row.energy = qcc_energy(hm, a, t, &g);
    row.converged = g.size() == 0 || g.cwiseAbs().maxCoeff() <= 1e-5;
    row.error = row.energy - e0;
    row.overlap = overlap_sum(WaveVector::from_dense(n, a.state(t), 1e-14), pairs, opt.window);
    row.generators = a.generators;
    row.amplitudes = theta;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<QccRow> qcc_run(const SpinOrbitalIntegrals& ints, const QccOptions& opt) {
  return qcc_run(jordan_wigner(assemble_fermionic_hamiltonian(ints)), ints.n_electrons, opt);
}

}  // namespace qres
