#include "qres/fermion_frag.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qres/errors.hpp"
#include "qres/states.hpp"

namespace qres {

void diagonalize_spin_blocks(const Eigen::MatrixXd& m, Eigen::MatrixXd& rotation, Eigen::VectorXd& values) {
  const Eigen::Index N = m.rows();
  Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
  double scale = std::max(1.0, sym.cwiseAbs().maxCoeff());
  bool blocked = N % 2 == 0;
  for (Eigen::Index p = 0; p < N && blocked; ++p)
    for (Eigen::Index q = 0; q < N && blocked; ++q)
      if ((p + q) % 2 && std::abs(sym(p, q)) > 1e-12 * scale) blocked = false;
  if (!blocked) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
    rotation = es.eigenvectors();
    values = es.eigenvalues();
    return;
  }
  const Eigen::Index n = N / 2;
  rotation = Eigen::MatrixXd::Zero(N, N);
  values = Eigen::VectorXd::Zero(N);
  for (Eigen::Index s = 0; s < 2; ++s) {
    Eigen::MatrixXd b(n, n);
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = 0; q < n; ++q) b(p, q) = sym(2 * p + s, 2 * q + s);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b);
    for (Eigen::Index k = 0; k < n; ++k) {
      values[2 * k + s] = es.eigenvalues()[k];
      for (Eigen::Index p = 0; p < n; ++p) rotation(2 * p + s, 2 * k + s) = es.eigenvectors()(p, k);
    }
  }
}

namespace {

// 0/1 for a column living on one spin, -1 when mixed
std::vector<int> spin_tags(const Eigen::MatrixXd& u) {
  std::vector<int> tags(static_cast<std::size_t>(u.cols()), -1);
  for (Eigen::Index k = 0; k < u.cols(); ++k) {
    double w[2] = {0.0, 0.0};
    for (Eigen::Index p = 0; p < u.rows(); ++p) w[p % 2] += u(p, k) * u(p, k);
    if (w[1] <= 1e-10) tags[static_cast<std::size_t>(k)] = 0;
    else if (w[0] <= 1e-10) tags[static_cast<std::size_t>(k)] = 1;
  }
  return tags;
}

FermionFragment one_body_fragment(const Eigen::MatrixXd& h, double constant = 0.0) {
  FermionFragment f;
  diagonalize_spin_blocks(h, f.rotation, f.diag_one_body);
  f.constant = constant;
  return f;
}

}  // namespace

std::vector<FermionFragment> low_rank_decompose(const FermionicOperator& op, double tol) {
  const std::size_t N = op.n_spin_orbitals;
  if (N % 2) throw ConsistencyError("low_rank_decompose expects interleaved spin orbitals");
  const std::size_t n = N / 2;
  std::vector<FermionFragment> out;
  out.push_back(one_body_fragment(op.h));

  const double scale = std::max(1.0, op.g.max_abs());
  const Eigen::Index dim = static_cast<Eigen::Index>(2 * n * n);
  auto idx = [n](std::size_t P, std::size_t Q) {
    return static_cast<Eigen::Index>((P % 2) * n * n + (P / 2) * n + Q / 2);
  };
  Eigen::MatrixXd sup = Eigen::MatrixXd::Zero(dim, dim);
  for (std::size_t P = 0; P < N; ++P)
    for (std::size_t Q = 0; Q < N; ++Q)
      for (std::size_t R = 0; R < N; ++R)
        for (std::size_t S = 0; S < N; ++S) {
          double v = op.g(P, Q, R, S);
          if (v == 0.0) continue;
          if (P % 2 != Q % 2 || R % 2 != S % 2) {
            if (std::abs(v) > 1e-10 * scale)
              throw ConsistencyError("two-body tensor couples different spins inside a pair");
            continue;
          }
          sup(idx(P, Q), idx(R, S)) = v;
        }
  if ((sup - sup.transpose()).cwiseAbs().maxCoeff() > 1e-8)
    throw ConsistencyError("two-body supermatrix is not symmetric");
  if (sup.cwiseAbs().maxCoeff() == 0.0) return out;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (sup + sup.transpose()));
  std::vector<Eigen::Index> order(static_cast<std::size_t>(dim));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return std::abs(es.eigenvalues()[a]) > std::abs(es.eigenvalues()[b]);
  });
  for (Eigen::Index a : order) {
    double eps = es.eigenvalues()[a];
    if (std::abs(eps) < tol) break;
    Eigen::MatrixXd l = Eigen::MatrixXd::Zero(N, N);
    for (std::size_t s = 0; s < 2; ++s)
      for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q = 0; q < n; ++q)
          l(2 * p + s, 2 * q + s) = es.eigenvectors()(static_cast<Eigen::Index>(s * n * n + p * n + q), a);
    FermionFragment f;
    f.index = out.size();
    Eigen::VectorXd w;
    diagonalize_spin_blocks(l, f.rotation, w);
    f.diag_one_body = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(N));
    f.diag_two_body = eps * w * w.transpose();
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<FermionFragment> low_rank_decompose(const SpinOrbitalIntegrals& ints, double tol) {
  return low_rank_decompose(assemble_fermionic_hamiltonian(ints), tol);
}

Eigen::MatrixXd givens_matrix(const GivensRotation& g, std::size_t n) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  double c = std::cos(g.angle), s = std::sin(g.angle);
  auto p = static_cast<Eigen::Index>(g.p), q = static_cast<Eigen::Index>(g.q);
  m(p, p) = c;
  m(p, q) = -s;
  m(q, p) = s;
  m(q, q) = c;
  return m;
}

GivensDecomposition givens_decompose(const Eigen::MatrixXd& rotation) {
  const Eigen::Index n = rotation.rows();
  if (rotation.cols() != n) throw OrthogonalityError("rotation must be square");
  if ((rotation.transpose() * rotation - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-10)
    throw OrthogonalityError("rotation matrix is not orthogonal");
  GivensDecomposition d;
  Eigen::MatrixXd w = rotation;
  for (Eigen::Index j = 0; j + 1 < n; ++j)
    for (Eigen::Index i = n - 1; i > j; --i) {
      if (std::abs(w(i, j)) < 1e-13) continue;
      double r = std::hypot(w(j, j), w(i, j));
      double c = w(j, j) / r, s = w(i, j) / r;
      Eigen::RowVectorXd rj = w.row(j), ri = w.row(i);
      w.row(j) = c * rj + s * ri;
      w.row(i) = -s * rj + c * ri;
      w(i, j) = 0.0;
      d.rotations.push_back({static_cast<std::size_t>(j), static_cast<std::size_t>(i), std::atan2(s, c)});
    }
  d.signs = Eigen::VectorXd(n);
  for (Eigen::Index i = 0; i < n; ++i) d.signs[i] = w(i, i) < 0 ? -1.0 : 1.0;
  return d;
}

Eigen::MatrixXd givens_product(const GivensDecomposition& d, std::size_t n) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (const auto& g : d.rotations) m = m * givens_matrix(g, n);
  if (d.signs.size()) m = m * d.signs.asDiagonal();
  return m;
}

GateCounts givens_cost(const GivensDecomposition& d, std::size_t n) {
  // each rotation: two-qubit, two single-qubit rotations, two-qubit
  GateCounts c;
  DepthTracker t(std::max<std::size_t>(n, 1));
  for (const auto& g : d.rotations) {
    c.two_qubit += 2;
    c.one_qubit += 2;
    t.add(g.p, g.q);
    t.add(g.p);
    t.add(g.q);
    t.add(g.p, g.q);
  }
  for (Eigen::Index i = 0; i < d.signs.size(); ++i)
    if (d.signs[i] < 0) {
      c.one_qubit += 1;
      t.add(static_cast<std::size_t>(i));
    }
  c.depth = static_cast<double>(t.depth());
  return c;
}

std::vector<FermionFragment> to_reflection_form(const std::vector<FermionFragment>& frags, double* constant_shift) {
  if (frags.empty()) return {};
  const Eigen::Index N = static_cast<Eigen::Index>(frags.front().n());
  Eigen::MatrixXd h1 = Eigen::MatrixXd::Zero(N, N);
  double c = 0.0;
  std::vector<FermionFragment> two;
  for (const auto& f : frags) {
    Eigen::VectorXd d1 = f.diag_one_body.size() ? f.diag_one_body : Eigen::VectorXd::Zero(N);
    if (!f.has_two_body()) {
      h1 += f.rotation * d1.asDiagonal() * f.rotation.transpose();
      c += f.constant;
      continue;
    }
    FermionFragment t;
    t.rotation = f.rotation;
    t.diag_two_body = f.diag_two_body;
    t.diag_one_body = Eigen::VectorXd::Zero(N);
    t.centered = true;
    if (!f.centered) {
      d1 += f.diag_two_body.rowwise().sum();
      c -= 0.25 * f.diag_two_body.sum();
    }
    h1 += f.rotation * d1.asDiagonal() * f.rotation.transpose();
    c += f.constant;
    two.push_back(std::move(t));
  }
  std::vector<FermionFragment> out;
  out.push_back(one_body_fragment(h1, c));
  for (auto& t : two) {
    t.index = out.size();
    out.push_back(std::move(t));
  }
  if (constant_shift) *constant_shift = c;
  return out;
}

LcuNorm lcu_norm_lr(const std::vector<FermionFragment>& frags) {
  LcuNorm r;
  if (frags.empty()) return r;
  auto refl = to_reflection_form(frags);
  r.lambda = 0.5 * refl.front().diag_one_body.cwiseAbs().sum();
  for (std::size_t a = 1; a < refl.size(); ++a) {
    const auto& f = refl[a];
    auto tags = spin_tags(f.rotation);
    double s = 0.0;
    for (Eigen::Index k = 0; k < f.diag_two_body.rows(); ++k)
      for (Eigen::Index l = 0; l < f.diag_two_body.cols(); ++l) {
        int tk = tags[static_cast<std::size_t>(k)], tl = tags[static_cast<std::size_t>(l)];
        // opposite-spin products are not counted
        if (tk >= 0 && tl >= 0 && tk != tl) continue;
        s += std::abs(f.diag_two_body(k, l));
      }
    r.lambda += 0.25 * s;
  }
  r.count = refl.size();
  return r;
}

namespace {

std::vector<std::size_t> two_body_indices(const std::vector<FermionFragment>& frags) {
  std::vector<std::size_t> idx;
  for (std::size_t a = 0; a < frags.size(); ++a)
    if (frags[a].has_two_body()) idx.push_back(a);
  return idx;
}

// moves c_k n_k of each two-body fragment into the one-body part; x stacks c per two-body fragment
std::vector<FermionFragment> apply_fluid(const std::vector<FermionFragment>& frags,
                                         const std::vector<std::size_t>& two, const Eigen::VectorXd& x) {
  const Eigen::Index N = static_cast<Eigen::Index>(frags.front().n());
  Eigen::MatrixXd h1 = Eigen::MatrixXd::Zero(N, N);
  double c1 = 0.0;
  std::vector<FermionFragment> out;
  for (const auto& f : frags)
    if (!f.has_two_body()) {
      Eigen::VectorXd d1 = f.diag_one_body.size() ? f.diag_one_body : Eigen::VectorXd::Zero(N);
      h1 += f.rotation * d1.asDiagonal() * f.rotation.transpose();
      c1 += f.constant;
    }
  out.push_back(FermionFragment{});
  for (std::size_t i = 0; i < two.size(); ++i) {
    FermionFragment f = frags[two[i]];
    Eigen::VectorXd c = x.segment(static_cast<Eigen::Index>(i) * N, N);
    if (f.centered) throw ArgumentError("fluid step expects occupation-form fragments");
    if (f.diag_one_body.size() == 0) f.diag_one_body = Eigen::VectorXd::Zero(N);
    // n_k^2 = n_k, so the diagonal of the quadratic part is really one-body
    f.diag_two_body.diagonal() -= c;
    h1 += f.rotation * c.asDiagonal() * f.rotation.transpose();
    f.index = out.size();
    out.push_back(std::move(f));
  }
  out.front() = one_body_fragment(h1, c1);
  return out;
}

}  // namespace

FluidResult f3_repartition(const std::vector<FermionFragment>& frags, const WaveVector& proxy,
                           const MinimizeOptions& opt) {
  if (frags.empty()) throw ArgumentError("f3_repartition: no fragments");
  proxy.require_normalized();
  const std::size_t N = frags.front().n();
  if (proxy.n_qubits() != N) throw DimensionError("proxy and fragments differ in qubit count");
  for (const auto& f : frags)
    if (f.centered) throw ArgumentError("f3_repartition expects occupation-form fragments");

  // all fragment operators conserve the electron count; work in the proxy's sector
  SymmetrySector sector;
  int ne = std::popcount(proxy.amplitudes().begin()->first);
  bool fixed = std::all_of(proxy.amplitudes().begin(), proxy.amplitudes().end(),
                           [ne](const auto& kv) { return std::popcount(kv.first) == ne; });
  if (fixed) sector.electron_count = ne;
  auto basis = sector_basis(N, sector);
  Eigen::VectorXcd psi = restrict_to(proxy, basis);

  auto centered_vec = [&](const FermionicOperator& op) {
    SparseMatrix m = sector_matrix(jordan_wigner(op), basis);
    Eigen::VectorXcd v = m * psi;
    cplx e = psi.dot(v);
    return Eigen::VectorXcd(v - e * psi);
  };

  auto two = two_body_indices(frags);
  const Eigen::Index K = static_cast<Eigen::Index>(two.size());
  const Eigen::Index n = static_cast<Eigen::Index>(N);
  // t_1: all one-body fragments together
  FermionicOperator one = FermionicOperator::zero(N);
  for (const auto& f : frags)
    if (!f.has_two_body()) one += f.to_operator();
  Eigen::VectorXcd t1 = centered_vec(one);
  std::vector<Eigen::VectorXcd> t(static_cast<std::size_t>(K));
  std::vector<Eigen::MatrixXcd> v(static_cast<std::size_t>(K));
  for (Eigen::Index a = 0; a < K; ++a) {
    const auto& f = frags[two[static_cast<std::size_t>(a)]];
    t[static_cast<std::size_t>(a)] = centered_vec(f.to_operator());
    Eigen::MatrixXcd va(static_cast<Eigen::Index>(basis.size()), n);
    for (Eigen::Index k = 0; k < n; ++k) {
      FermionicOperator nk = FermionicOperator::zero(N);
      nk.h = f.rotation.col(k) * f.rotation.col(k).transpose();
      va.col(k) = centered_vec(nk);
    }
    v[static_cast<std::size_t>(a)] = va;
  }

  Objective obj = [&](const Eigen::VectorXd& x) {
    Eigen::VectorXcd u1 = t1;
    double s = 0.0;
    for (Eigen::Index a = 0; a < K; ++a) {
      Eigen::VectorXcd shift = v[static_cast<std::size_t>(a)] * x.segment(a * n, n).cast<cplx>();
      s += (t[static_cast<std::size_t>(a)] - shift).norm();
      u1 += shift;
    }
    return s + u1.norm();
  };

  FluidResult r;
  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(K * n);
  r.initial = obj(x0);
  MinimizeResult m = lbfgs(numeric_gradient(obj, 1e-6), x0, opt);
  Eigen::VectorXd best = m.f <= r.initial ? m.x : x0;
  r.final = std::min(m.f, r.initial);
  r.converged = m.converged;

  std::vector<FermionFragment> out = apply_fluid(frags, two, best);
  r.fragments = std::move(out);
  for (Eigen::Index a = 0; a < K; ++a) r.coefficients.push_back(best.segment(a * n, n));
  return r;
}

FluidResult lr_lcu_optimize(const std::vector<FermionFragment>& frags, const MinimizeOptions& opt) {
  if (frags.empty()) throw ArgumentError("lr_lcu_optimize: no fragments");
  // occupation form first so the fluid step moves genuine one-body pieces
  std::vector<FermionFragment> occ;
  for (const auto& f : frags) occ.push_back(f.uncentered());
  auto two = two_body_indices(occ);
  const Eigen::Index n = static_cast<Eigen::Index>(occ.front().n());
  const Eigen::Index K = static_cast<Eigen::Index>(two.size());

  Objective obj = [&](const Eigen::VectorXd& x) { return lcu_norm_lr(apply_fluid(occ, two, x)).lambda; };
  FluidResult r;
  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(K * n);
  r.initial = obj(x0);
  Eigen::VectorXd best = x0;
  double fbest = r.initial;
  if (K > 0) {
    MinimizeResult m = lbfgs(numeric_gradient(obj, 1e-7), x0, opt);
    if (m.f < fbest) {
      fbest = m.f;
      best = m.x;
    }
    // the objective is piecewise linear in x; finish with a pattern search
    double scale = 0.0;
    for (std::size_t i : two) scale = std::max(scale, occ[i].diag_two_body.cwiseAbs().maxCoeff());
    Eigen::VectorXd step = Eigen::VectorXd::Constant(K * n, std::max(1e-3, 0.05 * scale));
    MinimizeResult c = coordinate_search(obj, best, step, 1e-9);
    if (c.f < fbest) {
      fbest = c.f;
      best = c.x;
    }
    r.converged = c.converged;
  } else {
    r.converged = true;
  }
  r.final = fbest;
  double shift = 0.0;
  r.fragments = to_reflection_form(apply_fluid(occ, two, best), &shift);
  for (Eigen::Index a = 0; a < K; ++a) r.coefficients.push_back(best.segment(a * n, n));
  return r;
}

FermionicOperator SymmetryShift::fermionic(std::size_t n) const {
  FermionicOperator s = FermionicOperator::zero(n);
  s.constant = s0;
  s.h = s1 * Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q) s.g(p, p, q, q) = s2;
  return s;
}

PauliPolynomial SymmetryShift::qubit(std::size_t n) const {
  PauliPolynomial num = jw_number_operator(n);
  PauliPolynomial sq = product(num, num).to_hermitian();
  PauliPolynomial s(n);
  s.add(0, 0, s0);
  s += s1 * num;
  s += s2 * sq;
  return s;
}

FermionicOperator apply_symmetry_shift(const FermionicOperator& h, const SymmetryShift& shift) {
  return h - shift.fermionic(h.n_spin_orbitals);
}

PauliPolynomial apply_symmetry_shift(const PauliPolynomial& h, const SymmetryShift& shift) {
  const std::size_t n = h.n_qubits();
  if (commutator(h, jw_number_operator(n)).max_abs() > 1e-10)
    throw SymmetryError("shift operator does not commute with the Hamiltonian");
  return h - shift.qubit(n);
}

ShiftSearch optimize_shift(const std::function<double(const SymmetryShift&)>& objective, double s1_range,
                           double s2_range, double tol) {
  ShiftSearch out;
  auto eval = [&](double a, double b) {
    ++out.evaluations;
    return objective(SymmetryShift{0.0, a, b});
  };
  out.unshifted = eval(0.0, 0.0);
  const int n1 = 15, n2 = 10;
  const double h1 = s1_range / n1, h2 = s2_range / n2;
  struct Pt {
    double f, a, b;
  };
  std::vector<Pt> grid;
  for (int i = -n1; i <= n1; ++i)
    for (int j = -n2; j <= n2; ++j) grid.push_back({eval(i * h1, j * h2), i * h1, j * h2});
  std::stable_sort(grid.begin(), grid.end(), [](const Pt& x, const Pt& y) { return x.f < y.f; });

  Objective f2 = [&](const Eigen::VectorXd& x) { return eval(x[0], x[1]); };
  Pt best{out.unshifted, 0.0, 0.0};
  const std::size_t starts = std::min<std::size_t>(4, grid.size());
  for (std::size_t k = 0; k < starts; ++k) {
    Eigen::VectorXd x0(2), step(2);
    x0 << grid[k].a, grid[k].b;
    step << h1 / 2, h2 / 2;
    MinimizeResult m = coordinate_search(f2, x0, step, tol);
    if (m.f < best.f) best = {m.f, m.x[0], m.x[1]};
    if (grid[k].f < best.f) best = grid[k];
  }
  out.shift = SymmetryShift{0.0, best.a, best.b};
  out.value = best.f;
  return out;
}

}  // namespace qres
