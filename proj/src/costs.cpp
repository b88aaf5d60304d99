#include "qres/costs.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "qres/errors.hpp"
#include "qres/fermion_frag.hpp"

namespace qres {

namespace {

// Z-type generators must commute with each fragment; the electron-number constraint is applied as a
// compression since single Pauli groups need not conserve N
void check_generators(const PauliPolynomial& op, const SymmetrySector& sector) {
  SymmetrySector g = sector;
  g.electron_count.reset();
  check_sector_commutes(op, g);
}

}  // namespace

std::pair<double, double> spectrum_extremes(const SparseMatrix& a) {
  if (a.rows() == 0) throw ArgumentError("spectrum of an empty matrix");
  if (a.rows() <= 600) {
    Eigen::MatrixXcd d = Eigen::MatrixXcd(a);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (d + d.adjoint()), Eigen::EigenvaluesOnly);
    return {es.eigenvalues()[0], es.eigenvalues()[es.eigenvalues().size() - 1]};
  }
  if (a.nonZeros() == 0) return {0.0, 0.0};
  return {lowest_eigenvalue(a), highest_eigenvalue(a)};
}

std::vector<double> fragment_variances(const FragmentSet& fs, const WaveVector& proxy) {
  proxy.require_normalized();
  std::vector<double> v;
  v.reserve(fs.operators.size());
  for (const auto& op : fs.operators) v.push_back(variance(op, proxy));
  return v;
}

double measurement_count(const FragmentSet& fs, const WaveVector& proxy, double eps) {
  if (!(eps > 0.0)) throw ArgumentError("measurement_count: epsilon must be positive");
  double s = 0.0;
  for (double v : fragment_variances(fs, proxy)) s += std::sqrt(std::max(0.0, v));
  return s * s / (eps * eps);
}

double kappa_q(const std::vector<PauliPolynomial>& frags, const SymmetrySector& sector) {
  if (frags.empty()) throw ArgumentError("kappa_q: no fragments");
  const std::size_t n = frags.front().n_qubits();
  for (const auto& f : frags) check_generators(f, sector);
  auto basis = sector_basis(n, sector);
  std::vector<SparseMatrix> m;
  for (const auto& f : frags) m.push_back(sector_matrix(f, basis));
  double k = 0.0;
  for (std::size_t a = 0; a < m.size(); ++a)
    for (std::size_t b = a + 1; b < m.size(); ++b) {
      SparseMatrix ab = m[a] * m[b];
      SparseMatrix ba = m[b] * m[a];
      SparseMatrix c = cplx(0.0, 1.0) * (ab - ba);
      c.prune(cplx(0.0), 1e-13);
      if (c.nonZeros() == 0) continue;
      auto [lo, hi] = spectrum_extremes(c);
      k += std::max(std::abs(lo), std::abs(hi));
    }
  return k;
}

double kappa_q(const FragmentSet& fs, const SymmetrySector& sector) { return kappa_q(fs.operators, sector); }

SpectralDescriptors descriptors_from_ranges(std::vector<double> ranges) {
  SpectralDescriptors d;
  d.ranges = std::move(ranges);
  for (double r : d.ranges) d.C += r;
  if (d.C > 0.0) {
    double w2 = 0.0;
    for (double r : d.ranges) w2 += (r / d.C) * (r / d.C);
    d.S_L = 1.0 - w2;
  }
  // sum_{i>j} r_i r_j = (C^2 - sum r^2)/2
  d.beta = 0.5 * d.C * d.C * d.S_L;
  return d;
}

SpectralDescriptors spectral_descriptors(const FragmentSet& fs, const SymmetrySector& sector) {
  if (fs.operators.empty()) throw ArgumentError("spectral_descriptors: no fragments");
  auto basis = sector_basis(fs.n_qubits, sector);
  std::vector<double> r;
  for (const auto& op : fs.operators) {
    check_generators(op, sector);
    auto [lo, hi] = spectrum_extremes(sector_matrix(op, basis));
    r.push_back(0.5 * (hi - lo));
  }
  return descriptors_from_ranges(std::move(r));
}

double half_spectral_range(const PauliPolynomial& h, const SymmetrySector& sector) {
  if (!sector.trivial()) check_sector_commutes(h, sector);
  auto [lo, hi] = spectrum_extremes(sector_matrix(h, sector_basis(h.n_qubits(), sector)));
  return 0.5 * (hi - lo);
}

double spectral_width(const PauliPolynomial& h, const SymmetrySector& sector) {
  return 2.0 * half_spectral_range(h, sector);
}

namespace {

// extremes of a + s1 n + s2 n^2 shifted operator across all electron numbers
double shifted_value(const std::vector<std::pair<double, double>>& ext, double s1, double s2) {
  double hi = -1e300, lo = 1e300;
  for (std::size_t i = 0; i < ext.size(); ++i) {
    double s = s1 * static_cast<double>(i) + s2 * static_cast<double>(i * i);
    hi = std::max(hi, ext[i].second - s);
    lo = std::min(lo, ext[i].first - s);
  }
  return 0.5 * (hi - lo);
}

template <class F>
double ternary_min(F f, double a, double b, double* arg, int iters = 200) {
  for (int i = 0; i < iters; ++i) {
    double m1 = a + (b - a) / 3.0, m2 = b - (b - a) / 3.0;
    if (f(m1) <= f(m2)) b = m2;
    else a = m1;
  }
  *arg = 0.5 * (a + b);
  return f(*arg);
}

}  // namespace

ShiftedRange shifted_half_spectral_range(const PauliPolynomial& h) {
  const std::size_t n = h.n_qubits();
  check_sector_commutes(h, SymmetrySector::electrons(0));
  ShiftedRange r;
  for (std::size_t ne = 0; ne <= n; ++ne) {
    auto basis = sector_basis(n, SymmetrySector::electrons(static_cast<int>(ne)));
    r.sector_extremes.push_back(spectrum_extremes(sector_matrix(h, basis)));
  }
  r.unshifted = shifted_value(r.sector_extremes, 0.0, 0.0);
  // the objective is a max of affine functions, hence convex: nested ternary search
  double scale = 0.0;
  for (auto [lo, hi] : r.sector_extremes) scale = std::max({scale, std::abs(lo), std::abs(hi)});
  const double b1 = 2.0 * scale + 1.0, b2 = b1;
  double best1 = 0.0, best2 = 0.0;
  auto inner = [&](double s2) {
    double a1;
    double v = ternary_min([&](double s1) { return shifted_value(r.sector_extremes, s1, s2); }, -b1, b1, &a1);
    return std::make_pair(v, a1);
  };
  ternary_min([&](double s2) { return inner(s2).first; }, -b2, b2, &best2);
  auto [v, a1] = inner(best2);
  best1 = a1;
  r.value = std::min(v, r.unshifted);
  if (v <= r.unshifted) r.shift = SymmetryShift{0.0, best1, best2};
  return r;
}

TrotterSteps trotter_steps(double kappa, double eps, double p0, double spectral_range) {
  if (!(kappa > 0.0) || !(eps > 0.0) || !(p0 > 0.0) || p0 > 1.0 || !(spectral_range > 0.0))
    throw ArgumentError("trotter_steps: inputs must be positive and p0 in (0,1]");
  TrotterSteps t;
  t.tau = std::numbers::pi / (3.0 * spectral_range);
  t.steps = static_cast<std::uint64_t>(std::ceil(kappa / (eps * p0) - 1e-12));
  t.error_bound = kappa * t.tau / static_cast<double>(t.steps);
  return t;
}

double trotter_error(const std::vector<PauliPolynomial>& frags, double t, int steps) {
  if (frags.empty() || steps < 1) throw ArgumentError("trotter_error: need fragments and steps >= 1");
  const std::size_t n = frags.front().n_qubits();
  if (n > 10) throw DimensionError("dense Trotter check limited to 10 qubits");
  const cplx mi(0.0, -1.0);
  Eigen::MatrixXcd total = Eigen::MatrixXcd::Zero(1 << n, 1 << n);
  Eigen::MatrixXcd step = Eigen::MatrixXcd::Identity(1 << n, 1 << n);
  for (const auto& f : frags) {
    Eigen::MatrixXcd m = dense_matrix(f);
    total += m;
    Eigen::MatrixXcd e = (mi * (t / steps) * m).exp();
    step = e * step;
  }
  Eigen::MatrixXcd exact = (mi * t * total).exp();
  Eigen::MatrixXcd prod = Eigen::MatrixXcd::Identity(1 << n, 1 << n);
  for (int s = 0; s < steps; ++s) prod = step * prod;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(exact - prod);
  return svd.singularValues()[0];
}

GateCounts circuit_cost(const FragmentSet& fs) {
  GateCounts avg;
  std::size_t count = 0;
  if (fs.kind == FragmentKind::fermionic) {
    for (const auto& f : fs.fermion) {
      GateCounts c = givens_cost(givens_decompose(f.rotation), f.n());
      avg.one_qubit += c.one_qubit;
      avg.two_qubit += c.two_qubit;
      avg.depth += c.depth;
      ++count;
    }
  } else {
    for (const auto& g : fs.pauli) {
      if (!g.diagonalizer) throw StateError("fragment has no diagonalizer");
      GateCounts c = g.diagonalizer->counts();
      avg.one_qubit += c.one_qubit;
      avg.two_qubit += c.two_qubit;
      avg.depth += c.depth;
      ++count;
    }
  }
  if (count) {
    avg.one_qubit /= static_cast<double>(count);
    avg.two_qubit /= static_cast<double>(count);
    avg.depth /= static_cast<double>(count);
  }
  return avg;
}

MonteCarloResult simulate_measurement(const FragmentSet& fs, const WaveVector& psi, double eps, int trials,
                                      std::uint64_t seed) {
  if (fs.kind != FragmentKind::commuting) throw KindError("simulate_measurement needs commuting Pauli groups");
  if (trials < 1) throw ArgumentError("simulate_measurement: trials must be positive");
  psi.require_normalized();
  const Eigen::VectorXcd v = psi.dense();
  const double exact = fs.constant + [&] {
    double e = 0.0;
    for (const auto& op : fs.operators) e += expectation(op, psi);
    return e;
  }();

  // per fragment: outcome distribution in the rotated basis
  struct Dist {
    std::vector<double> values;
    std::vector<double> probs;
    double sigma = 0.0;
  };
  std::vector<Dist> dists;
  double sum_sigma = 0.0;
  for (const auto& g : fs.pauli) {
    Eigen::VectorXcd r = g.diagonalizer->apply(v);
    DiagonalForm d = diagonal_form(g);
    Dist dist;
    double mean = 0.0, sq = 0.0;
    for (Eigen::Index b = 0; b < r.size(); ++b) {
      double p = std::norm(r[b]);
      if (p < 1e-16) continue;
      double val = d.value(static_cast<std::uint64_t>(b));
      dist.values.push_back(val);
      dist.probs.push_back(p);
      mean += p * val;
      sq += p * val * val;
    }
    double tot = 0.0;
    for (double p : dist.probs) tot += p;
    for (double& p : dist.probs) p /= tot;
    dist.sigma = std::sqrt(std::max(0.0, sq / tot - (mean / tot) * (mean / tot)));
    sum_sigma += dist.sigma;
    dists.push_back(std::move(dist));
  }
  const double m_total = sum_sigma * sum_sigma / (eps * eps);
  std::vector<std::uint64_t> shots;
  MonteCarloResult res;
  for (const auto& d : dists) {
    double m = sum_sigma > 0 ? m_total * d.sigma / sum_sigma : 0.0;
    shots.push_back(std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(m))));
    res.shots += static_cast<double>(shots.back());
  }

  std::mt19937_64 rng(seed);
  double s1 = 0.0, s2 = 0.0;
  for (int t = 0; t < trials; ++t) {
    double est = fs.constant;
    for (std::size_t a = 0; a < dists.size(); ++a) {
      // multinomial draw as a chain of binomials
      std::uint64_t left = shots[a];
      double pleft = 1.0, acc = 0.0;
      const auto& d = dists[a];
      for (std::size_t k = 0; k < d.probs.size() && left > 0; ++k) {
        std::uint64_t c = left;
        if (k + 1 < d.probs.size()) {
          double p = std::clamp(d.probs[k] / pleft, 0.0, 1.0);
          std::binomial_distribution<std::uint64_t> bin(left, p);
          c = bin(rng);
        }
        acc += static_cast<double>(c) * d.values[k];
        left -= c;
        pleft -= d.probs[k];
        if (pleft <= 0.0) pleft = 1e-300;
      }
      est += acc / static_cast<double>(shots[a]);
    }
    double err = est - exact;
    s1 += err;
    s2 += err * err;
  }
  res.trials = trials;
  res.mean_error = s1 / trials;
  res.rms_error = std::sqrt(s2 / trials);
  return res;
}

}  // namespace qres
