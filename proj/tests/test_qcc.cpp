#include <doctest.h>

#include "oracles.hpp"
#include "qres/errors.hpp"
#include "qres/qcc.hpp"
#include "qres/states.hpp"

using namespace qres;

namespace {

PauliPolynomial h2(int* ne = nullptr) {
  auto ints = load_fcidump(oracle::fixture("h2_0.74.fcidump"));
  if (ne) *ne = ints.n_electrons;
  return jordan_wigner(assemble_fermionic_hamiltonian(ints));
}

// exp(-i theta P)
oracle::Mat rot(const PauliProduct& p, double theta) {
  oracle::Mat pm = ipow(p.phase) * oracle::pauli(pauli_label(p));
  return std::cos(theta) * oracle::Mat::Identity(pm.rows(), pm.cols()) - oracle::cplx(0, std::sin(theta)) * pm;
}

SparseMatrix full_matrix(const PauliPolynomial& h) {
  std::vector<std::uint64_t> basis(std::size_t{1} << h.n_qubits());
  for (std::size_t i = 0; i < basis.size(); ++i) basis[i] = i;
  return sector_matrix(h, basis);
}

}  // namespace

TEST_CASE("ranking refuses a diagonal Hamiltonian") {
  PauliPolynomial z(1);
  z.add(parse_pauli("Z"), 1.0);
  CHECK_THROWS_AS(rank_generators(z, WaveVector::basis_state(1, 0), 5), PoolError);
}

TEST_CASE("single-qubit gradient") {
  PauliPolynomial x(1);
  x.add(parse_pauli("X"), 1.0);
  // d/dt <0|e^{itY} X e^{-itY}|0> at 0 = 2
  CHECK(std::abs(generator_gradient(x, 0, parse_pauli("Y"))) == doctest::Approx(2.0));
  auto r = rank_generators(x, WaveVector::basis_state(1, 0), 5);
  REQUIRE(r.size() == 1);
  CHECK(pauli_label(r[0].generator) == "Y");
}

TEST_CASE("H2 top generator flips all four spin-orbitals") {
  int ne = 0;
  auto h = h2(&ne);
  auto r = rank_generators(h, hf_state(4, ne), 10);
  REQUIRE(!r.empty());
  CHECK(r[0].generator.x == 0b1111);
  CHECK(std::popcount(r[0].generator.x & r[0].generator.z) % 2 == 1);
  for (std::size_t i = 1; i < r.size(); ++i) CHECK(std::abs(r[i].gradient) <= std::abs(r[i - 1].gradient) + 1e-12);
}

TEST_CASE("ranking gradients match finite differences of the dense energy") {
  int ne = 0;
  auto h = h2(&ne);
  oracle::Mat hd = oracle::polynomial(h);
  auto ref = hf_state(4, ne);
  Eigen::VectorXcd v = ref.dense();
  std::mt19937_64 rng(31);
  for (int t = 0; t < 20; ++t) {
    auto p = parse_pauli(oracle::random_label(4, rng));
    if (p.x == 0) continue;
    auto e = [&](double th) {
      Eigen::VectorXcd w = rot(p, th) * v;
      return w.dot(hd * w).real();
    };
    double fd = (e(1e-5) - e(-1e-5)) / 2e-5;
    CHECK(generator_gradient(h, ref.amplitudes().begin()->first, p) == doctest::Approx(fd).epsilon(1e-6).scale(1.0));
  }
}

TEST_CASE("adjoint gradient of the ansatz matches finite differences") {
  int ne = 0;
  auto h = h2(&ne);
  auto m = full_matrix(h);
  QccAnsatz a;
  a.reference = hf_state(4, ne);
  a.generators = {parse_pauli("XXXY"), parse_pauli("YXII"), parse_pauli("IXZY")};
  Eigen::VectorXd th(3);
  th << 0.3, -0.2, 0.7;
  Eigen::VectorXd g;
  double e0 = qcc_energy(m, a, th, &g);
  // dense product, generator 0 leftmost
  Eigen::VectorXcd s = a.reference.dense();
  for (int k = 2; k >= 0; --k) s = rot(a.generators[k], th[k]) * s;
  CHECK(e0 == doctest::Approx(s.dot(oracle::polynomial(h) * s).real()).epsilon(1e-12));
  CHECK((a.state(th) - s).norm() < 1e-12);
  for (int k = 0; k < 3; ++k) {
    Eigen::VectorXd tp = th, tm = th;
    tp[k] += 1e-6;
    tm[k] -= 1e-6;
    double fd = (qcc_energy(m, a, tp, nullptr) - qcc_energy(m, a, tm, nullptr)) / 2e-6;
    CHECK(g[k] == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("dressing") {
  std::mt19937_64 rng(44);
  auto h = oracle::random_polynomial(3, 10, rng);
  auto p = parse_pauli("XYZ");
  CHECK((iqcc_dress(h, p, 0.0) - h).one_norm(true) < 1e-14);
  PauliPolynomial zz(3);
  zz.add(parse_pauli("ZZI"), 1.0);
  zz.add(parse_pauli("IIZ"), 0.5);
  auto c = parse_pauli("ZZZ");
  CHECK((iqcc_dress(zz, c, 0.4) - zz).one_norm(true) < 1e-14);
  for (double th : {0.1, -0.8, 1.3}) {
    oracle::Mat u = rot(p, th);
    oracle::Mat expect = u.adjoint() * oracle::polynomial(h) * u;
    auto d = iqcc_dress(h, p, th);
    CHECK((oracle::polynomial(d) - expect).cwiseAbs().maxCoeff() < 1e-12);
    Eigen::SelfAdjointEigenSolver<oracle::Mat> a(oracle::polynomial(h)), b(oracle::polynomial(d));
    CHECK((a.eigenvalues() - b.eigenvalues()).cwiseAbs().maxCoeff() < 1e-12);
  }
  // <ref|dressed H|ref> equals the ansatz energy with that single generator
  QccAnsatz a;
  a.reference = WaveVector::basis_state(3, 0b101);
  a.generators = {p};
  Eigen::VectorXd th(1);
  th << 0.37;
  double e = qcc_energy(full_matrix(h), a, th, nullptr);
  CHECK(expectation(iqcc_dress(h, p, 0.37), a.reference) == doctest::Approx(e).epsilon(1e-12));
}

TEST_CASE("one generator has a closed-form optimum") {
  // E(t) = a + b cos 2t + c sin 2t with a, b, c from the reference
  int ne = 0;
  auto h = h2(&ne);
  auto ref = hf_state(4, ne);
  auto top = rank_generators(h, ref, 1).front().generator;
  auto m = full_matrix(h);
  QccAnsatz a;
  a.reference = ref;
  a.generators = {top};
  auto e = [&](double t) {
    Eigen::VectorXd th(1);
    th << t;
    return qcc_energy(m, a, th, nullptr);
  };
  double e0 = e(0.0), eq = e(std::numbers::pi / 4), em = e(-std::numbers::pi / 4), e2 = e(std::numbers::pi / 2);
  double mid = 0.5 * (e0 + e2), b = 0.5 * (e0 - e2), c = 0.5 * (eq - em);
  double best = mid - std::hypot(b, c);
  Eigen::VectorXd th0 = Eigen::VectorXd::Constant(1, 0.05);
  auto r = vqe_minimize(h, a, th0);
  CHECK(r.energy == doctest::Approx(best).epsilon(1e-9));
  // two electrons in two orbitals: one generator is enough
  CHECK(r.energy == doctest::Approx(eigensolve(h, 1, SymmetrySector::electrons(ne))[0].energy).epsilon(1e-8));
}

TEST_CASE("empty ansatz gives the reference energy and runs are variational") {
  int ne = 0;
  auto h = h2(&ne);
  QccAnsatz a;
  a.reference = hf_state(4, ne);
  CHECK(qcc_energy(full_matrix(h), a, Eigen::VectorXd(0), nullptr) == doctest::Approx(expectation(h, a.reference)));
  QccOptions opt;
  opt.schedule = {0, 1, 2};
  auto rows = qcc_run(h, ne, opt);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].error == doctest::Approx(expectation(h, a.reference) - eigensolve(h, 1, SymmetrySector::electrons(ne))[0].energy));
  CHECK(rows[1].error < 1.6e-3);
  for (const auto& r : rows) CHECK(r.error >= -1e-10);
  CHECK(rows[2].error <= rows[1].error + 1e-10);
}
