#include <doctest.h>

#include "oracles.hpp"
#include "qres/errors.hpp"
#include "qres/integrals.hpp"
#include "qres/linalg.hpp"
#include "qres/states.hpp"

using namespace qres;

namespace {

PauliPolynomial fixture_hamiltonian(const std::string& name, int* ne = nullptr) {
  auto ints = load_fcidump(oracle::fixture(name + ".fcidump"));
  if (ne) *ne = ints.n_electrons;
  return jordan_wigner(assemble_fermionic_hamiltonian(ints));
}

}  // namespace

TEST_CASE("davidson agrees with dense diagonalization") {
  std::mt19937_64 rng(21);
  for (std::size_t n : {3u, 6u, 7u}) {
    auto h = oracle::random_polynomial(n, 25, rng);
    std::vector<std::uint64_t> basis(std::size_t{1} << n);
    for (std::size_t i = 0; i < basis.size(); ++i) basis[i] = i;
    SparseMatrix m = sector_matrix(h, basis);
    Eigen::SelfAdjointEigenSolver<oracle::Mat> es(oracle::polynomial(h));
    EigenResult r = davidson(m, 3);
    for (int i = 0; i < 3; ++i) CHECK(r.values[i] == doctest::Approx(es.eigenvalues()[i]).epsilon(1e-9));
    CHECK(highest_eigenvalue(m) == doctest::Approx(es.eigenvalues()[es.eigenvalues().size() - 1]).epsilon(1e-9));
  }
}

TEST_CASE("toy fixture: a single doubly occupied orbital") {
  auto ints = load_fcidump(oracle::fixture("toy_minus_one.fcidump"));
  auto h = jordan_wigner(assemble_fermionic_hamiltonian(ints));
  CHECK(eigensolve(h, 1)[0].energy == doctest::Approx(-1.0));
}

TEST_CASE("sector basis and leakage") {
  auto b = sector_basis(4, SymmetrySector::electrons(2));
  CHECK(b.size() == 6);
  SymmetrySector z;
  z.generators.push_back(parse_pauli("ZZII"));
  z.eigenvalues.push_back(-1);
  for (auto s : sector_basis(4, z)) CHECK(std::popcount(s & 3u) == 1);
  SymmetrySector bad;
  bad.generators.push_back(parse_pauli("XIII"));
  bad.eigenvalues.push_back(1);
  CHECK_THROWS_AS(sector_basis(4, bad), SymmetryError);
  PauliPolynomial x(2);
  x.add(parse_pauli("XI"), 1.0);
  CHECK_THROWS_AS(sector_matrix(x, sector_basis(2, SymmetrySector::electrons(1)), true), SymmetryError);
}

TEST_CASE("symmetry generators commute with every term and fix the HF sector") {
  int ne = 0;
  auto h = fixture_hamiltonian("h4_chain_eq", &ne);
  auto syms = find_pauli_symmetries({h});
  CHECK(!syms.empty());
  for (const auto& s : syms)
    for (const auto& [k, c] : h.terms()) CHECK(symplectic_commute(s.x, s.z, k.x, k.z));
  auto zs = find_z_symmetries({h});
  // total parity and the two spin parities at least
  CHECK(zs.size() >= 2);
  auto sec = sector_from_reference(zs, hf_state(8, ne));
  auto basis = sector_basis(8, sec);
  CHECK(std::find(basis.begin(), basis.end(), std::uint64_t{0b1111}) != basis.end());
  // the ground state lies in that sector
  double e_sector = eigensolve(h, 1, sec)[0].energy;
  double e_ne = eigensolve(h, 1, SymmetrySector::electrons(ne))[0].energy;
  CHECK(e_sector == doctest::Approx(e_ne).epsilon(1e-9));
}

TEST_CASE("fixture ground states") {
  int ne = 0;
  auto h = fixture_hamiltonian("h4_chain_eq", &ne);
  auto pairs = eigensolve(h, 2, SymmetrySector::electrons(ne));
  CHECK(pairs[0].energy == doctest::Approx(-2.180316614).epsilon(1e-9));
  CHECK(pairs[0].state.is_normalized());
  CHECK(pairs[0].residual < 1e-7);
  // dense check in the electron sector
  auto basis = sector_basis(8, SymmetrySector::electrons(ne));
  Eigen::MatrixXcd d = Eigen::MatrixXcd(sector_matrix(h, basis));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(d);
  CHECK(pairs[1].energy == doctest::Approx(es.eigenvalues()[1]).epsilon(1e-9));
}

TEST_CASE("CISD space and truncation") {
  int ne = 0;
  auto h = fixture_hamiltonian("h4_chain_eq", &ne);
  auto hf = hf_state(8, ne);
  auto r = cisd_state(h, hf, -2.180316614);
  // brute-force count: same N and S_z, at most a double excitation
  std::size_t count = 0;
  for (std::uint64_t b = 0; b < 256; ++b) {
    if (std::popcount(b) != 4) continue;
    int na = 0;
    for (int q = 0; q < 8; q += 2) na += (b >> q) & 1;
    if (na != 2) continue;
    if (std::popcount(b ^ 0b1111u) <= 4) ++count;
  }
  CHECK(r.space_dimension == count);
  CHECK(r.state.is_normalized());
  CHECK(r.kept_weight >= 0.9999);
  CHECK(r.determinants_kept <= r.space_dimension);
  CHECK(*r.error >= -1e-12);
  CHECK(expectation(h, r.full) == doctest::Approx(r.energy).epsilon(1e-10));
}

TEST_CASE("overlap sums") {
  int ne = 0;
  auto h = fixture_hamiltonian("h2_0.74", &ne);
  auto pairs = eigenpairs_within(h, 1.5e-3, SymmetrySector::electrons(ne));
  CHECK(overlap_sum(pairs[0].state, pairs, 1.5e-3) == doctest::Approx(1.0));
  CHECK(overlap_sum(hf_state(4, ne), pairs, 1.5e-3) < 1.0);
  CHECK_THROWS_AS(overlap_sum(hf_state(4, ne), {}, 1e-3), ArgumentError);
}
