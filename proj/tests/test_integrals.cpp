#include <doctest.h>

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "oracles.hpp"
#include "qres/errors.hpp"
#include "qres/integrals.hpp"
#include "qres/pauli.hpp"
#include "qres/states.hpp"

using namespace qres;

namespace {

const char* kTwoOrbital = R"( &FCI NORB=2,NELEC=2,MS2=0,
  ORBSYM=1,1,
  ISYM=1,
 &END
  0.6 1 1 1 1
  0.2 2 1 1 1
  0.5 2 2 1 1
  0.1 2 1 2 1
  0.7 2 2 2 2
 -1.2 1 1 0 0
  0.05 2 1 0 0
 -0.4 2 2 0 0
  0.3 0 0 0 0
)";

}  // namespace

TEST_CASE("fcidump header and index unfolding") {
  auto ints = parse_fcidump_string(kTwoOrbital);
  CHECK(ints.n_spin_orbitals == 4);
  CHECK(ints.n_electrons == 2);
  CHECK(ints.e_core == doctest::Approx(0.3));
  CHECK(ints.reference_kind == ReferenceKind::restricted);
  // (21|11) appears under all eight permutations and every spin pairing
  for (int sa = 0; sa < 2; ++sa)
    for (int sb = 0; sb < 2; ++sb) {
      CHECK(ints.g(2 + sa, 0 + sa, 0 + sb, 0 + sb) == doctest::Approx(0.2));
      CHECK(ints.g(0 + sb, 0 + sb, 0 + sa, 2 + sa) == doctest::Approx(0.2));
      CHECK(ints.g(2 + sa, 0 + sa, 2 + sb, 0 + sb) == doctest::Approx(0.1));
      CHECK(ints.g(0 + sa, 2 + sa, 2 + sb, 0 + sb) == doctest::Approx(0.1));
    }
  CHECK(ints.g(0, 1, 0, 1) == 0.0);  // mixed spin inside a pair
  CHECK(ints.h(2, 0) == doctest::Approx(0.05));
  CHECK(ints.h(1, 3) == doctest::Approx(0.05));
  CHECK(ints.h(0, 3) == 0.0);
  ints.validate();
}

TEST_CASE("fcidump errors") {
  std::string dup = std::string(kTwoOrbital) + "  0.65 1 1 1 1\n";
  CHECK_THROWS_AS(parse_fcidump_string(dup), ConsistencyError);
  // same integral under a permuted index order is also a duplicate
  std::string perm = std::string(kTwoOrbital) + "  0.25 1 2 1 1\n";
  CHECK_THROWS_AS(parse_fcidump_string(perm), ConsistencyError);
  // a repeated entry with the same value is harmless
  CHECK_NOTHROW(parse_fcidump_string(std::string(kTwoOrbital) + "  0.2 1 2 1 1\n"));
  std::string range = std::string(kTwoOrbital) + "  0.1 3 1 1 1\n";
  CHECK_THROWS_AS(parse_fcidump_string(range), IndexError);
  std::string junk = std::string(kTwoOrbital) + "  abc 1 1 1 1\n";
  CHECK_THROWS_AS(parse_fcidump_string(junk), ParseError);
  CHECK_THROWS_AS(parse_fcidump_string("NORB=2\n"), ParseError);
  CHECK_THROWS_AS(load_fcidump("/nonexistent/file.fcidump"), ArgumentError);
}

TEST_CASE("write then parse round trip, restricted and unrestricted") {
  auto ints = parse_fcidump_string(kTwoOrbital);
  std::ostringstream out;
  write_fcidump(out, ints);
  auto back = parse_fcidump_string(out.str());
  CHECK((back.h - ints.h).cwiseAbs().maxCoeff() < 1e-15);
  for (std::size_t i = 0; i < ints.g.data().size(); ++i) CHECK(back.g.data()[i] == doctest::Approx(ints.g.data()[i]));

  // break the alpha/beta symmetry and go through the UHF layout
  auto u = ints;
  u.reference_kind = ReferenceKind::unrestricted;
  u.h(1, 1) += 0.25;
  u.g(1, 1, 1, 1) += 0.125;
  std::ostringstream uo;
  write_fcidump(uo, u);
  auto ub = parse_fcidump_string(uo.str());
  CHECK(ub.reference_kind == ReferenceKind::unrestricted);
  CHECK((ub.h - u.h).cwiseAbs().maxCoeff() < 1e-15);
  for (std::size_t i = 0; i < u.g.data().size(); ++i) CHECK(ub.g.data()[i] == doctest::Approx(u.g.data()[i]));
  CHECK(ub.e_core == doctest::Approx(u.e_core));
}

TEST_CASE("fermionic operator matches the second-quantized Hamiltonian") {
  // oracle: 1/2 sum (pq|rs) a+_p a+_r a_s a_q built from explicit annihilators
  auto ints = parse_fcidump_string(kTwoOrbital);
  const std::size_t n = ints.n_spin_orbitals;
  std::vector<oracle::Mat> a;
  for (std::size_t p = 0; p < n; ++p) a.push_back(oracle::annihilate(n, p));
  oracle::Mat ref = ints.e_core * oracle::Mat::Identity(1 << n, 1 << n);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q) ref += ints.h(p, q) * a[p].adjoint() * a[q];
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = 0; s < n; ++s)
          if (ints.g(p, q, r, s) != 0.0)
            ref += 0.5 * ints.g(p, q, r, s) * a[p].adjoint() * a[r].adjoint() * a[s] * a[q];
  auto op = assemble_fermionic_hamiltonian(ints);
  CHECK((oracle::fermionic(op) - ref).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((oracle::polynomial(jordan_wigner(op)) - ref).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("number operators") {
  const std::size_t n = 4;
  oracle::Mat num = oracle::fermionic(number_operator(n));
  oracle::Mat sq = oracle::fermionic(number_squared_operator(n));
  CHECK((num * num - sq).cwiseAbs().maxCoeff() < 1e-12);
  for (std::size_t b = 0; b < 16; ++b) CHECK(num(b, b).real() == doctest::Approx(std::popcount(b)));
}

TEST_CASE("HF energy of every committed fixture matches the generator's SCF energy") {
  for (const char* name : {"h2_0.74", "h4_chain_eq", "h4_chain_corr", "h4_chain_diss", "h4_rect_corr", "h4_rect_diss"}) {
    CAPTURE(name);
    auto ints = load_fcidump(oracle::fixture(std::string(name) + ".fcidump"));
    std::ifstream meta(oracle::fixture(std::string(name) + ".json"));
    auto j = nlohmann::json::parse(meta);
    auto hq = jordan_wigner(assemble_fermionic_hamiltonian(ints));
    double e = expectation(hq, hf_state(ints.n_spin_orbitals, ints.n_electrons));
    CHECK(std::abs(e - j["scf_energy"].get<double>()) < 1e-6);
    CHECK(ints.n_spin_orbitals == j["n_spin_orbitals"].get<std::size_t>());
  }
}
