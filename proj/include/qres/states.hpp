#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qres/integrals.hpp"
#include "qres/linalg.hpp"
#include "qres/pauli.hpp"
#include "qres/wave_vector.hpp"

namespace qres {

// basis restriction: Z-type Pauli symmetries with fixed +-1 eigenvalues and/or an electron count
struct SymmetrySector {
  std::vector<PauliProduct> generators;
  std::vector<int> eigenvalues;
  std::optional<int> electron_count;

  static SymmetrySector electrons(int ne) {
    SymmetrySector s;
    s.electron_count = ne;
    return s;
  }
  bool trivial() const { return generators.empty() && !electron_count; }
};

std::vector<std::uint64_t> sector_basis(std::size_t n_qubits, const SymmetrySector& sector);
// matrix of h on the basis (columns/rows follow basis order); strict: throw SymmetryError on leakage
SparseMatrix sector_matrix(const PauliPolynomial& h, const std::vector<std::uint64_t>& basis, bool strict = false);
WaveVector embed(std::size_t n_qubits, const std::vector<std::uint64_t>& basis, const Eigen::VectorXcd& v);
Eigen::VectorXcd restrict_to(const WaveVector& psi, const std::vector<std::uint64_t>& basis);

// throws SymmetryError when some generator (or N_e) fails to commute with op
void check_sector_commutes(const PauliPolynomial& op, const SymmetrySector& sector);

struct EigenPair {
  double energy = 0.0;
  WaveVector state;
  double residual = 0.0;
};

std::vector<EigenPair> eigensolve(const PauliPolynomial& h, int k, const SymmetrySector& sector = {},
                                  const DavidsonOptions& opt = {});
// every eigenpair with E - E0 <= eps (plus the degeneracy window), ascending
std::vector<EigenPair> eigenpairs_within(const PauliPolynomial& h, double eps, const SymmetrySector& sector = {});

WaveVector hf_state(std::size_t n_qubits, int n_electrons);

struct CisdResult {
  WaveVector state;        // truncated and renormalized
  WaveVector full;         // untruncated CISD eigenvector
  double energy = 0.0;     // CISD energy (untruncated)
  std::size_t space_dimension = 0;
  std::size_t determinants_kept = 0;
  double kept_weight = 0.0;
  std::optional<double> error;  // E_CISD - E0 when E0 supplied
};

// singles+doubles on top of a determinant reference, same electron count and same S_z
CisdResult cisd_state(const PauliPolynomial& hq, const WaveVector& reference, std::optional<double> e0 = {},
                      double keep_weight = 0.9999);
CisdResult cisd_state(const SpinOrbitalIntegrals& ints, const WaveVector& reference, std::optional<double> e0 = {},
                      double keep_weight = 0.9999);

// GF(2) kernel of the symplectic form over all terms of ops: Paulis commuting with every term
std::vector<PauliProduct> find_pauli_symmetries(const std::vector<PauliPolynomial>& ops);
// the Z-type part of that kernel
std::vector<PauliProduct> find_z_symmetries(const std::vector<PauliPolynomial>& ops);
// Z-type symmetries with eigenvalues read off a basis-state reference
SymmetrySector sector_from_reference(const std::vector<PauliProduct>& symmetries, const WaveVector& reference);

// sum of |<psi_k|phi>|^2 over eigenpairs with E_k - E_0 <= eps; degenerate blocks (1e-9) kept whole
double overlap_sum(const WaveVector& phi, const std::vector<EigenPair>& pairs, double eps);

}  // namespace qres
