#pragma once

#include <cstdint>

#include "qres/fragments.hpp"
#include "qres/pauli.hpp"

namespace qres {

// greedy grouping; identity term goes to FragmentSet::constant. commuting groups get diagonalizers.
FragmentSet sorted_insertion(const PauliPolynomial& h, FragmentKind kind);

CliffordCircuit synthesize_diagonalizer(const PauliFragment& frag, std::size_t n_qubits);

struct LcuNorm {
  double lambda = 0.0;
  std::size_t count = 0;  // N_U for AC groups, N_f for LR fragments
};

LcuNorm lcu_norm_ac(const FragmentSet& fs);

// eigenvalue of a diagonalized commuting fragment on computational basis state b (after the Clifford)
struct DiagonalForm {
  std::vector<std::pair<std::uint64_t, double>> z_terms;  // signed coefficients on Z strings
  double value(std::uint64_t b) const;
};
DiagonalForm diagonal_form(const PauliFragment& frag);

}  // namespace qres
