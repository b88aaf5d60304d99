#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qres/fermion_frag.hpp"
#include "qres/fragments.hpp"
#include "qres/linalg.hpp"
#include "qres/states.hpp"

namespace qres {

// exact (E_min, E_max) of a Hermitian sparse matrix; dense below a size cutoff
std::pair<double, double> spectrum_extremes(const SparseMatrix& a);

std::vector<double> fragment_variances(const FragmentSet& fs, const WaveVector& proxy);
// M = eps^-2 (sum_a sqrt(Var_a))^2
double measurement_count(const FragmentSet& fs, const WaveVector& proxy, double eps);

// sum over unordered pairs a<b of ||[H_a,H_b]|| restricted to the sector
double kappa_q(const FragmentSet& fs, const SymmetrySector& sector);
double kappa_q(const std::vector<PauliPolynomial>& frags, const SymmetrySector& sector);

struct SpectralDescriptors {
  std::vector<double> ranges;  // (E_max - E_min)/2 per fragment
  double C = 0.0;
  double S_L = 0.0;
  double beta = 0.0;
};
SpectralDescriptors spectral_descriptors(const FragmentSet& fs, const SymmetrySector& sector);
SpectralDescriptors descriptors_from_ranges(std::vector<double> ranges);

double half_spectral_range(const PauliPolynomial& h, const SymmetrySector& sector = {});
// (E_max - E_0) of the full operator, the norm entering tau
double spectral_width(const PauliPolynomial& h, const SymmetrySector& sector = {});

struct ShiftedRange {
  SymmetryShift shift;
  double value = 0.0;
  double unshifted = 0.0;
  std::vector<std::pair<double, double>> sector_extremes;  // per electron number 0..N
};
// min over (s1, s2) of half the spectral range of H - s1 N - s2 N^2 over the whole Fock space
ShiftedRange shifted_half_spectral_range(const PauliPolynomial& h);

struct TrotterSteps {
  std::uint64_t steps = 0;
  double tau = 0.0;
  double error_bound = 0.0;  // kappa tau / N_s, first-order
};
TrotterSteps trotter_steps(double kappa, double eps, double p0, double spectral_range);

// ||exp(-i H t) - (prod_a exp(-i H_a t/N))^N||_2 on the dense space
double trotter_error(const std::vector<PauliPolynomial>& frags, double t, int steps);

GateCounts circuit_cost(const FragmentSet& fs);

struct MonteCarloResult {
  double rms_error = 0.0;
  double mean_error = 0.0;
  double shots = 0.0;  // per trial, after rounding up
  int trials = 0;
};
// samples every commuting fragment in its eigenbasis under state psi with shots proportional to sqrt(Var)
MonteCarloResult simulate_measurement(const FragmentSet& fs, const WaveVector& psi, double eps, int trials,
                                      std::uint64_t seed);

struct CostReport {
  std::string method;
  std::string molecule;
  std::string geometry;
  double epsilon = 0.0;
  double M_eps = 0.0;
  double kappa_q = 0.0;
  double lambda = 0.0;
  std::size_t n_unitaries = 0;
  std::size_t n_fragments = 0;
  double half_spectral_range = 0.0;
  double C = 0.0;
  double S_L = 0.0;
  double beta = 0.0;
  GateCounts gate_counts;
};

}  // namespace qres
