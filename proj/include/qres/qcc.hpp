#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qres/integrals.hpp"
#include "qres/optimize.hpp"
#include "qres/pauli.hpp"
#include "qres/states.hpp"

namespace qres {

// |psi(theta)> = prod_k exp(-i theta_k P_k) |ref>, generator 0 leftmost (applied last)
struct QccAnsatz {
  std::vector<PauliProduct> generators;
  std::vector<double> amplitudes;
  WaveVector reference;

  Eigen::VectorXcd state() const;
  Eigen::VectorXcd state(const Eigen::VectorXd& theta) const;
};

struct RankedGenerator {
  PauliProduct generator;
  double gradient = 0.0;   // dE/dtheta at 0 = -i<ref|[H,P]|ref>
  double secondary = 0.0;  // |<ref|P H P|ref> - E_ref|
};

// one candidate per flip mask of the Hamiltonian terms (best odd-Y pattern); sorted by |gradient|
// then by the secondary key
std::vector<RankedGenerator> rank_generators(const PauliPolynomial& h, const WaveVector& reference,
                                             std::size_t pool_size);
double generator_gradient(const PauliPolynomial& h, std::uint64_t reference, const PauliProduct& p);

// energy and adjoint gradient of the ansatz at theta, dense statevector
double qcc_energy(const SparseMatrix& h, const QccAnsatz& a, const Eigen::VectorXd& theta, Eigen::VectorXd* grad);

struct VqeResult {
  Eigen::VectorXd theta;
  double energy = 0.0;
  bool converged = false;
  int iterations = 0;
};
VqeResult vqe_minimize(const PauliPolynomial& h, const QccAnsatz& a, const Eigen::VectorXd& theta0,
                       const MinimizeOptions& opt = {});
VqeResult vqe_minimize(const SparseMatrix& h, const QccAnsatz& a, const Eigen::VectorXd& theta0,
                       const MinimizeOptions& opt = {});

// exp(i theta P) H exp(-i theta P)
PauliPolynomial iqcc_dress(const PauliPolynomial& h, const PauliProduct& p, double theta);

struct QccRow {
  std::size_t n_ent = 0;
  double energy = 0.0;
  double error = 0.0;
  double overlap = 0.0;
  bool converged = false;
  std::vector<PauliProduct> generators;
  std::vector<double> amplitudes;
};

struct QccOptions {
  std::vector<std::size_t> schedule{10, 20, 50};
  std::size_t batch = 10;
  int restarts = 3;
  std::uint64_t seed = 7;
  double window = 1.5e-3;          // overlap window above E0
  double restart_threshold = 1.6e-3;
  MinimizeOptions minimize{2000, 1e-7, 20};
};

std::vector<QccRow> qcc_run(const PauliPolynomial& h, int n_electrons, const QccOptions& opt = {});
std::vector<QccRow> qcc_run(const SpinOrbitalIntegrals& ints, const QccOptions& opt = {});

}  // namespace qres
