#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "vqpe/circuit.hpp"
#include "vqpe/measure.hpp"
#include "vqpe/subspace.hpp"

namespace vqpe {

struct QpeResult {
  int n_ancilla = 0;
  double t = 0.0;
  Eigen::VectorXd probabilities;  // over k = 0 .. 2^n - 1
  Eigen::VectorXd omega;          // omega_k = 2 pi k / (2^n t)
};

// Standard inverse QFT on n wires; wire 0 holds the least significant
// phase bit. Dense entries (1/sqrt(2^n)) e^{-2 pi i jk / 2^n} including
// the final bit-reversal swaps.
Circuit inverse_qft(int n);

// Ancilla marginal after the QPE circuit with exact controlled powers
// e^{-i 2^m H t}. Ancilla a occupies qubit n_system + a.
QpeResult run_qpe(const QubitHamiltonian& h, const StateVector& psi,
                  int n_ancilla, double t);

// CSV "k,omega_k,probability".
std::string qpe_distribution_csv(const QpeResult& result);

// Max deviation of the Gram matrix of the Fourier combinations
// |omega_k> from (N_T+1)^{-1} F S F^dag built from the exact overlap
// row; requires N_T + 1 to be a power of two.
double fourier_basis_check(const QubitHamiltonian& h, const StateVector& psi,
                           const TimeGrid& grid);

}  // namespace vqpe
