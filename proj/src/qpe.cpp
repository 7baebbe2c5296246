#include "vqpe/qpe.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace vqpe {

namespace {

// diag(1,1,1,e^{i theta}) from the available gate set.
void controlled_phase(Circuit& c, int control, int target, double theta) {
  c.crz(control, target, theta);
  c.wire_phase(control, theta / 2.0);
}

void swap_wires(Circuit& c, int a, int b) {
  c.cnot(a, b).cnot(b, a).cnot(a, b);
}

Circuit forward_qft(int n) {
  Circuit c;
  c.n_qubits = n;
  for (int q = n - 1; q >= 0; --q) {
    c.h(q);
    for (int m = q - 1; m >= 0; --m) {
      controlled_phase(c, m, q,
                       std::numbers::pi / static_cast<double>(1 << (q - m)));
    }
  }
  for (int i = 0; i < n / 2; ++i) swap_wires(c, i, n - 1 - i);
  return c;
}

}  // namespace

Circuit inverse_qft(int n) {
  if (n < 1) throw std::invalid_argument("inverse_qft: n >= 1 required");
  return inverse(forward_qft(n));
}

QpeResult run_qpe(const QubitHamiltonian& h, const StateVector& psi,
                  int n_ancilla, double t) {
  if (h.n_qubits + n_ancilla > kOracleQubitLimit) {
    throw std::length_error("run_qpe: register exceeds oracle limit");
  }
  const int n_sys = h.n_qubits;
  const long sys_dim = 1L << n_sys;
  const long anc_dim = 1L << n_ancilla;
  const ExactPropagator prop(h);

  StateVector joint;
  joint.n_qubits = n_sys + n_ancilla;
  joint.amplitudes.resize(sys_dim * anc_dim);
  const double norm = 1.0 / std::sqrt(static_cast<double>(anc_dim));
  StateVector evolved = psi;
  for (long j = 0; j < anc_dim; ++j) {
    if (j > 0) evolved = prop.evolve(evolved, t);
    joint.amplitudes.segment(j * sys_dim, sys_dim) =
        norm * evolved.amplitudes;
  }
  joint = apply_circuit(inverse_qft(n_ancilla), joint, n_sys);

  QpeResult result;
  result.n_ancilla = n_ancilla;
  result.t = t;
  result.probabilities.resize(anc_dim);
  result.omega.resize(anc_dim);
  for (long k = 0; k < anc_dim; ++k) {
    result.probabilities[k] =
        joint.amplitudes.segment(k * sys_dim, sys_dim).squaredNorm();
    result.omega[k] = 2.0 * std::numbers::pi * k / (anc_dim * t);
  }
  return result;
}

std::string qpe_distribution_csv(const QpeResult& result) {
  std::ostringstream out;
  out.precision(17);
  out << "k,omega_k,probability\n";
  for (Eigen::Index k = 0; k < result.probabilities.size(); ++k) {
    out << k << ',' << result.omega[k] << ',' << result.probabilities[k]
        << '\n';
  }
  return out.str();
}

double fourier_basis_check(const QubitHamiltonian& h, const StateVector& psi,
                           const TimeGrid& grid) {
  const int n_states = grid.n_t + 1;
  if ((n_states & (n_states - 1)) != 0) {
    throw std::invalid_argument("fourier_basis_check: N_T+1 must be 2^n");
  }
  const ExactPropagator prop(h);
  std::vector<StateVector> states;
  states.push_back(psi);
  for (int j = 1; j < n_states; ++j) {
    states.push_back(prop.evolve(states.back(), grid.dt));
  }

  std::vector<double> omega(n_states);
  for (int k = 0; k < n_states; ++k) {
    omega[k] = 2.0 * std::numbers::pi * k / (n_states * grid.dt);
  }

  // Direct Gram of the Fourier combinations.
  Eigen::MatrixXcd fourier(states[0].amplitudes.size(), n_states);
  for (int k = 0; k < n_states; ++k) {
    Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(states[0].amplitudes.size());
    for (int j = 0; j < n_states; ++j) {
      acc += std::exp(Complex{0.0, omega[k] * j * grid.dt}) *
             states[j].amplitudes;
    }
    fourier.col(k) = acc / std::sqrt(static_cast<double>(n_states));
  }
  const Eigen::MatrixXcd gram_direct = fourier.adjoint() * fourier;

  // Same Gram from the Toeplitz overlap row.
  Eigen::MatrixXcd s(n_states, n_states);
  std::vector<Complex> row(n_states);
  for (int m = 0; m < n_states; ++m) {
    row[m] = psi.amplitudes.dot(states[m].amplitudes);
  }
  for (int j = 0; j < n_states; ++j) {
    for (int k = 0; k < n_states; ++k) {
      s(j, k) = k >= j ? row[k - j] : std::conj(row[j - k]);
    }
  }
  Eigen::MatrixXcd f(n_states, n_states);
  for (int k = 0; k < n_states; ++k) {
    for (int j = 0; j < n_states; ++j) {
      f(k, j) = std::exp(Complex{0.0, omega[k] * j * grid.dt});
    }
  }
  const Eigen::MatrixXcd gram_expected =
      (f.conjugate() * s * f.transpose()) / static_cast<double>(n_states);

  return (gram_direct - gram_expected).cwiseAbs().maxCoeff();
}

}  // namespace vqpe
