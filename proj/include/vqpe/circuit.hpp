#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "vqpe/pauli.hpp"

namespace vqpe {

struct StateVector {
  int n_qubits = 0;
  Eigen::VectorXcd amplitudes;

  static StateVector basis_state(int n_qubits, long index);
};

// Computational basis state with the lowest-index n_electrons qubits set.
StateVector hartree_fock_state(int n_qubits, int n_electrons);

struct Gate {
  enum class Kind { H, X, RX, RZ, CNOT, CRZ, GlobalPhase };
  Kind kind = Kind::H;
  int q0 = -1;           // target (or sole wire); -1 for GlobalPhase
  int q1 = -1;           // control for CNOT/CRZ
  double angle = 0.0;    // RX/RZ/CRZ/GlobalPhase
};

struct Circuit {
  int n_qubits = 0;
  std::vector<Gate> gates;

  Circuit& h(int q);
  Circuit& x(int q);
  Circuit& rx(int q, double angle);
  Circuit& rz(int q, double angle);
  Circuit& cnot(int control, int target);
  Circuit& crz(int control, int target, double angle);
  Circuit& global_phase(double angle);
  // diag(1, e^{i angle}) on one wire: Rz plus a global phase.
  Circuit& wire_phase(int q, double angle);
  Circuit& append(const Circuit& other);

  int cnot_count() const;
};

// Reversed gate order with negated angles.
Circuit inverse(const Circuit& c);

// Applies the circuit to a state; wire w of the circuit acts on qubit
// w + wire_offset of the state.
StateVector apply_circuit(const Circuit& c, const StateVector& psi,
                          int wire_offset = 0);

// Dense unitary of the circuit (column-by-column application).
Eigen::MatrixXcd dense_matrix(const Circuit& c);

// One gate per line: "H 0", "CNOT 2 3", "RZ 1 0.78...", 17 significant
// digits for angles.
std::string dump_circuit(const Circuit& c);

// exp(-i theta/2 P): basis changes (H for X, Rx(pi/2)/Rx(3pi/2) for Y),
// CNOT ladder into the word's lowest wire, central Rz(theta), mirror.
Circuit pauli_gadget(const PauliWord& word, double theta, int n_qubits);

// Same gadget with the central Rz controlled on an ancilla wire.
Circuit controlled_gadget(const PauliWord& word, double theta, int n_qubits,
                          int ancilla);

// First-order Trotter step: gadgets for all terms in canonical
// lexicographic word order, angle 2*h_k*dt each. The identity term
// becomes a global phase.
Circuit trotter_step(const QubitHamiltonian& h, double dt);

}  // namespace vqpe
