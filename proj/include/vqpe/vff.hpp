#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "vqpe/circuit.hpp"
#include "vqpe/measure.hpp"
#include "vqpe/pauli.hpp"

namespace vqpe {

// One two-qubit, number-conserving block. At zero parameters the block
// is the identity. theta[0] rotates the single-excitation sector,
// theta[1] sets the sector phases and the |11> phase.
struct AnsatzBlock {
  int wires[2] = {0, 1};
  double theta[2] = {0.0, 0.0};
};

using AnsatzLayer = std::vector<AnsatzBlock>;

struct FitReport {
  std::vector<double> cost_trace;
  double final_cost = 1.0;
  std::vector<double> overlaps;  // |<psi|(V^k)^dag e^{-iHk dt}|psi>|
  int restarts_used = 0;
};

struct VffModel {
  int n_qubits = 0;
  double dt = 0.0;
  int m_max = 1;
  // gamma indexed by Z-word bitmask; masks sorted by (popcount, value),
  // mask 0 is the global phase.
  std::vector<std::uint64_t> gamma_masks;
  Eigen::VectorXd gamma;
  std::vector<AnsatzLayer> layers;
  FitReport fit;

  static std::vector<std::uint64_t> masks_for(int n_qubits, int m_max);
  // Brick pattern: even layers pair (0,1),(2,3),..., odd layers (1,2),...
  static std::vector<AnsatzLayer> brick_layout(int n_qubits, int n_layers);

  int n_parameters() const;
  Eigen::VectorXd parameters() const;           // gamma then block thetas
  void set_parameters(const Eigen::VectorXd& p);

  std::string to_json() const;
  static VffModel from_json(const std::string& text);
};

// D(power * gamma): commuting Z-word rotations e^{i gamma_j Z-word},
// mask 0 as a global phase.
Circuit diagonal_circuit(const std::vector<std::uint64_t>& masks,
                         const Eigen::VectorXd& gamma, int n_qubits,
                         int power);

Circuit ansatz_circuit(const std::vector<AnsatzLayer>& layers, int n_qubits);

// W D^power W^dag; depth independent of power.
Circuit vff_propagator(const VffModel& model, int power);

// W, controlled diagonal rotations, W^dag.
Circuit controlled_vff_propagator(const VffModel& model, int power,
                                  int ancilla);

// f = 1 - (1/K) sum_k |<psi|(V^k)^dag e^{-iHk dt}|psi>|^2, with the
// per-step overlap moduli reported alongside.
struct CostBreakdown {
  double cost = 1.0;
  std::vector<double> overlaps;
};
CostBreakdown vff_cost(const VffModel& model, const QubitHamiltonian& h,
                       const StateVector& psi, int k_steps);

struct FitConfig {
  int restarts = 8;
  int max_iterations = 500;
  double fd_step = 1e-6;
  std::uint64_t seed = 0;
  int k_steps = 2;
  int n_layers = 1;
  int m_max = 1;
};

// Multi-start quasi-Newton fit against exact-evolution targets; the
// unobservable global-phase gamma is aligned post hoc so that
// Arg<psi|V|psi> matches Arg<psi|e^{-iH dt}|psi>.
VffModel fit_vff(const QubitHamiltonian& h, const StateVector& psi, double dt,
                 const FitConfig& config);

class VffPropagatorAdapter : public Propagator {
 public:
  explicit VffPropagatorAdapter(VffModel model)
      : model_(std::move(model)), circuit_(vff_propagator(model_, 1)) {}
  StateVector step(const StateVector& psi) const override {
    return apply_circuit(circuit_, psi);
  }
  std::optional<Circuit> step_circuit() const override { return circuit_; }
  const VffModel& model() const { return model_; }

 private:
  VffModel model_;
  Circuit circuit_;
};

}  // namespace vqpe
