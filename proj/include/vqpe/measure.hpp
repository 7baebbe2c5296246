#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <optional>

#include "vqpe/circuit.hpp"
#include "vqpe/pauli.hpp"

namespace vqpe {

struct MeasurementBackend {
  enum class Mode { Exact, Shots };
  Mode mode = Mode::Exact;
  long shots = 10000;
  std::uint64_t seed = 0;

  static MeasurementBackend exact() { return {}; }
  static MeasurementBackend sampled(long shots, std::uint64_t seed) {
    return {Mode::Shots, shots, seed};
  }
};

// Independent per-element RNG stream: splitmix64 of master seed and
// element index, so matrix assembly order cannot change results.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t element);

enum class AncillaBasis { Z, Y };

// Exact e^{-iHt} via the spectral decomposition; reusable across times.
class ExactPropagator {
 public:
  explicit ExactPropagator(const QubitHamiltonian& h);
  StateVector evolve(const StateVector& psi, double t) const;

 private:
  Eigen::VectorXd energies_;
  Eigen::MatrixXcd vectors_;
};

StateVector exact_evolve(const QubitHamiltonian& h, double t,
                         const StateVector& psi);

// Joint (n+1)-qubit state at the end of the overlap measurement circuit:
// ancilla (highest qubit) entangled with (|phi_k> +/- |phi_j>)/2.
StateVector hadamard_test_state(const StateVector& phi_j,
                                const StateVector& phi_k);

// <Z_a> (Re) or <Y_a> (Im) of the overlap <phi_j|phi_k>, exact or
// Bernoulli-sampled from the ancilla marginal.
double measure_overlap_part(const StateVector& phi_j, const StateVector& phi_k,
                            AncillaBasis basis, const MeasurementBackend& backend,
                            std::uint64_t element_index = 0);

Complex measure_overlap(const StateVector& phi_j, const StateVector& phi_k,
                        const MeasurementBackend& backend,
                        std::uint64_t element_index = 0);

// Re or Im of <phi_j|H|phi_k>. Shot mode measures Z_a (x) P_k term by
// term with the budget split evenly; identity words are folded in
// classically as coefficient * S_jk.
double measure_weighted_part(const StateVector& phi_j, const StateVector& phi_k,
                             const QubitHamiltonian& h, AncillaBasis basis,
                             const MeasurementBackend& backend,
                             std::uint64_t element_index = 0);

Complex measure_weighted(const StateVector& phi_j, const StateVector& phi_k,
                         const QubitHamiltonian& h,
                         const MeasurementBackend& backend,
                         std::uint64_t element_index = 0);

// Circuit-facing form of the measurement: build_j and build_k act on the
// system register of phi0.
double hadamard_test(const Circuit& build_j, const Circuit& build_k,
                     const StateVector& phi0, AncillaBasis basis,
                     const MeasurementBackend& backend,
                     std::uint64_t element_index = 0);

double hadamard_test_weighted(const Circuit& build_j, const Circuit& build_k,
                              const StateVector& phi0,
                              const QubitHamiltonian& h, AncillaBasis basis,
                              const MeasurementBackend& backend,
                              std::uint64_t element_index = 0);

// One-step propagator used to generate the Krylov states.
class Propagator {
 public:
  virtual ~Propagator() = default;
  virtual StateVector step(const StateVector& psi) const = 0;
  // Circuit realization when one exists (Trotter, VFF); used for gate
  // counting and debug dumps.
  virtual std::optional<Circuit> step_circuit() const { return std::nullopt; }
};

class ExactStepPropagator : public Propagator {
 public:
  ExactStepPropagator(const QubitHamiltonian& h, double dt)
      : prop_(h), dt_(dt) {}
  StateVector step(const StateVector& psi) const override {
    return prop_.evolve(psi, dt_);
  }

 private:
  ExactPropagator prop_;
  double dt_;
};

class TrotterPropagator : public Propagator {
 public:
  TrotterPropagator(const QubitHamiltonian& h, double dt)
      : circuit_(trotter_step(h, dt)) {}
  StateVector step(const StateVector& psi) const override {
    return apply_circuit(circuit_, psi);
  }
  std::optional<Circuit> step_circuit() const override { return circuit_; }

 private:
  Circuit circuit_;
};

}  // namespace vqpe
