#include "vqpe/measure.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace vqpe {

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t element) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (element + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

ExactPropagator::ExactPropagator(const QubitHamiltonian& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(dense_matrix(h));
  energies_ = solver.eigenvalues();
  vectors_ = solver.eigenvectors();
}

StateVector ExactPropagator::evolve(const StateVector& psi, double t) const {
  if (psi.amplitudes.size() != vectors_.rows()) {
    throw std::invalid_argument("ExactPropagator: register mismatch");
  }
  Eigen::VectorXcd coeffs = vectors_.adjoint() * psi.amplitudes;
  for (Eigen::Index n = 0; n < coeffs.size(); ++n) {
    coeffs[n] *= std::exp(Complex{0.0, -energies_[n] * t});
  }
  StateVector out = psi;
  out.amplitudes = vectors_ * coeffs;
  return out;
}

StateVector exact_evolve(const QubitHamiltonian& h, double t,
                         const StateVector& psi) {
  return ExactPropagator(h).evolve(psi, t);
}

StateVector hadamard_test_state(const StateVector& phi_j,
                                const StateVector& phi_k) {
  if (phi_j.n_qubits != phi_k.n_qubits) {
    throw std::invalid_argument("hadamard_test_state: register mismatch");
  }
  const long dim = phi_j.amplitudes.size();
  StateVector joint;
  joint.n_qubits = phi_j.n_qubits + 1;
  joint.amplitudes.resize(2 * dim);
  joint.amplitudes.head(dim) = 0.5 * (phi_k.amplitudes + phi_j.amplitudes);
  joint.amplitudes.tail(dim) = 0.5 * (phi_k.amplitudes - phi_j.amplitudes);
  return joint;
}

namespace {

// Expectation of (ancilla Pauli) (x) (system word) on the joint state.
double joint_expectation(const StateVector& joint, AncillaBasis basis,
                         const PauliWord& word) {
  const long dim = joint.amplitudes.size() / 2;
  Eigen::VectorXcd lo = joint.amplitudes.head(dim);
  Eigen::VectorXcd hi = joint.amplitudes.tail(dim);
  Eigen::VectorXcd plo = apply_word(word, lo);
  Eigen::VectorXcd phi = apply_word(word, hi);
  if (basis == AncillaBasis::Z) {
    return (lo.dot(plo) - hi.dot(phi)).real();
  }
  // <Y_a (x) P> = 2 Im <lo| P |hi>
  return 2.0 * lo.dot(phi).imag();
}

double sample_pm1(double value, long shots, std::mt19937_64& rng) {
  const double p = std::clamp(0.5 * (1.0 + value), 0.0, 1.0);
  std::binomial_distribution<long> dist(shots, p);
  const long plus = dist(rng);
  return static_cast<double>(2 * plus - shots) / static_cast<double>(shots);
}

}  // namespace

double measure_overlap_part(const StateVector& phi_j, const StateVector& phi_k,
                            AncillaBasis basis,
                            const MeasurementBackend& backend,
                            std::uint64_t element_index) {
  const StateVector joint = hadamard_test_state(phi_j, phi_k);
  const double exact = joint_expectation(joint, basis, {});
  if (backend.mode == MeasurementBackend::Mode::Exact) return exact;
  if (backend.shots < 1) throw std::invalid_argument("shots >= 1 required");
  // Separate streams for the Z- and Y-basis runs of the same element.
  const std::uint64_t sub = 2 * element_index + (basis == AncillaBasis::Y);
  std::mt19937_64 rng(derive_seed(backend.seed, sub));
  return sample_pm1(exact, backend.shots, rng);
}

Complex measure_overlap(const StateVector& phi_j, const StateVector& phi_k,
                        const MeasurementBackend& backend,
                        std::uint64_t element_index) {
  return {measure_overlap_part(phi_j, phi_k, AncillaBasis::Z, backend,
                               element_index),
          measure_overlap_part(phi_j, phi_k, AncillaBasis::Y, backend,
                               element_index)};
}

double measure_weighted_part(const StateVector& phi_j, const StateVector& phi_k,
                             const QubitHamiltonian& h, AncillaBasis basis,
                             const MeasurementBackend& backend,
                             std::uint64_t element_index) {
  if ((1L << h.n_qubits) != phi_j.amplitudes.size()) {
    throw std::invalid_argument("measure_weighted: register mismatch");
  }
  const StateVector joint = hadamard_test_state(phi_j, phi_k);
  double identity_coeff = 0.0;
  long n_measured = 0;
  for (const auto& t : h.terms) {
    if (t.word.empty()) {
      identity_coeff += t.coefficient.real();
    } else {
      ++n_measured;
    }
  }
  double total = identity_coeff * joint_expectation(joint, basis, {});
  if (backend.mode == MeasurementBackend::Mode::Exact) {
    for (const auto& t : h.terms) {
      if (t.word.empty()) continue;
      total += t.coefficient.real() * joint_expectation(joint, basis, t.word);
    }
    return total;
  }
  if (backend.shots < 1) throw std::invalid_argument("shots >= 1 required");
  const long per_term =
      std::max<long>(1, backend.shots / std::max<long>(1, n_measured));
  std::uint64_t sub = 2 * element_index + (basis == AncillaBasis::Y);
  std::mt19937_64 rng(derive_seed(backend.seed ^ 0x48616d6dULL, sub));
  for (const auto& t : h.terms) {
    if (t.word.empty()) continue;
    const double exact = joint_expectation(joint, basis, t.word);
    total += t.coefficient.real() * sample_pm1(exact, per_term, rng);
  }
  return total;
}

Complex measure_weighted(const StateVector& phi_j, const StateVector& phi_k,
                         const QubitHamiltonian& h,
                         const MeasurementBackend& backend,
                         std::uint64_t element_index) {
  return {measure_weighted_part(phi_j, phi_k, h, AncillaBasis::Z, backend,
                                element_index),
          measure_weighted_part(phi_j, phi_k, h, AncillaBasis::Y, backend,
                                element_index)};
}

double hadamard_test(const Circuit& build_j, const Circuit& build_k,
                     const StateVector& phi0, AncillaBasis basis,
                     const MeasurementBackend& backend,
                     std::uint64_t element_index) {
  return measure_overlap_part(apply_circuit(build_j, phi0),
                              apply_circuit(build_k, phi0), basis, backend,
                              element_index);
}

double hadamard_test_weighted(const Circuit& build_j, const Circuit& build_k,
                              const StateVector& phi0,
                              const QubitHamiltonian& h, AncillaBasis basis,
                              const MeasurementBackend& backend,
                              std::uint64_t element_index) {
  return measure_weighted_part(apply_circuit(build_j, phi0),
                               apply_circuit(build_k, phi0), h, basis, backend,
                               element_index);
}

}  // namespace vqpe
