#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "vqpe/measure.hpp"
#include "vqpe/pauli.hpp"

namespace vqpe {

struct TimeGrid {
  double dt = 0.1;
  int n_t = 1;  // number of evolved states beyond the reference

  TimeGrid() = default;
  TimeGrid(double dt_, int n_t_);
};

// One measured row s_m = <Phi_0|U^m|Phi_0>, m = 0 .. N_T + 1.
struct OverlapRow {
  double dt = 0.0;
  std::vector<Complex> entries;
};

struct SubspaceMatrices {
  Eigen::MatrixXcd S;
  std::optional<Eigen::MatrixXcd> H;
  std::optional<Eigen::MatrixXcd> U;
  TimeGrid grid;
  std::string provenance;  // exact | trotter | vff
  std::vector<Complex> s_row;  // measured row when built from one
};

struct EigenSolution {
  Eigen::VectorXd energies;               // ascending
  std::vector<Complex> phases;            // unitary path: lambda per state
  Eigen::MatrixXcd coefficients;          // columns in the time-evolved basis
  int n_independent = 0;
  double threshold = 0.0;
  std::vector<bool> nonunitary_flag;      // |lambda| outside [1-delta,1+delta]
};

// Measures s_m for m = 0 .. N_T + 1 by repeated propagator application.
OverlapRow build_overlap_row(const Propagator& propagator,
                             const StateVector& phi0, const TimeGrid& grid,
                             const MeasurementBackend& backend);

// Hermitian Toeplitz S from the row: S_jk = s_{k-j}, s_{-m} = conj(s_m).
SubspaceMatrices assemble_S(const OverlapRow& row, int n_t);

// Adds U_jk = s_{k+1-j}; needs the extra s_{N_T+1} entry.
SubspaceMatrices build_U_from_row(const OverlapRow& row, int n_t);

// All (N_T+1)^2 Hamiltonian elements via the weighted Hadamard test,
// Hermitized after measurement; S is measured from the same states.
SubspaceMatrices build_H_matrix(const Propagator& propagator,
                                const StateVector& phi0, const TimeGrid& grid,
                                const QubitHamiltonian& h,
                                const MeasurementBackend& backend);

// Full Gram-matrix path (quadratic measurement count); reference route
// for the Toeplitz identity checks.
Eigen::MatrixXcd measure_full_gram(const Propagator& propagator,
                                   const StateVector& phi0,
                                   const TimeGrid& grid,
                                   const MeasurementBackend& backend);

struct OrthoBasis {
  Eigen::MatrixXcd transform;  // columns v_i / sqrt(sigma_i)
  int n_independent = 0;
};

// Keeps eigenpairs of (S + S^dag)/2 with eigenvalue > threshold
// (absolute, matching the 0.1 / 1e-5 conventions).
OrthoBasis canonical_orthogonalize(const Eigen::MatrixXcd& S,
                                   double threshold);

EigenSolution solve_hamiltonian(const SubspaceMatrices& m, double threshold);

// delta = 0.5 window for |lambda| normalization; energies on the
// principal branch (-pi/dt, pi/dt].
EigenSolution solve_unitary(const SubspaceMatrices& m, double threshold,
                            double dt);

// Max over support pairs N != M of |(1/(N_T+1)) sum_j e^{-i t_j (E_N - E_M)}|.
double phase_cancellation_residual(const SpectralDecomposition& spectral,
                                   const TimeGrid& grid,
                                   double support_cutoff = 1e-12);

// {"dt":..,"nt":..,"provenance":..,"s_row":[[re,im],..],"H":..,"U":..}
std::string dump_matrices_json(const SubspaceMatrices& m);

}  // namespace vqpe
