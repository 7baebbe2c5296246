#pragma once

#include <string>
#include <vector>

#include "vqpe/measure.hpp"
#include "vqpe/subspace.hpp"
#include "vqpe/vff.hpp"

namespace vqpe {

enum class Method { VqpeExact, VqpeTrotter, VffVqpe };
enum class Diagonalization { Hamiltonian, Unitary, Both };

struct ExperimentConfig {
  // system
  std::string system = "hubbard";  // "hubbard" or "pauli-file"
  int hubbard_sites = 2;
  double hubbard_t = 1.0;
  double hubbard_u = 0.5;
  std::string pauli_file;

  // reference
  int n_electrons = -1;           // Hartree-Fock filling; -1 = use basis_index
  long basis_index = 0;

  Method method = Method::VqpeExact;
  Diagonalization diag = Diagonalization::Hamiltonian;

  std::vector<double> dt_values{0.1};
  std::vector<int> nt_values{4};

  MeasurementBackend backend;
  double threshold = 1e-5;
  int repeats = 1;

  FitConfig vff;

  void validate() const;  // throws with the offending field path
  static ExperimentConfig from_json(const std::string& text);
  // CLI overrides merged on top of the file values.
  void apply_override(const std::string& key, const std::string& value);
};

struct ResultRow {
  std::string system;
  double dt = 0.0;
  int nt = 0;
  int n_independent = 0;
  std::string method;  // "hamiltonian" or "unitary"
  int repeat = 0;
  int state_index = 0;
  double energy = 0.0;
  Complex lambda{0.0, 0.0};
  double mean_energy = 0.0;  // across repeats, per (dt, nt, method, state)
  double std_energy = 0.0;
  std::string status = "ok";
};

struct ExperimentResult {
  std::vector<ResultRow> rows;
  bool any_failures = false;
};

ExperimentResult run_experiment(const ExperimentConfig& config);

// system,dt,nt,n_independent,method,state_index,energy,lambda_re,
// lambda_im,repeat,mean_energy,std_energy,status
std::string results_csv(const std::vector<ResultRow>& rows);

struct GateCountRow {
  std::string label;
  int gates = 0;
  int cnots = 0;
};

// One Trotter step vs the full VFF propagator (powers 1 and 50 listed to
// document the constant-depth property).
std::vector<GateCountRow> report_gate_counts(const ExperimentConfig& config);

QubitHamiltonian load_system(const ExperimentConfig& config);
StateVector reference_state(const ExperimentConfig& config,
                            const QubitHamiltonian& h);

}  // namespace vqpe
