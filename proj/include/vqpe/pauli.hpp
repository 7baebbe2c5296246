#pragma once

#include <Eigen/Dense>
#include <complex>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace vqpe {

using Complex = std::complex<double>;

// Pauli word: sorted (qubit, letter) pairs, letter in {X, Y, Z}.
// The identity is the empty word.
using PauliWord = std::vector<std::pair<int, char>>;

struct PauliTerm {
  Complex coefficient{0.0, 0.0};
  PauliWord word;  // sorted by qubit index, no duplicates
};

std::string word_to_string(const PauliWord& word);

// Product of two Pauli words including the accumulated phase
// (XY = iZ etc.). Returns {phase, word}.
std::pair<Complex, PauliWord> multiply_words(const PauliWord& a,
                                             const PauliWord& b);

struct QubitHamiltonian {
  int n_qubits = 0;
  std::vector<PauliTerm> terms;

  // Combines duplicate words, prunes coefficients below 1e-12 and sorts
  // terms lexicographically by word. Throws if any combined coefficient
  // has |imag| > 1e-12 (the operator must be Hermitian).
  void normalize();
};

// Generic Pauli-sum combination without the Hermiticity check; used for
// intermediate (non-Hermitian) operators such as single ladder operators.
std::vector<PauliTerm> combine_terms(std::vector<PauliTerm> terms,
                                     double prune = 1e-12);

struct FermionTerm {
  enum class Kind { OneBody, TwoBody };
  Kind kind = Kind::OneBody;
  // one-body: coeff * a^dag_p a_q
  // two-body: coeff * a^dag_p a^dag_q a_r a_s  (physicist ordering)
  int p = 0, q = 0, r = 0, s = 0;
  double coefficient = 0.0;
};

// Pauli-sum image of a single creation (dagger = true) or annihilation
// operator on mode j under the Jordan-Wigner encoding.
std::vector<PauliTerm> jw_ladder(int j, bool dagger);

QubitHamiltonian jordan_wigner(const std::vector<FermionTerm>& terms,
                               int n_spin_orbitals);

// Open-chain Hubbard model on 2*n_sites qubits, interleaved spin layout:
// qubit 2i = site i up, qubit 2i+1 = site i down.
QubitHamiltonian hubbard_model(int n_sites, double t, double U);

// Pauli-sum text format: optional "qubits: N" header, one term per line
// ("<coeff> X0 Z3"), '#' comments, blank lines ignored.
QubitHamiltonian parse_pauli_sum(std::istream& in);
QubitHamiltonian parse_pauli_sum_file(const std::string& path);
std::string serialize_pauli_sum(const QubitHamiltonian& h);

inline constexpr int kOracleQubitLimit = 14;

// Dense 2^n x 2^n matrix of the Hamiltonian, qubit 0 = least significant
// bit of the basis index.
Eigen::MatrixXcd dense_matrix(const QubitHamiltonian& h);

// Dense matrix of a single Pauli word on n qubits (unit coefficient).
Eigen::MatrixXcd dense_word(const PauliWord& word, int n_qubits);

// In-place action of a Pauli word on an amplitude vector.
Eigen::VectorXcd apply_word(const PauliWord& word,
                            const Eigen::VectorXcd& amps);

struct SpectralDecomposition {
  Eigen::VectorXd energies;        // ascending
  Eigen::MatrixXcd eigenvectors;   // columns, orthonormal
  Eigen::VectorXcd reference_amps; // phi^0_N = <N|Phi_0>

  // Number of eigenstates with |phi^0_N|^2 above the cutoff.
  int support_dimension(double cutoff = 1e-12) const;
};

SpectralDecomposition spectral_decompose(const QubitHamiltonian& h,
                                         const Eigen::VectorXcd& reference);

}  // namespace vqpe
