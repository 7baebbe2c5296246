#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <sstream>
#include <unsupported/Eigen/KroneckerProduct>

#include "vqpe/circuit.hpp"
#include "vqpe/pauli.hpp"

using namespace vqpe;

namespace {

// Independent Kronecker-product route for dense Pauli words.
Eigen::MatrixXcd kron_word(const PauliWord& word, int n_qubits) {
  const Complex i{0.0, 1.0};
  Eigen::Matrix2cd x, y, z, id;
  x << 0, 1, 1, 0;
  y << 0, -i, i, 0;
  z << 1, 0, 0, -1;
  id.setIdentity();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(1, 1);
  // qubit 0 = least significant: highest qubit goes leftmost in the product
  for (int q = n_qubits - 1; q >= 0; --q) {
    Eigen::Matrix2cd factor = id;
    for (const auto& [wq, p] : word) {
      if (wq == q) factor = (p == 'X') ? x : (p == 'Y') ? y : z;
    }
    m = Eigen::kroneckerProduct(m, factor).eval();
  }
  return m;
}

Eigen::MatrixXcd kron_dense(const QubitHamiltonian& h) {
  const long dim = 1L << h.n_qubits;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& t : h.terms) m += t.coefficient * kron_word(t.word, h.n_qubits);
  return m;
}

const PauliTerm* find_term(const QubitHamiltonian& h, const PauliWord& w) {
  for (const auto& t : h.terms) {
    if (t.word == w) return &t;
  }
  return nullptr;
}

}  // namespace

TEST_CASE("jordan_wigner number operator") {
  QubitHamiltonian h = jordan_wigner(
      {{FermionTerm::Kind::OneBody, 0, 0, 0, 0, 1.0}}, 1);
  // n_0 = (1 - Z_0)/2
  REQUIRE(h.terms.size() == 2);
  const auto* id = find_term(h, {});
  const auto* z0 = find_term(h, {{0, 'Z'}});
  REQUIRE(id != nullptr);
  REQUIRE(z0 != nullptr);
  CHECK(id->coefficient.real() == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(z0->coefficient.real() == doctest::Approx(-0.5).epsilon(1e-14));
}

TEST_CASE("jordan_wigner hopping pair") {
  QubitHamiltonian h = jordan_wigner(
      {{FermionTerm::Kind::OneBody, 0, 1, 0, 0, 1.0},
       {FermionTerm::Kind::OneBody, 1, 0, 0, 0, 1.0}},
      2);
  REQUIRE(h.terms.size() == 2);
  const auto* xx = find_term(h, {{0, 'X'}, {1, 'X'}});
  const auto* yy = find_term(h, {{0, 'Y'}, {1, 'Y'}});
  REQUIRE(xx != nullptr);
  REQUIRE(yy != nullptr);
  CHECK(xx->coefficient.real() == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(yy->coefficient.real() == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("jordan_wigner empty input") {
  QubitHamiltonian h = jordan_wigner({}, 3);
  CHECK(h.terms.empty());
  CHECK(h.n_qubits == 3);
}

TEST_CASE("jordan_wigner rejects bad input") {
  CHECK_THROWS_AS(
      jordan_wigner({{FermionTerm::Kind::OneBody, 0, 5, 0, 0, 1.0}}, 2),
      std::out_of_range);
  // a^dag_0 a_1 alone is not Hermitian
  CHECK_THROWS_AS(
      jordan_wigner({{FermionTerm::Kind::OneBody, 0, 1, 0, 0, 1.0}}, 2),
      std::invalid_argument);
}

TEST_CASE("jordan_wigner anticommutation relations") {
  const Complex one{1.0, 0.0};
  const int n = 4;
  const long dim = 1L << n;
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      QubitHamiltonian aj, akd;
      aj.n_qubits = akd.n_qubits = n;
      aj.terms = jw_ladder(j, false);
      akd.terms = jw_ladder(k, true);
      Eigen::MatrixXcd ma = Eigen::MatrixXcd::Zero(dim, dim);
      Eigen::MatrixXcd mb = Eigen::MatrixXcd::Zero(dim, dim);
      for (const auto& t : aj.terms) ma += t.coefficient * dense_word(t.word, n);
      for (const auto& t : akd.terms) mb += t.coefficient * dense_word(t.word, n);
      Eigen::MatrixXcd anti = ma * mb + mb * ma;
      Eigen::MatrixXcd expect = Eigen::MatrixXcd::Zero(dim, dim);
      if (j == k) expect.setIdentity();
      CHECK((anti - one * expect).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("hubbard dimer basics") {
  QubitHamiltonian h = hubbard_model(2, 1.0, 0.5);
  CHECK(h.n_qubits == 4);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(dense_matrix(h));
  const double closed_form = (0.5 - std::sqrt(0.25 + 16.0)) / 2.0;
  CHECK(solver.eigenvalues()[0] ==
        doctest::Approx(closed_form).epsilon(1e-12));
  CHECK(solver.eigenvalues()[0] == doctest::Approx(-1.7655644).epsilon(1e-7));
}

TEST_CASE("hubbard single site") {
  QubitHamiltonian h = hubbard_model(1, 1.0, 0.0);
  // no hopping partner, U = 0: empty operator with ground energy 0
  Eigen::MatrixXcd m = dense_matrix(h);
  CHECK(m.cwiseAbs().maxCoeff() < 1e-12);
  CHECK_THROWS_AS(hubbard_model(0, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("parse_pauli_sum combines duplicates") {
  std::istringstream in("0.5 Z0\n0.5 Z0\n");
  QubitHamiltonian h = parse_pauli_sum(in);
  REQUIRE(h.terms.size() == 1);
  CHECK(h.terms[0].coefficient.real() == doctest::Approx(1.0));
  CHECK(h.n_qubits == 1);
}

TEST_CASE("parse_pauli_sum basic forms") {
  std::istringstream in(
      "# comment\nqubits: 2\n-1.0 X0 X1\n\n(0.25,0.0) Z1  # trailing\n");
  QubitHamiltonian h = parse_pauli_sum(in);
  CHECK(h.n_qubits == 2);
  CHECK(h.terms.size() == 2);
}

TEST_CASE("parse_pauli_sum errors name the line") {
  std::istringstream bad("0.5 Q3\n");
  try {
    parse_pauli_sum(bad);
    FAIL("expected parse error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("line 1") != std::string::npos);
  }
  std::istringstream overflow("qubits: 2\n1.0 Z5\n");
  CHECK_THROWS(parse_pauli_sum(overflow));
  std::istringstream nonherm("(0.0,1.0) Z0\n");
  CHECK_THROWS(parse_pauli_sum(nonherm));
}

TEST_CASE("parse / serialize round trip") {
  std::istringstream in("qubits: 3\n0.5 Z0\n-0.25 X0 Y2\n0.125\n");
  QubitHamiltonian h = parse_pauli_sum(in);
  std::istringstream again(serialize_pauli_sum(h));
  QubitHamiltonian h2 = parse_pauli_sum(again);
  REQUIRE(h.terms.size() == h2.terms.size());
  CHECK((dense_matrix(h) - dense_matrix(h2)).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(serialize_pauli_sum(h) == serialize_pauli_sum(h2));
}

TEST_CASE("dense_matrix single-qubit conventions") {
  QubitHamiltonian hz;
  hz.n_qubits = 1;
  hz.terms = {{1.0, {{0, 'Z'}}}};
  Eigen::MatrixXcd z = dense_matrix(hz);
  CHECK(z(0, 0).real() == doctest::Approx(1.0));
  CHECK(z(1, 1).real() == doctest::Approx(-1.0));
  QubitHamiltonian hx;
  hx.n_qubits = 1;
  hx.terms = {{1.0, {{0, 'X'}}}};
  Eigen::MatrixXcd x = dense_matrix(hx);
  CHECK(x(0, 1).real() == doctest::Approx(1.0));
  CHECK(x(1, 0).real() == doctest::Approx(1.0));
  CHECK(x(0, 0).real() == doctest::Approx(0.0));
}

TEST_CASE("dense_matrix matches Kronecker oracle") {
  QubitHamiltonian h = hubbard_model(2, 1.3, 0.7);
  CHECK((dense_matrix(h) - kron_dense(h)).cwiseAbs().maxCoeff() == 0.0);

  std::istringstream in("qubits: 4\n0.3 X0 Y1 Z3\n-0.2 Y2\n0.1 Z0 Z1 Z2 Z3\n");
  QubitHamiltonian h2 = parse_pauli_sum(in);
  CHECK((dense_matrix(h2) - kron_dense(h2)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("spectral_decompose conventions") {
  QubitHamiltonian h;
  h.n_qubits = 1;
  h.terms = {{1.0, {{0, 'Z'}}}};
  StateVector ref = StateVector::basis_state(1, 0);
  SpectralDecomposition sd = spectral_decompose(h, ref.amplitudes);
  CHECK(sd.energies[0] == doctest::Approx(-1.0));
  CHECK(sd.energies[1] == doctest::Approx(1.0));
  CHECK(std::abs(sd.reference_amps[0]) < 1e-12);
  CHECK(std::abs(sd.reference_amps[1]) == doctest::Approx(1.0));
  CHECK(sd.support_dimension() == 1);
}

TEST_CASE("spectral_decompose dimer support") {
  QubitHamiltonian h = hubbard_model(2, 1.0, 0.5);
  StateVector hf = hartree_fock_state(4, 2);
  SpectralDecomposition sd = spectral_decompose(h, hf.amplitudes);
  // gerade pair plus the antisymmetric doubly-occupied combination
  CHECK(sd.support_dimension() == 3);
  // eigenvector columns orthonormal
  Eigen::MatrixXcd gram = sd.eigenvectors.adjoint() * sd.eigenvectors;
  CHECK((gram - Eigen::MatrixXcd::Identity(16, 16)).cwiseAbs().maxCoeff() <
        1e-10);
  double total = 0.0;
  for (int n = 0; n < 16; ++n) total += std::norm(sd.reference_amps[n]);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("spectral_decompose eigenvector reference") {
  QubitHamiltonian h = hubbard_model(2, 1.0, 0.5);
  SpectralDecomposition first =
      spectral_decompose(h, Eigen::VectorXcd::Unit(16, 0));
  StateVector eig;
  eig.n_qubits = 4;
  eig.amplitudes = first.eigenvectors.col(0);
  SpectralDecomposition sd = spectral_decompose(h, eig.amplitudes);
  CHECK(sd.support_dimension() == 1);
}
