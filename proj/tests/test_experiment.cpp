#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "vqpe/experiment.hpp"

using namespace vqpe;

namespace {

double dimer_ground() { return (0.5 - std::sqrt(0.25 + 16.0)) / 2.0; }

const char* kDimerConfig = R"({
  "system": "hubbard",
  "hubbard": {"sites": 2, "t": 1.0, "U": 0.5},
  "reference": {"n_electrons": 2},
  "method": "vqpe-exact",
  "diagonalization": "hamiltonian",
  "grid": {"dt": [0.1], "nt": [4]},
  "backend": {"mode": "exact"},
  "threshold": 1e-5
})";

}  // namespace

TEST_CASE("config parsing and validation") {
  ExperimentConfig c = ExperimentConfig::from_json(kDimerConfig);
  CHECK(c.system == "hubbard");
  CHECK(c.hubbard_u == 0.5);
  CHECK(c.n_electrons == 2);
  CHECK(c.method == Method::VqpeExact);
  CHECK(c.diag == Diagonalization::Hamiltonian);
  CHECK(c.dt_values == std::vector<double>{0.1});
  CHECK(c.nt_values == std::vector<int>{4});
  CHECK(c.threshold == 1e-5);
  CHECK(c.repeats == 1);

  // seed is mandatory in shot mode
  CHECK_THROWS_WITH_AS(
      (void)ExperimentConfig::from_json(
          R"({"backend": {"mode": "shots", "shots": 100}})"),
      "backend.seed: required in shot mode", std::invalid_argument);

  CHECK_THROWS(ExperimentConfig::from_json(R"({"system": "molecule"})"));
  CHECK_THROWS(ExperimentConfig::from_json(R"({"threshold": -1.0})"));
  CHECK_THROWS(ExperimentConfig::from_json(R"({"grid": {"dt": []}})"));
  CHECK_THROWS(ExperimentConfig::from_json(R"({"repeats": 0})"));
  CHECK_THROWS(ExperimentConfig::from_json(
      R"({"system": "pauli-file"})"));  // missing path
}

TEST_CASE("cli overrides") {
  ExperimentConfig c = ExperimentConfig::from_json(kDimerConfig);
  c.apply_override("threshold", "0.1");
  CHECK(c.threshold == 0.1);
  c.apply_override("method", "vqpe-trotter");
  CHECK(c.method == Method::VqpeTrotter);
  c.apply_override("seed", "99");
  CHECK(c.backend.seed == 99);
  c.apply_override("repeats", "3");
  CHECK(c.repeats == 3);
  CHECK_THROWS(c.apply_override("bogus", "1"));
}

TEST_CASE("exact experiment reproduces the dimer ground state") {
  ExperimentConfig c = ExperimentConfig::from_json(kDimerConfig);
  ExperimentResult r = run_experiment(c);
  CHECK(!r.any_failures);
  REQUIRE(!r.rows.empty());
  const ResultRow& ground = r.rows.front();
  CHECK(ground.state_index == 0);
  CHECK(ground.status == "ok");
  CHECK(ground.energy == doctest::Approx(dimer_ground()).epsilon(1e-8));
  CHECK(ground.n_independent >= 2);
  CHECK(ground.mean_energy == ground.energy);  // single repeat
  CHECK(ground.std_energy == 0.0);
}

TEST_CASE("nt = 0 gives the reference energy row") {
  ExperimentConfig c = ExperimentConfig::from_json(kDimerConfig);
  c.nt_values = {0};
  ExperimentResult r = run_experiment(c);
  REQUIRE(r.rows.size() == 1);
  // <HF|H|HF> = U/2 + U/2 ... for the dimer with doubly occupied site 0
  // the Hartree-Fock basis state has energy U = 0.5... compute via oracle
  QubitHamiltonian h = load_system(c);
  StateVector phi0 = reference_state(c, h);
  Eigen::MatrixXcd hd = dense_matrix(h);
  Complex want = phi0.amplitudes.adjoint() * hd * phi0.amplitudes;
  CHECK(r.rows[0].energy == doctest::Approx(want.real()).epsilon(1e-12));
  CHECK(r.rows[0].n_independent == 1);
}

TEST_CASE("both paths in one run") {
  ExperimentConfig c = ExperimentConfig::from_json(kDimerConfig);
  c.diag = Diagonalization::Both;
  ExperimentResult r = run_experiment(c);
  bool saw_h = false, saw_u = false;
  double eh = 0.0, eu = 0.0;
  for (const auto& row : r.rows) {
    if (row.state_index != 0) continue;
    if (row.method == "hamiltonian") {
      saw_h = true;
      eh = row.energy;
    }
    if (row.method == "unitary") {
      saw_u = true;
      eu = row.energy;
    }
  }
  REQUIRE(saw_h);
  REQUIRE(saw_u);
  CHECK(std::abs(eh - eu) < 1e-8);
}

TEST_CASE("shot-mode output is seed-deterministic") {
  ExperimentConfig c = ExperimentConfig::from_json(kDimerConfig);
  c.backend.mode = MeasurementBackend::Mode::Shots;
  c.backend.shots = 2000;
  c.backend.seed = 1234;
  c.threshold = 0.1;
  c.repeats = 3;

  std::string a = results_csv(run_experiment(c).rows);
  std::string b = results_csv(run_experiment(c).rows);
  CHECK(a == b);

  c.backend.seed = 1235;
  std::string d = results_csv(run_experiment(c).rows);
  CHECK(a != d);
}

TEST_CASE("repeats populate error bars") {
  ExperimentConfig c = ExperimentConfig::from_json(kDimerConfig);
  c.backend.mode = MeasurementBackend::Mode::Shots;
  c.backend.shots = 2000;
  c.backend.seed = 7;
  c.threshold = 0.1;
  c.repeats = 4;
  ExperimentResult r = run_experiment(c);
  bool nonzero_std = false;
  for (const auto& row : r.rows) {
    if (row.status != "ok") continue;
    CHECK(row.repeat >= 0);
    CHECK(row.repeat < 4);
    if (row.std_energy > 0.0) nonzero_std = true;
  }
  CHECK(nonzero_std);
}

TEST_CASE("cell failures are recorded, not fatal") {
  ExperimentConfig c = ExperimentConfig::from_json(kDimerConfig);
  c.threshold = 10.0;  // nothing survives orthogonalization
  ExperimentResult r = run_experiment(c);
  CHECK(r.any_failures);
  REQUIRE(!r.rows.empty());
  CHECK(r.rows[0].status.substr(0, 6) == "error:");
}

TEST_CASE("csv schema") {
  ExperimentConfig c = ExperimentConfig::from_json(kDimerConfig);
  std::string csv = results_csv(run_experiment(c).rows);
  std::istringstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header ==
        "system,dt,nt,n_independent,method,state_index,energy,lambda_re,"
        "lambda_im,repeat,mean_energy,std_energy,status");
  std::string row;
  std::getline(in, row);
  int commas = 0;
  for (char ch : row) commas += (ch == ',');
  CHECK(commas == 12);
  CHECK(row.find("hubbard2") == 0);
}

TEST_CASE("pauli file systems load") {
  const std::string path = "test_experiment_system.pauli";
  {
    std::ofstream out(path);
    out << "qubits: 2\n";
    out << "-1.0 Z0\n";
    out << "0.5 X0 X1\n";
  }
  ExperimentConfig c;
  c.system = "pauli-file";
  c.pauli_file = path;
  c.n_electrons = -1;
  c.basis_index = 1;
  c.nt_values = {3};
  ExperimentResult r = run_experiment(c);
  CHECK(!r.any_failures);
  // ground energy from the dense oracle
  QubitHamiltonian h = load_system(c);
  SpectralDecomposition sd =
      spectral_decompose(h, reference_state(c, h).amplitudes);
  // reference overlaps the ground state, so VQPE must reach it
  CHECK(r.rows.front().energy ==
        doctest::Approx(sd.energies[0]).epsilon(1e-8));
  std::remove(path.c_str());
}

TEST_CASE("gate counts document constant vff depth") {
  ExperimentConfig c = ExperimentConfig::from_json(kDimerConfig);
  c.vff.n_layers = 2;
  auto rows = report_gate_counts(c);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].label == "trotter-step");
  CHECK(rows[0].gates > 0);
  CHECK(rows[0].cnots > 0);
  CHECK(rows[1].label == "vff-power-1");
  CHECK(rows[2].label == "vff-power-50");
  CHECK(rows[1].gates == rows[2].gates);
  CHECK(rows[1].cnots == rows[2].cnots);
}
