#include "vqpe/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace vqpe {

namespace {

Method parse_method(const std::string& s) {
  if (s == "vqpe-exact") return Method::VqpeExact;
  if (s == "vqpe-trotter") return Method::VqpeTrotter;
  if (s == "vff-vqpe") return Method::VffVqpe;
  throw std::invalid_argument("method: unknown value '" + s + "'");
}

Diagonalization parse_diag(const std::string& s) {
  if (s == "hamiltonian") return Diagonalization::Hamiltonian;
  if (s == "unitary") return Diagonalization::Unitary;
  if (s == "both") return Diagonalization::Both;
  throw std::invalid_argument("diagonalization: unknown value '" + s + "'");
}

std::string method_name(Method m) {
  switch (m) {
    case Method::VqpeExact: return "vqpe-exact";
    case Method::VqpeTrotter: return "vqpe-trotter";
    default: return "vff-vqpe";
  }
}

}  // namespace

void ExperimentConfig::validate() const {
  if (system != "hubbard" && system != "pauli-file") {
    throw std::invalid_argument("system: must be 'hubbard' or 'pauli-file'");
  }
  if (system == "pauli-file" && pauli_file.empty()) {
    throw std::invalid_argument("pauli_file: required for system=pauli-file");
  }
  if (system == "hubbard" && hubbard_sites < 1) {
    throw std::invalid_argument("hubbard.sites: must be >= 1");
  }
  if (dt_values.empty()) throw std::invalid_argument("grid.dt: at least one value");
  if (nt_values.empty()) throw std::invalid_argument("grid.nt: at least one value");
  for (double dt : dt_values) {
    if (!(dt > 0.0)) throw std::invalid_argument("grid.dt: values must be > 0");
  }
  for (int nt : nt_values) {
    if (nt < 0) throw std::invalid_argument("grid.nt: values must be >= 0");
  }
  if (repeats < 1) throw std::invalid_argument("repeats: must be >= 1");
  if (!(threshold > 0.0)) throw std::invalid_argument("threshold: must be > 0");
  if (backend.mode == MeasurementBackend::Mode::Shots && backend.shots < 1) {
    throw std::invalid_argument("backend.shots: must be >= 1");
  }
}

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  ExperimentConfig c;
  c.system = j.value("system", c.system);
  if (j.contains("hubbard")) {
    c.hubbard_sites = j["hubbard"].value("sites", c.hubbard_sites);
    c.hubbard_t = j["hubbard"].value("t", c.hubbard_t);
    c.hubbard_u = j["hubbard"].value("U", c.hubbard_u);
  }
  c.pauli_file = j.value("pauli_file", c.pauli_file);
  if (j.contains("reference")) {
    c.n_electrons = j["reference"].value("n_electrons", c.n_electrons);
    c.basis_index = j["reference"].value("basis_index", c.basis_index);
  }
  if (j.contains("method")) c.method = parse_method(j["method"].get<std::string>());
  if (j.contains("diagonalization")) {
    c.diag = parse_diag(j["diagonalization"].get<std::string>());
  }
  if (j.contains("grid")) {
    if (j["grid"].contains("dt")) {
      c.dt_values = j["grid"]["dt"].get<std::vector<double>>();
    }
    if (j["grid"].contains("nt")) {
      c.nt_values = j["grid"]["nt"].get<std::vector<int>>();
    }
  }
  if (j.contains("backend")) {
    const std::string mode = j["backend"].value("mode", std::string("exact"));
    if (mode == "exact") {
      c.backend.mode = MeasurementBackend::Mode::Exact;
    } else if (mode == "shots") {
      c.backend.mode = MeasurementBackend::Mode::Shots;
      if (!j["backend"].contains("seed")) {
        throw std::invalid_argument("backend.seed: required in shot mode");
      }
    } else {
      throw std::invalid_argument("backend.mode: must be 'exact' or 'shots'");
    }
    c.backend.shots = j["backend"].value("shots", c.backend.shots);
    c.backend.seed = j["backend"].value("seed", c.backend.seed);
  }
  c.threshold = j.value("threshold", c.threshold);
  c.repeats = j.value("repeats", c.repeats);
  if (j.contains("vff")) {
    c.vff.m_max = j["vff"].value("m_max", c.vff.m_max);
    c.vff.n_layers = j["vff"].value("layers", c.vff.n_layers);
    c.vff.k_steps = j["vff"].value("K", c.vff.k_steps);
    c.vff.restarts = j["vff"].value("restarts", c.vff.restarts);
    c.vff.max_iterations = j["vff"].value("max_iterations", c.vff.max_iterations);
    c.vff.seed = j["vff"].value("seed", c.vff.seed);
  }
  c.validate();
  return c;
}

void ExperimentConfig::apply_override(const std::string& key,
                                      const std::string& value) {
  if (key == "method") {
    method = parse_method(value);
  } else if (key == "diagonalization") {
    diag = parse_diag(value);
  } else if (key == "threshold") {
    threshold = std::stod(value);
  } else if (key == "shots") {
    backend.shots = std::stol(value);
  } else if (key == "seed") {
    backend.seed = std::stoull(value);
  } else if (key == "repeats") {
    repeats = std::stoi(value);
  } else {
    throw std::invalid_argument("unknown override '" + key + "'");
  }
}

QubitHamiltonian load_system(const ExperimentConfig& config) {
  if (config.system == "hubbard") {
    return hubbard_model(config.hubbard_sites, config.hubbard_t,
                         config.hubbard_u);
  }
  return parse_pauli_sum_file(config.pauli_file);
}

StateVector reference_state(const ExperimentConfig& config,
                            const QubitHamiltonian& h) {
  if (config.n_electrons >= 0) {
    return hartree_fock_state(h.n_qubits, config.n_electrons);
  }
  return StateVector::basis_state(h.n_qubits, config.basis_index);
}

namespace {

struct CellOutput {
  std::vector<ResultRow> rows;
  bool failed = false;
};

CellOutput run_cell(const ExperimentConfig& config, const QubitHamiltonian& h,
                    const StateVector& phi0, double dt, int nt, int repeat,
                    std::uint64_t cell_seed) {
  CellOutput out;
  const std::string sys_label =
      config.system == "hubbard"
          ? "hubbard" + std::to_string(config.hubbard_sites)
          : config.pauli_file;
  try {
    MeasurementBackend backend = config.backend;
    backend.seed = cell_seed;

    std::unique_ptr<Propagator> prop;
    switch (config.method) {
      case Method::VqpeExact:
        prop = std::make_unique<ExactStepPropagator>(h, dt);
        break;
      case Method::VqpeTrotter:
        prop = std::make_unique<TrotterPropagator>(h, dt);
        break;
      case Method::VffVqpe: {
        prop = std::make_unique<VffPropagatorAdapter>(
            fit_vff(h, phi0, dt, config.vff));
        break;
      }
    }

    auto emit = [&](const EigenSolution& sol, const std::string& path) {
      for (Eigen::Index i = 0; i < sol.energies.size(); ++i) {
        ResultRow row;
        row.system = sys_label;
        row.dt = dt;
        row.nt = nt;
        row.n_independent = sol.n_independent;
        row.method = path;
        row.repeat = repeat;
        row.state_index = static_cast<int>(i);
        row.energy = sol.energies[i];
        if (!sol.phases.empty()) row.lambda = sol.phases[i];
        out.rows.push_back(std::move(row));
      }
    };

    if (nt == 0) {
      // reference-only energy
      const double e = measure_weighted_part(phi0, phi0, h, AncillaBasis::Z,
                                             backend, 0);
      ResultRow row;
      row.system = sys_label;
      row.dt = dt;
      row.nt = 0;
      row.n_independent = 1;
      row.method = "hamiltonian";
      row.repeat = repeat;
      row.energy = e;
      out.rows.push_back(std::move(row));
      return out;
    }

    const TimeGrid grid(dt, nt);
    if (config.diag == Diagonalization::Hamiltonian ||
        config.diag == Diagonalization::Both) {
      SubspaceMatrices m = build_H_matrix(*prop, phi0, grid, h, backend);
      emit(solve_hamiltonian(m, config.threshold), "hamiltonian");
    }
    if (config.diag == Diagonalization::Unitary ||
        config.diag == Diagonalization::Both) {
      const OverlapRow row = build_overlap_row(*prop, phi0, grid, backend);
      SubspaceMatrices m = build_U_from_row(row, nt);
      emit(solve_unitary(m, config.threshold, dt), "unitary");
    }
  } catch (const std::exception& e) {
    ResultRow row;
    row.system = sys_label;
    row.dt = dt;
    row.nt = nt;
    row.repeat = repeat;
    row.status = std::string("error: ") + e.what();
    out.rows.push_back(std::move(row));
    out.failed = true;
  }
  return out;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  const QubitHamiltonian h = load_system(config);
  const StateVector phi0 = reference_state(config, h);

  ExperimentResult result;
  std::uint64_t cell = 0;
  for (double dt : config.dt_values) {
    for (int nt : config.nt_values) {
      for (int repeat = 0; repeat < config.repeats; ++repeat, ++cell) {
        const std::uint64_t cell_seed = derive_seed(config.backend.seed, cell);
        CellOutput out = run_cell(config, h, phi0, dt, nt, repeat, cell_seed);
        result.any_failures = result.any_failures || out.failed;
        result.rows.insert(result.rows.end(), out.rows.begin(),
                           out.rows.end());
      }
    }
  }

  // mean / sample std across repeats for each (dt, nt, method, state)
  std::map<std::tuple<double, int, std::string, int>, std::vector<double>> groups;
  for (const auto& row : result.rows) {
    if (row.status != "ok") continue;
    groups[{row.dt, row.nt, row.method, row.state_index}].push_back(row.energy);
  }
  for (auto& row : result.rows) {
    if (row.status != "ok") continue;
    const auto& g = groups[{row.dt, row.nt, row.method, row.state_index}];
    double mean = 0.0;
    for (double e : g) mean += e;
    mean /= static_cast<double>(g.size());
    double var = 0.0;
    for (double e : g) var += (e - mean) * (e - mean);
    row.mean_energy = mean;
    row.std_energy = g.size() > 1 ? std::sqrt(var / (g.size() - 1)) : 0.0;
  }
  return result;
}

std::string results_csv(const std::vector<ResultRow>& rows) {
  std::ostringstream out;
  out.precision(17);
  out << "system,dt,nt,n_independent,method,state_index,energy,lambda_re,"
         "lambda_im,repeat,mean_energy,std_energy,status\n";
  for (const auto& r : rows) {
    out << r.system << ',' << r.dt << ',' << r.nt << ',' << r.n_independent
        << ',' << r.method << ',' << r.state_index << ',' << r.energy << ','
        << r.lambda.real() << ',' << r.lambda.imag() << ',' << r.repeat << ','
        << r.mean_energy << ',' << r.std_energy << ',' << r.status << '\n';
  }
  return out.str();
}

std::vector<GateCountRow> report_gate_counts(const ExperimentConfig& config) {
  const QubitHamiltonian h = load_system(config);
  const double dt = config.dt_values.front();
  std::vector<GateCountRow> rows;

  const Circuit step = trotter_step(h, dt);
  rows.push_back({"trotter-step", static_cast<int>(step.gates.size()),
                  step.cnot_count()});

  const StateVector phi0 = reference_state(config, h);
  FitConfig fit = config.vff;
  fit.restarts = std::min(fit.restarts, 2);  // counting only needs a layout
  fit.max_iterations = std::min(fit.max_iterations, 5);
  const VffModel model = fit_vff(h, phi0, dt, fit);
  const Circuit v1 = vff_propagator(model, 1);
  const Circuit v50 = vff_propagator(model, 50);
  rows.push_back({"vff-power-1", static_cast<int>(v1.gates.size()),
                  v1.cnot_count()});
  rows.push_back({"vff-power-50", static_cast<int>(v50.gates.size()),
                  v50.cnot_count()});
  return rows;
}

}  // namespace vqpe
