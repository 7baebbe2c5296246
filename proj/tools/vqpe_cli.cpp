#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "vqpe/experiment.hpp"
#include "vqpe/qpe.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

vqpe::ExperimentConfig load_config(
    const std::string& config_path,
    const std::vector<std::pair<std::string, std::string>>& overrides) {
  vqpe::ExperimentConfig config =
      vqpe::ExperimentConfig::from_json(read_file(config_path));
  for (const auto& [key, value] : overrides) {
    config.apply_override(key, value);
  }
  config.validate();
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Variational quantum phase estimation simulator"};
  app.require_subcommand(1);

  std::string config_path, output_path;
  std::vector<std::pair<std::string, std::string>> overrides;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("-c,--config", config_path, "experiment config (JSON)")
        ->required();
    cmd->add_option("-o,--output", output_path, "output file ('-' = stdout)");
    cmd->add_option_function<std::vector<std::string>>(
        "--set",
        [&](const std::vector<std::string>& kvs) {
          for (const auto& kv : kvs) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) {
              throw CLI::ValidationError("--set expects key=value");
            }
            overrides.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
          }
        },
        "override config fields (method=, threshold=, shots=, seed=, ...)");
  };

  auto* run = app.add_subcommand("run", "scan over dt/N_T and emit energies");
  add_common(run);

  auto* fit = app.add_subcommand("fit-vff", "fit the VFF model and dump it");
  add_common(fit);

  auto* gates = app.add_subcommand("gate-counts",
                                   "Trotter step vs VFF propagator gate counts");
  add_common(gates);

  auto* qpe = app.add_subcommand("qpe", "textbook QPE ancilla distribution");
  add_common(qpe);
  int qpe_ancillas = 4;
  double qpe_t = 0.5;
  qpe->add_option("--ancillas", qpe_ancillas, "number of phase qubits");
  qpe->add_option("--time", qpe_t, "evolution time t");

  auto* dump = app.add_subcommand("dump-matrices", "S/H/U matrices as JSON");
  add_common(dump);

  CLI11_PARSE(app, argc, argv);

  try {
    const vqpe::ExperimentConfig config = load_config(config_path, overrides);

    if (run->parsed()) {
      const vqpe::ExperimentResult result = vqpe::run_experiment(config);
      write_output(output_path, vqpe::results_csv(result.rows));
      return result.any_failures ? 2 : 0;
    }

    if (fit->parsed()) {
      const vqpe::QubitHamiltonian h = vqpe::load_system(config);
      const vqpe::StateVector phi0 = vqpe::reference_state(config, h);
      const vqpe::VffModel model =
          vqpe::fit_vff(h, phi0, config.dt_values.front(), config.vff);
      write_output(output_path, model.to_json() + "\n");
      std::cerr << "final cost " << model.fit.final_cost << " after "
                << model.fit.restarts_used << " restart(s)\n";
      return 0;
    }

    if (gates->parsed()) {
      std::ostringstream out;
      out << "label,gates,cnots\n";
      for (const auto& row : vqpe::report_gate_counts(config)) {
        out << row.label << ',' << row.gates << ',' << row.cnots << '\n';
      }
      write_output(output_path, out.str());
      return 0;
    }

    if (qpe->parsed()) {
      const vqpe::QubitHamiltonian h = vqpe::load_system(config);
      const vqpe::StateVector phi0 = vqpe::reference_state(config, h);
      const vqpe::QpeResult result =
          vqpe::run_qpe(h, phi0, qpe_ancillas, qpe_t);
      write_output(output_path, vqpe::qpe_distribution_csv(result));
      return 0;
    }

    if (dump->parsed()) {
      const vqpe::QubitHamiltonian h = vqpe::load_system(config);
      const vqpe::StateVector phi0 = vqpe::reference_state(config, h);
      const double dt = config.dt_values.front();
      const int nt = config.nt_values.front();
      const vqpe::TimeGrid grid(dt, nt);
      const vqpe::ExactStepPropagator prop(h, dt);
      vqpe::SubspaceMatrices with_h =
          vqpe::build_H_matrix(prop, phi0, grid, h, config.backend);
      const vqpe::OverlapRow row =
          vqpe::build_overlap_row(prop, phi0, grid, config.backend);
      vqpe::SubspaceMatrices m = vqpe::build_U_from_row(row, nt);
      m.H = with_h.H;
      m.provenance = "exact";
      write_output(output_path, vqpe::dump_matrices_json(m) + "\n");
      return 0;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
