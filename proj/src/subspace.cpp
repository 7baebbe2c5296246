#include "vqpe/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace vqpe {

TimeGrid::TimeGrid(double dt_, int n_t_) : dt(dt_), n_t(n_t_) {
  if (!(dt > 0.0)) throw std::invalid_argument("TimeGrid: dt > 0 required");
  if (n_t < 1) throw std::invalid_argument("TimeGrid: N_T >= 1 required");
}

OverlapRow build_overlap_row(const Propagator& propagator,
                             const StateVector& phi0, const TimeGrid& grid,
                             const MeasurementBackend& backend) {
  OverlapRow row;
  row.dt = grid.dt;
  StateVector phi_m = phi0;
  for (int m = 0; m <= grid.n_t + 1; ++m) {
    if (m > 0) phi_m = propagator.step(phi_m);
    row.entries.push_back(
        measure_overlap(phi0, phi_m, backend, static_cast<std::uint64_t>(m)));
  }
  return row;
}

namespace {

Complex row_entry(const OverlapRow& row, int lag) {
  const int a = std::abs(lag);
  if (a >= static_cast<int>(row.entries.size())) {
    throw std::out_of_range("overlap row too short");
  }
  return lag >= 0 ? row.entries[a] : std::conj(row.entries[a]);
}

}  // namespace

SubspaceMatrices assemble_S(const OverlapRow& row, int n_t) {
  if (static_cast<int>(row.entries.size()) < n_t + 1) {
    throw std::out_of_range("assemble_S: row holds fewer than N_T+1 entries");
  }
  SubspaceMatrices m;
  m.grid = TimeGrid(row.dt, n_t);
  m.s_row = row.entries;
  const int dim = n_t + 1;
  m.S.resize(dim, dim);
  for (int j = 0; j < dim; ++j) {
    for (int k = 0; k < dim; ++k) m.S(j, k) = row_entry(row, k - j);
  }
  return m;
}

SubspaceMatrices build_U_from_row(const OverlapRow& row, int n_t) {
  if (static_cast<int>(row.entries.size()) < n_t + 2) {
    throw std::out_of_range("build_U_from_row: needs entries up to N_T+1");
  }
  SubspaceMatrices m = assemble_S(row, n_t);
  const int dim = n_t + 1;
  Eigen::MatrixXcd u(dim, dim);
  for (int j = 0; j < dim; ++j) {
    for (int k = 0; k < dim; ++k) u(j, k) = row_entry(row, k + 1 - j);
  }
  m.U = u;
  return m;
}

SubspaceMatrices build_H_matrix(const Propagator& propagator,
                                const StateVector& phi0, const TimeGrid& grid,
                                const QubitHamiltonian& h,
                                const MeasurementBackend& backend) {
  const int dim = grid.n_t + 1;
  std::vector<StateVector> states;
  states.reserve(dim);
  states.push_back(phi0);
  for (int m = 1; m < dim; ++m) states.push_back(propagator.step(states.back()));

  SubspaceMatrices out;
  out.grid = grid;
  out.S.resize(dim, dim);
  Eigen::MatrixXcd hm(dim, dim);
  for (int j = 0; j < dim; ++j) {
    for (int k = 0; k < dim; ++k) {
      const auto elem = static_cast<std::uint64_t>(j * dim + k);
      out.S(j, k) = measure_overlap(states[j], states[k], backend, elem);
      hm(j, k) = measure_weighted(states[j], states[k], h, backend, elem);
    }
  }
  out.H = 0.5 * (hm + hm.adjoint().eval());
  for (int k = 0; k < dim; ++k) out.s_row.push_back(out.S(0, k));
  return out;
}

Eigen::MatrixXcd measure_full_gram(const Propagator& propagator,
                                   const StateVector& phi0,
                                   const TimeGrid& grid,
                                   const MeasurementBackend& backend) {
  const int dim = grid.n_t + 1;
  std::vector<StateVector> states;
  states.push_back(phi0);
  for (int m = 1; m < dim; ++m) states.push_back(propagator.step(states.back()));
  Eigen::MatrixXcd s(dim, dim);
  for (int j = 0; j < dim; ++j) {
    for (int k = 0; k < dim; ++k) {
      s(j, k) = measure_overlap(states[j], states[k], backend,
                                static_cast<std::uint64_t>(j * dim + k));
    }
  }
  return s;
}

OrthoBasis canonical_orthogonalize(const Eigen::MatrixXcd& S,
                                   double threshold) {
  const Eigen::MatrixXcd sym = 0.5 * (S + S.adjoint().eval());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(sym);
  const auto& vals = solver.eigenvalues();
  std::vector<int> keep;
  for (Eigen::Index i = 0; i < vals.size(); ++i) {
    if (vals[i] > threshold) keep.push_back(static_cast<int>(i));
  }
  OrthoBasis basis;
  basis.n_independent = static_cast<int>(keep.size());
  basis.transform.resize(S.rows(), keep.size());
  for (std::size_t c = 0; c < keep.size(); ++c) {
    basis.transform.col(c) =
        solver.eigenvectors().col(keep[c]) / std::sqrt(vals[keep[c]]);
  }
  return basis;
}

EigenSolution solve_hamiltonian(const SubspaceMatrices& m, double threshold) {
  if (!m.H) throw std::invalid_argument("solve_hamiltonian: H not present");
  const OrthoBasis basis = canonical_orthogonalize(m.S, threshold);
  if (basis.n_independent == 0) {
    throw std::runtime_error("no overlap eigenvalue above threshold");
  }
  const Eigen::MatrixXcd ht =
      basis.transform.adjoint() * (*m.H) * basis.transform;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(
      0.5 * (ht + ht.adjoint().eval()));
  EigenSolution sol;
  sol.energies = solver.eigenvalues();
  sol.coefficients = basis.transform * solver.eigenvectors();
  sol.n_independent = basis.n_independent;
  sol.threshold = threshold;
  sol.nonunitary_flag.assign(basis.n_independent, false);
  return sol;
}

EigenSolution solve_unitary(const SubspaceMatrices& m, double threshold,
                            double dt) {
  if (!m.U) throw std::invalid_argument("solve_unitary: U not present");
  const OrthoBasis basis = canonical_orthogonalize(m.S, threshold);
  if (basis.n_independent == 0) {
    throw std::runtime_error("no overlap eigenvalue above threshold");
  }
  const Eigen::MatrixXcd ut =
      basis.transform.adjoint() * (*m.U) * basis.transform;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(ut);

  const int n = basis.n_independent;
  constexpr double delta = 0.5;
  struct Entry {
    double energy;
    Complex lambda;
    bool flagged;
    int index;
  };
  std::vector<Entry> entries;
  for (int i = 0; i < n; ++i) {
    Complex lambda = solver.eigenvalues()[i];
    const double mod = std::abs(lambda);
    const bool flagged = mod < 1.0 - delta || mod > 1.0 + delta;
    if (!flagged && mod > 0.0) lambda /= mod;
    double energy = -std::arg(lambda) / dt;
    // principal branch (-pi/dt, pi/dt]
    if (energy <= -std::numbers::pi / dt) energy += 2.0 * std::numbers::pi / dt;
    entries.push_back({energy, lambda, flagged, i});
  }
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.energy < b.energy; });

  EigenSolution sol;
  sol.energies.resize(n);
  sol.coefficients.resize(m.S.rows(), n);
  sol.n_independent = n;
  sol.threshold = threshold;
  for (int i = 0; i < n; ++i) {
    sol.energies[i] = entries[i].energy;
    sol.phases.push_back(entries[i].lambda);
    sol.nonunitary_flag.push_back(entries[i].flagged);
    Eigen::VectorXcd c =
        basis.transform * solver.eigenvectors().col(entries[i].index);
    const double norm = std::sqrt(std::abs((c.adjoint() * m.S * c)(0, 0)));
    if (norm > 0.0) c /= norm;
    sol.coefficients.col(i) = c;
  }
  return sol;
}

double phase_cancellation_residual(const SpectralDecomposition& spectral,
                                   const TimeGrid& grid,
                                   double support_cutoff) {
  std::vector<double> support;
  for (Eigen::Index n = 0; n < spectral.energies.size(); ++n) {
    if (std::norm(spectral.reference_amps[n]) > support_cutoff) {
      support.push_back(spectral.energies[n]);
    }
  }
  double residual = 0.0;
  for (std::size_t a = 0; a < support.size(); ++a) {
    for (std::size_t b = 0; b < support.size(); ++b) {
      if (a == b) continue;
      Complex sum = 0.0;
      for (int j = 0; j <= grid.n_t; ++j) {
        sum += std::exp(Complex{0.0, -j * grid.dt * (support[a] - support[b])});
      }
      residual = std::max(residual, std::abs(sum) / (grid.n_t + 1));
    }
  }
  return residual;
}

namespace {

nlohmann::json matrix_json(const Eigen::MatrixXcd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index j = 0; j < m.rows(); ++j) {
    for (Eigen::Index k = 0; k < m.cols(); ++k) {
      rows.push_back({m(j, k).real(), m(j, k).imag()});
    }
  }
  return rows;
}

}  // namespace

std::string dump_matrices_json(const SubspaceMatrices& m) {
  nlohmann::json j;
  j["dt"] = m.grid.dt;
  j["nt"] = m.grid.n_t;
  j["provenance"] = m.provenance;
  nlohmann::json row = nlohmann::json::array();
  for (const auto& s : m.s_row) row.push_back({s.real(), s.imag()});
  j["s_row"] = row;
  if (m.H) j["H"] = matrix_json(*m.H);
  if (m.U) j["U"] = matrix_json(*m.U);
  return j.dump(2);
}

}  // namespace vqpe
