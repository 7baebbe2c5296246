#include "vqpe/vff.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "vqpe/optimize.hpp"

namespace vqpe {

std::vector<std::uint64_t> VffModel::masks_for(int n_qubits, int m_max) {
  std::vector<std::uint64_t> masks;
  for (std::uint64_t m = 0; m < (1ULL << n_qubits); ++m) {
    if (std::popcount(m) <= m_max) masks.push_back(m);
  }
  std::sort(masks.begin(), masks.end(), [](std::uint64_t a, std::uint64_t b) {
    const int pa = std::popcount(a), pb = std::popcount(b);
    return pa != pb ? pa < pb : a < b;
  });
  return masks;
}

std::vector<AnsatzLayer> VffModel::brick_layout(int n_qubits, int n_layers) {
  std::vector<AnsatzLayer> layers;
  for (int l = 0; l < n_layers; ++l) {
    AnsatzLayer layer;
    for (int w = l % 2; w + 1 < n_qubits; w += 2) {
      AnsatzBlock block;
      block.wires[0] = w;
      block.wires[1] = w + 1;
      layer.push_back(block);
    }
    layers.push_back(std::move(layer));
  }
  return layers;
}

int VffModel::n_parameters() const {
  int n = static_cast<int>(gamma_masks.size());
  for (const auto& layer : layers) n += 2 * static_cast<int>(layer.size());
  return n;
}

Eigen::VectorXd VffModel::parameters() const {
  Eigen::VectorXd p(n_parameters());
  Eigen::Index i = 0;
  for (Eigen::Index g = 0; g < gamma.size(); ++g) p[i++] = gamma[g];
  for (const auto& layer : layers) {
    for (const auto& block : layer) {
      p[i++] = block.theta[0];
      p[i++] = block.theta[1];
    }
  }
  return p;
}

void VffModel::set_parameters(const Eigen::VectorXd& p) {
  if (p.size() != n_parameters()) {
    throw std::invalid_argument("VffModel: parameter count mismatch");
  }
  gamma.resize(gamma_masks.size());
  Eigen::Index i = 0;
  for (Eigen::Index g = 0; g < gamma.size(); ++g) gamma[g] = p[i++];
  for (auto& layer : layers) {
    for (auto& block : layer) {
      block.theta[0] = p[i++];
      block.theta[1] = p[i++];
    }
  }
}

namespace {

PauliWord z_word(std::uint64_t mask) {
  PauliWord word;
  for (int q = 0; mask >> q; ++q) {
    if ((mask >> q) & 1) word.emplace_back(q, 'Z');
  }
  return word;
}

}  // namespace

Circuit diagonal_circuit(const std::vector<std::uint64_t>& masks,
                         const Eigen::VectorXd& gamma, int n_qubits,
                         int power) {
  if (gamma.size() != static_cast<Eigen::Index>(masks.size())) {
    throw std::invalid_argument("diagonal_circuit: gamma size mismatch");
  }
  Circuit c;
  c.n_qubits = n_qubits;
  for (std::size_t i = 0; i < masks.size(); ++i) {
    const double g = gamma[static_cast<Eigen::Index>(i)] * power;
    if (masks[i] == 0) {
      c.global_phase(g);
    } else {
      // e^{i g Z-word} = gadget(Z-word, -2g)
      c.append(pauli_gadget(z_word(masks[i]), -2.0 * g, n_qubits));
    }
  }
  return c;
}

namespace {

Circuit block_circuit(const AnsatzBlock& block, int n_qubits) {
  const int p = block.wires[0], q = block.wires[1];
  if (p == q || p < 0 || q < 0 || p >= n_qubits || q >= n_qubits) {
    throw std::invalid_argument("ansatz block: bad wire pair");
  }
  const double a = block.theta[0], b = block.theta[1];
  Circuit c;
  c.n_qubits = n_qubits;
  // e^{-i a (XX + YY) / 2}: the single-excitation sector rotation
  c.append(pauli_gadget({{p, 'X'}, {q, 'X'}}, a, n_qubits));
  c.append(pauli_gadget({{p, 'Y'}, {q, 'Y'}}, a, n_qubits));
  // sector phases e^{+-ib} and e^{ib} on |11>
  c.rz(p, 1.5 * b);
  c.rz(q, -0.5 * b);
  c.append(pauli_gadget({{p, 'Z'}, {q, 'Z'}}, -0.5 * b, n_qubits));
  c.global_phase(0.25 * b);
  return c;
}

}  // namespace

Circuit ansatz_circuit(const std::vector<AnsatzLayer>& layers, int n_qubits) {
  Circuit c;
  c.n_qubits = n_qubits;
  for (const auto& layer : layers) {
    std::vector<bool> used(n_qubits, false);
    for (const auto& block : layer) {
      for (int w : block.wires) {
        if (w >= 0 && w < n_qubits && used[w]) {
          throw std::invalid_argument("ansatz layer: wire collision");
        }
        if (w >= 0 && w < n_qubits) used[w] = true;
      }
      c.append(block_circuit(block, n_qubits));
    }
  }
  return c;
}

Circuit vff_propagator(const VffModel& model, int power) {
  const Circuit w = ansatz_circuit(model.layers, model.n_qubits);
  Circuit c;
  c.n_qubits = model.n_qubits;
  c.append(inverse(w));
  c.append(diagonal_circuit(model.gamma_masks, model.gamma, model.n_qubits,
                            power));
  c.append(w);
  return c;
}

Circuit controlled_vff_propagator(const VffModel& model, int power,
                                  int ancilla) {
  if (ancilla < model.n_qubits) {
    throw std::invalid_argument(
        "controlled_vff_propagator: ancilla inside system register");
  }
  const int n_total = std::max(model.n_qubits, ancilla + 1);
  Circuit w = ansatz_circuit(model.layers, model.n_qubits);
  w.n_qubits = n_total;
  Circuit c;
  c.n_qubits = n_total;
  c.append(inverse(w));
  for (std::size_t i = 0; i < model.gamma_masks.size(); ++i) {
    const double g = model.gamma[static_cast<Eigen::Index>(i)] * power;
    if (model.gamma_masks[i] == 0) {
      c.wire_phase(ancilla, g);
    } else {
      c.append(
          controlled_gadget(z_word(model.gamma_masks[i]), -2.0 * g, n_total,
                            ancilla));
    }
  }
  c.append(w);
  return c;
}

CostBreakdown vff_cost(const VffModel& model, const QubitHamiltonian& h,
                       const StateVector& psi, int k_steps) {
  if (k_steps < 1) throw std::invalid_argument("vff_cost: K >= 1 required");
  const ExactPropagator exact(h);
  CostBreakdown out;
  double sum = 0.0;
  const Circuit w = ansatz_circuit(model.layers, model.n_qubits);
  const StateVector rotated = apply_circuit(inverse(w), psi);
  for (int k = 1; k <= k_steps; ++k) {
    const Circuit d = diagonal_circuit(model.gamma_masks, model.gamma,
                                       model.n_qubits, k);
    const StateVector vk_psi = apply_circuit(w, apply_circuit(d, rotated));
    const StateVector target = exact.evolve(psi, k * model.dt);
    const double overlap =
        std::abs(target.amplitudes.dot(vk_psi.amplitudes));
    out.overlaps.push_back(overlap);
    sum += overlap * overlap;
  }
  out.cost = 1.0 - sum / k_steps;
  return out;
}

VffModel fit_vff(const QubitHamiltonian& h, const StateVector& psi, double dt,
                 const FitConfig& config) {
  VffModel model;
  model.n_qubits = h.n_qubits;
  model.dt = dt;
  model.m_max = config.m_max;
  model.gamma_masks = VffModel::masks_for(h.n_qubits, config.m_max);
  model.gamma = Eigen::VectorXd::Zero(model.gamma_masks.size());
  model.layers = VffModel::brick_layout(h.n_qubits, config.n_layers);

  const ExactPropagator exact(h);
  std::vector<StateVector> targets;
  for (int k = 1; k <= config.k_steps; ++k) {
    targets.push_back(exact.evolve(psi, k * dt));
  }

  auto cost_of = [&](const Eigen::VectorXd& p) {
    VffModel scratch = model;
    scratch.set_parameters(p);
    const Circuit w = ansatz_circuit(scratch.layers, scratch.n_qubits);
    const StateVector rotated = apply_circuit(inverse(w), psi);
    double sum = 0.0;
    for (int k = 1; k <= config.k_steps; ++k) {
      const Circuit d = diagonal_circuit(scratch.gamma_masks, scratch.gamma,
                                         scratch.n_qubits, k);
      const StateVector vk_psi = apply_circuit(w, apply_circuit(d, rotated));
      const double overlap =
          std::abs(targets[k - 1].amplitudes.dot(vk_psi.amplitudes));
      sum += overlap * overlap;
    }
    return 1.0 - sum / config.k_steps;
  };

  LbfgsOptions opts;
  opts.max_iterations = config.max_iterations;
  opts.fd_step = config.fd_step;

  bool have_best = false;
  LbfgsResult best;
  int restarts_used = 0;
  for (int r = 0; r < config.restarts; ++r) {
    std::mt19937_64 rng(derive_seed(config.seed, static_cast<std::uint64_t>(r)));
    std::uniform_real_distribution<double> init(-0.1, 0.1);
    Eigen::VectorXd x0(model.n_parameters());
    for (Eigen::Index i = 0; i < x0.size(); ++i) x0[i] = init(rng);
    LbfgsResult res = minimize_lbfgs(cost_of, std::move(x0), opts);
    ++restarts_used;
    if (!res.finite) continue;
    if (!have_best || res.value < best.value) {
      best = std::move(res);
      have_best = true;
    }
    if (best.value < 1e-14) break;
  }
  if (!have_best) {
    throw std::runtime_error("fit_vff: every restart diverged");
  }
  model.set_parameters(best.x);

  // Align the unobservable global phase with the exact one-step phase.
  const StateVector v_psi = apply_circuit(vff_propagator(model, 1), psi);
  const Complex v1 = psi.amplitudes.dot(v_psi.amplitudes);
  const Complex t1 = psi.amplitudes.dot(targets[0].amplitudes);
  if (std::abs(v1) > 1e-14 && std::abs(t1) > 1e-14) {
    model.gamma[0] += std::arg(t1) - std::arg(v1);
  }

  const CostBreakdown breakdown = vff_cost(model, h, psi, config.k_steps);
  model.fit.cost_trace = best.trace;
  model.fit.final_cost = breakdown.cost;
  model.fit.overlaps = breakdown.overlaps;
  model.fit.restarts_used = restarts_used;
  return model;
}

namespace {

std::string mask_name(std::uint64_t mask) {
  return word_to_string(z_word(mask));
}

std::uint64_t name_mask(const std::string& name) {
  if (name.empty()) return 0;
  std::uint64_t mask = 0;
  std::size_t pos = 0;
  while (pos < name.size()) {
    if (name[pos] == ' ') { ++pos; continue; }
    if (name[pos] != 'Z') throw std::runtime_error("bad gamma key: " + name);
    std::size_t used = 0;
    const int q = std::stoi(name.substr(pos + 1), &used);
    mask |= 1ULL << q;
    pos += 1 + used;
  }
  return mask;
}

}  // namespace

std::string VffModel::to_json() const {
  nlohmann::json j;
  j["n_qubits"] = n_qubits;
  j["dt"] = dt;
  j["m_max"] = m_max;
  nlohmann::json g = nlohmann::json::object();
  for (std::size_t i = 0; i < gamma_masks.size(); ++i) {
    g[mask_name(gamma_masks[i])] = gamma[static_cast<Eigen::Index>(i)];
  }
  j["gamma"] = g;
  nlohmann::json ls = nlohmann::json::array();
  for (const auto& layer : layers) {
    nlohmann::json lj = nlohmann::json::array();
    for (const auto& block : layer) {
      lj.push_back({{"wires", {block.wires[0], block.wires[1]}},
                    {"theta", {block.theta[0], block.theta[1]}}});
    }
    ls.push_back(lj);
  }
  j["layers"] = ls;
  j["fit"] = {{"cost", fit.final_cost}, {"overlaps", fit.overlaps}};
  return j.dump(2);
}

VffModel VffModel::from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  VffModel m;
  m.n_qubits = j.at("n_qubits").get<int>();
  m.dt = j.at("dt").get<double>();
  m.m_max = j.at("m_max").get<int>();
  std::vector<std::pair<std::uint64_t, double>> entries;
  for (const auto& [key, value] : j.at("gamma").items()) {
    entries.emplace_back(name_mask(key), value.get<double>());
  }
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    const int pa = std::popcount(a.first), pb = std::popcount(b.first);
    return pa != pb ? pa < pb : a.first < b.first;
  });
  m.gamma.resize(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    m.gamma_masks.push_back(entries[i].first);
    m.gamma[static_cast<Eigen::Index>(i)] = entries[i].second;
  }
  for (const auto& lj : j.at("layers")) {
    AnsatzLayer layer;
    for (const auto& bj : lj) {
      AnsatzBlock block;
      block.wires[0] = bj.at("wires")[0].get<int>();
      block.wires[1] = bj.at("wires")[1].get<int>();
      block.theta[0] = bj.at("theta")[0].get<double>();
      block.theta[1] = bj.at("theta")[1].get<double>();
      layer.push_back(block);
    }
    m.layers.push_back(std::move(layer));
  }
  if (j.contains("fit")) {
    m.fit.final_cost = j["fit"].value("cost", 1.0);
    if (j["fit"].contains("overlaps")) {
      m.fit.overlaps = j["fit"]["overlaps"].get<std::vector<double>>();
    }
  }
  return m;
}

}  // namespace vqpe
