#include "vqpe/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace vqpe {

namespace {
constexpr Complex kI{0.0, 1.0};
}

StateVector StateVector::basis_state(int n_qubits, long index) {
  if (index < 0 || index >= (1L << n_qubits)) {
    throw std::out_of_range("basis_state: index out of range");
  }
  StateVector psi;
  psi.n_qubits = n_qubits;
  psi.amplitudes = Eigen::VectorXcd::Zero(1L << n_qubits);
  psi.amplitudes[index] = 1.0;
  return psi;
}

StateVector hartree_fock_state(int n_qubits, int n_electrons) {
  if (n_electrons < 0 || n_electrons > n_qubits) {
    throw std::out_of_range("hartree_fock_state: occupation overflow");
  }
  const long index = (n_electrons == 0) ? 0 : ((1L << n_electrons) - 1);
  return StateVector::basis_state(n_qubits, index);
}

Circuit& Circuit::h(int q) { gates.push_back({Gate::Kind::H, q}); return *this; }
Circuit& Circuit::x(int q) { gates.push_back({Gate::Kind::X, q}); return *this; }
Circuit& Circuit::rx(int q, double a) {
  gates.push_back({Gate::Kind::RX, q, -1, a});
  return *this;
}
Circuit& Circuit::rz(int q, double a) {
  gates.push_back({Gate::Kind::RZ, q, -1, a});
  return *this;
}
Circuit& Circuit::cnot(int control, int target) {
  gates.push_back({Gate::Kind::CNOT, target, control});
  return *this;
}
Circuit& Circuit::crz(int control, int target, double a) {
  gates.push_back({Gate::Kind::CRZ, target, control, a});
  return *this;
}
Circuit& Circuit::global_phase(double a) {
  gates.push_back({Gate::Kind::GlobalPhase, -1, -1, a});
  return *this;
}
Circuit& Circuit::wire_phase(int q, double a) {
  rz(q, a);
  global_phase(a / 2.0);
  return *this;
}
Circuit& Circuit::append(const Circuit& other) {
  gates.insert(gates.end(), other.gates.begin(), other.gates.end());
  return *this;
}

int Circuit::cnot_count() const {
  return static_cast<int>(std::count_if(
      gates.begin(), gates.end(),
      [](const Gate& g) { return g.kind == Gate::Kind::CNOT; }));
}

Circuit inverse(const Circuit& c) {
  Circuit inv;
  inv.n_qubits = c.n_qubits;
  inv.gates.reserve(c.gates.size());
  for (auto it = c.gates.rbegin(); it != c.gates.rend(); ++it) {
    Gate g = *it;
    g.angle = -g.angle;
    inv.gates.push_back(g);
  }
  return inv;
}

StateVector apply_circuit(const Circuit& c, const StateVector& psi,
                          int wire_offset) {
  if (wire_offset + c.n_qubits > psi.n_qubits || wire_offset < 0) {
    throw std::invalid_argument("apply_circuit: wire range mismatch");
  }
  StateVector out = psi;
  Eigen::VectorXcd& a = out.amplitudes;
  const long dim = a.size();
  for (const Gate& g : c.gates) {
    if (g.kind == Gate::Kind::GlobalPhase) {
      a *= std::exp(kI * g.angle);
      continue;
    }
    if (!std::isfinite(g.angle)) {
      throw std::invalid_argument("apply_circuit: non-finite angle");
    }
    if (g.q0 < 0 || g.q0 >= c.n_qubits) {
      throw std::out_of_range("apply_circuit: gate wire out of range");
    }
    const long t = 1L << (g.q0 + wire_offset);
    switch (g.kind) {
      case Gate::Kind::H: {
        const double s = 1.0 / std::numbers::sqrt2;
        for (long b = 0; b < dim; ++b) {
          if (b & t) continue;
          const Complex lo = a[b], hi = a[b | t];
          a[b] = s * (lo + hi);
          a[b | t] = s * (lo - hi);
        }
        break;
      }
      case Gate::Kind::X:
        for (long b = 0; b < dim; ++b) {
          if (b & t) continue;
          std::swap(a[b], a[b | t]);
        }
        break;
      case Gate::Kind::RX: {
        const Complex cth = std::cos(g.angle / 2.0);
        const Complex msth = -kI * std::sin(g.angle / 2.0);
        for (long b = 0; b < dim; ++b) {
          if (b & t) continue;
          const Complex lo = a[b], hi = a[b | t];
          a[b] = cth * lo + msth * hi;
          a[b | t] = msth * lo + cth * hi;
        }
        break;
      }
      case Gate::Kind::RZ: {
        const Complex p0 = std::exp(-kI * (g.angle / 2.0));
        const Complex p1 = std::exp(kI * (g.angle / 2.0));
        for (long b = 0; b < dim; ++b) a[b] *= (b & t) ? p1 : p0;
        break;
      }
      case Gate::Kind::CNOT: {
        const long ctl = 1L << (g.q1 + wire_offset);
        for (long b = 0; b < dim; ++b) {
          if ((b & ctl) && !(b & t)) std::swap(a[b], a[b | t]);
        }
        break;
      }
      case Gate::Kind::CRZ: {
        const long ctl = 1L << (g.q1 + wire_offset);
        const Complex p0 = std::exp(-kI * (g.angle / 2.0));
        const Complex p1 = std::exp(kI * (g.angle / 2.0));
        for (long b = 0; b < dim; ++b) {
          if (b & ctl) a[b] *= (b & t) ? p1 : p0;
        }
        break;
      }
      default:
        break;
    }
  }
  return out;
}

Eigen::MatrixXcd dense_matrix(const Circuit& c) {
  const long dim = 1L << c.n_qubits;
  Eigen::MatrixXcd m(dim, dim);
  for (long b = 0; b < dim; ++b) {
    m.col(b) = apply_circuit(c, StateVector::basis_state(c.n_qubits, b))
                   .amplitudes;
  }
  return m;
}

std::string dump_circuit(const Circuit& c) {
  std::ostringstream out;
  out.precision(17);
  for (const Gate& g : c.gates) {
    switch (g.kind) {
      case Gate::Kind::H: out << "H " << g.q0; break;
      case Gate::Kind::X: out << "X " << g.q0; break;
      case Gate::Kind::RX: out << "RX " << g.q0 << ' ' << g.angle; break;
      case Gate::Kind::RZ: out << "RZ " << g.q0 << ' ' << g.angle; break;
      case Gate::Kind::CNOT: out << "CNOT " << g.q1 << ' ' << g.q0; break;
      case Gate::Kind::CRZ:
        out << "CRZ " << g.q1 << ' ' << g.q0 << ' ' << g.angle;
        break;
      case Gate::Kind::GlobalPhase: out << "GPHASE " << g.angle; break;
    }
    out << '\n';
  }
  return out.str();
}

namespace {

// Basis change, ladder and phase bookkeeping shared by the plain and
// controlled gadgets. The Rx(pi/2)/Rx(3pi/2) pair maps Y onto Z but each
// Y wire contributes a factor -1, compensated by a (possibly controlled)
// pi phase.
struct GadgetParts {
  Circuit in, ladder;
  int target = 0;
  int n_y = 0;
};

GadgetParts gadget_parts(const PauliWord& word, int n_qubits) {
  if (word.empty()) throw std::invalid_argument("pauli_gadget: empty word");
  GadgetParts parts;
  parts.in.n_qubits = n_qubits;
  parts.ladder.n_qubits = n_qubits;
  parts.target = word.front().first;
  constexpr double half_pi = std::numbers::pi / 2.0;
  for (const auto& [q, p] : word) {
    if (q < 0 || q >= n_qubits) {
      throw std::out_of_range("pauli_gadget: wire out of range");
    }
    if (p == 'X') parts.in.h(q);
    if (p == 'Y') {
      parts.in.rx(q, half_pi);
      ++parts.n_y;
    }
    if (q != parts.target) parts.ladder.cnot(q, parts.target);
  }
  return parts;
}

Circuit gadget_out_basis(const PauliWord& word, int n_qubits) {
  Circuit out;
  out.n_qubits = n_qubits;
  for (const auto& [q, p] : word) {
    if (p == 'X') out.h(q);
    if (p == 'Y') out.rx(q, 3.0 * std::numbers::pi / 2.0);
  }
  return out;
}

}  // namespace

Circuit pauli_gadget(const PauliWord& word, double theta, int n_qubits) {
  auto parts = gadget_parts(word, n_qubits);
  Circuit c;
  c.n_qubits = n_qubits;
  c.append(parts.in).append(parts.ladder);
  c.rz(parts.target, theta);
  c.append(inverse(parts.ladder)).append(gadget_out_basis(word, n_qubits));
  if (parts.n_y % 2 == 1) c.global_phase(std::numbers::pi);
  return c;
}

Circuit controlled_gadget(const PauliWord& word, double theta, int n_qubits,
                          int ancilla) {
  for (const auto& [q, p] : word) {
    if (q == ancilla) {
      throw std::invalid_argument("controlled_gadget: ancilla inside word");
    }
    (void)p;
  }
  auto parts = gadget_parts(word, n_qubits);
  Circuit c;
  c.n_qubits = n_qubits;
  c.append(parts.in).append(parts.ladder);
  c.crz(ancilla, parts.target, theta);
  c.append(inverse(parts.ladder)).append(gadget_out_basis(word, n_qubits));
  // The basis-change pair contributes (-1) per Y wire on both branches.
  if (parts.n_y % 2 == 1) c.global_phase(std::numbers::pi);
  return c;
}

Circuit trotter_step(const QubitHamiltonian& h, double dt) {
  if (!std::isfinite(dt)) throw std::invalid_argument("trotter_step: dt");
  auto terms = h.terms;
  std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
    return word_to_string(a.word) < word_to_string(b.word);
  });
  Circuit c;
  c.n_qubits = h.n_qubits;
  for (const auto& t : terms) {
    const double angle = 2.0 * t.coefficient.real() * dt;
    if (t.word.empty()) {
      c.global_phase(-t.coefficient.real() * dt);
    } else {
      c.append(pauli_gadget(t.word, angle, h.n_qubits));
    }
  }
  return c;
}

}  // namespace vqpe
