#include "vqpe/pauli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace vqpe {

namespace {

constexpr Complex kI{0.0, 1.0};

// Single-qubit products: returns {phase, letter}, '\0' letter = identity.
std::pair<Complex, char> multiply_letters(char a, char b) {
  if (a == b) return {1.0, '\0'};
  if (a == 'X' && b == 'Y') return {kI, 'Z'};
  if (a == 'Y' && b == 'Z') return {kI, 'X'};
  if (a == 'Z' && b == 'X') return {kI, 'Y'};
  if (a == 'Y' && b == 'X') return {-kI, 'Z'};
  if (a == 'Z' && b == 'Y') return {-kI, 'X'};
  if (a == 'X' && b == 'Z') return {-kI, 'Y'};
  throw std::logic_error("invalid Pauli letters");
}

}  // namespace

std::string word_to_string(const PauliWord& word) {
  std::string out;
  for (const auto& [q, p] : word) {
    if (!out.empty()) out += ' ';
    out += p;
    out += std::to_string(q);
  }
  return out;
}

std::pair<Complex, PauliWord> multiply_words(const PauliWord& a,
                                             const PauliWord& b) {
  PauliWord out;
  Complex phase = 1.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.push_back(b[j++]);
    } else {
      auto [ph, letter] = multiply_letters(a[i].second, b[j].second);
      phase *= ph;
      if (letter != '\0') out.emplace_back(a[i].first, letter);
      ++i;
      ++j;
    }
  }
  return {phase, out};
}

std::vector<PauliTerm> combine_terms(std::vector<PauliTerm> terms,
                                     double prune) {
  std::map<PauliWord, Complex> acc;
  for (auto& t : terms) acc[t.word] += t.coefficient;
  std::vector<PauliTerm> out;
  for (auto& [w, c] : acc) {
    if (std::abs(c) > prune) out.push_back({c, w});
  }
  return out;
}

void QubitHamiltonian::normalize() {
  terms = combine_terms(std::move(terms));
  for (auto& t : terms) {
    if (std::abs(t.coefficient.imag()) > 1e-12) {
      throw std::invalid_argument(
          "non-Hermitian Pauli sum: term " + word_to_string(t.word) +
          " has imaginary coefficient " + std::to_string(t.coefficient.imag()));
    }
    t.coefficient = Complex{t.coefficient.real(), 0.0};
    for (const auto& [q, p] : t.word) {
      if (q < 0 || q >= n_qubits) {
        throw std::out_of_range("qubit index " + std::to_string(q) +
                                " exceeds register of " +
                                std::to_string(n_qubits));
      }
      (void)p;
    }
  }
}

std::vector<PauliTerm> jw_ladder(int j, bool dagger) {
  PauliWord zs;
  for (int i = 0; i < j; ++i) zs.emplace_back(i, 'Z');
  PauliWord x = zs, y = zs;
  x.emplace_back(j, 'X');
  y.emplace_back(j, 'Y');
  const Complex ycoef = dagger ? Complex{0.0, -0.5} : Complex{0.0, 0.5};
  return {{Complex{0.5, 0.0}, x}, {ycoef, y}};
}

namespace {

std::vector<PauliTerm> multiply_sums(const std::vector<PauliTerm>& a,
                                     const std::vector<PauliTerm>& b) {
  std::vector<PauliTerm> out;
  out.reserve(a.size() * b.size());
  for (const auto& ta : a) {
    for (const auto& tb : b) {
      auto [phase, word] = multiply_words(ta.word, tb.word);
      out.push_back({ta.coefficient * tb.coefficient * phase, word});
    }
  }
  return combine_terms(std::move(out));
}

}  // namespace

QubitHamiltonian jordan_wigner(const std::vector<FermionTerm>& terms,
                               int n_spin_orbitals) {
  std::vector<PauliTerm> all;
  for (const auto& t : terms) {
    const int idx_max = t.kind == FermionTerm::Kind::OneBody
                            ? std::max(t.p, t.q)
                            : std::max({t.p, t.q, t.r, t.s});
    const int idx_min = t.kind == FermionTerm::Kind::OneBody
                            ? std::min(t.p, t.q)
                            : std::min({t.p, t.q, t.r, t.s});
    if (idx_min < 0 || idx_max >= n_spin_orbitals) {
      throw std::out_of_range("spin-orbital index out of range");
    }
    std::vector<PauliTerm> image;
    if (t.kind == FermionTerm::Kind::OneBody) {
      image = multiply_sums(jw_ladder(t.p, true), jw_ladder(t.q, false));
    } else {
      image = multiply_sums(
          multiply_sums(jw_ladder(t.p, true), jw_ladder(t.q, true)),
          multiply_sums(jw_ladder(t.r, false), jw_ladder(t.s, false)));
    }
    for (auto& term : image) {
      term.coefficient *= t.coefficient;
      all.push_back(std::move(term));
    }
  }
  QubitHamiltonian h;
  h.n_qubits = n_spin_orbitals;
  h.terms = std::move(all);
  h.normalize();
  return h;
}

QubitHamiltonian hubbard_model(int n_sites, double t, double U) {
  if (n_sites < 1) throw std::invalid_argument("hubbard_model: n_sites >= 1");
  std::vector<FermionTerm> terms;
  // qubit 2i = site i up, 2i+1 = site i down
  for (int i = 0; i + 1 < n_sites; ++i) {
    for (int spin = 0; spin < 2; ++spin) {
      const int a = 2 * i + spin;
      const int b = 2 * (i + 1) + spin;
      terms.push_back({FermionTerm::Kind::OneBody, a, b, 0, 0, -t});
      terms.push_back({FermionTerm::Kind::OneBody, b, a, 0, 0, -t});
    }
  }
  for (int i = 0; i < n_sites; ++i) {
    const int up = 2 * i, dn = 2 * i + 1;
    // n_up n_dn = a^dag_up a^dag_dn a_dn a_up
    terms.push_back({FermionTerm::Kind::TwoBody, up, dn, dn, up, U});
  }
  return jordan_wigner(terms, 2 * n_sites);
}

QubitHamiltonian parse_pauli_sum(std::istream& in) {
  QubitHamiltonian h;
  int declared_qubits = -1;
  int max_index = -1;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;  // blank
    if (first == "qubits:") {
      if (!(ls >> declared_qubits) || declared_qubits <= 0) {
        throw std::runtime_error("line " + std::to_string(line_no) +
                                 ": bad qubits header");
      }
      continue;
    }
    Complex coeff;
    if (first.front() == '(') {
      double re, im;
      char lp, comma, rp;
      std::istringstream cs(first);
      if (!(cs >> lp >> re >> comma >> im >> rp) || lp != '(' ||
          comma != ',' || rp != ')') {
        throw std::runtime_error("line " + std::to_string(line_no) +
                                 ": bad complex coefficient '" + first + "'");
      }
      coeff = {re, im};
    } else {
      std::size_t pos = 0;
      double re;
      try {
        re = std::stod(first, &pos);
      } catch (const std::exception&) {
        pos = 0;
      }
      if (pos != first.size()) {
        throw std::runtime_error("line " + std::to_string(line_no) +
                                 ": bad coefficient '" + first + "'");
      }
      coeff = {re, 0.0};
    }
    PauliTerm term{coeff, {}};
    std::string factor;
    while (ls >> factor) {
      if (factor.size() < 2 ||
          (factor[0] != 'X' && factor[0] != 'Y' && factor[0] != 'Z')) {
        throw std::runtime_error("line " + std::to_string(line_no) +
                                 ": bad Pauli factor '" + factor + "'");
      }
      std::size_t pos = 0;
      int q;
      try {
        q = std::stoi(factor.substr(1), &pos);
      } catch (const std::exception&) {
        pos = 0;
      }
      if (pos != factor.size() - 1 || q < 0) {
        throw std::runtime_error("line " + std::to_string(line_no) +
                                 ": bad qubit index in '" + factor + "'");
      }
      term.word.emplace_back(q, factor[0]);
    }
    std::sort(term.word.begin(), term.word.end());
    for (std::size_t i = 1; i < term.word.size(); ++i) {
      if (term.word[i].first == term.word[i - 1].first) {
        throw std::runtime_error("line " + std::to_string(line_no) +
                                 ": repeated qubit index");
      }
    }
    if (!term.word.empty()) max_index = std::max(max_index, term.word.back().first);
    h.terms.push_back(std::move(term));
  }
  h.n_qubits = declared_qubits > 0 ? declared_qubits
                                   : std::max(max_index + 1, 1);
  if (declared_qubits > 0 && max_index >= declared_qubits) {
    throw std::runtime_error("qubit index " + std::to_string(max_index) +
                             " exceeds declared count " +
                             std::to_string(declared_qubits));
  }
  h.normalize();
  return h;
}

QubitHamiltonian parse_pauli_sum_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return parse_pauli_sum(in);
}

std::string serialize_pauli_sum(const QubitHamiltonian& h) {
  std::ostringstream out;
  out.precision(17);
  out << "qubits: " << h.n_qubits << "\n";
  auto terms = h.terms;
  std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
    return word_to_string(a.word) < word_to_string(b.word);
  });
  for (const auto& t : terms) {
    out << t.coefficient.real();
    if (!t.word.empty()) out << ' ' << word_to_string(t.word);
    out << '\n';
  }
  return out.str();
}

Eigen::VectorXcd apply_word(const PauliWord& word,
                            const Eigen::VectorXcd& amps) {
  const auto dim = amps.size();
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(dim);
  long flip = 0;
  long zmask = 0, ymask = 0;
  for (const auto& [q, p] : word) {
    if (p == 'X' || p == 'Y') flip |= 1L << q;
    if (p == 'Z') zmask |= 1L << q;
    if (p == 'Y') ymask |= 1L << q;
  }
  for (long b = 0; b < dim; ++b) {
    // phase of P|b>: Z gives (-1)^bit, Y gives i on 0->1 and -i on 1->0
    Complex phase = 1.0;
    const int zpar = __builtin_popcountl(b & zmask) & 1;
    if (zpar) phase = -phase;
    const int ny = __builtin_popcountl(ymask);
    const int y1 = __builtin_popcountl(b & ymask);  // bits flipping 1 -> 0
    // i^(ny - y1) * (-i)^(y1) = i^(ny - 2*y1)
    switch (((ny - 2 * y1) % 4 + 4) % 4) {
      case 1: phase *= kI; break;
      case 2: phase = -phase; break;
      case 3: phase *= -kI; break;
      default: break;
    }
    out[b ^ flip] += phase * amps[b];
  }
  return out;
}

Eigen::MatrixXcd dense_word(const PauliWord& word, int n_qubits) {
  const long dim = 1L << n_qubits;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  Eigen::VectorXcd e = Eigen::VectorXcd::Zero(dim);
  for (long b = 0; b < dim; ++b) {
    e[b] = 1.0;
    m.col(b) = apply_word(word, e);
    e[b] = 0.0;
  }
  return m;
}

Eigen::MatrixXcd dense_matrix(const QubitHamiltonian& h) {
  if (h.n_qubits > kOracleQubitLimit) {
    throw std::length_error("dense_matrix: register exceeds oracle limit");
  }
  const long dim = 1L << h.n_qubits;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& t : h.terms) {
    m += t.coefficient * dense_word(t.word, h.n_qubits);
  }
  return m;
}

int SpectralDecomposition::support_dimension(double cutoff) const {
  int q = 0;
  for (Eigen::Index n = 0; n < reference_amps.size(); ++n) {
    if (std::norm(reference_amps[n]) > cutoff) ++q;
  }
  return q;
}

SpectralDecomposition spectral_decompose(const QubitHamiltonian& h,
                                         const Eigen::VectorXcd& reference) {
  const Eigen::MatrixXcd m = dense_matrix(h);
  if (reference.size() != m.rows()) {
    throw std::invalid_argument("spectral_decompose: register mismatch");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
  SpectralDecomposition out;
  out.energies = solver.eigenvalues();
  out.eigenvectors = solver.eigenvectors();
  out.reference_amps = out.eigenvectors.adjoint() * reference;
  return out;
}

}  // namespace vqpe
