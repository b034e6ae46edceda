#include "spinchem/pauli.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace spinchem::pauli {

namespace {

int popcount(std::uint64_t v) { return __builtin_popcountll(v); }

const cplx kPhases[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

void check_qubit_range(unsigned n_qubits, const PauliTerm& t) {
  if (n_qubits >= 64) return;
  std::uint64_t mask = (std::uint64_t{1} << n_qubits) - 1;
  if ((t.x | t.z) & ~mask)
    throw std::invalid_argument("PauliTerm acts outside the operator's qubit range");
}

}  // namespace

PauliTerm PauliTerm::single(char op, unsigned qubit) {
  if (qubit >= 64) throw std::invalid_argument("qubit index above 63");
  PauliTerm t;
  std::uint64_t bit = std::uint64_t{1} << qubit;
  switch (op) {
    case 'I': break;
    case 'X': t.x = bit; break;
    case 'Y': t.x = bit; t.z = bit; break;
    case 'Z': t.z = bit; break;
    default: throw std::invalid_argument(std::string("unknown Pauli letter: ") + op);
  }
  return t;
}

cplx PauliTerm::phase() const { return kPhases[phase_exp & 3]; }

bool PauliTerm::commutes_with(const PauliTerm& other) const {
  int anti = popcount(x & other.z) + popcount(z & other.x);
  return (anti & 1) == 0;
}

PauliTerm PauliTerm::operator*(const PauliTerm& other) const {
  // P(x1,z1) P(x2,z2) = i^k P(x1^x2, z1^z2) with
  // k = w(x1&z1) + w(x2&z2) - w(x3&z3) + 2 w(z1&x2)  (mod 4).
  PauliTerm out;
  out.x = x ^ other.x;
  out.z = z ^ other.z;
  int k = popcount(x & z) + popcount(other.x & other.z) - popcount(out.x & out.z) +
          2 * popcount(z & other.x);
  k += static_cast<int>(phase_exp) + static_cast<int>(other.phase_exp);
  out.phase_exp = static_cast<std::uint8_t>(((k % 4) + 4) % 4);
  return out;
}

std::string PauliTerm::to_string() const {
  if (is_identity()) return "I";
  std::string s;
  for (unsigned q = 0; q < 64; ++q) {
    std::uint64_t bit = std::uint64_t{1} << q;
    bool xb = x & bit, zb = z & bit;
    if (!xb && !zb) continue;
    if (!s.empty()) s += ' ';
    s += xb ? (zb ? 'Y' : 'X') : 'Z';
    s += std::to_string(q);
  }
  return s;
}

OperatorSum::OperatorSum(unsigned n_qubits) : n_qubits_(n_qubits) {
  if (n_qubits > 64) throw std::invalid_argument("OperatorSum supports at most 64 qubits");
}

void OperatorSum::add(const PauliTerm& term, cplx coeff) {
  check_qubit_range(n_qubits_, term);
  cplx& slot = terms_[{term.x, term.z}];
  slot += coeff * term.phase();
  if (std::abs(slot) < kPruneThreshold) terms_.erase({term.x, term.z});
}

void OperatorSum::add(const OperatorSum& other, cplx scale) {
  if (other.n_qubits_ != n_qubits_)
    throw std::invalid_argument("qubit-count mismatch in OperatorSum::add");
  for (const auto& [key, c] : other.terms_) {
    cplx& slot = terms_[key];
    slot += c * scale;
    if (std::abs(slot) < kPruneThreshold) terms_.erase(key);
  }
}

cplx OperatorSum::coefficient(const PauliTerm& term) const {
  auto it = terms_.find({term.x, term.z});
  if (it == terms_.end()) return 0.0;
  return it->second * std::conj(term.phase());
}

cplx OperatorSum::constant() const {
  auto it = terms_.find({0, 0});
  return it == terms_.end() ? cplx{0, 0} : it->second;
}

OperatorSum OperatorSum::operator*(const OperatorSum& other) const {
  if (n_qubits_ != other.n_qubits_)
    throw std::invalid_argument("qubit-count mismatch in OperatorSum multiply");
  OperatorSum out(n_qubits_);
  for (const auto& [ka, ca] : terms_) {
    PauliTerm a{ka.first, ka.second, 0};
    for (const auto& [kb, cb] : other.terms_) {
      PauliTerm b{kb.first, kb.second, 0};
      out.add(a * b, ca * cb);
    }
  }
  out.prune();
  return out;
}

OperatorSum OperatorSum::operator+(const OperatorSum& other) const {
  OperatorSum out = *this;
  out.add(other);
  return out;
}

OperatorSum OperatorSum::operator-(const OperatorSum& other) const {
  OperatorSum out = *this;
  out.add(other, -1.0);
  return out;
}

OperatorSum OperatorSum::scaled(cplx factor) const {
  OperatorSum out(n_qubits_);
  for (const auto& [key, c] : terms_) out.terms_[key] = c * factor;
  out.prune();
  return out;
}

bool OperatorSum::is_hermitian(double tol) const {
  for (const auto& [key, c] : terms_)
    if (std::abs(c.imag()) > tol) return false;
  return true;
}

double OperatorSum::max_abs_coefficient() const {
  double m = 0;
  for (const auto& [key, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

void OperatorSum::prune() {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (std::abs(it->second) < kPruneThreshold)
      it = terms_.erase(it);
    else
      ++it;
  }
}

std::string OperatorSum::to_string() const {
  std::ostringstream os;
  write_pauli_text(os, *this);
  return os.str();
}

OperatorSum conjugated(const OperatorSum& h, const OperatorSum& u) {
  return (u * h) * u;
}

OperatorSum conjugated_by_linear_map(const OperatorSum& h, const gf2::Matrix& a) {
  if (a.size() != h.n_qubits())
    throw std::invalid_argument("linear map dimension does not match qubit count");
  gf2::Matrix a_inv_t = a.inverted().transposed();
  OperatorSum out(h.n_qubits());
  for (const auto& [key, c] : h.terms()) {
    std::uint64_t xs = a.apply(key.first);
    std::uint64_t zs = a_inv_t.apply(key.second);
    // X^x Z^z maps exactly; adjust for the canonical i^{w(x&z)} factors.
    int k = popcount(key.first & key.second) - popcount(xs & zs);
    PauliTerm t{xs, zs, static_cast<std::uint8_t>(((k % 4) + 4) % 4)};
    out.add(t, c);
  }
  out.prune();
  return out;
}

Eigen::MatrixXcd to_dense(const OperatorSum& h) {
  if (h.n_qubits() > kOracleMaxQubits)
    throw std::invalid_argument("to_dense: qubit count above the dense oracle cap");
  std::size_t dim = std::size_t{1} << h.n_qubits();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& [key, c] : h.terms()) {
    auto [x, z] = key;
    cplx base = c * kPhases[popcount(x & z) & 3];
    for (std::size_t col = 0; col < dim; ++col) {
      double sign = (popcount(z & col) & 1) ? -1.0 : 1.0;
      m(col ^ x, col) += base * sign;
    }
  }
  return m;
}

std::vector<double> eigenvalues(const OperatorSum& h) {
  if (h.n_qubits() > kOracleMaxQubits)
    throw std::invalid_argument("eigenvalues: qubit count above the dense oracle cap");
  if (!h.is_hermitian(1e-9))
    throw std::invalid_argument("eigenvalues: operator is not Hermitian");
  Eigen::MatrixXcd m = to_dense(h);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("dense eigensolver failed to converge");
  std::vector<double> evs(solver.eigenvalues().data(),
                          solver.eigenvalues().data() + solver.eigenvalues().size());
  std::sort(evs.begin(), evs.end());
  return evs;
}

double ground_energy_exact(const OperatorSum& h) { return eigenvalues(h).front(); }

double expectation(const OperatorSum& h, std::uint64_t basis_state) {
  if (h.n_qubits() < 64 && (basis_state >> h.n_qubits()) != 0)
    throw std::invalid_argument("expectation: basis state length mismatch");
  cplx total = 0;
  for (const auto& [key, c] : h.terms()) {
    if (key.first != 0) continue;  // X/Y content is off-diagonal
    total += c * ((popcount(key.second & basis_state) & 1) ? -1.0 : 1.0);
  }
  return total.real();
}

OperatorSum parse_pauli_text(std::istream& in, unsigned n_qubits) {
  struct RawTerm {
    PauliTerm term;
    cplx coeff;
  };
  std::vector<RawTerm> raw;
  unsigned max_index = 0;
  bool any = false;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::vector<std::string> tokens;
    for (std::string tok; ls >> tok;) tokens.push_back(tok);
    if (tokens.empty()) continue;

    auto fail = [&](const std::string& why) {
      throw std::runtime_error("pauli text line " + std::to_string(line_no) + ": " + why);
    };
    auto as_number = [](const std::string& s, double& out) {
      std::size_t pos = 0;
      try {
        out = std::stod(s, &pos);
      } catch (...) {
        return false;
      }
      return pos == s.size();
    };

    double re = 0, im = 0;
    if (!as_number(tokens[0], re)) fail("expected a leading coefficient");
    std::size_t first_op = 1;
    if (tokens.size() > 1 && as_number(tokens[1], im))
      first_op = 2;

    PauliTerm term;
    for (std::size_t i = first_op; i < tokens.size(); ++i) {
      const std::string& tok = tokens[i];
      if (tok.size() < 2 || std::string("XYZI").find(tok[0]) == std::string::npos)
        fail("bad operator token '" + tok + "'");
      unsigned idx = 0;
      try {
        idx = static_cast<unsigned>(std::stoul(tok.substr(1)));
      } catch (...) {
        fail("bad qubit index in '" + tok + "'");
      }
      term = term * PauliTerm::single(tok[0], idx);
      max_index = std::max(max_index, idx);
      any = true;
    }
    raw.push_back({term, cplx{re, im}});
  }
  unsigned n = n_qubits ? n_qubits : (any ? max_index + 1 : 0);
  OperatorSum out(n);
  for (const auto& r : raw) out.add(r.term, r.coeff);
  out.prune();
  return out;
}

OperatorSum parse_pauli_file(const std::string& path, unsigned n_qubits) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open pauli file: " + path);
  return parse_pauli_text(in, n_qubits);
}

void write_pauli_text(std::ostream& out, const OperatorSum& h) {
  out.precision(17);
  for (const auto& [key, c] : h.terms()) {
    PauliTerm t{key.first, key.second, 0};
    out << c.real();
    if (std::abs(c.imag()) > 0) out << ' ' << c.imag();
    if (!t.is_identity()) out << ' ' << t.to_string();
    out << '\n';
  }
}

}  // namespace spinchem::pauli
