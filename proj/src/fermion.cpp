#include "spinchem/fermion.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace spinchem::fermion {

namespace {
constexpr double kHermiticityTol = 1e-10;
}

Encoding encoding_from_string(const std::string& name) {
  if (name == "jordan_wigner" || name == "jw") return Encoding::jordan_wigner;
  if (name == "parity") return Encoding::parity;
  throw std::invalid_argument("unknown encoding: " + name);
}

std::string to_string(Encoding e) {
  return e == Encoding::jordan_wigner ? "jordan_wigner" : "parity";
}

void FermionHamiltonian::validate() const {
  for (const auto& [pq, v] : one_body) {
    if (pq.first >= n_modes || pq.second >= n_modes)
      throw std::runtime_error("one-body index out of range");
    auto rev = one_body.find({pq.second, pq.first});
    double mirror = rev == one_body.end() ? 0.0 : rev->second;
    if (std::abs(v - mirror) > kHermiticityTol)
      throw std::runtime_error("one-body Hermiticity violation at (" +
                               std::to_string(pq.first) + "," + std::to_string(pq.second) + ")");
  }
  for (const auto& [pqrs, v] : two_body) {
    for (unsigned idx : pqrs)
      if (idx >= n_modes) throw std::runtime_error("two-body index out of range");
    // (a_p^ a_q^ a_r a_s)^dagger = a_s^ a_r^ a_q a_p
    auto rev = two_body.find({pqrs[3], pqrs[2], pqrs[1], pqrs[0]});
    double mirror = rev == two_body.end() ? 0.0 : rev->second;
    if (std::abs(v - mirror) > kHermiticityTol)
      throw std::runtime_error("two-body Hermiticity violation at (" + std::to_string(pqrs[0]) +
                               "," + std::to_string(pqrs[1]) + "," + std::to_string(pqrs[2]) +
                               "," + std::to_string(pqrs[3]) + ")");
  }
  if (hf_occupation) {
    if (n_modes < 64 && (*hf_occupation >> n_modes) != 0)
      throw std::runtime_error("hf_occupation has bits beyond n_modes");
    if (static_cast<unsigned>(__builtin_popcountll(*hf_occupation)) != n_electrons)
      throw std::runtime_error("hf_occupation does not match n_electrons");
  }
}

FermionHamiltonian parse_fermion_text(std::istream& in, const std::string& origin) {
  FermionHamiltonian f;
  std::string line;
  int line_no = 0;
  auto fail = [&](const std::string& why) {
    throw std::runtime_error(origin + ":" + std::to_string(line_no) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;

    if (tok[0] == "n_modes") {
      f.n_modes = std::stoul(tok.at(1));
      if (f.n_modes > 63) fail("n_modes above 63 is not supported");
      continue;
    }
    if (tok[0] == "n_electrons") { f.n_electrons = std::stoul(tok.at(1)); continue; }
    if (tok[0] == "constant") { f.constant = std::stod(tok.at(1)); continue; }
    if (tok[0] == "e_hf") { f.e_hf = std::stod(tok.at(1)); continue; }
    if (tok[0] == "e_fci") { f.e_fci = std::stod(tok.at(1)); continue; }
    if (tok[0] == "hf_occupation") { f.hf_occupation = parse_bitstring(tok.at(1)); continue; }
    if (tok[0] == "label") { f.label = tok.at(1); continue; }
    if (tok[0] == "ordering") { f.ordering = tok.at(1); continue; }

    // body line: `p^ q c` or `p^ q^ r s c`
    auto creation = [](const std::string& s) { return !s.empty() && s.back() == '^'; };
    auto index_of = [&](const std::string& s) -> unsigned {
      try {
        return std::stoul(creation(s) ? s.substr(0, s.size() - 1) : s);
      } catch (...) {
        fail("bad mode index '" + s + "'");
        return 0;
      }
    };
    if (tok.size() == 3 && creation(tok[0]) && !creation(tok[1])) {
      unsigned p = index_of(tok[0]), q = index_of(tok[1]);
      f.one_body[{p, q}] += std::stod(tok[2]);
    } else if (tok.size() == 5 && creation(tok[0]) && creation(tok[1]) && !creation(tok[2]) &&
               !creation(tok[3])) {
      unsigned p = index_of(tok[0]), q = index_of(tok[1]);
      unsigned r = index_of(tok[2]), s = index_of(tok[3]);
      f.two_body[{p, q, r, s}] += std::stod(tok[4]);
    } else {
      fail("malformed term line");
    }
  }
  if (f.n_modes == 0 && !(f.one_body.empty() && f.two_body.empty()))
    throw std::runtime_error(origin + ": missing n_modes header");
  f.validate();
  return f;
}

FermionHamiltonian parse_fermion_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open fermion file: " + path);
  return parse_fermion_text(in, path);
}

void write_fermion_file(std::ostream& out, const FermionHamiltonian& f) {
  out.precision(17);
  out << "n_modes " << f.n_modes << "\n";
  out << "n_electrons " << f.n_electrons << "\n";
  out << "constant " << f.constant << "\n";
  if (f.hf_occupation) out << "hf_occupation " << format_bitstring(*f.hf_occupation, f.n_modes) << "\n";
  if (f.e_hf) out << "e_hf " << *f.e_hf << "\n";
  if (f.e_fci) out << "e_fci " << *f.e_fci << "\n";
  if (!f.label.empty()) out << "label " << f.label << "\n";
  if (!f.ordering.empty()) out << "ordering " << f.ordering << "\n";
  for (const auto& [pq, v] : f.one_body)
    out << pq.first << "^ " << pq.second << " " << v << "\n";
  for (const auto& [pqrs, v] : f.two_body)
    out << pqrs[0] << "^ " << pqrs[1] << "^ " << pqrs[2] << " " << pqrs[3] << " " << v << "\n";
}

namespace {

// Jordan-Wigner ladder: a_p^(dagger) = 1/2 (X_p -+ i Y_p) Z_{p-1} ... Z_0.
pauli::OperatorSum jw_ladder(unsigned mode, bool dagger, unsigned n_modes) {
  pauli::OperatorSum op(n_modes);
  std::uint64_t zstring = (std::uint64_t{1} << mode) - 1;
  pauli::PauliTerm xt{std::uint64_t{1} << mode, zstring, 0};
  pauli::PauliTerm yt{std::uint64_t{1} << mode, zstring | (std::uint64_t{1} << mode), 0};
  op.add(xt, 0.5);
  op.add(yt, dagger ? pauli::cplx(0, -0.5) : pauli::cplx(0, 0.5));
  return op;
}

}  // namespace

gf2::Matrix parity_state_map(unsigned n_modes) {
  std::vector<std::uint64_t> rows(n_modes);
  for (unsigned j = 0; j < n_modes; ++j) {
    rows[j] = std::uint64_t{1} << j;
    if (j > 0) rows[j] |= std::uint64_t{1} << (j - 1);
  }
  return gf2::Matrix(n_modes, std::move(rows));
}

pauli::OperatorSum encoded_ladder(unsigned mode, bool dagger, unsigned n_modes, Encoding e) {
  if (mode >= n_modes) throw std::invalid_argument("mode index out of range");
  pauli::OperatorSum jw = jw_ladder(mode, dagger, n_modes);
  if (e == Encoding::jordan_wigner) return jw;
  return pauli::conjugated_by_linear_map(jw, parity_state_map(n_modes));
}

pauli::OperatorSum jordan_wigner(const FermionHamiltonian& f) {
  f.validate();
  pauli::OperatorSum h(f.n_modes);
  h.add(pauli::PauliTerm::identity(), f.constant);
  for (const auto& [pq, v] : f.one_body) {
    if (v == 0.0) continue;
    h.add(jw_ladder(pq.first, true, f.n_modes) * jw_ladder(pq.second, false, f.n_modes), v);
  }
  for (const auto& [pqrs, v] : f.two_body) {
    if (v == 0.0) continue;
    pauli::OperatorSum prod = jw_ladder(pqrs[0], true, f.n_modes) *
                              jw_ladder(pqrs[1], true, f.n_modes) *
                              jw_ladder(pqrs[2], false, f.n_modes) *
                              jw_ladder(pqrs[3], false, f.n_modes);
    h.add(prod, 0.5 * v);
  }
  h.prune();
  if (!h.is_hermitian(1e-10))
    throw std::runtime_error("encoded Hamiltonian has complex coefficients; input not Hermitian");
  return h;
}

pauli::OperatorSum parity_encode(const FermionHamiltonian& f) {
  return pauli::conjugated_by_linear_map(jordan_wigner(f), parity_state_map(f.n_modes));
}

pauli::OperatorSum encode(const FermionHamiltonian& f, Encoding e) {
  return e == Encoding::jordan_wigner ? jordan_wigner(f) : parity_encode(f);
}

std::uint64_t hf_state_in_encoding(const FermionHamiltonian& f, Encoding e) {
  if (!f.hf_occupation) throw std::runtime_error("fixture lacks hf_occupation metadata");
  if (e == Encoding::jordan_wigner) return *f.hf_occupation;
  return parity_state_map(f.n_modes).apply(*f.hf_occupation);
}

std::uint64_t parse_bitstring(const std::string& bits) {
  std::uint64_t v = 0;
  if (bits.size() > 64) throw std::invalid_argument("bitstring longer than 64");
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1')
      v |= std::uint64_t{1} << i;
    else if (bits[i] != '0')
      throw std::invalid_argument("bitstring must contain only 0/1");
  }
  return v;
}

std::string format_bitstring(std::uint64_t bits, unsigned n) {
  std::string s(n, '0');
  for (unsigned i = 0; i < n; ++i)
    if ((bits >> i) & 1) s[i] = '1';
  return s;
}

}  // namespace spinchem::fermion
