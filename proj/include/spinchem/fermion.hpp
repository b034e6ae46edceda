#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>

#include "spinchem/pauli.hpp"

namespace spinchem::fermion {

enum class Encoding { jordan_wigner, parity };

Encoding encoding_from_string(const std::string& name);
std::string to_string(Encoding e);

// Second-quantized Hamiltonian as a term list of one- and two-electron
// integrals (Hartree). The two-body tensor enters the operator with a 1/2
// prefactor applied here, so files store the raw integrals.
struct FermionHamiltonian {
  unsigned n_modes = 0;
  unsigned n_electrons = 0;
  double constant = 0.0;
  std::map<std::pair<unsigned, unsigned>, double> one_body;   // (p,q) -> h_pq
  std::map<std::array<unsigned, 4>, double> two_body;         // (p,q,r,s) -> h_pqrs

  // metadata
  std::optional<std::uint64_t> hf_occupation;  // bit q = occupation of mode q
  std::optional<double> e_hf;
  std::optional<double> e_fci;
  std::string label;     // active-space tag, e.g. "(8,4)"
  std::string ordering;  // declared spin-orbital ordering, e.g. "interleaved"

  void validate() const;  // index ranges, Hermiticity, electron count
};

// Term-list file: header lines `n_modes N`, `n_electrons K`, `constant E`,
// optional `e_hf X`, `e_fci Y`, `hf_occupation BITS`, `label S`, `ordering S`;
// body lines `p^ q c` and `p^ q^ r s c`; `#` comments.
FermionHamiltonian parse_fermion_file(const std::string& path);
FermionHamiltonian parse_fermion_text(std::istream& in, const std::string& origin = "<stream>");
void write_fermion_file(std::ostream& out, const FermionHamiltonian& f);

// Ladder operator in the chosen encoding on n_modes qubits.
pauli::OperatorSum encoded_ladder(unsigned mode, bool dagger, unsigned n_modes, Encoding e);

// Qubit images of the Hamiltonian; Hermitian with real coefficients.
pauli::OperatorSum jordan_wigner(const FermionHamiltonian& f);
pauli::OperatorSum parity_encode(const FermionHamiltonian& f);
pauli::OperatorSum encode(const FermionHamiltonian& f, Encoding e);

// GF(2) state map of the parity encoding: occupation bits n map to qubit bits
// q with q_j = n_j xor n_{j-1}, so the running parity of q reproduces n.
gf2::Matrix parity_state_map(unsigned n_modes);

// Computational-basis bitstring of the HF determinant under the encoding.
std::uint64_t hf_state_in_encoding(const FermionHamiltonian& f, Encoding e);

// "1100" <-> bit mask helpers; character i of the string is mode/qubit i.
std::uint64_t parse_bitstring(const std::string& bits);
std::string format_bitstring(std::uint64_t bits, unsigned n);

}  // namespace spinchem::fermion
