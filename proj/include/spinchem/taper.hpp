#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "spinchem/pauli.hpp"

namespace spinchem::taper {

// Raised by select_sector when the reference state is not an eigenstate of
// every generator (expectation zero); callers fall back to a sector scan.
struct SectorAmbiguous : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A mutually commuting independent set of Pauli symmetries of a Hamiltonian,
// with the Clifford sequence mapping generator i onto X_{target_qubits[i]}.
// Generators are stored in the original frame with canonical (+1) phase;
// after the cliffords, generator i acts as image_signs[i] * X_{target[i]}.
struct SymmetrySet {
  unsigned n_qubits = 0;
  std::vector<pauli::PauliTerm> generators;
  std::vector<pauli::OperatorSum> cliffords;
  std::vector<unsigned> target_qubits;
  std::vector<int> image_signs;

  std::size_t size() const { return generators.size(); }
};

// Kernel of the binary-symplectic check matrix, reduced to a mutually
// commuting independent generator set (Z-type preferred), with cliffords.
SymmetrySet find_symmetries(const pauli::OperatorSum& h);

// Clifford construction for caller-chosen generators (must pairwise commute
// and commute with every term of h).
SymmetrySet build_symmetry_set(const pauli::OperatorSum& h,
                               std::vector<pauli::PauliTerm> generators);

// One +-1 eigenvalue per generator, read off a computational-basis reference.
std::vector<int> select_sector(const SymmetrySet& s, std::uint64_t reference_state);

// Conjugates h through the Clifford sequence, replaces each target qubit's X
// by its fixed eigenvalue, and deletes the qubit.
pauli::OperatorSum taper(const pauli::OperatorSum& h, const SymmetrySet& s,
                         const std::vector<int>& assignments);

struct SectorScan {
  std::vector<int> best_assignments;
  double best_energy = 0.0;
};

// Dense scan over all eigenvalue assignments; minimum-energy sector wins.
SectorScan scan_sectors(const pauli::OperatorSum& h, const SymmetrySet& s);

}  // namespace spinchem::taper
