#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "spinchem/gf2.hpp"

namespace spinchem::pauli {

using cplx = std::complex<double>;

// Coefficients with magnitude below this are dropped after every arithmetic pass.
inline constexpr double kPruneThreshold = 1e-12;

// Dense diagonalization refuses Hamiltonians larger than this.
inline constexpr unsigned kOracleMaxQubits = 14;

// Pauli string on up to 64 qubits in binary-symplectic form, with a tracked
// global phase i^phase_exp. A qubit with both its x and z bit set carries Y.
// The canonical matrix of the phase-free part is
//   P(x,z) = i^{popcount(x & z)} * X^x * Z^z,
// which is Hermitian for every (x, z).
struct PauliTerm {
  std::uint64_t x = 0;
  std::uint64_t z = 0;
  std::uint8_t phase_exp = 0;  // overall factor i^phase_exp

  static PauliTerm identity() { return {}; }
  static PauliTerm single(char op, unsigned qubit);

  cplx phase() const;
  bool is_identity() const { return x == 0 && z == 0; }
  unsigned weight() const { return static_cast<unsigned>(__builtin_popcountll(x | z)); }
  bool commutes_with(const PauliTerm& other) const;

  // Symplectic product with exact phase tracking.
  PauliTerm operator*(const PauliTerm& other) const;

  bool operator==(const PauliTerm& other) const {
    return x == other.x && z == other.z && phase_exp == other.phase_exp;
  }

  // Phase-free rendering, e.g. "X0 Z2" ("I" for the identity).
  std::string to_string() const;
};

// Key of the canonical term map: phase is factored out of the key and folded
// into the coefficient, so each Pauli string has a unique entry.
using PauliKey = std::pair<std::uint64_t, std::uint64_t>;

// Weighted sum of Pauli strings over a fixed qubit count. Immutable in spirit:
// all operations return new values. Hermitian sums have real coefficients in
// this canonical form.
class OperatorSum {
 public:
  OperatorSum() = default;
  explicit OperatorSum(unsigned n_qubits);

  unsigned n_qubits() const { return n_qubits_; }
  const std::map<PauliKey, cplx>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  void add(const PauliTerm& term, cplx coeff);
  void add(const OperatorSum& other, cplx scale = 1.0);
  cplx coefficient(const PauliTerm& term) const;
  cplx constant() const;

  OperatorSum operator*(const OperatorSum& other) const;
  OperatorSum operator+(const OperatorSum& other) const;
  OperatorSum operator-(const OperatorSum& other) const;
  OperatorSum scaled(cplx factor) const;

  bool is_hermitian(double tol = 1e-10) const;
  double max_abs_coefficient() const;

  // Drops coefficients below kPruneThreshold. Called by all arithmetic.
  void prune();

  std::string to_string() const;

 private:
  unsigned n_qubits_ = 0;
  std::map<PauliKey, cplx> terms_;
};

// U * h * U for a Hermitian unitary U given as an operator sum, e.g.
// (X_q + g)/sqrt(2) with g anticommuting with X_q.
OperatorSum conjugated(const OperatorSum& h, const OperatorSum& u);

// Conjugation by the basis permutation |n> -> |A n> for invertible A over
// GF(2): X^x -> X^{Ax}, Z^z -> Z^{A^{-T} z}, coefficient phases adjusted so
// the map is exact.
OperatorSum conjugated_by_linear_map(const OperatorSum& h, const gf2::Matrix& a);

// Dense 2^n x 2^n matrix; qubit q is bit q of the basis index.
Eigen::MatrixXcd to_dense(const OperatorSum& h);

// Full sorted spectrum / minimum eigenvalue of a Hermitian sum.
std::vector<double> eigenvalues(const OperatorSum& h);
double ground_energy_exact(const OperatorSum& h);

// Diagonal expectation <state|h|state> on a computational basis state; terms
// with X or Y content contribute zero.
double expectation(const OperatorSum& h, std::uint64_t basis_state);

// Text format, one term per line: "<real> [<imag>] <LETTER><index> ...".
// '#' comments and blank lines ignored. When n_qubits is 0 it is inferred
// from the largest index seen.
OperatorSum parse_pauli_text(std::istream& in, unsigned n_qubits = 0);
OperatorSum parse_pauli_file(const std::string& path, unsigned n_qubits = 0);
void write_pauli_text(std::ostream& out, const OperatorSum& h);

}  // namespace spinchem::pauli
