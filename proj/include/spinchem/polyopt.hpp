#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace spinchem::polyopt {

enum class Domain { binary, spin };

// Exhaustive routines refuse polynomials wider than this (~16.8M states).
inline constexpr unsigned kExactSolverMaxVars = 24;

// Multilinear pseudo-Boolean polynomial. Term keys are duplicate-free sorted
// index sets; the empty key holds the constant. Repeated indices entering
// through add_term reduce by the domain rule (x^2 = x, s^2 = 1).
class Polynomial {
 public:
  Polynomial() = default;
  Polynomial(unsigned n_vars, Domain domain) : n_vars_(n_vars), domain_(domain) {}

  unsigned n_vars() const { return n_vars_; }
  Domain domain() const { return domain_; }
  const std::map<std::vector<unsigned>, double>& terms() const { return terms_; }

  void add_term(std::vector<unsigned> vars, double coeff);
  double constant() const;
  unsigned degree() const;
  double evaluate(const std::vector<int>& assignment) const;
  double max_abs_coefficient() const;
  void prune(double threshold = 1e-12);
  // Grows the variable count (indices stay fixed).
  void resize(unsigned n_vars);

 private:
  unsigned n_vars_ = 0;
  Domain domain_ = Domain::binary;
  std::map<std::vector<unsigned>, double> terms_;
};

// Exact substitutions s = 2x - 1 and x = (s + 1)/2; energies agree pointwise.
Polynomial spin_to_binary(const Polynomial& p);
Polynomial binary_to_spin(const Polynomial& p);

struct QuadratisationMap {
  struct Ancilla {
    unsigned index;    // new variable y
    unsigned first;    // y := first * second
    unsigned second;
    double penalty;    // M for this substitution
    int helper = -1;   // auxiliary spin of the product gadget, when present
  };
  std::vector<Ancilla> ancillas;
};

// Rosenberg reduction of a binary polynomial to degree <= 2. Each round
// substitutes the pair occurring in the most degree->=3 terms and adds the
// penalty M (x_a x_b - 2 (x_a + x_b) y + 3 y).
std::pair<Polynomial, QuadratisationMap> quadratize(const Polynomial& p);

// Same substitution rule, but driven by a variable grouping: ancilla chains
// collapse each group-local projection of a monomial, so a monomial spanning
// at most two groups becomes a product of two factors. Ancillas are shared
// across monomials, which keeps the count near-minimal for the dense
// replica-structured polynomials of the pipeline. Monomials spanning three
// or more groups are rejected.
//
// penalty_strength: uniform M for every ancilla constraint. Without it the
// guaranteed-dominance formula is used; sampling front ends prefer a uniform
// strength near the landscape scale, re-scoring projected assignments on the
// original polynomial.
std::pair<Polynomial, QuadratisationMap> quadratize_grouped(
    const Polynomial& p, const std::vector<unsigned>& group_of_var,
    std::optional<double> penalty_strength = std::nullopt);

// Spin-domain variant of the grouped reduction. Each product s_a s_b is
// replaced by a fresh spin y tied to it by the exact four-spin parity gadget
//   (M/4) [8 + 2(ab + ay + by) - 2(a + b + y) - 4(aw + bw + yw) + 4w],
// which costs 0 when y = a b and M otherwise (w is an auxiliary spin).
// Working in the spin domain keeps coefficients at the spin-Fourier scale,
// avoiding the exponential growth of the binary substitution on dense
// high-degree polynomials.
std::pair<Polynomial, QuadratisationMap> quadratize_spin_grouped(
    const Polynomial& p, const std::vector<unsigned>& group_of_var,
    std::optional<double> penalty_strength = std::nullopt);

struct IsingModel {
  std::vector<double> h;
  std::map<std::pair<unsigned, unsigned>, double> couplings;  // keys (u,v), u < v
  double offset = 0.0;

  unsigned n_vars() const { return static_cast<unsigned>(h.size()); }
  double energy(const std::vector<int>& spins) const;
  double max_abs_field() const;
  double max_abs_coupling() const;
};

IsingModel qubo_to_ising(const Polynomial& qubo);
IsingModel spin_quadratic_to_ising(const Polynomial& p);  // degree <= 2, spin domain
Polynomial ising_to_qubo(const IsingModel& model);
Polynomial ising_to_polynomial(const IsingModel& model);  // spin domain, degree <= 2

struct MinResult {
  double energy = 0.0;
  std::vector<int> assignment;  // binary {0,1} or spin {-1,+1} per the domain
};

// Global minimum by exhaustive enumeration; deterministic lexicographic
// tie-break (first value of the domain preferred, variable 0 most
// significant).
MinResult minimize_exact(const Polynomial& p);

// Same, treating assignments with feasible(x) < 0.5 as +infinity. Returns
// nothing when no feasible assignment exists.
std::optional<MinResult> minimize_exact_feasible(const Polynomial& objective,
                                                 const Polynomial& feasible);

// Difference between the two lowest distinct energy values; `resolution`
// defines when two values count as the same level. Throws std::domain_error
// for constant landscapes.
double spectral_gap(const Polynomial& p, double resolution = 1e-9);

// qbsolv-style QUBO file: header "p qubo 0 maxNodes nNodes nCouplers", then
// "i i value" diagonal lines and "i j value" coupler lines.
void write_qubo_file(std::ostream& out, const Polynomial& qubo);
Polynomial read_qubo_file(std::istream& in);

std::string ising_to_json(const IsingModel& model);
IsingModel ising_from_json(const std::string& text);

}  // namespace spinchem::polyopt
