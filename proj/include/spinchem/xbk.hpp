#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spinchem/pauli.hpp"
#include "spinchem/polyopt.hpp"

namespace spinchem::xbk {

struct XbkConfig {
  unsigned r = 1;  // replica count
  double lambda_tolerance = 1e-9;
  unsigned max_lambda_iterations = 100;
  double lambda_init = 0.0;
};

// One sign sector of the replica expansion. Variables are spin-valued with
// index replica * m + qubit; sign_vector has exactly p leading -1 entries.
struct XbkSector {
  unsigned p = 0;
  unsigned r = 1;
  unsigned m = 0;
  std::vector<int> sign_vector;
  polyopt::Polynomial h_prime;  // H'_p, diagonal pseudo-Boolean
  polyopt::Polynomial c_norm;   // C_p >= 0 pointwise
  double lambda = 0.0;
};

// Minimizes a spin-domain objective, treating assignments with
// feasible < 0.5 as +infinity; returns nothing when no feasible assignment
// was found. Implementations must be callable concurrently; `salt` makes
// randomized backends deterministic per call site.
struct SolverBackend {
  virtual ~SolverBackend() = default;
  virtual std::optional<polyopt::MinResult> minimize(const polyopt::Polynomial& objective,
                                                     const polyopt::Polynomial& feasible,
                                                     std::uint64_t salt) = 0;
  virtual std::string name() const = 0;
};

class ExactBackend : public SolverBackend {
 public:
  std::optional<polyopt::MinResult> minimize(const polyopt::Polynomial& objective,
                                             const polyopt::Polynomial& feasible,
                                             std::uint64_t salt) override;
  std::string name() const override { return "exact"; }
};

// Replica expansion of an m-qubit Hamiltonian with real coefficients into
// sectors p = 0 .. floor(r/2).
std::vector<XbkSector> xbk_expand(const pauli::OperatorSum& h, const XbkConfig& cfg);

struct SectorSolve {
  double lambda_prime = 0.0;
  std::vector<int> best_assignment;
  std::vector<double> lambda_trace;  // lambda_0 (init) onward
  unsigned iterations = 0;
  bool converged = false;
  bool valid = true;  // false when every assignment had zero norm
};

// Dinkelbach iteration on D = H'_p - lambda C_p; updates sec.lambda in place.
SectorSolve solve_sector(XbkSector& sec, SolverBackend& solver, const XbkConfig& cfg);

struct XbkResult {
  double energy = 0.0;             // min lambda' over valid sectors
  unsigned best_p = 0;
  std::vector<XbkSector> sectors;  // final lambda recorded per sector
  std::vector<SectorSolve> solves;
  bool any_valid = false;
  bool all_converged = true;
};

XbkResult ground_energy_xbk(const pauli::OperatorSum& h, const XbkConfig& cfg,
                            SolverBackend& solver);

struct StateReconstruction {
  std::map<std::uint64_t, std::uint64_t> counts;    // basis state -> b_i
  std::map<std::uint64_t, int> signs;               // basis state -> S(b_i)
  std::map<std::uint64_t, double> coefficients;     // basis state -> a_i
  std::vector<std::uint64_t> sign_conflicts;        // states seen with mixed signs
};

// Eq-style amplitude estimate a_i = b_i S(b_i) / sqrt(sum b_j^2) from replica
// occurrence counts across samples. Spin +1 decodes to qubit |0>.
StateReconstruction reconstruct_state(const std::vector<std::vector<int>>& samples,
                                      const XbkSector& sec);

// Group label (the replica index) per sector variable, for the grouped
// quadratisation of sector polynomials.
std::vector<unsigned> replica_groups(const XbkSector& sec);

std::string sector_to_json(const XbkSector& sec, const SectorSolve* solve = nullptr);
XbkSector sector_from_json(const std::string& text);

}  // namespace spinchem::xbk
