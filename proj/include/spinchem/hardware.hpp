#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spinchem/polyopt.hpp"

namespace spinchem::hardware {

enum class Family { chimera, pegasus, zephyr };

Family family_from_string(const std::string& name);
std::string to_string(Family f);

// Chains at or above this length are flagged as unreliable.
inline constexpr unsigned kChainReliabilityThreshold = 8;

struct HardwareGraph {
  Family family = Family::chimera;
  unsigned size = 1;
  std::vector<std::vector<unsigned>> adj;  // sorted neighbor lists

  unsigned num_nodes() const { return static_cast<unsigned>(adj.size()); }
  std::size_t num_edges() const;
  bool has_edge(unsigned a, unsigned b) const;
  unsigned max_degree() const;
  double mean_degree() const;
  bool is_connected() const;
};

// Deterministic synthetic topologies:
//   chimera(m): m x m grid of K_{4,4} tiles, 8 m^2 qubits;
//   pegasus(m): length-12 loops with the published offset lists, trimmed to
//               the 8(m-1)(3m-1) qubits that carry internal couplers;
//   zephyr(m):  length-2 loops, 16 m (2m+1) qubits, degree up to 20.
HardwareGraph generate_graph(Family family, unsigned size);

struct Embedding {
  std::map<unsigned, std::vector<unsigned>> chains;  // logical var -> sorted nodes
  double chain_strength = 0.0;

  unsigned physical_qubit_count() const;
  unsigned max_chain_length() const;
};

struct EmbedParams {
  unsigned max_passes = 24;
  unsigned polish_passes = 2;
  unsigned stall_limit = 10;  // overlap passes without progress before giving up
  double weight_base = 8.0;
  std::optional<double> chain_strength;  // default 2 * max(|h|, |J|)
};

// Chain-growth heuristic with weighted shortest paths; randomized and
// seed-reproducible. Returns nothing when no valid embedding was found
// within the pass budget.
std::optional<Embedding> find_embedding(const polyopt::IsingModel& logical,
                                        const HardwareGraph& hw, std::uint64_t seed,
                                        const EmbedParams& params = {});

// Best of `attempts` seeded runs, ranked by (max chain length, total qubits).
std::optional<Embedding> find_best_embedding(const polyopt::IsingModel& logical,
                                             const HardwareGraph& hw, std::uint64_t seed,
                                             unsigned attempts, const EmbedParams& params = {});

// Throws std::runtime_error with a reason when the embedding is structurally
// invalid for the given logical model and hardware graph.
void validate_embedding(const Embedding& e, const polyopt::IsingModel& logical,
                        const HardwareGraph& hw);

// Logical fields split uniformly over chains, each logical coupling on the
// lexicographically smallest connecting physical edge, intra-chain edges at
// -chain_strength. The physical model is indexed over all hardware nodes.
polyopt::IsingModel embed_ising(const polyopt::IsingModel& logical, const Embedding& e,
                                const HardwareGraph& hw);

struct ChainBreakStats {
  std::map<unsigned, double> break_fraction;  // logical var -> fraction of samples broken
  double total_break_fraction = 0.0;
};

// Majority-vote repair; ties resolve to the value minimizing the logical
// energy against already-fixed variables, then -1.
std::pair<std::vector<std::vector<int>>, ChainBreakStats> unembed(
    const std::vector<std::vector<int>>& physical_samples, const Embedding& e,
    const polyopt::IsingModel& logical);

struct ChainStats {
  unsigned max_length = 0;
  double mean_length = 0.0;
  std::map<unsigned, unsigned> histogram;  // length -> chain count
  unsigned physical_qubit_count = 0;
  unsigned logical_qubit_count = 0;
  double overhead_ratio = 0.0;
  bool reliability_flag = false;  // max length at or above the threshold
};

ChainStats chain_stats(const Embedding& e);

std::string embedding_to_json(const Embedding& e, const HardwareGraph& hw, std::uint64_t seed);
Embedding embedding_from_json(const std::string& text);

}  // namespace spinchem::hardware
