#include "spinchem/hardware.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <queue>
#include <random>
#include <set>
#include <stdexcept>
#include <thread>

namespace spinchem::hardware {

namespace {

void add_edge(std::vector<std::vector<unsigned>>& adj, unsigned a, unsigned b) {
  if (a == b) return;
  adj[a].push_back(b);
  adj[b].push_back(a);
}

void finalize(std::vector<std::vector<unsigned>>& adj) {
  for (auto& nb : adj) {
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
  }
}

HardwareGraph make_chimera(unsigned m) {
  const unsigned t = 4;
  auto id = [&](unsigned i, unsigned j, unsigned u, unsigned k) {
    return ((i * m + j) * 2 + u) * t + k;
  };
  std::vector<std::vector<unsigned>> adj(2 * t * m * m);
  for (unsigned i = 0; i < m; ++i)
    for (unsigned j = 0; j < m; ++j) {
      for (unsigned k = 0; k < t; ++k)
        for (unsigned k2 = 0; k2 < t; ++k2) add_edge(adj, id(i, j, 0, k), id(i, j, 1, k2));
      for (unsigned k = 0; k < t; ++k) {
        if (i + 1 < m) add_edge(adj, id(i, j, 0, k), id(i + 1, j, 0, k));
        if (j + 1 < m) add_edge(adj, id(i, j, 1, k), id(i, j + 1, 1, k));
      }
    }
  finalize(adj);
  return {Family::chimera, m, std::move(adj)};
}

// Pegasus: length-12 loops on a 12m x 12m grid. Vertical qubit (0,w,k,z)
// lives on x-line 12w + k and spans y in [12z + o0(k), 12z + o0(k) + 12);
// horizontal mirrored with the second offset list. Crossing loops couple.
HardwareGraph make_pegasus(unsigned m) {
  if (m < 2) throw std::invalid_argument("pegasus needs size >= 2");
  const int o[2][12] = {{2, 2, 2, 2, 10, 10, 10, 10, 6, 6, 6, 6},
                        {6, 6, 6, 6, 2, 2, 2, 2, 10, 10, 10, 10}};
  unsigned span = m - 1;
  auto raw_id = [&](unsigned u, unsigned w, unsigned k, unsigned z) {
    return ((u * m + w) * 12 + k) * span + z;
  };
  unsigned raw_n = 2 * m * 12 * span;
  std::vector<std::vector<unsigned>> adj(raw_n);

  auto line_of = [&](unsigned w, unsigned k) { return static_cast<int>(12 * w + k); };
  // segment on a line covering perpendicular coordinate c, if any
  auto segment_at = [&](unsigned u, unsigned k, int c) -> int {
    int z = (c - o[u][k]) >= 0 ? (c - o[u][k]) / 12 : -1;
    if (z < 0 || z >= static_cast<int>(span)) return -1;
    return z;
  };

  for (unsigned u = 0; u < 2; ++u)
    for (unsigned w = 0; w < m; ++w)
      for (unsigned k = 0; k < 12; ++k)
        for (unsigned z = 0; z < span; ++z) {
          unsigned a = raw_id(u, w, k, z);
          if (z + 1 < span) add_edge(adj, a, raw_id(u, w, k, z + 1));  // external
          if (k % 2 == 0) add_edge(adj, a, raw_id(u, w, k + 1, z));    // odd pair
        }
  // internal couplers: crossing vertical/horizontal loops
  for (unsigned w = 0; w < m; ++w)
    for (unsigned k = 0; k < 12; ++k)
      for (unsigned z = 0; z < span; ++z) {
        int x = line_of(w, k);
        int y0 = 12 * z + o[0][k];
        for (int y = y0; y < y0 + 12; ++y) {
          if (y < 0 || y >= static_cast<int>(12 * m)) continue;
          unsigned wh = static_cast<unsigned>(y) / 12, kh = static_cast<unsigned>(y) % 12;
          int zh = segment_at(1, kh, x);
          if (zh >= 0) add_edge(adj, raw_id(0, w, k, z), raw_id(1, wh, kh, zh));
        }
      }
  finalize(adj);

  // fabric trim: drop loops with no internal couplers (the four boundary
  // lines per orientation), then compact ids
  std::vector<int> remap(raw_n, -1);
  unsigned next = 0;
  for (unsigned v = 0; v < raw_n; ++v) {
    bool internal = false;
    unsigned u = v / (m * 12 * span);
    for (unsigned nb : adj[v])
      if (nb / (m * 12 * span) != u) internal = true;
    if (internal) remap[v] = static_cast<int>(next++);
  }
  std::vector<std::vector<unsigned>> trimmed(next);
  for (unsigned v = 0; v < raw_n; ++v) {
    if (remap[v] < 0) continue;
    for (unsigned nb : adj[v])
      if (remap[nb] >= 0) trimmed[remap[v]].push_back(static_cast<unsigned>(remap[nb]));
  }
  finalize(trimmed);
  return {Family::pegasus, m, std::move(trimmed)};
}

// Zephyr: length-2 loops on a (2m+1)-line grid. Vertical qubit (0,w,k,j,z)
// lives on x-line w and spans y in [2z + j, 2z + j + 2); crossings couple.
HardwareGraph make_zephyr(unsigned m) {
  const unsigned t = 4;
  unsigned lines = 2 * m + 1;
  auto id = [&](unsigned u, unsigned w, unsigned k, unsigned j, unsigned z) {
    return (((u * lines + w) * t + k) * 2 + j) * m + z;
  };
  std::vector<std::vector<unsigned>> adj(2 * lines * t * 2 * m);
  for (unsigned u = 0; u < 2; ++u)
    for (unsigned w = 0; w < lines; ++w)
      for (unsigned k = 0; k < t; ++k)
        for (unsigned j = 0; j < 2; ++j)
          for (unsigned z = 0; z < m; ++z) {
            unsigned a = id(u, w, k, j, z);
            if (z + 1 < m) add_edge(adj, a, id(u, w, k, j, z + 1));  // external
            // odd couplers: overlapping partner with flipped j
            if (j == 0) {
              add_edge(adj, a, id(u, w, k, 1, z));
              if (z > 0) add_edge(adj, a, id(u, w, k, 1, z - 1));
            }
          }
  // internal: vertical (0,w,k,j,z) x horizontal (1,w',k',j',z') cross when
  // each one's line falls inside the other's half-open span
  for (unsigned w = 0; w < lines; ++w)
    for (unsigned k = 0; k < t; ++k)
      for (unsigned j = 0; j < 2; ++j)
        for (unsigned z = 0; z < m; ++z) {
          for (unsigned dy = 0; dy < 2; ++dy) {
            unsigned wh = 2 * z + j + dy;
            if (wh >= lines) continue;
            for (unsigned jh = 0; jh < 2; ++jh) {
              for (int start : {static_cast<int>(w) - 1, static_cast<int>(w)}) {
                if (start < 0 || (start - static_cast<int>(jh)) < 0) continue;
                if ((start - static_cast<int>(jh)) % 2 != 0) continue;
                unsigned zh = static_cast<unsigned>(start - static_cast<int>(jh)) / 2;
                if (zh >= m) continue;
                for (unsigned kh = 0; kh < t; ++kh)
                  add_edge(adj, id(0, w, k, j, z), id(1, wh, kh, jh, zh));
              }
            }
          }
        }
  finalize(adj);
  return {Family::zephyr, m, std::move(adj)};
}

}  // namespace

Family family_from_string(const std::string& name) {
  if (name == "chimera") return Family::chimera;
  if (name == "pegasus") return Family::pegasus;
  if (name == "zephyr") return Family::zephyr;
  throw std::invalid_argument("unknown hardware family: " + name);
}

std::string to_string(Family f) {
  switch (f) {
    case Family::chimera: return "chimera";
    case Family::pegasus: return "pegasus";
    default: return "zephyr";
  }
}

std::size_t HardwareGraph::num_edges() const {
  std::size_t total = 0;
  for (const auto& nb : adj) total += nb.size();
  return total / 2;
}

bool HardwareGraph::has_edge(unsigned a, unsigned b) const {
  const auto& nb = adj[a];
  return std::binary_search(nb.begin(), nb.end(), b);
}

unsigned HardwareGraph::max_degree() const {
  std::size_t d = 0;
  for (const auto& nb : adj) d = std::max(d, nb.size());
  return static_cast<unsigned>(d);
}

double HardwareGraph::mean_degree() const {
  if (adj.empty()) return 0;
  return 2.0 * static_cast<double>(num_edges()) / static_cast<double>(adj.size());
}

bool HardwareGraph::is_connected() const {
  if (adj.empty()) return true;
  std::vector<char> seen(adj.size(), 0);
  std::vector<unsigned> stack = {0};
  seen[0] = 1;
  std::size_t count = 1;
  while (!stack.empty()) {
    unsigned v = stack.back();
    stack.pop_back();
    for (unsigned nb : adj[v])
      if (!seen[nb]) {
        seen[nb] = 1;
        ++count;
        stack.push_back(nb);
      }
  }
  return count == adj.size();
}

HardwareGraph generate_graph(Family family, unsigned size) {
  if (size < 1) throw std::invalid_argument("hardware size must be >= 1");
  switch (family) {
    case Family::chimera: return make_chimera(size);
    case Family::pegasus: return make_pegasus(size);
    default: return make_zephyr(size);
  }
}

unsigned Embedding::physical_qubit_count() const {
  unsigned total = 0;
  for (const auto& [v, chain] : chains) total += static_cast<unsigned>(chain.size());
  return total;
}

unsigned Embedding::max_chain_length() const {
  std::size_t mx = 0;
  for (const auto& [v, chain] : chains) mx = std::max(mx, chain.size());
  return static_cast<unsigned>(mx);
}

namespace {

std::vector<std::vector<unsigned>> logical_adjacency(const polyopt::IsingModel& logical) {
  std::vector<std::vector<unsigned>> adj(logical.n_vars());
  for (const auto& [pair, j] : logical.couplings) {
    if (j == 0.0) continue;
    adj[pair.first].push_back(pair.second);
    adj[pair.second].push_back(pair.first);
  }
  finalize(adj);
  return adj;
}

struct Embedder {
  const HardwareGraph& hw;
  const std::vector<std::vector<unsigned>>& ladj;
  const EmbedParams& params;
  std::mt19937_64 rng;

  unsigned hn;
  std::vector<std::vector<unsigned>> chains;  // per logical var
  std::vector<int> usage;
  double overlap_cost;  // grows per pass until overlaps are priced out

  Embedder(const HardwareGraph& hw_, const std::vector<std::vector<unsigned>>& ladj_,
           const EmbedParams& params_, std::uint64_t seed)
      : hw(hw_), ladj(ladj_), params(params_), rng(seed), hn(hw_.num_nodes()),
        chains(ladj_.size()), usage(hw_.num_nodes(), 0),
        overlap_cost(params_.weight_base) {}

  double node_weight(unsigned n, bool hard) const {
    if (usage[n] == 0) return 1.0;
    if (hard) return std::numeric_limits<double>::infinity();
    return std::pow(overlap_cost, std::min(usage[n], 8));
  }

  // multi-source Dijkstra from a chain; dist includes the entered node's
  // weight, chain members cost zero
  void dijkstra(const std::vector<unsigned>& sources, bool hard, std::vector<double>& dist,
                std::vector<int>& parent) const {
    dist.assign(hn, std::numeric_limits<double>::infinity());
    parent.assign(hn, -1);
    using Item = std::pair<double, unsigned>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    for (unsigned s : sources) {
      dist[s] = 0;
      pq.push({0, s});
    }
    while (!pq.empty()) {
      auto [d, v] = pq.top();
      pq.pop();
      if (d > dist[v]) continue;
      for (unsigned nb : hw.adj[v]) {
        double w = node_weight(nb, hard);
        if (!std::isfinite(w)) continue;
        double nd = d + w;
        if (nd < dist[nb] - 1e-15) {
          dist[nb] = nd;
          parent[nb] = static_cast<int>(v);
          pq.push({nd, nb});
        }
      }
    }
  }

  void remove_chain(unsigned v) {
    for (unsigned n : chains[v]) --usage[n];
    chains[v].clear();
  }

  void place_chain(unsigned v, std::vector<unsigned> chain) {
    std::sort(chain.begin(), chain.end());
    chain.erase(std::unique(chain.begin(), chain.end()), chain.end());
    for (unsigned n : chain) ++usage[n];
    chains[v] = std::move(chain);
  }

  bool embed_one(unsigned v, bool hard) {
    std::vector<unsigned> targets;
    for (unsigned u : ladj[v])
      if (!chains[u].empty()) targets.push_back(u);

    if (targets.empty()) {
      // isolated start: least-used node with at least one coupler
      unsigned best = hn;
      std::uniform_int_distribution<unsigned> start(0, hn - 1);
      unsigned offset = start(rng);
      int best_usage = std::numeric_limits<int>::max();
      for (unsigned i = 0; i < hn; ++i) {
        unsigned n = (i + offset) % hn;
        if (hw.adj[n].empty()) continue;
        if (usage[n] < best_usage) {
          best_usage = usage[n];
          best = n;
        }
      }
      if (best == hn || (hard && best_usage > 0)) return false;
      place_chain(v, {best});
      return true;
    }

    std::vector<std::vector<double>> dist(targets.size());
    std::vector<std::vector<int>> parent(targets.size());
    for (std::size_t i = 0; i < targets.size(); ++i)
      dijkstra(chains[targets[i]], hard, dist[i], parent[i]);

    // Prefer unoccupied roots; rooting on another chain is the stickiest
    // kind of overlap. Jitter breaks deterministic traps between passes.
    unsigned root = hn;
    double best_total = std::numeric_limits<double>::infinity();
    std::uniform_real_distribution<double> jitter(1.0, 1.05);
    for (int only_clean = 1; only_clean >= 0 && root == hn; --only_clean) {
      for (unsigned n = 0; n < hn; ++n) {
        if (only_clean && usage[n] > 0) continue;
        double w = node_weight(n, hard);
        if (!std::isfinite(w)) continue;
        // root weight once, plus per-target path costs excluding the root
        double total = w;
        bool ok = true;
        for (std::size_t i = 0; i < targets.size(); ++i) {
          if (!std::isfinite(dist[i][n])) {
            ok = false;
            break;
          }
          if (dist[i][n] > 0) total += dist[i][n] - w;
        }
        if (!ok) continue;
        total *= jitter(rng);
        if (total < best_total - 1e-15) {
          best_total = total;
          root = n;
        }
      }
    }
    if (root == hn) return false;

    std::vector<unsigned> chain = {root};
    for (std::size_t i = 0; i < targets.size(); ++i) {
      int cur = static_cast<int>(root);
      while (parent[i][cur] >= 0) {
        cur = parent[i][cur];
        if (dist[i][cur] == 0) break;  // reached the neighbor chain
        chain.push_back(static_cast<unsigned>(cur));
      }
    }
    place_chain(v, std::move(chain));
    return true;
  }

  std::pair<int, long> overlap_state() const {
    int max_usage = 0;
    long overloaded = 0;
    for (int u : usage) {
      max_usage = std::max(max_usage, u);
      if (u > 1) overloaded += u - 1;
    }
    return {max_usage, overloaded};
  }

  std::optional<Embedding> run() {
    unsigned n = static_cast<unsigned>(ladj.size());
    std::vector<unsigned> order(n);
    for (unsigned i = 0; i < n; ++i) order[i] = i;

    // first pass: high-degree variables claim space first
    std::shuffle(order.begin(), order.end(), rng);
    std::stable_sort(order.begin(), order.end(), [&](unsigned a, unsigned b) {
      return ladj[a].size() > ladj[b].size();
    });

    bool feasible = false;
    std::pair<int, long> best_state{std::numeric_limits<int>::max(),
                                    std::numeric_limits<long>::max()};
    unsigned stalled = 0;
    for (unsigned pass = 0; pass < params.max_passes && !feasible; ++pass) {
      overlap_cost = params.weight_base * (1.0 + pass);
      // late passes route strictly around occupied nodes where possible
      bool prefer_hard = pass >= params.max_passes / 3;
      if (pass > 0) std::shuffle(order.begin(), order.end(), rng);
      for (unsigned v : order) {
        remove_chain(v);
        if (prefer_hard && embed_one(v, true)) continue;
        if (!embed_one(v, false)) return std::nullopt;  // disconnected input
      }
      // endgame: jointly evict every conflicted chain so the contested
      // region is actually free, then re-embed strictly cleanly
      if (overlap_state().first > 1) {
        std::vector<unsigned> conflicted;
        for (unsigned v = 0; v < n; ++v)
          for (unsigned node : chains[v])
            if (usage[node] > 1) {
              conflicted.push_back(v);
              break;
            }
        if (!conflicted.empty() && conflicted.size() <= n / 2) {
          std::shuffle(conflicted.begin(), conflicted.end(), rng);
          for (unsigned v : conflicted) remove_chain(v);
          for (unsigned v : conflicted)
            if (!embed_one(v, true) && !embed_one(v, false)) return std::nullopt;
        }
      }
      auto state = overlap_state();
      feasible = state.first <= 1;
      if (state < best_state) {
        best_state = state;
        stalled = 0;
      } else if (++stalled >= params.stall_limit) {
        return std::nullopt;  // no progress; let another seed try
      }
    }
    if (!feasible) return std::nullopt;

    // polish: re-route each chain with other chains excluded, keep shorter
    for (unsigned pass = 0; pass < params.polish_passes; ++pass) {
      std::shuffle(order.begin(), order.end(), rng);
      for (unsigned v : order) {
        std::vector<unsigned> old_chain = chains[v];
        remove_chain(v);
        if (!embed_one(v, true) || chains[v].size() >= old_chain.size()) {
          remove_chain(v);
          place_chain(v, std::move(old_chain));
        }
      }
    }

    Embedding e;
    for (unsigned v = 0; v < n; ++v) e.chains[v] = chains[v];
    return e;
  }
};

}  // namespace

std::optional<Embedding> find_embedding(const polyopt::IsingModel& logical,
                                        const HardwareGraph& hw, std::uint64_t seed,
                                        const EmbedParams& params) {
  if (logical.n_vars() == 0) return Embedding{};
  auto ladj = logical_adjacency(logical);
  Embedder embedder(hw, ladj, params, seed);
  auto result = embedder.run();
  if (!result) return std::nullopt;
  result->chain_strength = params.chain_strength.value_or(
      2.0 * std::max(logical.max_abs_field(), logical.max_abs_coupling()));
  validate_embedding(*result, logical, hw);
  return result;
}

std::optional<Embedding> find_best_embedding(const polyopt::IsingModel& logical,
                                             const HardwareGraph& hw, std::uint64_t seed,
                                             unsigned attempts, const EmbedParams& params) {
  // attempts are independent; run them across the available cores
  std::vector<std::optional<Embedding>> results(attempts);
  unsigned workers = std::min(attempts, std::max(1u, std::thread::hardware_concurrency()));
  std::atomic<unsigned> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (unsigned a = next.fetch_add(1); a < attempts; a = next.fetch_add(1))
        results[a] = find_embedding(logical, hw, seed + a, params);
    });
  for (auto& t : pool) t.join();

  std::optional<Embedding> best;
  for (auto& cand : results) {
    if (!cand) continue;
    if (!best || std::make_pair(cand->max_chain_length(), cand->physical_qubit_count()) <
                     std::make_pair(best->max_chain_length(), best->physical_qubit_count()))
      best = cand;
  }
  return best;
}

void validate_embedding(const Embedding& e, const polyopt::IsingModel& logical,
                        const HardwareGraph& hw) {
  std::set<unsigned> used;
  for (unsigned v = 0; v < logical.n_vars(); ++v) {
    auto it = e.chains.find(v);
    if (it == e.chains.end() || it->second.empty())
      throw std::runtime_error("variable " + std::to_string(v) + " has no chain");
    for (unsigned n : it->second) {
      if (n >= hw.num_nodes()) throw std::runtime_error("chain node outside the hardware graph");
      if (!used.insert(n).second)
        throw std::runtime_error("chains overlap at node " + std::to_string(n));
    }
    // connectivity of the induced subgraph
    const auto& chain = it->second;
    std::set<unsigned> in_chain(chain.begin(), chain.end());
    std::vector<unsigned> stack = {chain[0]};
    std::set<unsigned> seen = {chain[0]};
    while (!stack.empty()) {
      unsigned x = stack.back();
      stack.pop_back();
      for (unsigned nb : hw.adj[x])
        if (in_chain.count(nb) && !seen.count(nb)) {
          seen.insert(nb);
          stack.push_back(nb);
        }
    }
    if (seen.size() != chain.size())
      throw std::runtime_error("chain of variable " + std::to_string(v) + " is disconnected");
  }
  for (const auto& [pair, j] : logical.couplings) {
    if (j == 0.0) continue;
    bool connected = false;
    for (unsigned a : e.chains.at(pair.first)) {
      for (unsigned b : e.chains.at(pair.second))
        if (hw.has_edge(a, b)) {
          connected = true;
          break;
        }
      if (connected) break;
    }
    if (!connected)
      throw std::runtime_error("no physical edge joins chains of coupling (" +
                               std::to_string(pair.first) + "," +
                               std::to_string(pair.second) + ")");
  }
}

polyopt::IsingModel embed_ising(const polyopt::IsingModel& logical, const Embedding& e,
                                const HardwareGraph& hw) {
  validate_embedding(e, logical, hw);
  polyopt::IsingModel phys;
  phys.h.assign(hw.num_nodes(), 0.0);
  phys.offset = logical.offset;
  for (unsigned v = 0; v < logical.n_vars(); ++v) {
    const auto& chain = e.chains.at(v);
    double split = logical.h[v] / static_cast<double>(chain.size());
    for (unsigned n : chain) phys.h[n] += split;
    for (std::size_t i = 0; i < chain.size(); ++i)
      for (std::size_t k = i + 1; k < chain.size(); ++k)
        if (hw.has_edge(chain[i], chain[k]))
          phys.couplings[{chain[i], chain[k]}] += -e.chain_strength;
  }
  for (const auto& [pair, j] : logical.couplings) {
    if (j == 0.0) continue;
    std::pair<unsigned, unsigned> best{0, 0};
    bool found = false;
    for (unsigned a : e.chains.at(pair.first))
      for (unsigned b : e.chains.at(pair.second)) {
        unsigned lo = std::min(a, b), hi = std::max(a, b);
        if (!hw.has_edge(lo, hi)) continue;
        if (!found || std::make_pair(lo, hi) < best) {
          best = {lo, hi};
          found = true;
        }
      }
    phys.couplings[{best.first, best.second}] += j;
  }
  return phys;
}

std::pair<std::vector<std::vector<int>>, ChainBreakStats> unembed(
    const std::vector<std::vector<int>>& physical_samples, const Embedding& e,
    const polyopt::IsingModel& logical) {
  ChainBreakStats stats;
  std::map<unsigned, unsigned> breaks;
  for (const auto& [v, chain] : e.chains) breaks[v] = 0;

  std::vector<std::vector<int>> out;
  out.reserve(physical_samples.size());
  for (const auto& sample : physical_samples) {
    std::vector<int> logical_sample(logical.n_vars(), 0);
    std::vector<unsigned> tied;
    for (const auto& [v, chain] : e.chains) {
      int up = 0, down = 0;
      for (unsigned n : chain) {
        if (n >= sample.size()) throw std::invalid_argument("sample does not cover chain nodes");
        (sample[n] > 0 ? up : down)++;
      }
      if (up != 0 && down != 0) ++breaks[v];
      if (up > down)
        logical_sample[v] = 1;
      else if (down > up)
        logical_sample[v] = -1;
      else
        tied.push_back(v);
    }
    // ties: pick the value minimizing energy against already-fixed spins
    for (unsigned v : tied) {
      double field = logical.h[v];
      for (const auto& [pair, j] : logical.couplings) {
        if (pair.first == v && logical_sample[pair.second] != 0)
          field += j * logical_sample[pair.second];
        else if (pair.second == v && logical_sample[pair.first] != 0)
          field += j * logical_sample[pair.first];
      }
      logical_sample[v] = field > 0 ? -1 : (field < 0 ? 1 : -1);
    }
    out.push_back(std::move(logical_sample));
  }
  double total = 0;
  for (auto& [v, count] : breaks) {
    double frac = physical_samples.empty()
                      ? 0.0
                      : static_cast<double>(count) / static_cast<double>(physical_samples.size());
    stats.break_fraction[v] = frac;
    total += frac;
  }
  if (!breaks.empty()) stats.total_break_fraction = total / static_cast<double>(breaks.size());
  return {std::move(out), std::move(stats)};
}

ChainStats chain_stats(const Embedding& e) {
  ChainStats s;
  s.logical_qubit_count = static_cast<unsigned>(e.chains.size());
  for (const auto& [v, chain] : e.chains) {
    unsigned len = static_cast<unsigned>(chain.size());
    s.histogram[len]++;
    s.max_length = std::max(s.max_length, len);
    s.physical_qubit_count += len;
  }
  if (s.logical_qubit_count > 0)
    s.mean_length = static_cast<double>(s.physical_qubit_count) / s.logical_qubit_count;
  s.overhead_ratio = s.logical_qubit_count > 0
                         ? static_cast<double>(s.physical_qubit_count) / s.logical_qubit_count
                         : 0.0;
  s.reliability_flag = s.max_length >= kChainReliabilityThreshold;
  return s;
}

std::string embedding_to_json(const Embedding& e, const HardwareGraph& hw, std::uint64_t seed) {
  nlohmann::json j;
  nlohmann::json chains;
  for (const auto& [v, chain] : e.chains) chains[std::to_string(v)] = chain;
  j["chains"] = chains;
  j["chain_strength"] = e.chain_strength;
  j["family"] = to_string(hw.family);
  j["size"] = hw.size;
  j["seed"] = seed;
  return j.dump(2);
}

Embedding embedding_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  Embedding e;
  for (auto it = j.at("chains").begin(); it != j.at("chains").end(); ++it)
    e.chains[static_cast<unsigned>(std::stoul(it.key()))] =
        it.value().get<std::vector<unsigned>>();
  e.chain_strength = j.value("chain_strength", 0.0);
  return e;
}

}  // namespace spinchem::hardware
