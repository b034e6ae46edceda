#include <doctest.h>

#include <random>
#include <stdexcept>

#include "spinchem/hardware.hpp"

using namespace spinchem;
using hardware::Embedding;
using hardware::Family;
using hardware::HardwareGraph;
using polyopt::IsingModel;

namespace {

IsingModel complete_graph(unsigned n, double j = 1.0) {
  IsingModel m;
  m.h.assign(n, 0.0);
  for (unsigned a = 0; a < n; ++a)
    for (unsigned b = a + 1; b < n; ++b) m.couplings[{a, b}] = j;
  return m;
}

}  // namespace

TEST_CASE("chimera unit cell is a K_{4,4}") {
  HardwareGraph g = hardware::generate_graph(Family::chimera, 1);
  CHECK(g.num_nodes() == 8);
  CHECK(g.num_edges() == 16);
  CHECK(g.max_degree() == 4);
  for (unsigned a = 0; a < 4; ++a)
    for (unsigned b = 4; b < 8; ++b) CHECK(g.has_edge(a, b));
  for (unsigned a = 0; a < 4; ++a)
    for (unsigned b = 0; b < 4; ++b) CHECK_FALSE(g.has_edge(a, b));
  CHECK(g.is_connected());
}

TEST_CASE("node counts follow the published formulas") {
  CHECK(hardware::generate_graph(Family::chimera, 3).num_nodes() == 72);          // 8 m^2
  CHECK(hardware::generate_graph(Family::pegasus, 4).num_nodes() == 8 * 3 * 11);  // 8(m-1)(3m-1)
  CHECK(hardware::generate_graph(Family::pegasus, 16).num_nodes() == 5640);
  CHECK(hardware::generate_graph(Family::zephyr, 3).num_nodes() == 16 * 3 * 7);   // 16 m (2m+1)
}

TEST_CASE("degree bounds and connectivity") {
  for (unsigned m : {2u, 3u}) {
    HardwareGraph p = hardware::generate_graph(Family::pegasus, m + 1);
    CHECK(p.max_degree() <= 15);
    CHECK(p.is_connected());

    HardwareGraph z = hardware::generate_graph(Family::zephyr, m);
    CHECK(z.max_degree() <= 20);
    CHECK(z.is_connected());
  }
  // a large-enough zephyr reaches the full degree of 20
  CHECK(hardware::generate_graph(Family::zephyr, 3).max_degree() == 20);
  CHECK(hardware::generate_graph(Family::pegasus, 6).max_degree() == 15);
}

TEST_CASE("zephyr is denser than pegasus at comparable node counts") {
  HardwareGraph z = hardware::generate_graph(Family::zephyr, 4);    // 576 nodes
  HardwareGraph p5 = hardware::generate_graph(Family::pegasus, 5);  // 448 nodes
  HardwareGraph p6 = hardware::generate_graph(Family::pegasus, 6);  // 680 nodes
  CHECK(z.mean_degree() > p5.mean_degree());
  CHECK(z.mean_degree() > p6.mean_degree());
}

TEST_CASE("unknown family is rejected") {
  CHECK_THROWS_AS(hardware::family_from_string("hexagon"), std::invalid_argument);
}

TEST_CASE("triangle into a single chimera cell needs exactly one doubled chain") {
  HardwareGraph g = hardware::generate_graph(Family::chimera, 1);
  IsingModel k3 = complete_graph(3);
  auto e = hardware::find_embedding(k3, g, 7);
  REQUIRE(e.has_value());
  hardware::validate_embedding(*e, k3, g);
  auto stats = hardware::chain_stats(*e);
  CHECK(stats.max_length == 2);
  CHECK(stats.physical_qubit_count == 4);
}

TEST_CASE("subgraph-shaped problems embed with unit chains") {
  HardwareGraph g = hardware::generate_graph(Family::chimera, 1);
  IsingModel path;  // K_{1,2} star, a chimera subgraph
  path.h.assign(3, 0.0);
  path.couplings[{0, 1}] = 1.0;
  path.couplings[{0, 2}] = 1.0;
  auto e = hardware::find_best_embedding(path, g, 3, 5);
  REQUIRE(e.has_value());
  CHECK(e->max_chain_length() == 1);
  auto stats = hardware::chain_stats(*e);
  CHECK(stats.overhead_ratio == doctest::Approx(1.0));
  CHECK_FALSE(stats.reliability_flag);
}

TEST_CASE("seeded determinism") {
  HardwareGraph g = hardware::generate_graph(Family::zephyr, 2);
  IsingModel k6 = complete_graph(6);
  auto e1 = hardware::find_embedding(k6, g, 99);
  auto e2 = hardware::find_embedding(k6, g, 99);
  REQUIRE(e1.has_value());
  REQUIRE(e2.has_value());
  CHECK(e1->chains == e2->chains);
}

TEST_CASE("embedding failure is reported, not fabricated") {
  HardwareGraph g = hardware::generate_graph(Family::chimera, 1);
  IsingModel k9 = complete_graph(9);  // more logical variables than a cell can host
  auto e = hardware::find_embedding(k9, g, 5, {.max_passes = 8});
  CHECK_FALSE(e.has_value());
}

TEST_CASE("embed_ising splits fields and adds ferromagnetic chain couplings") {
  HardwareGraph g = hardware::generate_graph(Family::chimera, 1);
  IsingModel logical;
  logical.h = {1.0};
  Embedding e;
  e.chains[0] = {0, 4};  // adjacent pair in the cell
  e.chain_strength = 2.0;

  IsingModel phys = hardware::embed_ising(logical, e, g);
  CHECK(phys.h[0] == doctest::Approx(0.5));
  CHECK(phys.h[4] == doctest::Approx(0.5));
  CHECK(phys.couplings.at({0, 4}) == doctest::Approx(-2.0));
}

TEST_CASE("default chain strength is twice the largest logical magnitude") {
  HardwareGraph g = hardware::generate_graph(Family::chimera, 2);
  IsingModel logical = complete_graph(5, 0.75);
  logical.h[2] = -1.25;
  auto e = hardware::find_best_embedding(logical, g, 11, 5);
  REQUIRE(e.has_value());
  CHECK(e->chain_strength == doctest::Approx(2.5));
}

TEST_CASE("unit chains reproduce the logical model exactly") {
  HardwareGraph g = hardware::generate_graph(Family::chimera, 1);
  IsingModel logical;
  logical.h = {0.5, -0.25};
  logical.couplings[{0, 1}] = 0.75;
  logical.offset = 1.5;
  Embedding e;
  e.chains[0] = {0};
  e.chains[1] = {4};
  e.chain_strength = 3.0;
  IsingModel phys = hardware::embed_ising(logical, e, g);
  CHECK(phys.h[0] == doctest::Approx(0.5));
  CHECK(phys.h[4] == doctest::Approx(-0.25));
  CHECK(phys.couplings.at({0, 4}) == doctest::Approx(0.75));
  CHECK(phys.couplings.size() == 1);
  CHECK(phys.offset == doctest::Approx(1.5));
}

TEST_CASE("unbroken physical samples carry the logical energy minus chain binding") {
  HardwareGraph g = hardware::generate_graph(Family::chimera, 2);
  IsingModel logical = complete_graph(4, 0.6);
  logical.h = {0.1, -0.2, 0.3, -0.4};
  auto e = hardware::find_best_embedding(logical, g, 17, 5);
  REQUIRE(e.has_value());
  IsingModel phys = hardware::embed_ising(logical, *e, g);

  unsigned intra_edges = 0;
  for (const auto& [v, chain] : e->chains)
    for (std::size_t i = 0; i < chain.size(); ++i)
      for (std::size_t k = i + 1; k < chain.size(); ++k)
        if (g.has_edge(chain[i], chain[k])) ++intra_edges;

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<int> logical_spins(4);
    for (auto& s : logical_spins) s = (rng() & 1) ? 1 : -1;
    std::vector<int> phys_spins(g.num_nodes(), 1);
    for (const auto& [v, chain] : e->chains)
      for (unsigned n : chain) phys_spins[n] = logical_spins[v];
    double expected = logical.energy(logical_spins) - e->chain_strength * intra_edges;
    CHECK(phys.energy(phys_spins) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("unembed repairs chains by majority and reports break statistics") {
  IsingModel logical;
  logical.h = {0.0, 0.0};
  logical.couplings[{0, 1}] = -1.0;
  Embedding e;
  e.chains[0] = {0, 1, 2};
  e.chains[1] = {4};
  e.chain_strength = 1.0;

  std::vector<std::vector<int>> samples = {
      {1, 1, 1, 1, -1, 1, 1, 1},    // unanimous chain
      {1, 1, -1, 1, -1, 1, 1, 1},   // broken, majority +1
      {-1, -1, 1, 1, 1, 1, 1, 1},   // broken, majority -1
  };
  auto [logical_samples, stats] = hardware::unembed(samples, e, logical);
  CHECK(logical_samples[0] == std::vector<int>{1, -1});
  CHECK(logical_samples[1] == std::vector<int>{1, -1});
  CHECK(logical_samples[2] == std::vector<int>{-1, 1});
  CHECK(stats.break_fraction.at(0) == doctest::Approx(2.0 / 3.0));
  CHECK(stats.break_fraction.at(1) == doctest::Approx(0.0));
}

TEST_CASE("tie repair picks the energy-lowering value, then -1") {
  IsingModel logical;
  logical.h = {0.0, -2.0};
  logical.couplings[{0, 1}] = 1.0;
  Embedding e;
  e.chains[0] = {0, 4};  // even chain, tie possible
  e.chains[1] = {1};
  e.chain_strength = 1.0;

  // chain 0 split 50/50; chain 1 votes +1, so var 0 should take -1 (J > 0)
  std::vector<std::vector<int>> samples = {{1, 1, 1, 1, -1, 1, 1, 1}};
  auto [out, stats] = hardware::unembed(samples, e, logical);
  CHECK(out[0] == std::vector<int>{-1, 1});

  // with no guidance at all the tie falls to -1
  IsingModel bare;
  bare.h = {0.0};
  Embedding e2;
  e2.chains[0] = {0, 4};
  auto [out2, stats2] = hardware::unembed({{1, 1, 1, 1, -1, 1, 1, 1}}, e2, bare);
  CHECK(out2[0] == std::vector<int>{-1});
}

TEST_CASE("planted ground states survive unembedding under sparse breaks") {
  HardwareGraph g = hardware::generate_graph(Family::zephyr, 2);
  IsingModel logical = complete_graph(8, 0.4);
  std::mt19937_64 rng(23);
  for (auto& h : logical.h) h = std::uniform_real_distribution<double>(-1, 1)(rng);

  polyopt::MinResult ground = polyopt::minimize_exact(polyopt::ising_to_polynomial(logical));
  auto e = hardware::find_best_embedding(logical, g, 31, 5);
  REQUIRE(e.has_value());

  std::vector<std::vector<int>> phys_samples;
  for (int s = 0; s < 40; ++s) {
    std::vector<int> sample(g.num_nodes(), 1);
    for (const auto& [v, chain] : e->chains)
      for (unsigned n : chain) sample[n] = ground.assignment[v];
    // flip a strict minority inside one chain
    for (const auto& [v, chain] : e->chains) {
      if (chain.size() >= 3 && rng() % 2 == 0) sample[chain[rng() % chain.size()]] *= -1;
      break;
    }
    phys_samples.push_back(std::move(sample));
  }
  auto [logical_samples, stats] = hardware::unembed(phys_samples, *e, logical);
  int recovered = 0;
  for (const auto& s : logical_samples) recovered += (s == ground.assignment);
  CHECK(recovered >= 38);  // a flipped strict minority never changes the vote
}

TEST_CASE("chain statistics flag unreliable lengths") {
  Embedding e;
  e.chains[0] = {0, 1, 2, 3, 4, 5, 6, 7};
  e.chains[1] = {8};
  auto stats = hardware::chain_stats(e);
  CHECK(stats.max_length == 8);
  CHECK(stats.reliability_flag);
  CHECK(stats.physical_qubit_count == 9);
  CHECK(stats.overhead_ratio == doctest::Approx(4.5));
  CHECK(stats.histogram.at(8) == 1);
  CHECK(stats.histogram.at(1) == 1);
}

TEST_CASE("embedding json round trip") {
  HardwareGraph g = hardware::generate_graph(Family::chimera, 1);
  Embedding e;
  e.chains[0] = {0, 4};
  e.chains[1] = {1};
  e.chain_strength = 1.75;
  Embedding back = hardware::embedding_from_json(hardware::embedding_to_json(e, g, 42));
  CHECK(back.chains == e.chains);
  CHECK(back.chain_strength == doctest::Approx(1.75));
}
