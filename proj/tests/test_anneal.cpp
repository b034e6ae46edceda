#include <doctest.h>

#include <random>
#include <sstream>

#include "spinchem/anneal.hpp"

using namespace spinchem;
using anneal::Schedule;
using anneal::ScheduleKind;
using polyopt::IsingModel;

namespace {

IsingModel single_spin(double h) {
  IsingModel m;
  m.h = {h};
  return m;
}

IsingModel ferro_chain(unsigned n, double j = -1.0) {
  IsingModel m;
  m.h.assign(n, 0.0);
  for (unsigned v = 0; v + 1 < n; ++v) m.couplings[{v, v + 1}] = j;
  return m;
}

}  // namespace

TEST_CASE("schedule defaults match the documented shapes") {
  Schedule fwd = anneal::make_schedule(ScheduleKind::forward);
  CHECK(fwd.points == std::vector<std::pair<double, double>>{{0, 0}, {100, 1}});

  Schedule paused = anneal::make_schedule(ScheduleKind::paused);
  CHECK(paused.points ==
        std::vector<std::pair<double, double>>{{0, 0}, {80, 0.5}, {180, 0.5}, {200, 1}});

  Schedule rev = anneal::make_schedule(ScheduleKind::reverse);
  CHECK(rev.points ==
        std::vector<std::pair<double, double>>{{0, 1}, {2, 0.3}, {152, 0.5}, {154, 1}});
}

TEST_CASE("schedule interpolation and validation") {
  Schedule paused = anneal::make_schedule(ScheduleKind::paused);
  CHECK(paused.s_at(40) == doctest::Approx(0.25));
  CHECK(paused.s_at(100) == doctest::Approx(0.5));  // inside the plateau
  CHECK(paused.s_at(190) == doctest::Approx(0.75));
  CHECK(paused.s_at(500) == doctest::Approx(1.0));

  Schedule bad;
  bad.kind = ScheduleKind::forward;
  bad.points = {{0, 0}, {50, 1.5}, {100, 1}};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad.points = {{0, 0}, {50, 0.5}, {50, 1}};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad.points = {{0, 0.2}, {100, 1}};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  Schedule rev;
  rev.kind = ScheduleKind::reverse;
  rev.points = {{0, 1}, {10, 0.3}, {20, 0.9}};
  CHECK_THROWS_AS(rev.validate(), std::invalid_argument);
}

TEST_CASE("forward svmc freezes a single biased spin") {
  // cold-limit oracle: at s = 1 and beta = 10 the excited level carries
  // weight exp(-2 beta) ~ 2e-9, so 100 reads land at +1 essentially always
  IsingModel m = single_spin(-1.0);
  auto set = anneal::svmc_sample(m, anneal::make_schedule(ScheduleKind::forward), 100, 7);
  unsigned ground = 0;
  for (const auto& s : set.samples) ground += s.assignment[0] == 1;
  CHECK(ground >= 99);
}

TEST_CASE("initial-state rules") {
  IsingModel m = single_spin(-1.0);
  std::vector<int> init = {1};
  CHECK_THROWS_AS(
      anneal::svmc_sample(m, anneal::make_schedule(ScheduleKind::forward), 1, 1, {}, &init),
      std::invalid_argument);
  CHECK_THROWS_AS(anneal::svmc_sample(m, anneal::make_schedule(ScheduleKind::reverse), 1, 1),
                  std::invalid_argument);
}

TEST_CASE("reverse annealing retains a deep ground state") {
  IsingModel m = ferro_chain(2, -3.0);
  m.h = {-1.0, -1.0};
  std::vector<int> ground = {1, 1};
  auto set = anneal::svmc_sample(m, anneal::make_schedule(ScheduleKind::reverse), 100, 11, {},
                                 &ground);
  unsigned retained = 0;
  for (const auto& s : set.samples) retained += s.assignment == ground;
  CHECK(retained >= 90);
}

TEST_CASE("stored energies equal re-evaluation, and seeds reproduce bit-identically") {
  IsingModel m = ferro_chain(6, -0.8);
  m.h[0] = 0.3;
  auto a = anneal::svmc_sample(m, anneal::make_schedule(ScheduleKind::forward), 20, 99);
  auto b = anneal::svmc_sample(m, anneal::make_schedule(ScheduleKind::forward), 20, 99);
  REQUIRE(a.samples.size() == b.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    CHECK(a.samples[i].assignment == b.samples[i].assignment);
    CHECK(a.samples[i].energy == b.samples[i].energy);
    CHECK(a.samples[i].energy == m.energy(a.samples[i].assignment));
  }
}

TEST_CASE("simulated annealing solves easy models") {
  IsingModel spin = single_spin(-1.0);
  auto set = anneal::sa_sample(spin, 50, 0.1, 10.0, 100, 3);
  unsigned ground = 0;
  for (const auto& s : set.samples) ground += s.assignment[0] == 1;
  CHECK(ground >= 99);

  IsingModel chain = ferro_chain(10);
  polyopt::MinResult exact = polyopt::minimize_exact(polyopt::ising_to_polynomial(chain));
  auto chain_set = anneal::sa_sample(chain, 200, 0.1, 20.0, 100, 5);
  unsigned hits = 0;
  for (const auto& s : chain_set.samples) hits += std::abs(s.energy - exact.energy) < 1e-9;
  CHECK(hits >= 95);

  CHECK_THROWS_AS(anneal::sa_sample(spin, 10, 5.0, 1.0, 1, 0), std::invalid_argument);
}

TEST_CASE("long forward schedules reach the exact minimum on small models") {
  std::mt19937_64 rng(2718);
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  IsingModel m;
  m.h.assign(8, 0.0);
  for (auto& h : m.h) h = val(rng);
  for (unsigned a = 0; a < 8; ++a)
    for (unsigned b = a + 1; b < 8; ++b)
      if (rng() % 3 == 0) m.couplings[{a, b}] = val(rng);

  polyopt::MinResult exact = polyopt::minimize_exact(polyopt::ising_to_polynomial(m));
  anneal::ScheduleParams p;
  p.anneal_time_us = 1000.0;
  auto set = anneal::svmc_sample(m, anneal::make_schedule(ScheduleKind::forward, p), 100, 17,
                                 {.sweeps_per_us = 50.0, .beta = 30.0});
  unsigned hits = 0;
  for (const auto& s : set.samples) hits += std::abs(s.energy - exact.energy) < 1e-9;
  CHECK(hits >= 95);
}

TEST_CASE("best-so-far contract: reverse never worsens its initialization") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  IsingModel m;
  m.h.assign(12, 0.0);
  for (auto& h : m.h) h = val(rng);
  for (unsigned a = 0; a < 12; ++a)
    for (unsigned b = a + 1; b < 12; ++b) m.couplings[{a, b}] = 0.5 * val(rng);

  auto fwd = anneal::svmc_sample(m, anneal::make_schedule(ScheduleKind::forward), 40, 23);
  std::vector<std::vector<int>> inits;
  for (const auto& s : fwd.samples) inits.push_back(s.assignment);
  auto rev = anneal::svmc_sample_each(m, anneal::make_schedule(ScheduleKind::reverse), inits, 29);
  for (std::size_t i = 0; i < rev.samples.size(); ++i)
    CHECK(rev.samples[i].energy <= fwd.samples[i].energy + 1e-12);
}

TEST_CASE("compare_schedules ties on a trivially easy model") {
  IsingModel m = single_spin(-1.0);
  anneal::ScheduleSet schedules{anneal::make_schedule(ScheduleKind::forward),
                                anneal::make_schedule(ScheduleKind::paused),
                                anneal::make_schedule(ScheduleKind::reverse)};
  auto report = anneal::compare_schedules(m, schedules, 50, 77);
  REQUIRE(report.methods.size() == 4);
  for (const auto& method : report.methods)
    CHECK(method.best_energy == doctest::Approx(-1.0));
  CHECK(report.methods[2].improvement_fraction.has_value());
  CHECK_FALSE(report.methods[0].improvement_fraction.has_value());
  CHECK(report.winner_per_run.size() == 50);
}

TEST_CASE("schedule and sample-set serialization round trips") {
  Schedule rev = anneal::make_schedule(ScheduleKind::reverse);
  Schedule back = anneal::schedule_from_json(anneal::schedule_to_json(rev));
  CHECK(back.kind == ScheduleKind::reverse);
  CHECK(back.points == rev.points);

  IsingModel m = ferro_chain(3);
  auto set = anneal::sa_sample(m, 20, 0.1, 5.0, 5, 9);
  std::ostringstream out;
  anneal::write_sampleset_jsonl(out, set);
  std::istringstream in(out.str());
  auto loaded = anneal::read_sampleset_jsonl(in);
  REQUIRE(loaded.samples.size() == set.samples.size());
  for (std::size_t i = 0; i < set.samples.size(); ++i) {
    CHECK(loaded.samples[i].assignment == set.samples[i].assignment);
    CHECK(loaded.samples[i].energy == set.samples[i].energy);
  }
}

TEST_CASE("transverse-field table overrides the linear ramp") {
  std::istringstream csv("1.0, 0.0\n0.5, 0.5\n0.0, 1.0\n");
  auto table = anneal::read_field_table_csv(csv);
  REQUIRE(table.size() == 3);
  CHECK(table[1].first == doctest::Approx(0.5));

  IsingModel m = single_spin(-1.0);
  anneal::SvmcParams params;
  params.field_table = table;
  auto set = anneal::svmc_sample(m, anneal::make_schedule(ScheduleKind::forward), 50, 13, params);
  unsigned ground = 0;
  for (const auto& s : set.samples) ground += s.assignment[0] == 1;
  CHECK(ground >= 45);
}
