#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "spinchem/polyopt.hpp"

namespace spinchem::anneal {

enum class ScheduleKind { forward, paused, reverse };

ScheduleKind schedule_kind_from_string(const std::string& name);
std::string to_string(ScheduleKind k);

// Piecewise-linear anneal fraction s(t), time in microseconds.
struct Schedule {
  ScheduleKind kind = ScheduleKind::forward;
  std::vector<std::pair<double, double>> points;  // (time_us, s)

  double total_time() const { return points.back().first; }
  double s_at(double t) const;
  void validate() const;
};

struct ScheduleParams {
  double anneal_time_us = 100.0;  // forward

  double pause_start_us = 80.0;  // paused
  double pause_s = 0.5;
  double pause_end_us = 180.0;
  double pause_total_us = 200.0;

  double reverse_dip_s = 0.3;  // reverse
  double reverse_dip_time_us = 2.0;
  double reverse_hold_s = 0.5;
  double reverse_hold_time_us = 152.0;
  double reverse_total_us = 154.0;
};

Schedule make_schedule(ScheduleKind kind, const ScheduleParams& params = {});

struct SampleRecord {
  std::vector<int> assignment;
  double energy = 0.0;
  std::uint64_t seed = 0;
  std::string schedule_id;
};

struct SampleSet {
  std::vector<SampleRecord> samples;
  unsigned num_reads = 0;

  const SampleRecord& best() const;
  double best_energy() const;
  double median_energy() const;
};

// A(s) = 1 - s, B(s) = s unless a transverse-field table is installed.
struct SvmcParams {
  double sweeps_per_us = 1.0;
  double beta = 10.0;
  // optional override sampled uniformly in s: row i = (A, B) at s = i/(n-1)
  std::vector<std::pair<double, double>> field_table;
};

// Spin-vector Monte Carlo over planar angles; driver weight A(s) favors the
// transverse direction, problem weight B(s) the Ising projection. Final
// states project to sign(cos theta). Reverse schedules require initial_state
// and include it as a candidate output (best-so-far contract); forward and
// paused schedules forbid it.
SampleSet svmc_sample(const polyopt::IsingModel& model, const Schedule& sched,
                      unsigned num_reads, std::uint64_t seed, const SvmcParams& params = {},
                      const std::vector<int>* initial_state = nullptr);

// One reverse read per provided initial state.
SampleSet svmc_sample_each(const polyopt::IsingModel& model, const Schedule& sched,
                           const std::vector<std::vector<int>>& initial_states,
                           std::uint64_t seed, const SvmcParams& params = {});

// Single-spin-flip Metropolis with a geometric inverse-temperature ramp.
SampleSet sa_sample(const polyopt::IsingModel& model, unsigned sweeps, double beta_min,
                    double beta_max, unsigned num_reads, std::uint64_t seed);

struct ScheduleSet {
  Schedule forward;
  Schedule paused;
  Schedule reverse;
};

struct MethodReport {
  std::string method;
  SampleSet samples;
  double best_energy = 0.0;
  double median_energy = 0.0;
  // reverse methods: fraction of reads strictly below their starting energy
  std::optional<double> improvement_fraction;
};

struct ScheduleReport {
  std::vector<MethodReport> methods;     // forward, paused, reverse_from_forward,
                                         // reverse_from_paused
  std::vector<unsigned> winner_per_run;  // index into methods, per read
};

ScheduleReport compare_schedules(const polyopt::IsingModel& model, const ScheduleSet& schedules,
                                 unsigned num_reads, std::uint64_t seed,
                                 const SvmcParams& params = {});

std::string schedule_to_json(const Schedule& s);
Schedule schedule_from_json(const std::string& text);
void write_sampleset_jsonl(std::ostream& out, const SampleSet& set);
SampleSet read_sampleset_jsonl(std::istream& in);

// Two-column CSV (A, B per row) for the transverse-field override.
std::vector<std::pair<double, double>> read_field_table_csv(std::istream& in);

}  // namespace spinchem::anneal
