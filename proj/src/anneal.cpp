#include "spinchem/anneal.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <future>
#include <random>
#include <sstream>
#include <stdexcept>

namespace spinchem::anneal {

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

struct Neighbors {
  std::vector<std::vector<std::pair<unsigned, double>>> at;
  explicit Neighbors(const polyopt::IsingModel& model) : at(model.n_vars()) {
    for (const auto& [pair, j] : model.couplings) {
      if (j == 0.0) continue;
      at[pair.first].push_back({pair.second, j});
      at[pair.second].push_back({pair.first, j});
    }
  }
};

std::pair<double, double> field_weights(double s, const SvmcParams& params) {
  if (params.field_table.empty()) return {1.0 - s, s};
  const auto& table = params.field_table;
  if (table.size() == 1) return table[0];
  double pos = s * static_cast<double>(table.size() - 1);
  std::size_t lo = std::min(static_cast<std::size_t>(pos), table.size() - 2);
  double frac = pos - static_cast<double>(lo);
  return {table[lo].first + frac * (table[lo + 1].first - table[lo].first),
          table[lo].second + frac * (table[lo + 1].second - table[lo].second)};
}

SampleRecord svmc_single_read(const polyopt::IsingModel& model, const Neighbors& nbr,
                              const Schedule& sched, const SvmcParams& params,
                              const std::vector<int>* initial_state, std::uint64_t read_seed) {
  unsigned n = model.n_vars();
  std::mt19937_64 rng(read_seed);
  std::uniform_real_distribution<double> angle(0.0, M_PI);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<double> cos_t(n), sin_t(n);
  if (initial_state) {
    for (unsigned v = 0; v < n; ++v) {
      cos_t[v] = (*initial_state)[v] > 0 ? 1.0 : -1.0;
      sin_t[v] = 0.0;
    }
  } else {
    for (unsigned v = 0; v < n; ++v) {
      cos_t[v] = 0.0;
      sin_t[v] = 1.0;
    }
  }

  double total_time = sched.total_time();
  unsigned sweeps = std::max(1u, static_cast<unsigned>(std::ceil(total_time * params.sweeps_per_us)));
  for (unsigned sweep = 0; sweep < sweeps; ++sweep) {
    double t = (static_cast<double>(sweep) + 0.5) / static_cast<double>(sweeps) * total_time;
    auto [a, b] = field_weights(sched.s_at(t), params);
    for (unsigned v = 0; v < n; ++v) {
      // alternate fresh angles with reflection moves; the latter keep the
      // frozen regime mixing once B(s) dominates
      double cn, sn;
      if (rng() & 1) {
        double theta_new = angle(rng);
        cn = std::cos(theta_new);
        sn = std::sin(theta_new);
      } else {
        cn = -cos_t[v];
        sn = sin_t[v];
      }
      double local = model.h[v];
      for (const auto& [u, j] : nbr.at[v]) local += j * cos_t[u];
      double de = a * (sin_t[v] - sn) + b * local * (cn - cos_t[v]);
      if (de <= 0 || unit(rng) < std::exp(-params.beta * de)) {
        cos_t[v] = cn;
        sin_t[v] = sn;
      }
    }
  }

  SampleRecord rec;
  rec.assignment.resize(n);
  for (unsigned v = 0; v < n; ++v) rec.assignment[v] = cos_t[v] >= 0 ? 1 : -1;
  rec.energy = model.energy(rec.assignment);
  rec.seed = read_seed;
  rec.schedule_id = to_string(sched.kind);

  // best-so-far contract: the initial state is a candidate output
  if (initial_state) {
    double init_energy = model.energy(*initial_state);
    if (init_energy < rec.energy) {
      rec.assignment = *initial_state;
      rec.energy = init_energy;
    }
  }
  return rec;
}

template <class PerRead>
SampleSet run_reads(unsigned num_reads, PerRead&& read_fn) {
  SampleSet set;
  set.num_reads = num_reads;
  set.samples.resize(num_reads);
  unsigned workers = std::min(num_reads, std::max(1u, std::thread::hardware_concurrency()));
  std::vector<std::future<void>> futures;
  std::atomic<unsigned> next{0};
  for (unsigned w = 0; w < workers; ++w)
    futures.push_back(std::async(std::launch::async, [&] {
      for (unsigned i = next.fetch_add(1); i < num_reads; i = next.fetch_add(1))
        set.samples[i] = read_fn(i);
    }));
  for (auto& f : futures) f.get();
  return set;
}

}  // namespace

ScheduleKind schedule_kind_from_string(const std::string& name) {
  if (name == "forward") return ScheduleKind::forward;
  if (name == "paused") return ScheduleKind::paused;
  if (name == "reverse") return ScheduleKind::reverse;
  throw std::invalid_argument("unknown schedule kind: " + name);
}

std::string to_string(ScheduleKind k) {
  switch (k) {
    case ScheduleKind::forward: return "forward";
    case ScheduleKind::paused: return "paused";
    default: return "reverse";
  }
}

double Schedule::s_at(double t) const {
  if (t <= points.front().first) return points.front().second;
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (t <= points[i].first) {
      double t0 = points[i - 1].first, t1 = points[i].first;
      double s0 = points[i - 1].second, s1 = points[i].second;
      return s0 + (s1 - s0) * (t - t0) / (t1 - t0);
    }
  }
  return points.back().second;
}

void Schedule::validate() const {
  if (points.size() < 2) throw std::invalid_argument("schedule needs at least two points");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].second < 0.0 || points[i].second > 1.0)
      throw std::invalid_argument("schedule fraction outside [0, 1]");
    if (i > 0 && points[i].first <= points[i - 1].first)
      throw std::invalid_argument("schedule times must strictly increase");
  }
  if (points.front().first != 0.0) throw std::invalid_argument("schedule must start at t = 0");
  if (kind == ScheduleKind::reverse) {
    if (points.front().second != 1.0 || points.back().second != 1.0)
      throw std::invalid_argument("reverse schedule must start and end at s = 1");
  } else {
    if (points.front().second != 0.0 || points.back().second != 1.0)
      throw std::invalid_argument("forward-style schedule must run from s = 0 to s = 1");
  }
}

Schedule make_schedule(ScheduleKind kind, const ScheduleParams& p) {
  Schedule s;
  s.kind = kind;
  switch (kind) {
    case ScheduleKind::forward:
      s.points = {{0.0, 0.0}, {p.anneal_time_us, 1.0}};
      break;
    case ScheduleKind::paused:
      s.points = {{0.0, 0.0},
                  {p.pause_start_us, p.pause_s},
                  {p.pause_end_us, p.pause_s},
                  {p.pause_total_us, 1.0}};
      break;
    case ScheduleKind::reverse:
      s.points = {{0.0, 1.0},
                  {p.reverse_dip_time_us, p.reverse_dip_s},
                  {p.reverse_hold_time_us, p.reverse_hold_s},
                  {p.reverse_total_us, 1.0}};
      break;
  }
  s.validate();
  return s;
}

const SampleRecord& SampleSet::best() const {
  if (samples.empty()) throw std::logic_error("empty sample set");
  return *std::min_element(samples.begin(), samples.end(),
                           [](const SampleRecord& a, const SampleRecord& b) {
                             return a.energy < b.energy;
                           });
}

double SampleSet::best_energy() const { return best().energy; }

double SampleSet::median_energy() const {
  if (samples.empty()) throw std::logic_error("empty sample set");
  std::vector<double> e;
  e.reserve(samples.size());
  for (const auto& s : samples) e.push_back(s.energy);
  std::sort(e.begin(), e.end());
  std::size_t mid = e.size() / 2;
  return e.size() % 2 ? e[mid] : 0.5 * (e[mid - 1] + e[mid]);
}

SampleSet svmc_sample(const polyopt::IsingModel& model, const Schedule& sched,
                      unsigned num_reads, std::uint64_t seed, const SvmcParams& params,
                      const std::vector<int>* initial_state) {
  sched.validate();
  if (sched.kind == ScheduleKind::reverse && !initial_state)
    throw std::invalid_argument("reverse schedules require an initial state");
  if (sched.kind != ScheduleKind::reverse && initial_state)
    throw std::invalid_argument("forward-style schedules forbid an initial state");
  if (initial_state && initial_state->size() != model.n_vars())
    throw std::invalid_argument("initial state length mismatch");
  Neighbors nbr(model);
  return run_reads(num_reads, [&](unsigned i) {
    return svmc_single_read(model, nbr, sched, params, initial_state, mix_seed(seed, i));
  });
}

SampleSet svmc_sample_each(const polyopt::IsingModel& model, const Schedule& sched,
                           const std::vector<std::vector<int>>& initial_states,
                           std::uint64_t seed, const SvmcParams& params) {
  sched.validate();
  if (sched.kind != ScheduleKind::reverse)
    throw std::invalid_argument("per-sample initialization is a reverse-annealing mode");
  Neighbors nbr(model);
  return run_reads(static_cast<unsigned>(initial_states.size()), [&](unsigned i) {
    return svmc_single_read(model, nbr, sched, params, &initial_states[i], mix_seed(seed, i));
  });
}

SampleSet sa_sample(const polyopt::IsingModel& model, unsigned sweeps, double beta_min,
                    double beta_max, unsigned num_reads, std::uint64_t seed) {
  if (!(beta_min < beta_max)) throw std::invalid_argument("require beta_min < beta_max");
  if (sweeps == 0) throw std::invalid_argument("require at least one sweep");
  Neighbors nbr(model);
  unsigned n = model.n_vars();
  double ratio = beta_max / beta_min;
  return run_reads(num_reads, [&, n, ratio](unsigned i) {
    std::uint64_t read_seed = mix_seed(seed, i);
    std::mt19937_64 rng(read_seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<int> spins(n);
    for (auto& s : spins) s = (rng() & 1) ? 1 : -1;
    for (unsigned sweep = 0; sweep < sweeps; ++sweep) {
      double frac = sweeps == 1 ? 1.0 : static_cast<double>(sweep) / (sweeps - 1);
      double beta = beta_min * std::pow(ratio, frac);
      for (unsigned v = 0; v < n; ++v) {
        double local = model.h[v];
        for (const auto& [u, j] : nbr.at[v]) local += j * spins[u];
        double de = -2.0 * spins[v] * local;
        if (de <= 0 || unit(rng) < std::exp(-beta * de)) spins[v] = -spins[v];
      }
    }
    SampleRecord rec;
    rec.assignment = spins;
    rec.energy = model.energy(spins);
    rec.seed = read_seed;
    rec.schedule_id = "sa";
    return rec;
  });
}

ScheduleReport compare_schedules(const polyopt::IsingModel& model, const ScheduleSet& schedules,
                                 unsigned num_reads, std::uint64_t seed,
                                 const SvmcParams& params) {
  ScheduleReport report;

  SampleSet forward = svmc_sample(model, schedules.forward, num_reads, mix_seed(seed, 101), params);
  SampleSet paused = svmc_sample(model, schedules.paused, num_reads, mix_seed(seed, 202), params);

  auto states_of = [](const SampleSet& set) {
    std::vector<std::vector<int>> states;
    states.reserve(set.samples.size());
    for (const auto& s : set.samples) states.push_back(s.assignment);
    return states;
  };
  SampleSet rev_f =
      svmc_sample_each(model, schedules.reverse, states_of(forward), mix_seed(seed, 303), params);
  SampleSet rev_p =
      svmc_sample_each(model, schedules.reverse, states_of(paused), mix_seed(seed, 404), params);

  auto improvement = [](const SampleSet& reverse, const SampleSet& origin) {
    unsigned improved = 0;
    for (std::size_t i = 0; i < reverse.samples.size(); ++i)
      if (reverse.samples[i].energy < origin.samples[i].energy - 1e-12) ++improved;
    return static_cast<double>(improved) / static_cast<double>(reverse.samples.size());
  };

  auto push = [&](const std::string& name, SampleSet set, std::optional<double> improv) {
    MethodReport m;
    m.method = name;
    m.best_energy = set.best_energy();
    m.median_energy = set.median_energy();
    m.improvement_fraction = improv;
    m.samples = std::move(set);
    report.methods.push_back(std::move(m));
  };
  double imp_f = improvement(rev_f, forward);
  double imp_p = improvement(rev_p, paused);
  push("forward", std::move(forward), std::nullopt);
  push("paused", std::move(paused), std::nullopt);
  push("reverse_from_forward", std::move(rev_f), imp_f);
  push("reverse_from_paused", std::move(rev_p), imp_p);

  report.winner_per_run.resize(num_reads);
  for (unsigned i = 0; i < num_reads; ++i) {
    unsigned winner = 0;
    for (unsigned m = 1; m < report.methods.size(); ++m)
      if (report.methods[m].samples.samples[i].energy <
          report.methods[winner].samples.samples[i].energy - 1e-12)
        winner = m;
    report.winner_per_run[i] = winner;
  }
  return report;
}

std::string schedule_to_json(const Schedule& s) {
  nlohmann::json j;
  j["kind"] = to_string(s.kind);
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& [t, frac] : s.points) pts.push_back({t, frac});
  j["points"] = pts;
  return j.dump(2);
}

Schedule schedule_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  Schedule s;
  s.kind = schedule_kind_from_string(j.at("kind").get<std::string>());
  for (const auto& p : j.at("points"))
    s.points.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
  s.validate();
  return s;
}

void write_sampleset_jsonl(std::ostream& out, const SampleSet& set) {
  for (const auto& s : set.samples) {
    nlohmann::json j;
    j["assignment"] = s.assignment;
    j["energy"] = s.energy;
    j["seed"] = s.seed;
    j["schedule"] = s.schedule_id;
    out << j.dump() << "\n";
  }
}

SampleSet read_sampleset_jsonl(std::istream& in) {
  SampleSet set;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line);
    SampleRecord rec;
    rec.assignment = j.at("assignment").get<std::vector<int>>();
    rec.energy = j.at("energy").get<double>();
    rec.seed = j.value("seed", std::uint64_t{0});
    rec.schedule_id = j.value("schedule", std::string{});
    set.samples.push_back(std::move(rec));
  }
  set.num_reads = static_cast<unsigned>(set.samples.size());
  return set;
}

std::vector<std::pair<double, double>> read_field_table_csv(std::istream& in) {
  std::vector<std::pair<double, double>> table;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    double a, b;
    if (!(ls >> a >> b)) throw std::runtime_error("bad field table row: " + line);
    table.push_back({a, b});
  }
  if (table.size() < 2) throw std::runtime_error("field table needs at least two rows");
  return table;
}

}  // namespace spinchem::anneal
