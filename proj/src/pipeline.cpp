#include "spinchem/pipeline.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <mutex>
#include <sstream>

namespace spinchem::pipeline {

namespace {

using json = nlohmann::json;

std::uint64_t mix(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

template <class F>
auto stage(const std::string& name, F&& fn) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

// Minimizes sector objectives by quadratising to a logical Ising model,
// sampling it (optionally through a hardware embedding), and re-evaluating
// projected assignments on the true polynomials.
class SamplerBackend : public xbk::SolverBackend {
 public:
  SamplerBackend(const RunConfig& cfg, unsigned r, unsigned m,
                 const hardware::HardwareGraph* hw)
      : cfg_(cfg), r_(r), m_(m), hw_(hw) {}

  std::optional<polyopt::MinResult> minimize(const polyopt::Polynomial& objective,
                                             const polyopt::Polynomial& feasible,
                                             std::uint64_t salt) override {
    std::vector<unsigned> groups(static_cast<std::size_t>(r_) * m_);
    for (unsigned i = 0; i < r_; ++i)
      for (unsigned q = 0; q < m_; ++q) groups[i * m_ + q] = i;

    // spin-domain reduction keeps coefficients at the spin-Fourier scale
    polyopt::Polynomial proxy = objective;
    if (cfg_.coefficient_cutoff > 0) proxy.prune(cfg_.coefficient_cutoff);
    auto [quad, qmap] = polyopt::quadratize_spin_grouped(proxy, groups, cfg_.penalty_strength);
    polyopt::IsingModel logical = polyopt::spin_quadratic_to_ising(quad);
    std::uint64_t seed = mix(cfg_.seed, salt);

    std::vector<std::vector<int>> assignments;
    if (hw_) {
      hardware::EmbedParams ep;
      ep.chain_strength = cfg_.chain_strength;
      auto emb = hardware::find_best_embedding(logical, *hw_, mix(seed, 17),
                                               cfg_.embedding_attempts, ep);
      if (!emb) throw StageError("embed", "no embedding found within the attempt budget");
      polyopt::IsingModel physical = hardware::embed_ising(logical, *emb, *hw_);
      anneal::SampleSet phys_set = sample_model(physical, mix(seed, 23));
      std::vector<std::vector<int>> phys_assignments;
      for (const auto& s : phys_set.samples) phys_assignments.push_back(s.assignment);
      auto [logical_samples, breaks] = hardware::unembed(phys_assignments, *emb, logical);
      assignments = std::move(logical_samples);
      std::lock_guard<std::mutex> lock(mutex_);
      break_fractions_.push_back(breaks.total_break_fraction);
    } else {
      anneal::SampleSet set = sample_model(logical, mix(seed, 23));
      for (const auto& s : set.samples) assignments.push_back(s.assignment);
    }

    // Project onto the sector variables and score on the true polynomials.
    // Each read also yields its aligned single-determinant candidates (all
    // replicas copied from one replica's content), the same reading of a
    // sample that state reconstruction uses.
    std::optional<polyopt::MinResult> best;
    unsigned n = objective.n_vars();
    auto consider = [&](const std::vector<int>& spins) {
      if (feasible.evaluate(spins) < 0.5) return;
      double value = objective.evaluate(spins);
      if (!best || value < best->energy) best = polyopt::MinResult{value, spins};
    };
    for (const auto& a : assignments) {
      std::vector<int> spins(a.begin(), a.begin() + n);
      consider(spins);
      for (unsigned i = 0; i < r_; ++i) {
        std::vector<int> aligned(n);
        for (unsigned j = 0; j < r_; ++j)
          for (unsigned q = 0; q < m_; ++q) aligned[j * m_ + q] = spins[i * m_ + q];
        consider(aligned);
      }
    }
    return best;
  }

  std::string name() const override { return cfg_.backend; }

  std::optional<double> mean_break_fraction() const {
    std::lock_guard<std::mutex> lock(mutex_);
    if (break_fractions_.empty()) return std::nullopt;
    double total = 0;
    for (double f : break_fractions_) total += f;
    return total / static_cast<double>(break_fractions_.size());
  }

 private:
  anneal::SampleSet sample_model(const polyopt::IsingModel& model, std::uint64_t seed) {
    if (cfg_.backend == "sa")
      return anneal::sa_sample(model, cfg_.sa_sweeps, cfg_.sa_beta_min, cfg_.sa_beta_max,
                               cfg_.num_reads, seed);
    anneal::Schedule sched = anneal::make_schedule(cfg_.svmc_schedule, cfg_.schedule_params);
    if (sched.kind == anneal::ScheduleKind::reverse) {
      // best-sample policy: seed every reverse read from the best forward read
      anneal::Schedule fwd = anneal::make_schedule(anneal::ScheduleKind::forward,
                                                   cfg_.schedule_params);
      anneal::SampleSet warm =
          anneal::svmc_sample(model, fwd, cfg_.num_reads, mix(seed, 5), cfg_.svmc_params);
      std::vector<int> init = warm.best().assignment;
      return anneal::svmc_sample(model, sched, cfg_.num_reads, seed, cfg_.svmc_params, &init);
    }
    return anneal::svmc_sample(model, sched, cfg_.num_reads, seed, cfg_.svmc_params);
  }

  const RunConfig& cfg_;
  unsigned r_, m_;
  const hardware::HardwareGraph* hw_;
  mutable std::mutex mutex_;
  std::vector<double> break_fractions_;
};

struct RunRecord {
  std::ofstream stream;
  bool enabled = false;

  void open(const std::string& dir) {
    std::filesystem::create_directories(dir);
    stream.open(dir + "/run_record.jsonl");
    enabled = stream.is_open();
  }
  void line(const std::string& stage_name, json data) {
    if (!enabled) return;
    json j;
    j["stage"] = stage_name;
    j["data"] = std::move(data);
    stream << j.dump() << "\n";
    stream.flush();
  }
};

}  // namespace

RunConfig config_from_json(const std::string& text) {
  json j = json::parse(text);
  RunConfig cfg;
  cfg.input_path = j.at("input").get<std::string>();
  cfg.encoding = fermion::encoding_from_string(j.value("encoding", "parity"));
  if (j.contains("tapering")) {
    cfg.tapering_enabled = j["tapering"].value("enabled", true);
    cfg.sector_policy = j["tapering"].value("sector_policy", "reference");
  }
  if (j.contains("xbk")) {
    const auto& x = j["xbk"];
    cfg.r = x.value("r", 1u);
    if (x.contains("sectors")) cfg.sectors = x["sectors"].get<std::vector<unsigned>>();
    cfg.lambda_tolerance = x.value("lambda_tolerance", 1e-9);
    cfg.max_lambda_iterations = x.value("max_iterations", 100u);
    cfg.lambda_init = x.value("lambda_init", 0.0);
  }
  if (j.contains("solver")) {
    const auto& s = j["solver"];
    cfg.backend = s.value("backend", "exact");
    if (s.contains("penalty_strength") && !s["penalty_strength"].is_null())
      cfg.penalty_strength = s["penalty_strength"].get<double>();
    cfg.coefficient_cutoff = s.value("coefficient_cutoff", 0.0);
    cfg.num_reads = s.value("num_reads", 100u);
    cfg.sa_sweeps = s.value("sweeps", 4000u);
    cfg.sa_beta_min = s.value("beta_min", 0.05);
    cfg.sa_beta_max = s.value("beta_max", 1e5);
    cfg.svmc_params.beta = s.value("beta", 10.0);
    cfg.svmc_params.sweeps_per_us = s.value("sweeps_per_us", 1.0);
    if (s.contains("schedule")) {
      const auto& sch = s["schedule"];
      cfg.svmc_schedule = anneal::schedule_kind_from_string(sch.value("kind", "forward"));
      anneal::ScheduleParams& p = cfg.schedule_params;
      p.anneal_time_us = sch.value("anneal_time_us", p.anneal_time_us);
      p.pause_start_us = sch.value("pause_start_us", p.pause_start_us);
      p.pause_s = sch.value("pause_s", p.pause_s);
      p.pause_end_us = sch.value("pause_end_us", p.pause_end_us);
      p.pause_total_us = sch.value("pause_total_us", p.pause_total_us);
      p.reverse_dip_s = sch.value("reverse_dip_s", p.reverse_dip_s);
      p.reverse_dip_time_us = sch.value("reverse_dip_time_us", p.reverse_dip_time_us);
      p.reverse_hold_s = sch.value("reverse_hold_s", p.reverse_hold_s);
      p.reverse_hold_time_us = sch.value("reverse_hold_time_us", p.reverse_hold_time_us);
      p.reverse_total_us = sch.value("reverse_total_us", p.reverse_total_us);
    }
  }
  if (j.contains("hardware")) {
    const auto& h = j["hardware"];
    cfg.hardware_family = h.value("family", "none");
    cfg.hardware_size = h.value("size", 8u);
    cfg.embedding_attempts = h.value("embedding_attempts", 20u);
    if (h.contains("chain_strength") && !h["chain_strength"].is_null())
      cfg.chain_strength = h["chain_strength"].get<double>();
  }
  cfg.seed = j.value("seed", std::uint64_t{1});
  cfg.out_dir = j.value("out_dir", std::string{});
  return cfg;
}

std::string config_to_json(const RunConfig& cfg) {
  json j;
  j["input"] = cfg.input_path;
  j["encoding"] = fermion::to_string(cfg.encoding);
  j["tapering"] = {{"enabled", cfg.tapering_enabled}, {"sector_policy", cfg.sector_policy}};
  json x = {{"r", cfg.r},
            {"lambda_tolerance", cfg.lambda_tolerance},
            {"max_iterations", cfg.max_lambda_iterations},
            {"lambda_init", cfg.lambda_init}};
  if (cfg.sectors) x["sectors"] = *cfg.sectors;
  j["xbk"] = x;
  json solver = {{"backend", cfg.backend},
                 {"num_reads", cfg.num_reads},
                 {"sweeps", cfg.sa_sweeps},
                 {"beta_min", cfg.sa_beta_min},
                 {"beta_max", cfg.sa_beta_max},
                 {"beta", cfg.svmc_params.beta},
                 {"sweeps_per_us", cfg.svmc_params.sweeps_per_us},
                 {"schedule",
                  {{"kind", anneal::to_string(cfg.svmc_schedule)},
                   {"anneal_time_us", cfg.schedule_params.anneal_time_us},
                   {"pause_start_us", cfg.schedule_params.pause_start_us},
                   {"pause_s", cfg.schedule_params.pause_s},
                   {"pause_end_us", cfg.schedule_params.pause_end_us},
                   {"pause_total_us", cfg.schedule_params.pause_total_us},
                   {"reverse_dip_s", cfg.schedule_params.reverse_dip_s},
                   {"reverse_dip_time_us", cfg.schedule_params.reverse_dip_time_us},
                   {"reverse_hold_s", cfg.schedule_params.reverse_hold_s},
                   {"reverse_hold_time_us", cfg.schedule_params.reverse_hold_time_us},
                   {"reverse_total_us", cfg.schedule_params.reverse_total_us}}}};
  if (cfg.penalty_strength) solver["penalty_strength"] = *cfg.penalty_strength;
  if (cfg.coefficient_cutoff > 0) solver["coefficient_cutoff"] = cfg.coefficient_cutoff;
  j["solver"] = solver;
  json h = {{"family", cfg.hardware_family},
            {"size", cfg.hardware_size},
            {"embedding_attempts", cfg.embedding_attempts}};
  if (cfg.chain_strength) h["chain_strength"] = *cfg.chain_strength;
  j["hardware"] = h;
  j["seed"] = cfg.seed;
  if (!cfg.out_dir.empty()) j["out_dir"] = cfg.out_dir;
  return j.dump(2);
}

RunConfig config_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return config_from_json(buf.str());
}

std::string classify(double energy, std::optional<double> reference) {
  if (!reference) return "unclassified";
  double dev = std::abs(energy - *reference);
  if (dev <= kChemicalAccuracy) return "success";
  if (dev <= kPartialThreshold) return "partial";
  return "failed";
}

int exit_code_for(const std::string& classification) {
  if (classification == "success" || classification == "unclassified") return 0;
  if (classification == "partial") return 2;
  return 3;
}

CompiledProblem compile_problem(const RunConfig& cfg) {
  CompiledProblem cp;
  cp.fermion_h = stage("parse", [&] { return fermion::parse_fermion_file(cfg.input_path); });
  cp.encoded = stage("encode", [&] { return fermion::encode(cp.fermion_h, cfg.encoding); });
  if (!cfg.tapering_enabled) {
    cp.tapered = cp.encoded;
    return cp;
  }
  cp.symmetries = stage("taper", [&] { return taper::find_symmetries(cp.encoded); });
  cp.sector_assignments = stage("taper", [&]() -> std::vector<int> {
    if (cfg.sector_policy == "scan")
      return taper::scan_sectors(cp.encoded, cp.symmetries).best_assignments;
    try {
      return taper::select_sector(cp.symmetries,
                                  fermion::hf_state_in_encoding(cp.fermion_h, cfg.encoding));
    } catch (const taper::SectorAmbiguous&) {
      // ambiguous reference: fall back to the variationally safe scan
      return taper::scan_sectors(cp.encoded, cp.symmetries).best_assignments;
    }
  });
  cp.tapered =
      stage("taper", [&] { return taper::taper(cp.encoded, cp.symmetries, cp.sector_assignments); });
  return cp;
}

namespace {

std::unique_ptr<xbk::SolverBackend> make_backend(const RunConfig& cfg, unsigned r, unsigned m,
                                                 const hardware::HardwareGraph* hw) {
  if (cfg.backend == "exact") return std::make_unique<xbk::ExactBackend>();
  if (cfg.backend == "sa" || cfg.backend == "svmc")
    return std::make_unique<SamplerBackend>(cfg, r, m, hw);
  throw StageError("solve", "unknown backend: " + cfg.backend);
}

json solve_to_json(unsigned p, const xbk::SectorSolve& s) {
  return json{{"p", p},
              {"lambda_prime", s.lambda_prime},
              {"iterations", s.iterations},
              {"converged", s.converged},
              {"valid", s.valid},
              {"lambda_trace", s.lambda_trace}};
}

}  // namespace

EnergyReport run_pipeline(const RunConfig& cfg) {
  RunRecord record;
  if (!cfg.out_dir.empty()) {
    record.open(cfg.out_dir);
    std::ofstream cfg_out(cfg.out_dir + "/config.json");
    cfg_out << config_to_json(cfg) << "\n";
  }

  CompiledProblem cp = compile_problem(cfg);
  record.line("parse", {{"input", cfg.input_path},
                        {"n_modes", cp.fermion_h.n_modes},
                        {"n_electrons", cp.fermion_h.n_electrons}});
  record.line("encode", {{"encoding", fermion::to_string(cfg.encoding)},
                         {"n_qubits", cp.encoded.n_qubits()},
                         {"terms", cp.encoded.size()}});
  record.line("taper", {{"enabled", cfg.tapering_enabled},
                        {"generators", cp.symmetries.size()},
                        {"assignments", cp.sector_assignments},
                        {"qubits_before", cp.encoded.n_qubits()},
                        {"qubits_after", cp.tapered.n_qubits()}});

  unsigned m = cp.tapered.n_qubits();
  xbk::XbkConfig xcfg{cfg.r, cfg.lambda_tolerance, cfg.max_lambda_iterations, cfg.lambda_init};

  std::optional<hardware::HardwareGraph> hw;
  if (cfg.hardware_family != "none")
    hw = stage("hardware", [&] {
      return hardware::generate_graph(hardware::family_from_string(cfg.hardware_family),
                                      cfg.hardware_size);
    });

  auto backend = make_backend(cfg, cfg.r, m, hw ? &*hw : nullptr);

  std::vector<xbk::XbkSector> sectors =
      stage("xbk", [&] { return xbk::xbk_expand(cp.tapered, xcfg); });
  record.line("xbk", {{"r", cfg.r}, {"m", m}, {"sectors", sectors.size()}});

  EnergyReport report;
  report.ledger.tapered_m = m;
  report.ledger.xbk_qubits = cfg.r * m;
  report.e_hf = cp.fermion_h.e_hf;
  report.e_fci = cp.fermion_h.e_fci;

  report.energy = std::numeric_limits<double>::infinity();
  for (auto& sec : sectors) {
    if (cfg.sectors && std::find(cfg.sectors->begin(), cfg.sectors->end(), sec.p) ==
                           cfg.sectors->end())
      continue;
    xbk::SectorSolve solve =
        stage("solve", [&] { return xbk::solve_sector(sec, *backend, xcfg); });
    record.line("solve", solve_to_json(sec.p, solve));
    if (record.enabled) {
      std::ofstream sec_out(cfg.out_dir + "/sector_p" + std::to_string(sec.p) + ".json");
      sec_out << xbk::sector_to_json(sec, &solve) << "\n";
    }
    report.sector_ps.push_back(sec.p);
    if (solve.valid && !solve.converged) report.all_converged = false;
    if (solve.valid && (!report.any_valid || solve.lambda_prime < report.energy)) {
      report.any_valid = true;
      report.energy = solve.lambda_prime;
      report.best_p = sec.p;
    }
    report.solves.push_back(std::move(solve));
  }
  if (!report.any_valid) throw StageError("solve", "every requested sector was norm-zero");

  // qubit ledger from the paper's analyzed sector (p = 0 at lambda = 0)
  {
    auto p0 = std::find_if(sectors.begin(), sectors.end(),
                           [](const xbk::XbkSector& s) { return s.p == 0; });
    if (p0 != sectors.end()) {
      polyopt::Polynomial proxy = p0->h_prime;
      if (cfg.coefficient_cutoff > 0) proxy.prune(cfg.coefficient_cutoff);
      auto [quad, qmap] = polyopt::quadratize_spin_grouped(proxy, xbk::replica_groups(*p0),
                                                           cfg.penalty_strength);
      report.ledger.logical_qubits = quad.n_vars();
      if (hw) {
        polyopt::IsingModel logical = polyopt::spin_quadratic_to_ising(quad);
        hardware::EmbedParams ep;
        ep.chain_strength = cfg.chain_strength;
        auto emb = hardware::find_best_embedding(logical, *hw, mix(cfg.seed, 71),
                                                 cfg.embedding_attempts, ep);
        if (emb) {
          report.ledger.physical_qubits = emb->physical_qubit_count();
          report.chain_statistics = hardware::chain_stats(*emb);
        }
      }
    }
  }
  if (auto* sampler = dynamic_cast<SamplerBackend*>(backend.get()))
    report.chain_break_fraction = sampler->mean_break_fraction();

  report.delta_to_hf = report.e_hf ? std::optional<double>(std::abs(report.energy - *report.e_hf))
                                   : std::nullopt;
  report.classification = classify(report.energy, report.e_hf);
  record.line("report", json::parse(report_to_json(report)));
  if (record.enabled) {
    std::ofstream rep_out(cfg.out_dir + "/report.json");
    rep_out << report_to_json(report) << "\n";
  }
  return report;
}

std::string report_to_json(const EnergyReport& report) {
  json j;
  j["energy"] = report.energy;
  j["best_p"] = report.best_p;
  j["classification"] = report.classification;
  j["all_converged"] = report.all_converged;
  if (report.e_hf) j["e_hf"] = *report.e_hf;
  if (report.e_fci) j["e_fci"] = *report.e_fci;
  if (report.delta_to_hf) j["delta_to_hf"] = *report.delta_to_hf;
  json sectors = json::array();
  for (std::size_t i = 0; i < report.solves.size(); ++i)
    sectors.push_back(solve_to_json(report.sector_ps[i], report.solves[i]));
  j["sectors"] = sectors;
  json ledger = {{"tapered_m", report.ledger.tapered_m},
                 {"xbk_qubits", report.ledger.xbk_qubits}};
  if (report.ledger.logical_qubits) ledger["logical_qubits"] = *report.ledger.logical_qubits;
  if (report.ledger.physical_qubits) ledger["physical_qubits"] = *report.ledger.physical_qubits;
  j["qubit_ledger"] = ledger;
  if (report.chain_statistics) {
    const auto& cs = *report.chain_statistics;
    j["chain_stats"] = {{"max_length", cs.max_length},
                        {"mean_length", cs.mean_length},
                        {"physical_qubit_count", cs.physical_qubit_count},
                        {"overhead_ratio", cs.overhead_ratio},
                        {"reliability_flag", cs.reliability_flag}};
  }
  if (report.chain_break_fraction) j["chain_break_fraction"] = *report.chain_break_fraction;
  return j.dump(2);
}

std::vector<ScalingRow> scaling_report(const RunConfig& cfg,
                                       const std::vector<unsigned>& r_values) {
  if (r_values.empty()) throw std::invalid_argument("scaling_report: no r values");
  CompiledProblem cp = compile_problem(cfg);
  unsigned m = cp.tapered.n_qubits();

  std::optional<hardware::HardwareGraph> hw;
  if (cfg.hardware_family != "none")
    hw = hardware::generate_graph(hardware::family_from_string(cfg.hardware_family),
                                  cfg.hardware_size);

  std::vector<ScalingRow> rows;
  for (unsigned r : r_values) {
    ScalingRow row;
    row.r = r;
    row.xbk_qubits = r * m;
    xbk::XbkConfig xcfg{r, cfg.lambda_tolerance, cfg.max_lambda_iterations, cfg.lambda_init};
    auto sectors = xbk::xbk_expand(cp.tapered, xcfg);
    const auto& p0 = sectors.front();
    polyopt::Polynomial proxy = p0.h_prime;
    if (cfg.coefficient_cutoff > 0) proxy.prune(cfg.coefficient_cutoff);
    auto [quad, qmap] = polyopt::quadratize_spin_grouped(proxy, xbk::replica_groups(p0),
                                                         cfg.penalty_strength);
    row.logical_qubits = quad.n_vars();
    row.logical_ratio = static_cast<double>(row.logical_qubits) / row.xbk_qubits;
    if (hw) {
      polyopt::IsingModel logical = polyopt::spin_quadratic_to_ising(quad);
      hardware::EmbedParams ep;
      ep.chain_strength = cfg.chain_strength;
      auto emb =
          hardware::find_best_embedding(logical, *hw, mix(cfg.seed, 1000 + r),
                                        cfg.embedding_attempts, ep);
      if (emb) {
        row.physical_qubits = emb->physical_qubit_count();
        row.physical_ratio = static_cast<double>(*row.physical_qubits) / row.logical_qubits;
      } else {
        row.embedding_failed = true;
      }
    }
    rows.push_back(row);
  }
  return rows;
}

std::string scaling_to_csv(const std::vector<ScalingRow>& rows) {
  std::ostringstream out;
  out << "r,xbk_qubits,logical_qubits,physical_qubits,logical_ratio,physical_ratio,"
         "embedding_failed\n";
  out.precision(12);
  for (const auto& row : rows) {
    out << row.r << "," << row.xbk_qubits << "," << row.logical_qubits << ",";
    if (row.physical_qubits) out << *row.physical_qubits;
    out << "," << row.logical_ratio << ",";
    if (row.physical_ratio) out << *row.physical_ratio;
    out << "," << (row.embedding_failed ? 1 : 0) << "\n";
  }
  return out.str();
}

std::vector<GapRow> gap_report(const RunConfig& cfg, const std::vector<unsigned>& r_values) {
  if (r_values.empty()) throw std::invalid_argument("gap_report: no r values");
  CompiledProblem cp = compile_problem(cfg);
  std::vector<GapRow> rows;
  for (unsigned r : r_values) {
    xbk::XbkConfig xcfg{r, cfg.lambda_tolerance, cfg.max_lambda_iterations, cfg.lambda_init};
    auto sectors = xbk::xbk_expand(cp.tapered, xcfg);
    for (auto& sec : sectors) {
      GapRow row;
      row.r = r;
      row.p = sec.p;
      if (sec.h_prime.n_vars() > polyopt::kExactSolverMaxVars) {
        row.note = "above the exact-solver cap";
        rows.push_back(row);
        continue;
      }
      // Sector objective at the configured lambda (default 0, the analyzed
      // sector of the workflow). Levels closer than a microhartree count as
      // degenerate; the normalization mirrors the coupler auto-scaling of
      // the submitted Ising model, so the gap is dimensionless.
      polyopt::Polynomial d = sec.h_prime;
      if (sec.lambda != 0.0) {
        for (const auto& [vars, c] : sec.c_norm.terms()) d.add_term(vars, -sec.lambda * c);
        d.resize(sec.h_prime.n_vars());
      }
      try {
        row.raw_gap = polyopt::spectral_gap(d, 1e-6);
        auto [quad, qmap] =
            polyopt::quadratize_spin_grouped(d, xbk::replica_groups(sec), cfg.penalty_strength);
        polyopt::IsingModel submitted = polyopt::spin_quadratic_to_ising(quad);
        row.scale = std::max(submitted.max_abs_field(), submitted.max_abs_coupling());
        row.gap = *row.raw_gap / *row.scale;
      } catch (const std::domain_error&) {
        row.note = "constant landscape";
      }
      rows.push_back(row);
    }
  }
  return rows;
}

std::string gaps_to_csv(const std::vector<GapRow>& rows) {
  std::ostringstream out;
  out << "r,p,gap,raw_gap,scale,note\n";
  out.precision(12);
  for (const auto& row : rows) {
    out << row.r << "," << row.p << ",";
    if (row.gap) out << *row.gap;
    out << ",";
    if (row.raw_gap) out << *row.raw_gap;
    out << ",";
    if (row.scale) out << *row.scale;
    out << "," << row.note << "\n";
  }
  return out.str();
}

ScheduleComparison schedule_comparison(const RunConfig& cfg, unsigned p) {
  CompiledProblem cp = compile_problem(cfg);
  xbk::XbkConfig xcfg{cfg.r, cfg.lambda_tolerance, cfg.max_lambda_iterations, cfg.lambda_init};
  auto sectors = xbk::xbk_expand(cp.tapered, xcfg);
  auto it = std::find_if(sectors.begin(), sectors.end(),
                         [p](const xbk::XbkSector& s) { return s.p == p; });
  if (it == sectors.end()) throw std::invalid_argument("no sector with the requested p");

  ScheduleComparison cmp;
  cmp.r = cfg.r;
  cmp.p = p;
  if (it->h_prime.n_vars() <= polyopt::kExactSolverMaxVars)
    cmp.exact_minimum = polyopt::minimize_exact(it->h_prime).energy;
  else
    cmp.exact_minimum = std::numeric_limits<double>::quiet_NaN();

  polyopt::Polynomial proxy = it->h_prime;
  if (cfg.coefficient_cutoff > 0) proxy.prune(cfg.coefficient_cutoff);
  auto [quad, qmap] = polyopt::quadratize_spin_grouped(proxy, xbk::replica_groups(*it),
                                                       cfg.penalty_strength);
  polyopt::IsingModel logical = polyopt::spin_quadratic_to_ising(quad);

  anneal::ScheduleSet schedules{
      anneal::make_schedule(anneal::ScheduleKind::forward, cfg.schedule_params),
      anneal::make_schedule(anneal::ScheduleKind::paused, cfg.schedule_params),
      anneal::make_schedule(anneal::ScheduleKind::reverse, cfg.schedule_params)};
  cmp.report = anneal::compare_schedules(logical, schedules, cfg.num_reads, cfg.seed,
                                         cfg.svmc_params);
  return cmp;
}

std::string schedule_comparison_to_csv(const ScheduleComparison& cmp) {
  std::ostringstream out;
  out.precision(12);
  out << "method,read,energy,init_energy,improved\n";
  const auto& methods = cmp.report.methods;
  for (std::size_t m = 0; m < methods.size(); ++m) {
    const auto& set = methods[m].samples;
    for (std::size_t i = 0; i < set.samples.size(); ++i) {
      out << methods[m].method << "," << i << "," << set.samples[i].energy << ",";
      if (m >= 2) {  // reverse methods pair with their origin sets
        double init = methods[m - 2].samples.samples[i].energy;
        out << init << "," << (set.samples[i].energy < init - 1e-12 ? 1 : 0);
      } else {
        out << ",";
      }
      out << "\n";
    }
  }
  return out.str();
}

}  // namespace spinchem::pipeline
