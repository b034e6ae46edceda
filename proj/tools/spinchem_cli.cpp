// Command-line front end for the compile-and-solve pipeline: molecular term
// lists in, qubit encodings, tapering, replica expansion, quadratisation,
// embedding, annealing-style solvers, and figure-style CSV reports out.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "spinchem/pipeline.hpp"

using namespace spinchem;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void spill(const std::string& path, const std::string& text) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

std::vector<unsigned> parse_r_values(const std::string& csv) {
  std::vector<unsigned> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stoul(tok));
  return out;
}

pipeline::RunConfig load_config(const std::string& config_path, std::uint64_t* seed_override,
                                const std::string& out_dir_override) {
  pipeline::RunConfig cfg = pipeline::config_from_file(config_path);
  if (seed_override) cfg.seed = *seed_override;
  if (!out_dir_override.empty()) cfg.out_dir = out_dir_override;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spinchem: molecular Hamiltonians to Ising models and back"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::optional<std::uint64_t> seed;
  app.add_option("--config", config_path, "JSON run configuration")->configurable(false);
  app.add_option("--seed", seed, "override the configured seed");
  app.add_option("--out-dir", out_dir, "override the configured output directory");

  // ---- encode ----
  auto* encode = app.add_subcommand("encode", "fermion term list to qubit operator");
  std::string enc_input, enc_encoding = "parity", enc_out;
  encode->add_option("--input", enc_input)->required();
  encode->add_option("--encoding", enc_encoding, "jordan_wigner | parity");
  encode->add_option("--out", enc_out, "pauli text output path");

  // ---- taper ----
  auto* taper_cmd = app.add_subcommand("taper", "remove symmetry qubits");
  std::string tp_input, tp_encoding = "parity", tp_policy = "reference", tp_out, tp_report;
  taper_cmd->add_option("--input", tp_input)->required();
  taper_cmd->add_option("--encoding", tp_encoding);
  taper_cmd->add_option("--sector-policy", tp_policy, "reference | scan");
  taper_cmd->add_option("--out", tp_out, "tapered pauli text output");
  taper_cmd->add_option("--report", tp_report, "tapering report JSON");

  // ---- xbk ----
  auto* xbk_cmd = app.add_subcommand("xbk", "replica expansion into sector dumps");
  std::string xb_input, xb_encoding = "parity";
  unsigned xb_r = 1;
  std::string xb_dir = ".";
  xbk_cmd->add_option("--input", xb_input)->required();
  xbk_cmd->add_option("--encoding", xb_encoding);
  xbk_cmd->add_option("--r", xb_r)->required();
  xbk_cmd->add_option("--dump-dir", xb_dir, "directory for sector_p*.json");

  // ---- quadratize ----
  auto* quad = app.add_subcommand("quadratize", "sector dump to QUBO and Ising files");
  std::string qd_sector, qd_qubo, qd_ising, qd_map;
  double qd_lambda = 0.0;
  quad->add_option("--sector", qd_sector, "sector dump JSON")->required();
  quad->add_option("--lambda", qd_lambda, "shift D = H' - lambda C before reduction");
  quad->add_option("--qubo", qd_qubo, "QUBO file output");
  quad->add_option("--ising", qd_ising, "Ising JSON output");
  quad->add_option("--map", qd_map, "quadratisation map JSON output");

  // ---- embed ----
  auto* embed = app.add_subcommand("embed", "minor-embed an Ising model");
  std::string em_ising, em_family = "zephyr", em_out, em_stats, em_chain_energy;
  unsigned em_size = 8, em_attempts = 20;
  bool em_sample = false;
  embed->add_option("--ising", em_ising, "logical Ising JSON")->required();
  embed->add_option("--family", em_family, "chimera | pegasus | zephyr");
  embed->add_option("--size", em_size);
  embed->add_option("--attempts", em_attempts, "best-of-N attempts");
  embed->add_option("--out", em_out, "embedding JSON output");
  embed->add_option("--attempts-csv", em_stats, "per-attempt chain statistics CSV");
  embed->add_flag("--with-sampling", em_sample,
                  "sample each attempt's embedded model for the chain/energy table");
  embed->add_option("--chain-energy-csv", em_chain_energy,
                    "per-attempt (max chain, best energy) CSV; implies --with-sampling");

  // ---- solve ----
  auto* solve = app.add_subcommand("solve", "sample an Ising model");
  std::string sv_ising, sv_backend = "sa", sv_out, sv_runs_csv, sv_schedule = "forward";
  unsigned sv_reads = 100, sv_sweeps = 4000, sv_runs = 1;
  double sv_bmin = 0.05, sv_bmax = 1e5, sv_beta = 10.0, sv_spu = 1.0;
  solve->add_option("--ising", sv_ising)->required();
  solve->add_option("--backend", sv_backend, "sa | svmc");
  solve->add_option("--num-reads", sv_reads);
  solve->add_option("--sweeps", sv_sweeps, "sa sweeps");
  solve->add_option("--beta-min", sv_bmin);
  solve->add_option("--beta-max", sv_bmax);
  solve->add_option("--beta", sv_beta, "svmc temperature");
  solve->add_option("--sweeps-per-us", sv_spu);
  solve->add_option("--schedule", sv_schedule, "forward | paused");
  solve->add_option("--runs", sv_runs, "independent seeded runs (distribution table)");
  solve->add_option("--out", sv_out, "samples JSONL output");
  solve->add_option("--runs-csv", sv_runs_csv, "per-run best energy CSV");

  // ---- pipeline / scaling / gaps / schedules ----
  auto* pipe = app.add_subcommand("pipeline", "full workflow from a config");
  auto* scaling = app.add_subcommand("scaling", "qubit-ledger table over r values");
  std::string sc_r = "1,2,3", sc_csv;
  scaling->add_option("--r-values", sc_r);
  scaling->add_option("--csv", sc_csv, "scaling table CSV output");
  auto* gaps = app.add_subcommand("gaps", "sector spectral gaps over r values");
  std::string gp_r = "1,2,3", gp_csv;
  gaps->add_option("--r-values", gp_r);
  gaps->add_option("--csv", gp_csv, "gap table CSV output");
  auto* sched = app.add_subcommand("schedules", "four-method annealing comparison");
  unsigned sch_p = 0;
  std::string sch_prefix;
  sched->add_option("--p", sch_p, "sector index");
  sched->add_option("--csv-prefix", sch_prefix, "prefix for methods/summary/winners CSVs");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*encode) {
      auto f = fermion::parse_fermion_file(enc_input);
      auto h = fermion::encode(f, fermion::encoding_from_string(enc_encoding));
      std::ostringstream text;
      pauli::write_pauli_text(text, h);
      if (!enc_out.empty()) spill(enc_out, text.str());
      std::cout << "encoded " << f.n_modes << " modes -> " << h.n_qubits() << " qubits, "
                << h.size() << " terms\n";
      return 0;
    }

    if (*taper_cmd) {
      auto f = fermion::parse_fermion_file(tp_input);
      auto enc = fermion::encoding_from_string(tp_encoding);
      auto h = fermion::encode(f, enc);
      auto syms = taper::find_symmetries(h);
      std::vector<int> assign;
      if (tp_policy == "scan") {
        assign = taper::scan_sectors(h, syms).best_assignments;
      } else {
        try {
          assign = taper::select_sector(syms, fermion::hf_state_in_encoding(f, enc));
        } catch (const taper::SectorAmbiguous&) {
          assign = taper::scan_sectors(h, syms).best_assignments;
        }
      }
      auto tapered = taper::taper(h, syms, assign);
      if (!tp_out.empty()) {
        std::ostringstream text;
        pauli::write_pauli_text(text, tapered);
        spill(tp_out, text.str());
      }
      nlohmann::json rep;
      rep["qubits_before"] = h.n_qubits();
      rep["qubits_after"] = tapered.n_qubits();
      rep["assignments"] = assign;
      nlohmann::json gens = nlohmann::json::array();
      for (const auto& g : syms.generators) gens.push_back(g.to_string());
      rep["generators"] = gens;
      if (!tp_report.empty()) spill(tp_report, rep.dump(2) + "\n");
      std::cout << rep.dump(2) << "\n";
      return 0;
    }

    if (*xbk_cmd) {
      auto f = fermion::parse_fermion_file(xb_input);
      auto enc = fermion::encoding_from_string(xb_encoding);
      auto h = fermion::encode(f, enc);
      auto syms = taper::find_symmetries(h);
      std::vector<int> assign;
      try {
        assign = taper::select_sector(syms, fermion::hf_state_in_encoding(f, enc));
      } catch (const taper::SectorAmbiguous&) {
        assign = taper::scan_sectors(h, syms).best_assignments;
      }
      auto tapered = taper::taper(h, syms, assign);
      auto sectors = xbk::xbk_expand(tapered, {.r = xb_r});
      std::filesystem::create_directories(xb_dir);
      for (const auto& sec : sectors)
        spill(xb_dir + "/sector_p" + std::to_string(sec.p) + ".json",
              xbk::sector_to_json(sec) + "\n");
      std::cout << "wrote " << sectors.size() << " sector dumps (m = " << tapered.n_qubits()
                << ", r = " << xb_r << ") to " << xb_dir << "\n";
      return 0;
    }

    if (*quad) {
      auto sec = xbk::sector_from_json(slurp(qd_sector));
      polyopt::Polynomial d = sec.h_prime;
      if (qd_lambda != 0.0)
        for (const auto& [vars, c] : sec.c_norm.terms()) d.add_term(vars, -qd_lambda * c);
      d.resize(sec.h_prime.n_vars());
      auto [quad, qmap] = polyopt::quadratize_spin_grouped(d, xbk::replica_groups(sec));
      polyopt::IsingModel ising = polyopt::spin_quadratic_to_ising(quad);
      if (!qd_qubo.empty()) {
        std::ostringstream text;
        polyopt::write_qubo_file(text, polyopt::ising_to_qubo(ising));
        spill(qd_qubo, text.str());
      }
      if (!qd_ising.empty()) spill(qd_ising, polyopt::ising_to_json(ising) + "\n");
      if (!qd_map.empty()) {
        nlohmann::json mj = nlohmann::json::array();
        for (const auto& a : qmap.ancillas)
          mj.push_back({{"ancilla", a.index}, {"first", a.first}, {"second", a.second},
                        {"penalty", a.penalty}});
        spill(qd_map, mj.dump(2) + "\n");
      }
      std::cout << "quadratized " << sec.h_prime.n_vars() << " -> " << quad.n_vars()
                << " variables (" << qmap.ancillas.size() << " product gadgets)\n";
      return 0;
    }

    if (*embed) {
      auto logical = polyopt::ising_from_json(slurp(em_ising));
      auto hw = hardware::generate_graph(hardware::family_from_string(em_family), em_size);
      std::uint64_t base_seed = seed.value_or(1);
      std::optional<hardware::Embedding> best;
      std::ostringstream stats_csv, energy_csv;
      stats_csv << "attempt,max_chain,mean_chain,physical_qubits,reliability_flag\n";
      energy_csv << "attempt,max_chain,best_energy\n";
      for (unsigned a = 0; a < em_attempts; ++a) {
        auto e = hardware::find_embedding(logical, hw, base_seed + a);
        if (!e) continue;
        auto cs = hardware::chain_stats(*e);
        stats_csv << a << "," << cs.max_length << "," << cs.mean_length << ","
                  << cs.physical_qubit_count << "," << (cs.reliability_flag ? 1 : 0) << "\n";
        if (em_sample || !em_chain_energy.empty()) {
          auto physical = hardware::embed_ising(logical, *e, hw);
          auto set = anneal::svmc_sample(physical, anneal::make_schedule(anneal::ScheduleKind::forward),
                                         25, base_seed + 1000 + a);
          std::vector<std::vector<int>> phys;
          for (const auto& s : set.samples) phys.push_back(s.assignment);
          auto [logical_samples, breaks] = hardware::unembed(phys, *e, logical);
          double best_e = std::numeric_limits<double>::infinity();
          for (const auto& ls : logical_samples) best_e = std::min(best_e, logical.energy(ls));
          energy_csv << a << "," << cs.max_length << "," << best_e << "\n";
        }
        if (!best || std::make_pair(e->max_chain_length(), e->physical_qubit_count()) <
                         std::make_pair(best->max_chain_length(), best->physical_qubit_count()))
          best = e;
      }
      if (!best) throw pipeline::StageError("embed", "no embedding found");
      if (!em_out.empty()) spill(em_out, hardware::embedding_to_json(*best, hw, base_seed) + "\n");
      if (!em_stats.empty()) spill(em_stats, stats_csv.str());
      if (!em_chain_energy.empty()) spill(em_chain_energy, energy_csv.str());
      auto cs = hardware::chain_stats(*best);
      std::cout << "best embedding: max chain " << cs.max_length << ", "
                << cs.physical_qubit_count << " physical qubits, overhead "
                << cs.overhead_ratio << (cs.reliability_flag ? " [UNRELIABLE CHAINS]" : "")
                << "\n";
      return 0;
    }

    if (*solve) {
      auto model = polyopt::ising_from_json(slurp(sv_ising));
      std::uint64_t base_seed = seed.value_or(1);
      std::ostringstream runs_csv;
      runs_csv << "run,best_energy,median_energy\n";
      runs_csv.precision(12);
      std::optional<anneal::SampleSet> last;
      for (unsigned run = 0; run < sv_runs; ++run) {
        anneal::SampleSet set;
        if (sv_backend == "sa") {
          set = anneal::sa_sample(model, sv_sweeps, sv_bmin, sv_bmax, sv_reads,
                                  base_seed + run);
        } else {
          anneal::SvmcParams params;
          params.beta = sv_beta;
          params.sweeps_per_us = sv_spu;
          set = anneal::svmc_sample(model,
                                    anneal::make_schedule(
                                        anneal::schedule_kind_from_string(sv_schedule)),
                                    sv_reads, base_seed + run, params);
        }
        runs_csv << run << "," << set.best_energy() << "," << set.median_energy() << "\n";
        last = std::move(set);
      }
      if (!sv_out.empty() && last) {
        std::ostringstream text;
        anneal::write_sampleset_jsonl(text, *last);
        spill(sv_out, text.str());
      }
      if (!sv_runs_csv.empty()) spill(sv_runs_csv, runs_csv.str());
      std::cout << "best energy " << last->best_energy() << " over " << sv_reads
                << " reads x " << sv_runs << " runs\n";
      return 0;
    }

    if (*pipe) {
      auto cfg = load_config(config_path, seed ? &*seed : nullptr, out_dir);
      auto report = pipeline::run_pipeline(cfg);
      std::cout << pipeline::report_to_json(report) << "\n";
      return pipeline::exit_code_for(report.classification);
    }

    if (*scaling) {
      auto cfg = load_config(config_path, seed ? &*seed : nullptr, out_dir);
      auto rows = pipeline::scaling_report(cfg, parse_r_values(sc_r));
      std::string csv = pipeline::scaling_to_csv(rows);
      if (!sc_csv.empty()) spill(sc_csv, csv);
      std::cout << csv;
      return 0;
    }

    if (*gaps) {
      auto cfg = load_config(config_path, seed ? &*seed : nullptr, out_dir);
      auto rows = pipeline::gap_report(cfg, parse_r_values(gp_r));
      std::string csv = pipeline::gaps_to_csv(rows);
      if (!gp_csv.empty()) spill(gp_csv, csv);
      std::cout << csv;
      return 0;
    }

    if (*sched) {
      auto cfg = load_config(config_path, seed ? &*seed : nullptr, out_dir);
      auto cmp = pipeline::schedule_comparison(cfg, sch_p);
      if (!sch_prefix.empty()) {
        spill(sch_prefix + "_methods.csv", pipeline::schedule_comparison_to_csv(cmp));
        std::ostringstream summary;
        summary.precision(12);
        summary << "method,best_energy,median_energy,improvement_fraction\n";
        for (const auto& m : cmp.report.methods) {
          summary << m.method << "," << m.best_energy << "," << m.median_energy << ",";
          if (m.improvement_fraction) summary << *m.improvement_fraction;
          summary << "\n";
        }
        spill(sch_prefix + "_summary.csv", summary.str());
        std::ostringstream winners;
        winners << "read,winner\n";
        for (std::size_t i = 0; i < cmp.report.winner_per_run.size(); ++i)
          winners << i << "," << cmp.report.methods[cmp.report.winner_per_run[i]].method << "\n";
        spill(sch_prefix + "_winners.csv", winners.str());
      }
      std::cout << "sector r=" << cmp.r << " p=" << cmp.p << " exact minimum "
                << cmp.exact_minimum << "\n";
      for (const auto& m : cmp.report.methods) {
        std::cout << "  " << m.method << ": best " << m.best_energy << ", median "
                  << m.median_energy;
        if (m.improvement_fraction) std::cout << ", improved " << *m.improvement_fraction;
        std::cout << "\n";
      }
      return 0;
    }
  } catch (const pipeline::StageError& e) {
    std::cerr << "stage error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
