#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spinchem/anneal.hpp"
#include "spinchem/fermion.hpp"
#include "spinchem/hardware.hpp"
#include "spinchem/taper.hpp"
#include "spinchem/xbk.hpp"

namespace spinchem::pipeline {

inline constexpr double kChemicalAccuracy = 1.6e-3;   // Hartree
inline constexpr double kPartialThreshold = 10.0;     // Hartree

// A stage failure with the stage name attached for diagnostics.
struct StageError : std::runtime_error {
  explicit StageError(const std::string& stage, const std::string& what)
      : std::runtime_error(stage + ": " + what), stage_name(stage) {}
  std::string stage_name;
};

struct RunConfig {
  std::string input_path;
  fermion::Encoding encoding = fermion::Encoding::parity;

  bool tapering_enabled = true;
  std::string sector_policy = "reference";  // reference | scan

  unsigned r = 1;
  std::optional<std::vector<unsigned>> sectors;  // default: all p
  double lambda_tolerance = 1e-9;
  unsigned max_lambda_iterations = 100;
  double lambda_init = 0.0;

  std::string backend = "exact";  // exact | sa | svmc
  // uniform ancilla penalty for the sampler path (guaranteed-dominance
  // formula when unset); projected assignments are re-scored on the true
  // sector polynomials either way
  std::optional<double> penalty_strength;
  // terms below this magnitude are dropped from the sampler's proxy
  // landscape (analog coupler precision floor); exact re-scoring keeps the
  // reported energies faithful
  double coefficient_cutoff = 0.0;
  unsigned num_reads = 100;
  unsigned sa_sweeps = 4000;
  double sa_beta_min = 0.05;
  double sa_beta_max = 1e5;
  anneal::ScheduleKind svmc_schedule = anneal::ScheduleKind::forward;
  anneal::ScheduleParams schedule_params;
  anneal::SvmcParams svmc_params;

  std::string hardware_family = "none";  // none | chimera | pegasus | zephyr
  unsigned hardware_size = 8;
  unsigned embedding_attempts = 20;
  std::optional<double> chain_strength;

  std::uint64_t seed = 1;
  std::string out_dir;  // when set, run records are written here
};

RunConfig config_from_json(const std::string& text);
std::string config_to_json(const RunConfig& cfg);
RunConfig config_from_file(const std::string& path);

struct QubitLedger {
  unsigned tapered_m = 0;
  unsigned xbk_qubits = 0;
  std::optional<unsigned> logical_qubits;   // after quadratisation (p = 0 sector)
  std::optional<unsigned> physical_qubits;  // after embedding
};

struct EnergyReport {
  double energy = 0.0;
  unsigned best_p = 0;
  std::vector<unsigned> sector_ps;
  std::vector<xbk::SectorSolve> solves;
  bool all_converged = true;
  bool any_valid = false;

  std::optional<double> e_hf;
  std::optional<double> e_fci;
  std::optional<double> delta_to_hf;
  std::string classification;  // success | partial | failed | unclassified

  QubitLedger ledger;
  std::optional<hardware::ChainStats> chain_statistics;
  std::optional<double> chain_break_fraction;
};

std::string classify(double energy, std::optional<double> reference);
int exit_code_for(const std::string& classification);

EnergyReport run_pipeline(const RunConfig& cfg);
std::string report_to_json(const EnergyReport& report);

struct ScalingRow {
  unsigned r = 0;
  unsigned xbk_qubits = 0;
  unsigned logical_qubits = 0;
  std::optional<unsigned> physical_qubits;
  double logical_ratio = 0.0;  // logical / xbk
  std::optional<double> physical_ratio;
  bool embedding_failed = false;
};

std::vector<ScalingRow> scaling_report(const RunConfig& cfg, const std::vector<unsigned>& r_values);
std::string scaling_to_csv(const std::vector<ScalingRow>& rows);

struct GapRow {
  unsigned r = 0;
  unsigned p = 0;
  // dimensionless gap of the sector objective in hardware-normalized units:
  // the cleaned spectral gap divided by the largest |h|/|J| of the submitted
  // (quadratized) Ising model
  std::optional<double> gap;
  std::optional<double> raw_gap;  // Hartree-scale gap before normalization
  std::optional<double> scale;    // normalization denominator
  std::string note;               // reason when unavailable
};

std::vector<GapRow> gap_report(const RunConfig& cfg, const std::vector<unsigned>& r_values);
std::string gaps_to_csv(const std::vector<GapRow>& rows);

struct ScheduleComparison {
  unsigned r = 0;
  unsigned p = 0;
  double exact_minimum = 0.0;  // sector objective minimum (pre-quadratisation)
  anneal::ScheduleReport report;
};

// Runs the four-method comparison on one sector's logical Ising model.
ScheduleComparison schedule_comparison(const RunConfig& cfg, unsigned p);
std::string schedule_comparison_to_csv(const ScheduleComparison& cmp);

// Intermediate products of the compile chain, exposed for the CLI stages.
struct CompiledProblem {
  fermion::FermionHamiltonian fermion_h;
  pauli::OperatorSum encoded;
  taper::SymmetrySet symmetries;
  std::vector<int> sector_assignments;
  pauli::OperatorSum tapered;
};

CompiledProblem compile_problem(const RunConfig& cfg);

}  // namespace spinchem::pipeline
