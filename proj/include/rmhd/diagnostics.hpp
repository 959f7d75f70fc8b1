#pragma once

#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rmhd/fast_wave.hpp"
#include "rmhd/mhd_solver.hpp"
#include "rmhd/model.hpp"

namespace rmhd {

/// One sample of a penalized-system trajectory. Column order of diagnostics.csv
/// follows the declaration order below.
struct DiagnosticsRecord {
  double t = 0.0;
  double E1 = 0.0;  // energy with Π₁
  double E2 = 0.0;  // energy with Π₂ about the conserved mean density
  double E3 = 0.0;  // energy with Π₃ (reference density 1)
  double D = 0.0;   // instantaneous dissipation
  double D_int = 0.0;  // ∫₀ᵗ D
  double defect1 = 0.0;  // (E1 + D_int − E1(0)) / |E1(0)|
  double defect2 = 0.0;  // (E2 + D_int − E2(0)) / E2(0)
  double div_B = 0.0;      // ‖∇ε·B‖₂
  double div_B_rel = 0.0;  // ‖∇ε·B‖₂ / ‖B‖_{H¹}
  double div_perp_v = 0.0;  // ‖∇⊥·v⊥‖₂
  double phi_L2 = 0.0;   // ‖bϱ + B∥‖₂
  double phi_Hm1 = 0.0;  // ‖bϱ + B∥‖_{H⁻¹}
  double P_v_norm = 0.0;  // ‖P⊥v⊥‖₂
  double Q_v_norm = 0.0;  // ‖Q⊥v⊥‖₂
  double rho_dev_Lgamma = 0.0;  // ‖ρ − 1‖_{L^γ}
  double rho_dev_L2 = 0.0;      // ‖ρ − 1‖₂
  double filtered_var_Hm1 = 0.0;  // ‖𝒰(tᵢ) − 𝒰(tᵢ₋₁)‖_{H⁻¹}/Δt, 0 on the first row
  double mass = 0.0;    // mean of ρ
  double B_mean = 0.0;  // |mean of B|
  double phi_perp_Hm1 = 0.0;  // phi_Hm1 restricted to k⊥ ≠ 0
};

const std::vector<std::string>& diagnostics_columns();
std::vector<double> diagnostics_values(const DiagnosticsRecord& r);

/// Instantaneous part of a record (t, energies, D, norms). D_int, defects and
/// filtered_var_Hm1 are left for the caller, which owns the time history.
DiagnosticsRecord measure(const State& s, const PhysicalParams& p, double rho_bar);

/// Row-at-a-time CSV writer with a trailing "# complete" / "# incomplete: ..." line.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& columns);
  void row(const std::vector<double>& values);
  void finish(bool complete, const std::string& reason = {});

 private:
  std::ofstream out_;
  std::size_t ncols_;
};

/// Sampling plan shared by the penalized and limit runs: sample times are
/// t0 + k·snapshot_every (the last interval may be shorter) and every interval
/// is split into an even number of equal steps so ∫D uses composite Simpson.
int steps_for_interval(double length, double h_target);
std::vector<double> sample_times(double t0, double t_end, double every);

struct RunOptions {
  std::optional<std::filesystem::path> out_dir;  // diagnostics.csv + snap_<t>.bin
  bool write_snapshots = true;
  /// Called at every sample after the record is complete.
  std::function<void(const State&, const DiagnosticsRecord&)> on_sample;
};

struct RunResult {
  std::vector<DiagnosticsRecord> records;
  State final_state;
  std::size_t steps = 0;
};

/// Integrate to cfg.t_end, sampling every cfg.snapshot_every. On a step error
/// the CSV is flushed, marked incomplete, and the error is rethrown.
RunResult run_mhd(const SolverConfig& cfg, const PhysicalParams& p, const State& init,
                  const RunOptions& opt = {});

std::string snapshot_name(double t);

}  // namespace rmhd
