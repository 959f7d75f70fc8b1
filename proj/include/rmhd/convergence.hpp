#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rmhd/config.hpp"
#include "rmhd/fast_wave.hpp"

namespace rmhd {

struct SweepPlan {
  std::vector<double> eps_list;  // strictly decreasing
  RunConfig base;                // grid/params/init/solver shared by every member
  /// Concurrent members; 0 means one per hardware thread.
  unsigned max_parallel = 0;

  void validate() const;
};

/// Per-ε summary. sweep.csv carries eps, rho_dev_sup, vperp_err_L2, phi_Hm1_sup,
/// Qv_avg, wallclock_s, then rho_dev_L2_sup, filtered_var_max, phi_perp_Hm1_sup, status.
struct SweepRow {
  double eps = 0.0;
  double rho_dev_sup = 0.0;     // sup_t ‖ρ − 1‖_{L^γ}
  double vperp_err_L2 = 0.0;    // ‖P⊥v⊥^ε − v⊥^lim‖ in L²([0,T]×T³)
  double phi_Hm1_sup = 0.0;     // sup_t ‖bϱ + B∥‖_{H⁻¹}
  double Qv_avg = 0.0;          // (1/T)∫ ‖Q⊥v⊥‖₂ dt
  double wallclock_s = 0.0;
  double rho_dev_L2_sup = 0.0;  // sup_t ‖ρ − 1‖₂
  double filtered_var_max = 0.0;
  double phi_perp_Hm1_sup = 0.0;  // phi_Hm1_sup without the k⊥ = 0 column
  bool ok = true;
  std::string error;
  // not written to CSV:
  double reference_vperp_final = 0.0;  // ‖v⊥^lim(T)‖₂ of this member's limit reference
  double div_B_rel_max = 0.0;          // sup_t ‖∇ε·B‖₂/‖B‖_{H¹}, penalized run
  double div_perp_B_rel_max = 0.0;     // sup_t ‖∇⊥·B⊥‖₂/‖B⊥‖_{H¹}, limit run
  double energy_defect_max = 0.0;      // sup_t defect2, penalized run
};

struct OrderFit {
  std::string quantity;
  double order = 0.0;  // slope of log y against log ε
  double lo = 0.0;     // 95% band
  double hi = 0.0;
  int points = 0;
};

/// Least-squares slope of log y on log x with a Student-t 95% band. Needs ≥ 2
/// positive points.
OrderFit fit_order(const std::string& quantity, const std::vector<double>& x,
                   const std::vector<double>& y);

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<OrderFit> orders;
};

/// Runs one penalized + limit pair per ε (concurrently) and fits orders over
/// the successful rows. Writes sweep.csv and orders.csv when out_dir is set.
SweepResult eps_sweep(const SweepPlan& plan,
                      const std::optional<std::filesystem::path>& out_dir = std::nullopt);

/// One sweep member (exposed for tests and the CLI).
SweepRow run_sweep_member(const RunConfig& base, double eps);

struct FilteredReport {
  std::vector<double> times;
  std::vector<double> rates;  // ‖𝒰(tᵢ₊₁) − 𝒰(tᵢ)‖_{H⁻¹}/Δt
  std::vector<double> raw_rates;  // same for the unfiltered U^ε
  double max_rate = 0.0;
  double max_raw_rate = 0.0;
};

/// Needs ≥ 10 snapshots in increasing time order.
FilteredReport compare_filtered(const std::vector<State>& trajectory, const PhysicalParams& p,
                                bool use_limit_c = false);

void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepRow>& rows);
void write_orders_csv(const std::filesystem::path& path, const std::vector<OrderFit>& fits);

}  // namespace rmhd
