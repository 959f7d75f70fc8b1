#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>

#include "rmhd/mhd_solver.hpp"
#include "rmhd/model.hpp"

namespace rmhd {

/// Limit-system unknowns. ∂∥ is the plain third-coordinate derivative here.
struct RmhdState {
  PerpField B_perp;
  PerpField v_perp;
  ScalarField B_par;
  ScalarField v_par;
  double t = 0.0;

  const GridSpec& grid() const { return B_par.grid(); }
};

RmhdState make_zero_rmhd(const GridSpec& g);

/// v⊥ ← P⊥v₀⊥, B⊥ ← P⊥B₀⊥, v∥ ← v₀∥, B∥ ← (B₀∥ − ϱ₀)/𝕔 with ϱ₀ = (ρ₀ − 1)/ε.
RmhdState project_limit_init(const State& s0, const PhysicalParams& p);

struct RmhdRate {
  PerpField B_perp;
  PerpField v_perp;
  ScalarField B_par;
  ScalarField v_par;
};

/// Right-hand side: P⊥ removes the pressure from the v⊥ equation; the B∥
/// equation is divided by 𝕔.
RmhdRate rmhd_rhs(const RmhdState& s, const PhysicalParams& p, bool dealias = true);

/// ∫ ½𝕔B∥² + ½v∥² + ½|B⊥|² + ½|v⊥|².
double rmhd_energy(const RmhdState& s, const PhysicalParams& p);
/// ∫ μ⊥|∇⊥v|² + μ∥|∂∥v|² + η⊥|∇⊥B|² + η∥|∂∥B|² over all four fields.
double rmhd_dissipation(const RmhdState& s, const PhysicalParams& p);

class RmhdSolver {
 public:
  RmhdSolver(const PhysicalParams& p, const SolverConfig& cfg, const RmhdState& init);
  ~RmhdSolver();
  RmhdSolver(RmhdSolver&&) noexcept;
  RmhdSolver& operator=(RmhdSolver&&) noexcept;

  void step(double h);
  RmhdState state() const;
  double time() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

RmhdState rmhd_step(const RmhdState& s, const SolverConfig& cfg, const PhysicalParams& p);

/// Automatic step: 0.5 / (kmax (‖v⊥‖∞ + ‖B⊥‖∞) + kmax∥ · max(1, 1/√𝕔)).
double rmhd_stable_dt(const RmhdState& s, const SolverConfig& cfg, const PhysicalParams& p);

struct RmhdRecord {
  double t = 0.0;
  double energy = 0.0;
  double D = 0.0;
  double D_int = 0.0;
  double defect = 0.0;  // (energy + D_int − energy(0)) / energy(0)
  double div_perp_B = 0.0;
  double div_perp_B_rel = 0.0;  // ‖∇⊥·B⊥‖₂ / ‖B⊥‖_{H¹}
  double div_perp_v = 0.0;
  double v_perp_L2 = 0.0;
  double B_par_L2 = 0.0;
};

const std::vector<std::string>& rmhd_columns();
std::vector<double> rmhd_values(const RmhdRecord& r);
RmhdRecord rmhd_measure(const RmhdState& s, const PhysicalParams& p);

struct RmhdRunOptions {
  std::optional<std::filesystem::path> out_dir;
  bool write_snapshots = true;
  std::function<void(const RmhdState&, const RmhdRecord&)> on_sample;
};

struct RmhdRunResult {
  std::vector<RmhdRecord> records;
  RmhdState final_state;
  std::size_t steps = 0;
};

RmhdRunResult rmhd_run(const SolverConfig& cfg, const PhysicalParams& p, const RmhdState& init,
                       const RmhdRunOptions& opt = {});

/// Fields B1, B2, v1, v2, B_par, v_par; trailer = t.
void write_rmhd_state(const std::filesystem::path& path, const RmhdState& s);
RmhdState read_rmhd_state(const std::filesystem::path& path);

}  // namespace rmhd
