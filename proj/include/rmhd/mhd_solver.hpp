#pragma once

#include <memory>
#include <string>

#include "rmhd/model.hpp"
#include "rmhd/spectral.hpp"

namespace rmhd {

enum class Integrator { expo_rk2, imex_rk2, explicit_rk4 };
Integrator integrator_from_name(const std::string& name);
std::string integrator_name(Integrator integrator);

struct SolverConfig {
  double dt = 0.0;  // <= 0 selects the automatic step
  double t_end = 1.0;
  Integrator integrator = Integrator::expo_rk2;
  double snapshot_every = 0.1;
  bool linearized = false;
  bool dealias = true;
  /// Filter with the limit wave constant 1 + b instead of the snapshot's c^ε.
  bool limit_wave_constant = false;

  void validate() const;
};

/// Time derivative of (ρ, v, B).
struct StateRate {
  ScalarField rho;
  VectorField v;
  VectorField B;
};

/// Time derivative of the conserved variables (ρ, m = ρv, B), spectral.
struct ConservedRate {
  SpectralField rho;
  SpectralVector m;
  SpectralVector B;
};

/// Full right-hand side in conserved form. Products are formed from the
/// state's (ρ, v, B) directly. Throws BlowUpError if ρ <= 0 anywhere.
ConservedRate rhs_conserved(const State& s, const PhysicalParams& p, bool linearized = false,
                            bool dealias = true);

/// Right-hand side for (ρ, v, B) with ∂t v = (∂t(ρv) − v ∂t ρ)/ρ.
StateRate rhs(const State& s, const PhysicalParams& p, bool linearized = false,
              bool dealias = true);

/// Largest |k⊥| and |k∥| carried by the solver (after the 2/3 rule when enabled).
double kmax_perp(const GridSpec& g, bool dealias);
double kmax_par(const GridSpec& g, bool dealias);

/// Step size bound: ε-free advective bound for the split/IMEX schemes, fast-wave
/// CFL for explicit RK4.
double stable_dt(const State& s, const SolverConfig& cfg, const PhysicalParams& p);

/// Stateful integrator holding spectral conserved variables.
class MhdSolver {
 public:
  MhdSolver(const PhysicalParams& p, const SolverConfig& cfg, const State& init);
  ~MhdSolver();
  MhdSolver(MhdSolver&&) noexcept;
  MhdSolver& operator=(MhdSolver&&) noexcept;

  /// Advance by h. Throws BlowUpError on loss of positivity.
  void step(double h);

  State state() const;
  double time() const;
  double rho_bar() const;
  /// k = 0 coefficient of ρ (exactly conserved by construction).
  double mass_mean() const;
  /// |mean B| from the k = 0 coefficients.
  double B_mean_norm() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// One step of size cfg.dt (or the automatic step if cfg.dt <= 0).
State step(const State& s, const SolverConfig& cfg, const PhysicalParams& p);

}  // namespace rmhd
