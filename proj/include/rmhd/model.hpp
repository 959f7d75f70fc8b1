#pragma once

#include <cstdint>
#include <string>

#include "rmhd/grid.hpp"
#include "rmhd/snapshot.hpp"
#include "rmhd/spectral.hpp"

namespace rmhd {

struct PhysicalParams {
  double a = 1.0;
  double gamma = 2.0;
  double eps = 0.1;
  double mu_perp = 0.0;
  double mu_par = 0.0;
  double lambda_bulk = 0.0;
  double eta_perp = 0.0;
  double eta_par = 0.0;

  /// a > 0, gamma > 1, eps > 0, dissipation coefficients >= 0 (zero allowed for
  /// ideal runs).
  void validate() const;

  double b() const { return a * gamma; }
  double c_fast() const { return 1.0 + b(); }
  /// Weight of B∥ in the limit system, 1 + 1/b.
  double c_par() const { return 1.0 + 1.0 / b(); }
  bool dissipative() const {
    return mu_perp > 0 || mu_par > 0 || lambda_bulk > 0 || eta_perp > 0 || eta_par > 0;
  }
};

struct State {
  ScalarField rho;
  VectorField v;
  VectorField B;
  double t = 0.0;

  const GridSpec& grid() const { return rho.grid(); }
};

/// Zero velocity and field, unit density.
State make_rest_state(const GridSpec& g);

enum class InitKind { prepared, unprepared };
InitKind init_kind_from_name(const std::string& name);

struct InitSpec {
  InitKind kind = InitKind::prepared;
  std::uint64_t seed = 1;
  double spectrum_slope = -2.0;
  /// RMS of each random component before constraints are imposed.
  double amplitude = 0.1;
  /// Largest |k| carrying energy; 0 selects min(N)/4.
  int kmax = 0;
};

// ---- pressure law and energy functionals ---------------------------------

ScalarField pressure(const ScalarField& rho, const PhysicalParams& p);

enum class PiVariant { pi1, pi2, pi3 };

/// Pointwise Π density.
double pi_density(double rho, PiVariant variant, double rho_bar, const PhysicalParams& p);
/// ∫ Π(ρ) dx by collocation quadrature.
double pi_functional(const ScalarField& rho, PiVariant variant, double rho_bar,
                     const PhysicalParams& p);

/// ∫ ½ρ|v|² + ½|B|² + Π(ρ).
double energy(const State& s, PiVariant variant, double rho_bar, const PhysicalParams& p);
/// ∫ μ⊥|∇⊥v|² + μ∥|∂∥v|² + λ|∇ε·v|² + η⊥|∇⊥B|² + η∥|∂∥B|².
double dissipation(const State& s, const PhysicalParams& p);

// ---- convexity --------------------------------------------------------------

/// x^γ − γ x x̄^{γ−1} + (γ−1) x̄^γ.
double taylor_gap(double x, double xbar, double gamma);
/// |x−x̄|² below delta, |x−x̄|^γ above.
double orlicz_gauge(double x, double xbar, double gamma, double delta);

struct SandwichConstants {
  double kappa1 = 0.0;  // min gap/gauge
  double kappa2 = 0.0;  // max gap/gauge
};
/// Brute-force min/max of gap/gauge on a uniform x grid in [0, x_max] (x ≠ x̄).
SandwichConstants scan_sandwich(double xbar, double gamma, double delta, double x_max,
                                int samples);

struct ConvexityConstants {
  double nu1 = 0.0;  // gap >= nu1 |x−x̄|²            (gamma >= 2, all x)
  double nu2 = 0.0;  // gap >= nu2 |x−x̄|²            (x <= R)
  double nu3 = 0.0;  // gap >= nu3 |x−x̄|^gamma       (x > R)
};
/// Brute-force scan of the lower convexity bounds over x ∈ [0, x_max].
ConvexityConstants scan_convexity(double xbar, double gamma, double R, double x_max, int samples);

// ---- initial data -----------------------------------------------------------

/// Deterministic random state. ρ = 1 + ε ϱ₀ with ϱ₀ of zero mean; ∇ε·B = 0
/// exactly. Prepared data also has ∇⊥·v⊥ = 0 and bϱ₀ + B∥ = 0.
State make_initial_data(const GridSpec& g, const PhysicalParams& p, const InitSpec& spec);

/// Enforce ∇ε·B = 0 by adjusting only the irrotational transverse part of B⊥;
/// on the k⊥ = 0 column B∥ is removed instead. Leaves P⊥B⊥ and (for k⊥ ≠ 0)
/// B∥ untouched, so the constraint does not disturb the slow variables.
void constrain_B(SpectralVector& B);

/// Fields in snapshot order: rho, v1, v2, v3, B1, B2, B3 (trailer = t).
void write_state(const std::filesystem::path& path, const State& s);
State read_state(const std::filesystem::path& path);
State state_from_snapshot(const Snapshot& snap);

/// Warning text for γ outside the convergence theory's range, empty otherwise.
std::string gamma_hypothesis_warning(double gamma);

}  // namespace rmhd
