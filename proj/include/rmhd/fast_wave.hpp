#pragma once

#include <filesystem>

#include "rmhd/model.hpp"
#include "rmhd/spectral.hpp"

namespace rmhd {

/// U = (φ, Φ): φ = b^ε ϱ + B∥ and Φ = Q⊥(ρ v⊥), with wave constant c.
struct AcousticPair {
  ScalarField phi;
  PerpField Phi;
  double c = 1.0;

  const GridSpec& grid() const { return phi.grid(); }
};

/// Test hook: a nonzero phase_fault skews only the φ rotation angle, which
/// breaks the isometry. Never set in production paths.
struct GroupOptions {
  double phase_fault = 0.0;
};

/// 𝓛U = (−c ∇⊥·Φ, −∇⊥φ).
AcousticPair apply_operator_L(const AcousticPair& U);

/// S(τ)U: exact per-mode rotation at frequency √c |k⊥|; k⊥ = 0 columns fixed.
AcousticPair apply_group(const AcousticPair& U, double tau, const GroupOptions& opt = {});

/// Spectral in-place form used by the solver. Φ must already be irrotational
/// (its P⊥ part is carried along unchanged either way).
void apply_group_spectral(SpectralField& phi, SpectralField& Phi1, SpectralField& Phi2, double c,
                          double tau, const GroupOptions& opt = {});

/// ⟨U, V⟩ = ∫ φψ + c ∫ Φ·Ψ (uses U.c).
double weighted_inner(const AcousticPair& U, const AcousticPair& V);
double weighted_norm(const AcousticPair& U);

/// Unweighted Hˢ norm of the pair, √(‖φ‖²ₛ + ‖Φ₁‖²ₛ + ‖Φ₂‖²ₛ).
double sobolev_norm(const AcousticPair& U, double s);

AcousticPair operator-(const AcousticPair& a, const AcousticPair& b);

/// Background constants of a snapshot: ρ̄ = mean ρ, b^ε = b ρ̄^{γ−1}, c^ε = b^ε + 1/ρ̄.
struct FilterConstants {
  double rho_bar = 1.0;
  double b_eps = 0.0;
  double c_eps = 0.0;
};
FilterConstants filter_constants(const State& s, const PhysicalParams& p);

/// Unfiltered U^ε of a state. With use_limit_c the wave constant is 1 + b.
AcousticPair acoustic_pair(const State& s, const PhysicalParams& p, bool use_limit_c = false);

/// Filtered profile S(−t/ε) U^ε.
AcousticPair filter_state(const State& s, const PhysicalParams& p, bool use_limit_c = false);

/// Right-hand side F^ε of ∂t U^ε − (1/ε) 𝓛 U^ε = F^ε, assembled term by term.
AcousticPair source_residual(const State& s, const PhysicalParams& p, bool dealias_products = true);

/// Fields phi, Phi1, Phi2; trailer = c.
void write_pair(const std::filesystem::path& path, const AcousticPair& U);
AcousticPair read_pair(const std::filesystem::path& path);

}  // namespace rmhd
