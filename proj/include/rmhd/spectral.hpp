#pragma once

#include <array>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rmhd/grid.hpp"

namespace rmhd {

// ---- transforms -----------------------------------------------------------

/// Forward transform; divides by the point count so the k = 0 coefficient is the mean.
SpectralField to_spectral(const ScalarField& f);
/// Inverse transform (no scaling).
ScalarField to_physical(const SpectralField& F);

using SpectralVector = std::array<SpectralField, 3>;
using SpectralPerp = std::array<SpectralField, 2>;

SpectralVector to_spectral(const VectorField& f);
VectorField to_physical(const SpectralVector& F);

// ---- anisotropic derivatives ----------------------------------------------
//
// Odd-order symbols use derivative_wavenumber (Nyquist -> 0). The Laplacians use
// the square of the same symbol so that div∘grad == lap holds to roundoff.

enum class DerivOp { d1, d2, d_par, grad_perp, grad_eps, div_perp, div_eps, lap_perp, lap_par };

/// Generic tagged entry point. Scalar-input ops (d1, d2, d_par, lap_*) take one
/// field, grad_perp/grad_eps return 2/3 fields, div_perp/div_eps take 2/3 fields.
std::vector<SpectralField> apply_derivative(std::span<const SpectralField> in, DerivOp op);
/// Tag from name ("d1", "grad_eps", ...); unknown name -> ContractViolation.
DerivOp deriv_op_from_name(const std::string& name);

SpectralField d1(const SpectralField& F);
SpectralField d2(const SpectralField& F);
/// Plain ∂₃ (no eps factor).
SpectralField d_par(const SpectralField& F);
SpectralField lap_perp(const SpectralField& F);
SpectralField lap_par(const SpectralField& F);
SpectralPerp grad_perp(const SpectralField& F);
/// (∂₁, ∂₂, eps ∂₃) with eps from the field's grid.
SpectralVector grad_eps(const SpectralField& F);
SpectralField div_perp(const SpectralField& F1, const SpectralField& F2);
SpectralField div_eps(const SpectralVector& F);
/// ∇ε × F.
SpectralVector curl_eps(const SpectralVector& F);

/// Symbol helpers used by per-mode code.
struct ModeSymbol {
  double k1, k2, k3;  // derivative wavenumbers (Nyquist zeroed)
  double kperp2() const { return k1 * k1 + k2 * k2; }
};

// ---- projections ----------------------------------------------------------

struct PerpSplit {
  PerpField P;  // ∇⊥·P = 0
  PerpField Q;  // ∇⊥×Q = 0
};

/// Transverse Helmholtz split of a 2-component field. Columns with k⊥ = 0 go to P.
PerpSplit leray_perp(const PerpField& v);

/// In-place spectral versions.
void project_P_perp(SpectralField& F1, SpectralField& F2);
void project_Q_perp(SpectralField& F1, SpectralField& F2);
/// Remove the component of F along (k₁, k₂, eps k₃).
void project_div_eps_free(SpectralVector& F);

// ---- norms ----------------------------------------------------------------

/// Hˢ norm with multiplier (1 + |k|²)^{s/2}, Parseval-scaled to the box volume.
double sobolev_norm(const SpectralField& F, double s);
double sobolev_norm(const ScalarField& f, double s);
/// Euclidean combination over components.
double sobolev_norm(std::span<const SpectralField> F, double s);
/// L² norm by collocation quadrature.
double l2_norm(const ScalarField& f);
double l2_norm(std::span<const ScalarField> f);
/// Lᵖ norm by collocation quadrature.
double lp_norm(const ScalarField& f, double p);
/// ∫ f g dx by quadrature.
double inner(const ScalarField& f, const ScalarField& g);
/// max |f|.
double sup_norm(const ScalarField& f);

// ---- dealiasing and products ---------------------------------------------

/// True if the mode survives the 2/3 rule (|kᵢ| <= Nᵢ/3 on every axis).
bool dealias_keeps(int k, int n);
SpectralField dealias(SpectralField F);
void dealias_inplace(SpectralField& F);

/// Pseudo-spectral product of two physical fields, optionally truncated by the 2/3 rule.
ScalarField product(const ScalarField& a, const ScalarField& b, bool truncate = true);

// ---- mollification --------------------------------------------------------

/// Radial C∞ bump exp(-1/(1-|x|²)) on the unit ball, mass one.
struct BumpKernel {
  int quadrature_points = 2000;
};

/// χ̂(ξ) of the mass-one bump at |ξ| = r (χ̂(0) = 1).
double bump_fourier(double r, const BumpKernel& kernel = {});

/// χ_η ∗ f computed as the Fourier multiplier χ̂(η k). eta must lie in (0, 1).
ScalarField mollify(const ScalarField& f, double eta, const BumpKernel& kernel = {});
SpectralField mollify(const SpectralField& F, double eta, const BumpKernel& kernel = {});

}  // namespace rmhd
