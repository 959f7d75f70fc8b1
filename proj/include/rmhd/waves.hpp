#pragma once

#include <array>

#include <Eigen/Dense>

namespace rmhd {

/// Signal speeds of the three ideal-MHD wave families; ±these are the eigenvalues.
struct WaveSpeeds {
  double c_fast = 0.0;
  double c_alfven = 0.0;
  double c_slow = 0.0;
};

/// Fast/Alfvén/slow speeds for sound speed Vs, Alfvén speed VA and propagation
/// angle θ to the field.
WaveSpeeds mhd_wave_speeds(double Vs, double VA, double cos_theta);

/// Linearized transverse symbol in U = (ϱ, v₁, v₂, B∥) for direction n⊥:
///
///   ∂t ϱ  + ∇⊥·v⊥              = 0
///   ∂t v⊥ + ∇⊥(b ϱ + B∥)       = 0
///   ∂t B∥ + ∇⊥·v⊥              = 0
///
/// (fast time, ρ̄ = 1). A plane wave e^{i(n·x − λt)} needs λU = 𝒜U.
Eigen::Matrix4d singular_symbol(const std::array<double, 2>& n_perp, double b);

/// Closed-form spectrum {−√(b+1), 0, 0, √(b+1)}, ascending.
std::array<double, 4> singular_symbol_eigs(const std::array<double, 2>& n_perp, double b);

/// Eigenvalues of the assembled matrix by numerical decomposition, ascending
/// real parts.
std::array<double, 4> singular_symbol_eigs_numeric(const std::array<double, 2>& n_perp, double b);

}  // namespace rmhd
