#include "rmhd/fast_wave.hpp"

#include <cmath>
#include <vector>

#include "rmhd/kernels.hpp"

namespace rmhd {

namespace {

const Complex I(0.0, 1.0);

SpectralField spectral_product(const ScalarField& a, const ScalarField& b, bool truncate) {
  ScalarField out(a.grid());
  kernels::omp::multiply(a.values(), b.values(), out.values());
  SpectralField F = to_spectral(out);
  if (truncate) dealias_inplace(F);
  return F;
}

}  // namespace

AcousticPair apply_operator_L(const AcousticPair& U) {
  const SpectralField phi = to_spectral(U.phi);
  SpectralField div = div_perp(to_spectral(U.Phi[0]), to_spectral(U.Phi[1]));
  div *= Complex(-U.c);
  auto g = grad_perp(phi);
  g[0] *= Complex(-1.0);
  g[1] *= Complex(-1.0);
  return {to_physical(div), {to_physical(g[0]), to_physical(g[1])}, U.c};
}

void apply_group_spectral(SpectralField& phi, SpectralField& Phi1, SpectralField& Phi2, double c,
                          double tau, const GroupOptions& opt) {
  require(c > 0.0, "group needs a positive wave constant");
  const GridSpec& g = phi.grid();
  const double sc = std::sqrt(c);
  // potential m̂ = −i k̂·Φ̂ carries the irrotational part; Φ̂ = P-part + i k̂ m̂
  std::vector<Complex> m(g.modes());
  std::vector<double> omega(g.modes());
  std::vector<double> khat1(g.modes()), khat2(g.modes());
  for_each_mode(g, [&](std::size_t n, int i, int j, int, int, int, int) {
    const double k1 = derivative_wavenumber(i, g.nx), k2 = derivative_wavenumber(j, g.ny);
    const double kp = std::hypot(k1, k2);
    if (kp == 0.0) {
      omega[n] = 0.0;
      khat1[n] = khat2[n] = 0.0;
      m[n] = 0.0;
      return;
    }
    khat1[n] = k1 / kp;
    khat2[n] = k2 / kp;
    omega[n] = sc * kp;
    m[n] = -I * (khat1[n] * Phi1[n] + khat2[n] * Phi2[n]);
  });

  if (opt.phase_fault == 0.0) {
    kernels::omp::rotate_pairs(phi.coeffs(), m, omega, sc, tau);
  } else {
    for (std::size_t n = 0; n < m.size(); ++n) {
      const double th = omega[n] * tau;
      const Complex p = phi[n], q = m[n];
      phi[n] = p * std::cos(th + opt.phase_fault) + sc * q * std::sin(th + opt.phase_fault);
      m[n] = q * std::cos(th) - p * (std::sin(th) / sc);
    }
  }

  for (std::size_t n = 0; n < m.size(); ++n) {
    if (omega[n] == 0.0) continue;
    const Complex along = khat1[n] * Phi1[n] + khat2[n] * Phi2[n];
    const Complex delta = I * m[n] - along;  // new minus old component along k̂
    Phi1[n] += khat1[n] * delta;
    Phi2[n] += khat2[n] * delta;
  }
}

AcousticPair apply_group(const AcousticPair& U, double tau, const GroupOptions& opt) {
  SpectralField phi = to_spectral(U.phi), P1 = to_spectral(U.Phi[0]), P2 = to_spectral(U.Phi[1]);
  apply_group_spectral(phi, P1, P2, U.c, tau, opt);
  return {to_physical(phi), {to_physical(P1), to_physical(P2)}, U.c};
}

double weighted_inner(const AcousticPair& U, const AcousticPair& V) {
  return inner(U.phi, V.phi) + U.c * (inner(U.Phi[0], V.Phi[0]) + inner(U.Phi[1], V.Phi[1]));
}

double weighted_norm(const AcousticPair& U) { return std::sqrt(weighted_inner(U, U)); }

double sobolev_norm(const AcousticPair& U, double s) {
  const SpectralField F[3] = {to_spectral(U.phi), to_spectral(U.Phi[0]), to_spectral(U.Phi[1])};
  return sobolev_norm(std::span<const SpectralField>(F, 3), s);
}

AcousticPair operator-(const AcousticPair& a, const AcousticPair& b) {
  return {a.phi - b.phi, {a.Phi[0] - b.Phi[0], a.Phi[1] - b.Phi[1]}, a.c};
}

FilterConstants filter_constants(const State& s, const PhysicalParams& p) {
  FilterConstants k;
  k.rho_bar = s.rho.mean();
  require(k.rho_bar > 0.0, "mean density must be positive");
  k.b_eps = p.b() * std::pow(k.rho_bar, p.gamma - 1.0);
  k.c_eps = k.b_eps + 1.0 / k.rho_bar;
  return k;
}

AcousticPair acoustic_pair(const State& s, const PhysicalParams& p, bool use_limit_c) {
  const FilterConstants k = filter_constants(s, p);
  const double eps = p.eps;
  ScalarField phi(s.grid());
  for (std::size_t n = 0; n < phi.size(); ++n)
    phi[n] = k.b_eps * (s.rho[n] - k.rho_bar) / eps + s.B[2][n];
  ScalarField m1 = product(s.rho, s.v[0], false), m2 = product(s.rho, s.v[1], false);
  SpectralField M1 = to_spectral(m1), M2 = to_spectral(m2);
  project_Q_perp(M1, M2);
  return {std::move(phi), {to_physical(M1), to_physical(M2)}, use_limit_c ? p.c_fast() : k.c_eps};
}

AcousticPair filter_state(const State& s, const PhysicalParams& p, bool use_limit_c) {
  AcousticPair U = acoustic_pair(s, p, use_limit_c);
  if (s.t == 0.0) return U;
  return apply_group(U, -s.t / p.eps);
}

AcousticPair source_residual(const State& s, const PhysicalParams& p, bool dealias_products) {
  const GridSpec& g = s.grid();
  const double eps = p.eps;
  const FilterConstants k = filter_constants(s, p);
  const bool tr = dealias_products;
  auto prod = [&](const ScalarField& a, const ScalarField& b) { return spectral_product(a, b, tr); };

  const SpectralVector V = to_spectral(s.v), B = to_spectral(s.B);
  ScalarField varrho(g);
  for (std::size_t n = 0; n < varrho.size(); ++n) varrho[n] = (s.rho[n] - k.rho_bar) / eps;

  // ---- F₁ ----
  // −b^ε ∂∥(ρ v∥)
  SpectralField F1 = d_par(prod(s.rho, s.v[2]));
  F1 *= Complex(-k.b_eps);
  // + ρ̄⁻¹ ∇⊥·Q⊥(ϱ v⊥)
  {
    SpectralField a = prod(varrho, s.v[0]), b = prod(varrho, s.v[1]);
    project_Q_perp(a, b);
    SpectralField t = div_perp(a, b);
    t *= Complex(1.0 / k.rho_bar);
    F1 += t;
  }
  // − B∥ ∇ε·v
  const ScalarField divv = to_physical(div_eps(V));
  F1 -= prod(s.B[2], divv);
  // − (v·∇ε) B∥
  const SpectralVector gB3 = grad_eps(B[2]);
  for (int c = 0; c < 3; ++c) F1 -= prod(s.v[c], to_physical(gB3[c]));
  // + (B·∇ε) v∥
  const SpectralVector gv3 = grad_eps(V[2]);
  for (int c = 0; c < 3; ++c) F1 += prod(s.B[c], to_physical(gv3[c]));
  // + (η⊥Δ⊥ + η∥Δ∥) B∥
  {
    SpectralField a = lap_perp(B[2]), b = lap_par(B[2]);
    a *= Complex(p.eta_perp);
    b *= Complex(p.eta_par);
    F1 += a;
    F1 += b;
  }

  // ---- F₂ ----
  SpectralField G1(g), G2(g);
  // −Q⊥ ∇ε·(ρ v⊥ ⊗ v)
  {
    SpectralField a(g), b(g);
    for (int c = 0; c < 3; ++c) {
      const ScalarField rv = product(s.rho, s.v[c], false);
      SpectralField t1 = prod(s.v[0], rv), t2 = prod(s.v[1], rv);
      const auto d = [&](const SpectralField& f) {
        if (c == 0) return d1(f);
        if (c == 1) return d2(f);
        SpectralField r = d_par(f);
        r *= Complex(eps);
        return r;
      };
      a += d(t1);
      b += d(t2);
    }
    project_Q_perp(a, b);
    G1 -= a;
    G2 -= b;
  }
  // −(γ−1) ∇⊥ Π₂(ρ)
  {
    ScalarField pi2(g);
    for (std::size_t n = 0; n < pi2.size(); ++n)
      pi2[n] = pi_density(s.rho[n], PiVariant::pi2, k.rho_bar, p);
    SpectralField P = to_spectral(pi2);
    if (tr) dealias_inplace(P);
    auto gp = grad_perp(P);
    gp[0] *= Complex(-(p.gamma - 1.0));
    gp[1] *= Complex(-(p.gamma - 1.0));
    G1 += gp[0];
    G2 += gp[1];
  }
  // −½ ∇⊥|B|²
  {
    SpectralField b2 = prod(s.B[0], s.B[0]) + prod(s.B[1], s.B[1]) + prod(s.B[2], s.B[2]);
    auto gb = grad_perp(b2);
    gb[0] *= Complex(-0.5);
    gb[1] *= Complex(-0.5);
    G1 += gb[0];
    G2 += gb[1];
  }
  // + ∂∥ Q⊥B⊥
  {
    SpectralField a = B[0], b = B[1];
    project_Q_perp(a, b);
    G1 += d_par(a);
    G2 += d_par(b);
  }
  // + Q⊥ ∇ε·(B⊥ ⊗ B)
  {
    SpectralField a(g), b(g);
    for (int c = 0; c < 3; ++c) {
      SpectralField t1 = prod(s.B[0], s.B[c]), t2 = prod(s.B[1], s.B[c]);
      if (c == 0) {
        a += d1(t1);
        b += d1(t2);
      } else if (c == 1) {
        a += d2(t1);
        b += d2(t2);
      } else {
        t1 = d_par(t1);
        t2 = d_par(t2);
        t1 *= Complex(eps);
        t2 *= Complex(eps);
        a += t1;
        b += t2;
      }
    }
    project_Q_perp(a, b);
    G1 += a;
    G2 += b;
  }
  // + μ⊥ ∇⊥(∇⊥·v⊥)
  {
    auto gd = grad_perp(div_perp(V[0], V[1]));
    gd[0] *= Complex(p.mu_perp);
    gd[1] *= Complex(p.mu_perp);
    G1 += gd[0];
    G2 += gd[1];
  }
  // + μ∥ Δ∥ Q⊥v⊥
  {
    SpectralField a = V[0], b = V[1];
    project_Q_perp(a, b);
    a = lap_par(a);
    b = lap_par(b);
    a *= Complex(p.mu_par);
    b *= Complex(p.mu_par);
    G1 += a;
    G2 += b;
  }
  // + λ ∇⊥(∇ε·v)
  {
    auto gd = grad_perp(div_eps(V));
    gd[0] *= Complex(p.lambda_bulk);
    gd[1] *= Complex(p.lambda_bulk);
    G1 += gd[0];
    G2 += gd[1];
  }

  return {to_physical(F1), {to_physical(G1), to_physical(G2)}, k.c_eps};
}

void write_pair(const std::filesystem::path& path, const AcousticPair& U) {
  const std::vector<ScalarField> fields = {U.phi, U.Phi[0], U.Phi[1]};
  write_snapshot(path, fields, U.c);
}

AcousticPair read_pair(const std::filesystem::path& path) {
  Snapshot s = read_snapshot(path);
  require(s.fields.size() == 3, "snapshot does not hold an acoustic pair");
  return {std::move(s.fields[0]), {std::move(s.fields[1]), std::move(s.fields[2])}, s.trailer};
}

}  // namespace rmhd
