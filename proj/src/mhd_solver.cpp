#include "rmhd/mhd_solver.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "rmhd/fast_wave.hpp"
#include "rmhd/kernels.hpp"

namespace rmhd {

Integrator integrator_from_name(const std::string& name) {
  if (name == "expo_rk2") return Integrator::expo_rk2;
  if (name == "imex_rk2") return Integrator::imex_rk2;
  if (name == "explicit_rk4") return Integrator::explicit_rk4;
  throw ContractViolation("unknown integrator '" + name + "'");
}

std::string integrator_name(Integrator integrator) {
  switch (integrator) {
    case Integrator::expo_rk2: return "expo_rk2";
    case Integrator::imex_rk2: return "imex_rk2";
    case Integrator::explicit_rk4: return "explicit_rk4";
  }
  return "?";
}

void SolverConfig::validate() const {
  require(std::isfinite(dt), "dt must be finite");
  require(t_end >= 0.0 && std::isfinite(t_end), "t_end must be >= 0");
  require(snapshot_every > 0.0 && std::isfinite(snapshot_every), "snapshot_every must be > 0");
}

namespace {

const Complex I(0.0, 1.0);

struct Conserved {
  SpectralField rho;
  SpectralVector m;
  SpectralVector B;

  explicit Conserved(const GridSpec& g) : rho(g), m{SpectralField(g), SpectralField(g), SpectralField(g)},
                                           B{SpectralField(g), SpectralField(g), SpectralField(g)} {}
  Conserved(SpectralField r, SpectralVector mm, SpectralVector bb)
      : rho(std::move(r)), m(std::move(mm)), B(std::move(bb)) {}

  template <class F>
  void each(F&& f) {
    f(rho);
    for (auto& c : m) f(c);
    for (auto& c : B) f(c);
  }
};

// y += a x
void axpy(Conserved& y, double a, const Conserved& x) {
  auto add = [a](SpectralField& dst, const SpectralField& src) {
    auto d = dst.coeffs();
    auto s = src.coeffs();
    for (std::size_t n = 0; n < d.size(); ++n) d[n] += a * s[n];
  };
  add(y.rho, x.rho);
  for (int c = 0; c < 3; ++c) add(y.m[c], x.m[c]), add(y.B[c], x.B[c]);
}

Conserved combine(const Conserved& u, double a, const Conserved& x) {
  Conserved out = u;
  axpy(out, a, x);
  return out;
}

// Per-mode symbols shared by every stage.
struct ModeTable {
  std::vector<double> k1, k2, k3;  // derivative wavenumbers; k3 without ε
  std::vector<char> keep;          // 2/3 rule mask
  explicit ModeTable(const GridSpec& g) {
    const std::size_t M = g.modes();
    k1.resize(M), k2.resize(M), k3.resize(M), keep.resize(M);
    for_each_mode(g, [&](std::size_t n, int i, int j, int l, int a, int b, int c) {
      k1[n] = derivative_wavenumber(i, g.nx);
      k2[n] = derivative_wavenumber(j, g.ny);
      k3[n] = derivative_wavenumber(l, g.nz);
      keep[n] = dealias_keeps(a, g.nx) && dealias_keeps(b, g.ny) && dealias_keeps(c, g.nz);
    });
  }
};

struct Background {
  double rho_bar = 1.0;
  double b_eps = 0.0;
  double c_eps = 0.0;
};

Background background(double rho_bar, const PhysicalParams& p) {
  Background bg;
  bg.rho_bar = rho_bar;
  bg.b_eps = p.b() * std::pow(rho_bar, p.gamma - 1.0);
  bg.c_eps = bg.b_eps + 1.0 / rho_bar;
  return bg;
}

// Evaluation context: everything the right-hand sides need besides the state.
struct Context {
  PhysicalParams p;
  GridSpec g;
  ModeTable modes;
  Background bg;
  bool linearized = false;
  bool dealias = true;
  double t = 0.0;

  Context(const PhysicalParams& pp, const GridSpec& gg, double rho_bar, bool lin, bool dea)
      : p(pp), g(gg), modes(gg), bg(background(rho_bar, pp)), linearized(lin), dealias(dea) {}

  void truncate(SpectralField& F) const {
    if (!dealias) return;
    for (std::size_t n = 0; n < F.size(); ++n)
      if (!modes.keep[n]) F[n] = 0.0;
  }
  SpectralField forward(const ScalarField& f) const {
    SpectralField F = to_spectral(f);
    truncate(F);
    return F;
  }
};

// ---- linear parts -----------------------------------------------------------

// Singular transverse block (advanced exactly by the group in expo_rk2).
void add_stiff(const Context& cx, const Conserved& U, Conserved& out) {
  const double eps = cx.p.eps;
  const auto& md = cx.modes;
  for (std::size_t n = 0; n < U.rho.size(); ++n) {
    const double k1 = md.k1[n], k2 = md.k2[n];
    const Complex div = I * (k1 * U.m[0][n] + k2 * U.m[1][n]);
    out.rho[n] -= div;
    const Complex pot = cx.bg.b_eps / (eps * eps) * U.rho[n] + U.B[2][n] / eps;
    out.m[0][n] -= I * k1 * pot;
    out.m[1][n] -= I * k2 * pot;
    out.B[2][n] -= div / (eps * cx.bg.rho_bar);
  }
}

// Viscous/resistive operator linearized about (ρ̄, 0, 0).
void add_linear_dissipation(const Context& cx, const Conserved& U, Conserved& out) {
  const auto& p = cx.p;
  const auto& md = cx.modes;
  const double eps = p.eps, rb = cx.bg.rho_bar;
  for (std::size_t n = 0; n < U.rho.size(); ++n) {
    const double k1 = md.k1[n], k2 = md.k2[n], k3 = md.k3[n];
    const double kp2 = k1 * k1 + k2 * k2;
    const double s = (p.mu_perp * kp2 + p.mu_par * k3 * k3) / rb;
    const double ke[3] = {k1, k2, eps * k3};
    const Complex dot = ke[0] * U.m[0][n] + ke[1] * U.m[1][n] + ke[2] * U.m[2][n];
    for (int c = 0; c < 3; ++c) out.m[c][n] -= s * U.m[c][n] + p.lambda_bulk / rb * ke[c] * dot;
    const double kb = p.eta_perp * kp2 + p.eta_par * k3 * k3;
    for (int c = 0; c < 3; ++c) out.B[c][n] -= kb * U.B[c][n];
  }
}

// Exact flow of add_linear_dissipation over time h.
void dissipation_flow(const Context& cx, Conserved& U, double h) {
  const auto& p = cx.p;
  if (!p.dissipative()) return;
  const auto& md = cx.modes;
  const double eps = p.eps, rb = cx.bg.rho_bar;
  for (std::size_t n = 0; n < U.rho.size(); ++n) {
    const double k1 = md.k1[n], k2 = md.k2[n], k3 = md.k3[n];
    const double kp2 = k1 * k1 + k2 * k2;
    const double s = (p.mu_perp * kp2 + p.mu_par * k3 * k3) / rb;
    const double ke[3] = {k1, k2, eps * k3};
    const double ke2 = ke[0] * ke[0] + ke[1] * ke[1] + ke[2] * ke[2];
    const double fs = std::exp(-h * s);
    if (ke2 > 0.0) {
      // e^{-h(sI + λ/ρ̄ k kᵀ)} = e^{-hs}[I + (e^{-hλ|k|²/ρ̄} − 1) k̂k̂ᵀ]
      const double fl = std::expm1(-h * p.lambda_bulk * ke2 / rb);
      const Complex dot = (ke[0] * U.m[0][n] + ke[1] * U.m[1][n] + ke[2] * U.m[2][n]) / ke2;
      for (int c = 0; c < 3; ++c) U.m[c][n] = fs * (U.m[c][n] + fl * ke[c] * dot);
    }
    const double fb = std::exp(-h * (p.eta_perp * kp2 + p.eta_par * k3 * k3));
    for (int c = 0; c < 3; ++c) U.B[c][n] *= fb;
  }
}

// Exact flow of add_stiff over time h, through the acoustic group.
void stiff_flow(const Context& cx, Conserved& U, double h) {
  const double eps = cx.p.eps, rb = cx.bg.rho_bar, be = cx.bg.b_eps, ce = cx.bg.c_eps;
  const GridSpec& g = cx.g;
  SpectralField phi(g), psi(g), Phi1 = U.m[0], Phi2 = U.m[1];
  project_Q_perp(Phi1, Phi2);
  for (std::size_t n = 0; n < phi.size(); ++n) {
    const Complex vr = U.rho[n] / eps;
    phi[n] = be * vr + U.B[2][n];
    psi[n] = U.B[2][n] - vr / rb;  // invariant of the stiff block
  }
  SpectralField Q1 = Phi1, Q2 = Phi2;
  apply_group_spectral(phi, Phi1, Phi2, ce, h / eps);
  const auto& md = cx.modes;
  for (std::size_t n = 0; n < phi.size(); ++n) {
    if (md.k1[n] == 0.0 && md.k2[n] == 0.0) continue;
    const Complex vr = (phi[n] - psi[n]) / ce;
    U.rho[n] = eps * vr;
    U.B[2][n] = psi[n] + vr / rb;
    U.m[0][n] += Phi1[n] - Q1[n];
    U.m[1][n] += Phi2[n] - Q2[n];
  }
}

// ---- non-stiff remainder ------------------------------------------------------

Conserved nonstiff_linearized(const Context& cx, const Conserved& U) {
  Conserved out(cx.g);
  const double eps = cx.p.eps, rb = cx.bg.rho_bar;
  const auto& md = cx.modes;
  for (std::size_t n = 0; n < U.rho.size(); ++n) {
    const double k3 = md.k3[n];
    out.rho[n] = -I * eps * k3 * U.m[2][n];
    out.m[0][n] = I * k3 * U.B[0][n];
    out.m[1][n] = I * k3 * U.B[1][n];
    out.m[2][n] = -I * k3 * (cx.bg.b_eps / eps) * U.rho[n];
    out.B[0][n] = I * k3 * U.m[0][n] / rb;
    out.B[1][n] = I * k3 * U.m[1][n] / rb;
  }
  return out;
}

Conserved nonstiff_nonlinear(const Context& cx, const Conserved& U) {
  const GridSpec& g = cx.g;
  const auto& p = cx.p;
  const auto& md = cx.modes;
  const double eps = p.eps, rb = cx.bg.rho_bar;
  const std::size_t N = g.points();

  const ScalarField rho = to_physical(U.rho);
  for (double r : rho.values())
    if (!(r > 0.0) || !std::isfinite(r)) throw BlowUpError("density lost positivity", cx.t);
  const VectorField m = to_physical(U.m);
  const VectorField B = to_physical(U.B);
  VectorField v = make_vector_field(g);
  for (int c = 0; c < 3; ++c)
    for (std::size_t n = 0; n < N; ++n) v[c][n] = m[c][n] / rho[n];

  Conserved out(g);
  const double ke3 = eps;  // ∇ε third-slot factor

  // parallel mass flux
  for (std::size_t n = 0; n < out.rho.size(); ++n) out.rho[n] = -I * ke3 * md.k3[n] * U.m[2][n];

  // −∇ε·(m ⊗ v)
  ScalarField work(g);
  for (int i = 0; i < 3; ++i) {
    for (int j = i; j < 3; ++j) {
      kernels::omp::multiply(m[i].values(), v[j].values(), work.values());
      const SpectralField T = cx.forward(work);
      const double kj[3] = {1, 1, ke3};
      for (std::size_t n = 0; n < T.size(); ++n) {
        const double kk[3] = {md.k1[n], md.k2[n], md.k3[n]};
        out.m[i][n] -= I * kj[j] * kk[j] * T[n];
        if (i != j) out.m[j][n] -= I * kj[i] * kk[i] * T[n];
      }
    }
  }

  // pressure beyond its linear part: transverse uses the Taylor gap, parallel the full law
  {
    ScalarField q(g), pr(g);
    for (std::size_t n = 0; n < N; ++n) {
      q[n] = p.a * taylor_gap(rho[n], rb, p.gamma);
      pr[n] = p.a * std::pow(rho[n], p.gamma);
    }
    const SpectralField Q = cx.forward(q), P = cx.forward(pr);
    for (std::size_t n = 0; n < Q.size(); ++n) {
      out.m[0][n] -= I * md.k1[n] * Q[n] / (eps * eps);
      out.m[1][n] -= I * md.k2[n] * Q[n] / (eps * eps);
      out.m[2][n] -= I * md.k3[n] * P[n] / eps;
    }
  }

  // Lorentz force: ∂∥B⊥ − B × (∇ε × B)
  {
    const VectorField J = to_physical(curl_eps(U.B));
    ScalarField f(g);
    for (int c = 0; c < 3; ++c) {
      const int a = (c + 1) % 3, b = (c + 2) % 3;
      for (std::size_t n = 0; n < N; ++n) f[n] = B[a][n] * J[b][n] - B[b][n] * J[a][n];
      out.m[c] -= cx.forward(f);
    }
    for (std::size_t n = 0; n < out.rho.size(); ++n) {
      out.m[0][n] += I * md.k3[n] * U.B[0][n];
      out.m[1][n] += I * md.k3[n] * U.B[1][n];
    }
  }

  // w = v − m/ρ̄: viscous terms beyond the integrating factor, and the induction remainder
  SpectralVector W;
  {
    ScalarField w(g);
    for (int c = 0; c < 3; ++c) {
      for (std::size_t n = 0; n < N; ++n) w[n] = v[c][n] - m[c][n] / rb;
      W[c] = cx.forward(w);
    }
    for (std::size_t n = 0; n < out.rho.size(); ++n) {
      const double k1 = md.k1[n], k2 = md.k2[n], k3 = md.k3[n];
      const double s = p.mu_perp * (k1 * k1 + k2 * k2) + p.mu_par * k3 * k3;
      const double ke[3] = {k1, k2, eps * k3};
      const Complex dot = ke[0] * W[0][n] + ke[1] * W[1][n] + ke[2] * W[2][n];
      for (int c = 0; c < 3; ++c) out.m[c][n] -= s * W[c][n] + p.lambda_bulk * ke[c] * dot;
    }
  }

  // induction: ∂∥v⊥, −ε⁻¹∇⊥·(v⊥ − m⊥/ρ̄), −∇ε × (B × v)
  for (std::size_t n = 0; n < out.rho.size(); ++n) {
    const double k1 = md.k1[n], k2 = md.k2[n], k3 = md.k3[n];
    const Complex v1 = W[0][n] + U.m[0][n] / rb, v2 = W[1][n] + U.m[1][n] / rb;
    out.B[0][n] += I * k3 * v1;
    out.B[1][n] += I * k3 * v2;
    out.B[2][n] -= I * (k1 * W[0][n] + k2 * W[1][n]) / eps;
  }
  {
    SpectralVector E;
    ScalarField f(g);
    for (int c = 0; c < 3; ++c) {
      const int a = (c + 1) % 3, b = (c + 2) % 3;
      for (std::size_t n = 0; n < N; ++n) f[n] = B[a][n] * v[b][n] - B[b][n] * v[a][n];
      E[c] = cx.forward(f);
    }
    const SpectralVector cE = curl_eps(E);
    for (int c = 0; c < 3; ++c) out.B[c] -= cE[c];
  }
  return out;
}

Conserved nonstiff(const Context& cx, const Conserved& U) {
  return cx.linearized ? nonstiff_linearized(cx, U) : nonstiff_nonlinear(cx, U);
}

Conserved full_rhs(const Context& cx, const Conserved& U) {
  Conserved out = nonstiff(cx, U);
  add_stiff(cx, U, out);
  add_linear_dissipation(cx, U, out);
  return out;
}

Conserved to_conserved(const State& s) {
  VectorField m = make_vector_field(s.grid());
  for (int c = 0; c < 3; ++c) kernels::omp::multiply(s.rho.values(), s.v[c].values(), m[c].values());
  return Conserved(to_spectral(s.rho), to_spectral(m), to_spectral(s.B));
}

State to_state(const Conserved& U, double t) {
  State s;
  s.rho = to_physical(U.rho);
  const VectorField m = to_physical(U.m);
  s.v = make_vector_field(s.rho.grid());
  for (int c = 0; c < 3; ++c)
    for (std::size_t n = 0; n < s.rho.size(); ++n) s.v[c][n] = m[c][n] / s.rho[n];
  s.B = to_physical(U.B);
  s.t = t;
  return s;
}

void check_state(const State& s, const PhysicalParams& p) {
  p.validate();
  s.grid().validate();
  require(std::abs(s.grid().eps - p.eps) <= 1e-14 * p.eps, "state grid eps differs from params eps");
  for (const auto* f : {&s.B[0], &s.B[1], &s.B[2], &s.v[0], &s.v[1], &s.v[2], &s.rho})
    require(f->grid().same_shape(s.grid()), "state components on different grids");
}

// Per-mode 7×7 matrix of add_stiff + add_linear_dissipation, ordered (ρ, m, B).
using Mat7 = Eigen::Matrix<Complex, 7, 7>;
using Vec7 = Eigen::Matrix<Complex, 7, 1>;

Mat7 linear_symbol(const Context& cx, std::size_t n) {
  const auto& p = cx.p;
  const double eps = p.eps, rb = cx.bg.rho_bar;
  const double k1 = cx.modes.k1[n], k2 = cx.modes.k2[n], k3 = cx.modes.k3[n];
  Mat7 L = Mat7::Zero();
  L(0, 1) = -I * k1;
  L(0, 2) = -I * k2;
  L(1, 0) = -I * k1 * cx.bg.b_eps / (eps * eps);
  L(2, 0) = -I * k2 * cx.bg.b_eps / (eps * eps);
  L(1, 6) = -I * k1 / eps;
  L(2, 6) = -I * k2 / eps;
  L(6, 1) = -I * k1 / (eps * rb);
  L(6, 2) = -I * k2 / (eps * rb);
  const double s = (p.mu_perp * (k1 * k1 + k2 * k2) + p.mu_par * k3 * k3) / rb;
  const double ke[3] = {k1, k2, eps * k3};
  for (int a = 0; a < 3; ++a) {
    L(1 + a, 1 + a) -= s;
    for (int b = 0; b < 3; ++b) L(1 + a, 1 + b) -= p.lambda_bulk / rb * ke[a] * ke[b];
    L(4 + a, 4 + a) -= p.eta_perp * (k1 * k1 + k2 * k2) + p.eta_par * k3 * k3;
  }
  return L;
}

Vec7 gather(const Conserved& U, std::size_t n) {
  Vec7 x;
  x << U.rho[n], U.m[0][n], U.m[1][n], U.m[2][n], U.B[0][n], U.B[1][n], U.B[2][n];
  return x;
}

void scatter(Conserved& U, std::size_t n, const Vec7& x) {
  U.rho[n] = x(0);
  for (int c = 0; c < 3; ++c) U.m[c][n] = x(1 + c), U.B[c][n] = x(4 + c);
}

}  // namespace

// ---- public free functions ------------------------------------------------------

ConservedRate rhs_conserved(const State& s, const PhysicalParams& p, bool linearized, bool dealias) {
  check_state(s, p);
  Context cx(p, s.grid(), s.rho.mean(), linearized, dealias);
  cx.t = s.t;
  for (double r : s.rho.values())
    if (!(r > 0.0)) throw BlowUpError("density lost positivity", s.t);
  const Conserved U = to_conserved(s);
  Conserved out = full_rhs(cx, U);
  return {std::move(out.rho), std::move(out.m), std::move(out.B)};
}

StateRate rhs(const State& s, const PhysicalParams& p, bool linearized, bool dealias) {
  const ConservedRate r = rhs_conserved(s, p, linearized, dealias);
  StateRate out;
  out.rho = to_physical(r.rho);
  const VectorField dm = to_physical(r.m);
  out.v = make_vector_field(s.grid());
  for (int c = 0; c < 3; ++c)
    for (std::size_t n = 0; n < s.rho.size(); ++n)
      out.v[c][n] = (dm[c][n] - s.v[c][n] * out.rho[n]) / s.rho[n];
  out.B = to_physical(r.B);
  return out;
}

double kmax_perp(const GridSpec& g, bool dealias) {
  const int k1 = dealias ? g.nx / 3 : g.nx / 2 - 1;
  const int k2 = dealias ? g.ny / 3 : g.ny / 2 - 1;
  return std::hypot(double(k1), double(k2));
}

double kmax_par(const GridSpec& g, bool dealias) { return dealias ? g.nz / 3 : g.nz / 2 - 1; }

double stable_dt(const State& s, const SolverConfig& cfg, const PhysicalParams& p) {
  const GridSpec& g = s.grid();
  if (cfg.integrator == Integrator::explicit_rk4)
    return 0.4 * p.eps / (std::sqrt(p.c_fast()) * kmax_perp(g, cfg.dealias));
  double vmax = 0.0, bmax = 0.0;
  for (int c = 0; c < 3; ++c) vmax = std::max(vmax, sup_norm(s.v[c]));
  for (int c = 0; c < 3; ++c) bmax = std::max(bmax, sup_norm(s.B[c]));
  const double kmax = std::max(kmax_perp(g, cfg.dealias), kmax_par(g, cfg.dealias));
  // advective bound plus the explicitly treated parallel waves
  const double rate = kmax * (vmax + bmax) + kmax_par(g, cfg.dealias) * std::sqrt(p.c_fast());
  return std::min(0.5 / rate, cfg.snapshot_every);
}

// ---- MhdSolver ------------------------------------------------------------------

struct MhdSolver::Impl {
  SolverConfig cfg;
  Context cx;
  Conserved U;
  // IMEX cache
  double imex_h = -1.0;
  std::vector<Eigen::PartialPivLU<Mat7>> lu;
  std::vector<Mat7> L;

  Impl(const PhysicalParams& p, const SolverConfig& c, const State& init)
      : cfg(c), cx(p, init.grid(), init.rho.mean(), c.linearized, c.dealias), U(to_conserved(init)) {
    cx.t = init.t;
    if (cfg.dealias) U.each([&](SpectralField& f) { cx.truncate(f); });
  }

  void project() { project_div_eps_free(U.B); }

  void step_expo(double h) {
    dissipation_flow(cx, U, 0.5 * h);
    stiff_flow(cx, U, 0.5 * h);
    const Conserved k1 = nonstiff(cx, U);
    const Conserved mid = combine(U, h, k1);
    const Conserved k2 = nonstiff(cx, mid);
    axpy(U, 0.5 * h, k1);
    axpy(U, 0.5 * h, k2);
    stiff_flow(cx, U, 0.5 * h);
    dissipation_flow(cx, U, 0.5 * h);
  }

  void prepare_imex(double h, double gam) {
    if (imex_h == h) return;
    const std::size_t M = cx.g.modes();
    lu.clear();
    L.resize(M);
    lu.reserve(M);
    for (std::size_t n = 0; n < M; ++n) {
      L[n] = linear_symbol(cx, n);
      lu.emplace_back(Mat7::Identity() - h * gam * L[n]);
    }
    imex_h = h;
  }

  void solve_implicit(Conserved& X) {
    for (std::size_t n = 0; n < X.rho.size(); ++n) scatter(X, n, lu[n].solve(gather(X, n)));
  }

  Conserved apply_L(const Conserved& X) {
    Conserved out(cx.g);
    for (std::size_t n = 0; n < X.rho.size(); ++n) scatter(out, n, L[n] * gather(X, n));
    return out;
  }

  // ARS(2,2,2): L-stable, stiffly accurate
  void step_imex(double h) {
    const double gam = 1.0 - 1.0 / std::sqrt(2.0);
    const double del = 1.0 - 1.0 / (2.0 * gam);
    prepare_imex(h, gam);
    const Conserved N1 = nonstiff(cx, U);
    Conserved U2 = combine(U, h * gam, N1);
    solve_implicit(U2);
    const Conserved N2 = nonstiff(cx, U2);
    Conserved U3 = combine(U, h * del, N1);
    axpy(U3, h * (1.0 - del), N2);
    axpy(U3, h * (1.0 - gam), apply_L(U2));
    solve_implicit(U3);
    U = std::move(U3);
  }

  void step_rk4(double h) {
    const Conserved k1 = full_rhs(cx, U);
    const Conserved k2 = full_rhs(cx, combine(U, 0.5 * h, k1));
    const Conserved k3 = full_rhs(cx, combine(U, 0.5 * h, k2));
    const Conserved k4 = full_rhs(cx, combine(U, h, k3));
    axpy(U, h / 6.0, k1);
    axpy(U, h / 3.0, k2);
    axpy(U, h / 3.0, k3);
    axpy(U, h / 6.0, k4);
  }
};

MhdSolver::MhdSolver(const PhysicalParams& p, const SolverConfig& cfg, const State& init) {
  check_state(init, p);
  cfg.validate();
  for (double r : init.rho.values())
    if (!(r > 0.0)) throw BlowUpError("density lost positivity", init.t);
  impl_ = std::make_unique<Impl>(p, cfg, init);
}

MhdSolver::~MhdSolver() = default;
MhdSolver::MhdSolver(MhdSolver&&) noexcept = default;
MhdSolver& MhdSolver::operator=(MhdSolver&&) noexcept = default;

void MhdSolver::step(double h) {
  require(h > 0.0 && std::isfinite(h), "step size must be positive");
  auto& im = *impl_;
  if (im.cfg.integrator == Integrator::explicit_rk4) {
    const double bound = 0.4 * im.cx.p.eps /
                         (std::sqrt(im.cx.p.c_fast()) * kmax_perp(im.cx.g, im.cfg.dealias));
    require(h <= bound * (1.0 + 1e-12), "explicit_rk4 step exceeds the fast-wave CFL bound");
  }
  switch (im.cfg.integrator) {
    case Integrator::expo_rk2: im.step_expo(h); break;
    case Integrator::imex_rk2: im.step_imex(h); break;
    case Integrator::explicit_rk4: im.step_rk4(h); break;
  }
  im.project();
  im.cx.t += h;
}

State MhdSolver::state() const { return to_state(impl_->U, impl_->cx.t); }
double MhdSolver::time() const { return impl_->cx.t; }
double MhdSolver::rho_bar() const { return impl_->cx.bg.rho_bar; }
double MhdSolver::mass_mean() const { return impl_->U.rho[0].real(); }
double MhdSolver::B_mean_norm() const {
  const auto& B = impl_->U.B;
  return std::sqrt(std::norm(B[0][0]) + std::norm(B[1][0]) + std::norm(B[2][0]));
}

State step(const State& s, const SolverConfig& cfg, const PhysicalParams& p) {
  MhdSolver solver(p, cfg, s);
  solver.step(cfg.dt > 0.0 ? cfg.dt : stable_dt(s, cfg, p));
  return solver.state();
}

}  // namespace rmhd
