#include "rmhd/rmhd_solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "rmhd/diagnostics.hpp"
#include "rmhd/kernels.hpp"

namespace rmhd {

RmhdState make_zero_rmhd(const GridSpec& g) {
  RmhdState s;
  s.B_perp = {ScalarField(g), ScalarField(g)};
  s.v_perp = {ScalarField(g), ScalarField(g)};
  s.B_par = ScalarField(g);
  s.v_par = ScalarField(g);
  return s;
}

RmhdState project_limit_init(const State& s0, const PhysicalParams& p) {
  const GridSpec& g = s0.grid();
  RmhdState r;
  SpectralField B1 = to_spectral(s0.B[0]), B2 = to_spectral(s0.B[1]);
  SpectralField V1 = to_spectral(s0.v[0]), V2 = to_spectral(s0.v[1]);
  project_P_perp(B1, B2);
  project_P_perp(V1, V2);
  r.B_perp = {to_physical(B1), to_physical(B2)};
  r.v_perp = {to_physical(V1), to_physical(V2)};
  r.v_par = s0.v[2];
  r.B_par = ScalarField(g);
  const double cpar = p.c_par();
  for (std::size_t n = 0; n < r.B_par.size(); ++n) {
    const double varrho = (s0.rho[n] - 1.0) / p.eps;
    r.B_par[n] = (s0.B[2][n] - varrho) / cpar;
  }
  r.t = s0.t;
  return r;
}

namespace {

const Complex I(0.0, 1.0);

// Spectral unknowns in the order B1, B2, v1, v2, B∥, v∥.
using Fields = std::array<SpectralField, 6>;
enum { kB1, kB2, kV1, kV2, kBp, kVp };

Fields zeros(const GridSpec& g) {
  Fields f;
  for (auto& c : f) c = SpectralField(g);
  return f;
}

void axpy(Fields& y, double a, const Fields& x) {
  for (int c = 0; c < 6; ++c) {
    auto d = y[c].coeffs();
    auto s = x[c].coeffs();
    for (std::size_t n = 0; n < d.size(); ++n) d[n] += a * s[n];
  }
}

Fields combine(const Fields& u, double a, const Fields& x) {
  Fields out = u;
  axpy(out, a, x);
  return out;
}

Fields to_fields(const RmhdState& s) {
  return {to_spectral(s.B_perp[0]), to_spectral(s.B_perp[1]), to_spectral(s.v_perp[0]),
          to_spectral(s.v_perp[1]), to_spectral(s.B_par),     to_spectral(s.v_par)};
}

RmhdState to_state(const Fields& X, double t) {
  RmhdState s;
  s.B_perp = {to_physical(X[kB1]), to_physical(X[kB2])};
  s.v_perp = {to_physical(X[kV1]), to_physical(X[kV2])};
  s.B_par = to_physical(X[kBp]);
  s.v_par = to_physical(X[kVp]);
  s.t = t;
  return s;
}

struct Ctx {
  PhysicalParams p;
  GridSpec g;
  bool dealias = true;
  std::vector<double> k1, k2, k3;
  std::vector<char> keep;

  Ctx(const PhysicalParams& pp, const GridSpec& gg, bool d) : p(pp), g(gg), dealias(d) {
    const std::size_t M = g.modes();
    k1.resize(M), k2.resize(M), k3.resize(M), keep.resize(M);
    for_each_mode(g, [&](std::size_t n, int i, int j, int l, int a, int b, int c) {
      k1[n] = derivative_wavenumber(i, g.nx);
      k2[n] = derivative_wavenumber(j, g.ny);
      k3[n] = derivative_wavenumber(l, g.nz);
      keep[n] = dealias_keeps(a, g.nx) && dealias_keeps(b, g.ny) && dealias_keeps(c, g.nz);
    });
  }

  SpectralField forward(const ScalarField& f) const {
    SpectralField F = to_spectral(f);
    if (dealias)
      for (std::size_t n = 0; n < F.size(); ++n)
        if (!keep[n]) F[n] = 0.0;
    return F;
  }

  // Decay rates of the diagonal dissipative part, per field.
  void rates(std::size_t n, double out[6]) const {
    const double kp2 = k1[n] * k1[n] + k2[n] * k2[n], kz2 = k3[n] * k3[n];
    const double mu = p.mu_perp * kp2 + p.mu_par * kz2;
    const double eta = p.eta_perp * kp2 + p.eta_par * kz2;
    out[kB1] = out[kB2] = eta;
    out[kV1] = out[kV2] = out[kVp] = mu;
    out[kBp] = eta / p.c_par();
  }
};

// Everything except the diagonal dissipation.
Fields nonlinear(const Ctx& cx, const Fields& X) {
  const GridSpec& g = cx.g;
  const std::size_t N = g.points(), M = g.modes();
  const double cpar = cx.p.c_par();
  const ScalarField b1 = to_physical(X[kB1]), b2 = to_physical(X[kB2]);
  const ScalarField v1 = to_physical(X[kV1]), v2 = to_physical(X[kV2]);
  Fields out = zeros(g);
  ScalarField w(g);

  // induction: ∂tB⊥ = ∂∥v⊥ − ∇⊥·(B⊥⊗v⊥ − v⊥⊗B⊥) = ∂∥v⊥ + (−∂₂a, ∂₁a), a = B₁v₂ − v₁B₂
  for (std::size_t n = 0; n < N; ++n) w[n] = b1[n] * v2[n] - v1[n] * b2[n];
  const SpectralField A = cx.forward(w);
  for (std::size_t n = 0; n < M; ++n) {
    out[kB1][n] = I * cx.k3[n] * X[kV1][n] - I * cx.k2[n] * A[n];
    out[kB2][n] = I * cx.k3[n] * X[kV2][n] + I * cx.k1[n] * A[n];
  }

  // momentum: P⊥[∂∥B⊥ − ∇⊥·(v⊥⊗v⊥ − B⊥⊗B⊥)]
  for (std::size_t n = 0; n < N; ++n) w[n] = v1[n] * v1[n] - b1[n] * b1[n];
  const SpectralField T11 = cx.forward(w);
  for (std::size_t n = 0; n < N; ++n) w[n] = v1[n] * v2[n] - b1[n] * b2[n];
  const SpectralField T12 = cx.forward(w);
  for (std::size_t n = 0; n < N; ++n) w[n] = v2[n] * v2[n] - b2[n] * b2[n];
  const SpectralField T22 = cx.forward(w);
  for (std::size_t n = 0; n < M; ++n) {
    out[kV1][n] = I * cx.k3[n] * X[kB1][n] - I * (cx.k1[n] * T11[n] + cx.k2[n] * T12[n]);
    out[kV2][n] = I * cx.k3[n] * X[kB2][n] - I * (cx.k1[n] * T12[n] + cx.k2[n] * T22[n]);
  }
  project_P_perp(out[kV1], out[kV2]);

  // parallel block, linear in (B∥, v∥)
  const SpectralPerp gB = grad_perp(X[kBp]), gv = grad_perp(X[kVp]);
  const ScalarField B1x = to_physical(gB[0]), B2x = to_physical(gB[1]);
  const ScalarField v1x = to_physical(gv[0]), v2x = to_physical(gv[1]);
  for (std::size_t n = 0; n < N; ++n) w[n] = v1[n] * B1x[n] + v2[n] * B2x[n];
  const SpectralField advB = cx.forward(w);
  for (std::size_t n = 0; n < N; ++n) w[n] = b1[n] * v1x[n] + b2[n] * v2x[n];
  const SpectralField bgradv = cx.forward(w);
  for (std::size_t n = 0; n < N; ++n) w[n] = v1[n] * v1x[n] + v2[n] * v2x[n];
  const SpectralField advv = cx.forward(w);
  for (std::size_t n = 0; n < N; ++n) w[n] = b1[n] * B1x[n] + b2[n] * B2x[n];
  const SpectralField bgradB = cx.forward(w);
  for (std::size_t n = 0; n < M; ++n) {
    out[kBp][n] = -advB[n] + (I * cx.k3[n] * X[kVp][n] + bgradv[n]) / cpar;
    out[kVp][n] = -advv[n] + I * cx.k3[n] * X[kBp][n] + bgradB[n];
  }
  return out;
}

void add_dissipation(const Ctx& cx, const Fields& X, Fields& out) {
  double r[6];
  for (std::size_t n = 0; n < X[0].size(); ++n) {
    cx.rates(n, r);
    for (int c = 0; c < 6; ++c) out[c][n] -= r[c] * X[c][n];
  }
}

void dissipation_flow(const Ctx& cx, Fields& X, double h) {
  if (!cx.p.dissipative()) return;
  double r[6];
  for (std::size_t n = 0; n < X[0].size(); ++n) {
    cx.rates(n, r);
    for (int c = 0; c < 6; ++c) X[c][n] *= std::exp(-h * r[c]);
  }
}

// (1 + s·rate)⁻¹ per mode and field.
void implicit_solve(const Ctx& cx, Fields& X, double s) {
  double r[6];
  for (std::size_t n = 0; n < X[0].size(); ++n) {
    cx.rates(n, r);
    for (int c = 0; c < 6; ++c) X[c][n] /= 1.0 + s * r[c];
  }
}

template <class W>
double parseval(const SpectralField& F, W&& w) {
  const GridSpec& g = F.grid();
  double acc = 0.0;
  for_each_mode(g, [&](std::size_t n, int i, int j, int l, int, int, int) {
    const double k1 = derivative_wavenumber(i, g.nx), k2 = derivative_wavenumber(j, g.ny);
    const double k3 = derivative_wavenumber(l, g.nz);
    acc += half_spectrum_weight(l, g.nz) * w(k1, k2, k3) * std::norm(F[n]);
  });
  return acc * kBoxVolume;
}

void check_rmhd(const RmhdState& s) {
  const GridSpec& g = s.grid();
  g.validate();
  for (const auto* f : {&s.B_perp[0], &s.B_perp[1], &s.v_perp[0], &s.v_perp[1], &s.v_par})
    require(f->grid().same_shape(g), "limit state components on different grids");
}

}  // namespace

RmhdRate rmhd_rhs(const RmhdState& s, const PhysicalParams& p, bool dealias) {
  check_rmhd(s);
  p.validate();
  Ctx cx(p, s.grid(), dealias);
  const Fields X = to_fields(s);
  Fields out = nonlinear(cx, X);
  add_dissipation(cx, X, out);
  const RmhdState r = to_state(out, 0.0);
  return {r.B_perp, r.v_perp, r.B_par, r.v_par};
}

double rmhd_energy(const RmhdState& s, const PhysicalParams& p) {
  double acc = 0.0;
  const double cpar = p.c_par();
  for (std::size_t n = 0; n < s.B_par.size(); ++n) {
    acc += 0.5 * cpar * s.B_par[n] * s.B_par[n] + 0.5 * s.v_par[n] * s.v_par[n];
    for (int c = 0; c < 2; ++c)
      acc += 0.5 * (s.B_perp[c][n] * s.B_perp[c][n] + s.v_perp[c][n] * s.v_perp[c][n]);
  }
  return acc / double(s.B_par.size()) * kBoxVolume;
}

double rmhd_dissipation(const RmhdState& s, const PhysicalParams& p) {
  const Fields X = to_fields(s);
  double d = 0.0;
  for (int c = 0; c < 6; ++c) {
    const bool velocity = (c == kV1 || c == kV2 || c == kVp);
    const double cp = velocity ? p.mu_perp : p.eta_perp;
    const double cz = velocity ? p.mu_par : p.eta_par;
    d += parseval(X[c], [&](double k1, double k2, double k3) {
      return cp * (k1 * k1 + k2 * k2) + cz * k3 * k3;
    });
  }
  return d;
}

double rmhd_stable_dt(const RmhdState& s, const SolverConfig& cfg, const PhysicalParams& p) {
  const GridSpec& g = s.grid();
  double vmax = 0.0, bmax = 0.0;
  for (int c = 0; c < 2; ++c) {
    vmax = std::max(vmax, sup_norm(s.v_perp[c]));
    bmax = std::max(bmax, sup_norm(s.B_perp[c]));
  }
  const double kmax = std::max(kmax_perp(g, cfg.dealias), kmax_par(g, cfg.dealias));
  const double wave = kmax_par(g, cfg.dealias) * std::max(1.0, 1.0 / std::sqrt(p.c_par()));
  return std::min(0.5 / (kmax * (vmax + bmax) + wave), cfg.snapshot_every);
}

struct RmhdSolver::Impl {
  SolverConfig cfg;
  Ctx cx;
  Fields X;
  double t = 0.0;

  Impl(const PhysicalParams& p, const SolverConfig& c, const RmhdState& init)
      : cfg(c), cx(p, init.grid(), c.dealias), X(to_fields(init)), t(init.t) {
    if (cfg.dealias)
      for (auto& f : X)
        for (std::size_t n = 0; n < f.size(); ++n)
          if (!cx.keep[n]) f[n] = 0.0;
    project_P_perp(X[kV1], X[kV2]);
  }

  Fields full(const Fields& Y) {
    Fields out = nonlinear(cx, Y);
    add_dissipation(cx, Y, out);
    return out;
  }

  void step_expo(double h) {
    dissipation_flow(cx, X, 0.5 * h);
    const Fields k1 = nonlinear(cx, X);
    const Fields k2 = nonlinear(cx, combine(X, h, k1));
    axpy(X, 0.5 * h, k1);
    axpy(X, 0.5 * h, k2);
    dissipation_flow(cx, X, 0.5 * h);
  }

  void step_imex(double h) {
    const double gam = 1.0 - 1.0 / std::sqrt(2.0);
    const double del = 1.0 - 1.0 / (2.0 * gam);
    const Fields N1 = nonlinear(cx, X);
    Fields U2 = combine(X, h * gam, N1);
    implicit_solve(cx, U2, h * gam);
    const Fields N2 = nonlinear(cx, U2);
    Fields L2 = zeros(cx.g);
    add_dissipation(cx, U2, L2);
    Fields U3 = combine(X, h * del, N1);
    axpy(U3, h * (1.0 - del), N2);
    axpy(U3, h * (1.0 - gam), L2);
    implicit_solve(cx, U3, h * gam);
    X = std::move(U3);
  }

  void step_rk4(double h) {
    const Fields k1 = full(X);
    const Fields k2 = full(combine(X, 0.5 * h, k1));
    const Fields k3 = full(combine(X, 0.5 * h, k2));
    const Fields k4 = full(combine(X, h, k3));
    axpy(X, h / 6.0, k1);
    axpy(X, h / 3.0, k2);
    axpy(X, h / 3.0, k3);
    axpy(X, h / 6.0, k4);
  }
};

RmhdSolver::RmhdSolver(const PhysicalParams& p, const SolverConfig& cfg, const RmhdState& init) {
  check_rmhd(init);
  p.validate();
  cfg.validate();
  impl_ = std::make_unique<Impl>(p, cfg, init);
}

RmhdSolver::~RmhdSolver() = default;
RmhdSolver::RmhdSolver(RmhdSolver&&) noexcept = default;
RmhdSolver& RmhdSolver::operator=(RmhdSolver&&) noexcept = default;

void RmhdSolver::step(double h) {
  require(h > 0.0 && std::isfinite(h), "step size must be positive");
  auto& im = *impl_;
  switch (im.cfg.integrator) {
    case Integrator::expo_rk2: im.step_expo(h); break;
    case Integrator::imex_rk2: im.step_imex(h); break;
    case Integrator::explicit_rk4: im.step_rk4(h); break;
  }
  project_P_perp(im.X[kV1], im.X[kV2]);
  for (const auto& f : im.X)
    for (std::size_t n = 0; n < f.size(); ++n)
      if (!std::isfinite(f[n].real()) || !std::isfinite(f[n].imag()))
        throw BlowUpError("limit solution is no longer finite", im.t + h);
  im.t += h;
}

RmhdState RmhdSolver::state() const { return to_state(impl_->X, impl_->t); }
double RmhdSolver::time() const { return impl_->t; }

RmhdState rmhd_step(const RmhdState& s, const SolverConfig& cfg, const PhysicalParams& p) {
  RmhdSolver solver(p, cfg, s);
  solver.step(cfg.dt > 0.0 ? cfg.dt : rmhd_stable_dt(s, cfg, p));
  return solver.state();
}

const std::vector<std::string>& rmhd_columns() {
  static const std::vector<std::string> cols = {"t",          "energy",         "D",
                                                "D_int",      "defect",         "div_perp_B",
                                                "div_perp_B_rel", "div_perp_v", "v_perp_L2",
                                                "B_par_L2"};
  return cols;
}

std::vector<double> rmhd_values(const RmhdRecord& r) {
  return {r.t,          r.energy,         r.D,          r.D_int,     r.defect,
          r.div_perp_B, r.div_perp_B_rel, r.div_perp_v, r.v_perp_L2, r.B_par_L2};
}

RmhdRecord rmhd_measure(const RmhdState& s, const PhysicalParams& p) {
  RmhdRecord r;
  r.t = s.t;
  r.energy = rmhd_energy(s, p);
  r.D = rmhd_dissipation(s, p);
  const SpectralField B1 = to_spectral(s.B_perp[0]), B2 = to_spectral(s.B_perp[1]);
  r.div_perp_B = sobolev_norm(div_perp(B1, B2), 0.0);
  const double h1 = std::hypot(sobolev_norm(B1, 1.0), sobolev_norm(B2, 1.0));
  r.div_perp_B_rel = h1 > 0.0 ? r.div_perp_B / h1 : 0.0;
  r.div_perp_v =
      sobolev_norm(div_perp(to_spectral(s.v_perp[0]), to_spectral(s.v_perp[1])), 0.0);
  r.v_perp_L2 = l2_norm(std::span<const ScalarField>(s.v_perp.data(), 2));
  r.B_par_L2 = l2_norm(s.B_par);
  return r;
}

RmhdRunResult rmhd_run(const SolverConfig& cfg, const PhysicalParams& p, const RmhdState& init,
                       const RmhdRunOptions& opt) {
  cfg.validate();
  RmhdSolver solver(p, cfg, init);
  const bool dissipative = p.dissipative();
  std::optional<CsvWriter> csv;
  if (opt.out_dir) {
    std::filesystem::create_directories(*opt.out_dir);
    csv.emplace(*opt.out_dir / "rmhd_diagnostics.csv", rmhd_columns());
  }
  RmhdRunResult res;
  RmhdState s = solver.state();
  double D_int = 0.0, E0 = 0.0;

  auto emit = [&](const RmhdState& st) {
    RmhdRecord r = rmhd_measure(st, p);
    r.D_int = D_int;
    if (res.records.empty()) E0 = r.energy;
    r.defect = E0 > 0.0 ? (r.energy + D_int - E0) / E0 : r.energy + D_int;
    res.records.push_back(r);
    if (csv) csv->row(rmhd_values(r));
    if (opt.out_dir && opt.write_snapshots)
      write_rmhd_state(*opt.out_dir / ("rmhd_" + snapshot_name(st.t)), st);
    if (opt.on_sample) opt.on_sample(st, r);
  };

  try {
    emit(s);
    const std::vector<double> ts = sample_times(s.t, cfg.t_end, cfg.snapshot_every);
    double D_prev = res.records.back().D;
    for (std::size_t k = 1; k < ts.size(); ++k) {
      const double len = ts[k] - ts[k - 1];
      const double h_target = cfg.dt > 0.0 ? cfg.dt : rmhd_stable_dt(s, cfg, p);
      const int n = steps_for_interval(len, h_target);
      const double h = len / n;
      double D_mid = 0.0;
      for (int i = 1; i <= n; ++i) {
        solver.step(h);
        ++res.steps;
        if (!dissipative) continue;
        const double D = rmhd_dissipation(solver.state(), p);
        if (i % 2 == 1) {
          D_mid = D;
        } else {
          D_int += h / 3.0 * (D_prev + 4.0 * D_mid + D);
          D_prev = D;
        }
      }
      s = solver.state();
      s.t = ts[k];
      emit(s);
    }
  } catch (const std::exception& e) {
    if (csv) csv->finish(false, e.what());
    throw;
  }
  if (csv) csv->finish(true);
  res.final_state = std::move(s);
  return res;
}

void write_rmhd_state(const std::filesystem::path& path, const RmhdState& s) {
  const std::vector<ScalarField> fields = {s.B_perp[0], s.B_perp[1], s.v_perp[0],
                                           s.v_perp[1], s.B_par,     s.v_par};
  write_snapshot(path, fields, s.t);
}

RmhdState read_rmhd_state(const std::filesystem::path& path) {
  Snapshot snap = read_snapshot(path);
  require(snap.fields.size() == 6, "snapshot does not hold a limit-system state");
  auto& f = snap.fields;
  return {{f[0], f[1]}, {f[2], f[3]}, f[4], f[5], snap.trailer};
}

}  // namespace rmhd
