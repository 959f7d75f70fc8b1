#include "rmhd/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace rmhd {

void PhysicalParams::validate() const {
  require(a > 0.0 && std::isfinite(a), "a must be positive");
  require(gamma > 1.0 && std::isfinite(gamma), "gamma must exceed 1");
  require(eps > 0.0 && std::isfinite(eps), "eps must be positive");
  for (double c : {mu_perp, mu_par, lambda_bulk, eta_perp, eta_par})
    require(c >= 0.0 && std::isfinite(c), "dissipation coefficients must be nonnegative");
}

State make_rest_state(const GridSpec& g) {
  return {ScalarField(g, 1.0), make_vector_field(g), make_vector_field(g), 0.0};
}

InitKind init_kind_from_name(const std::string& name) {
  if (name == "prepared") return InitKind::prepared;
  if (name == "unprepared") return InitKind::unprepared;
  throw ContractViolation("unknown init kind '" + name + "'");
}

ScalarField pressure(const ScalarField& rho, const PhysicalParams& p) {
  ScalarField out(rho.grid());
  for (std::size_t n = 0; n < rho.size(); ++n) {
    if (!(rho[n] > 0.0)) throw DomainError("pressure: nonpositive density");
    out[n] = p.a * std::pow(rho[n], p.gamma);
  }
  return out;
}

double pi_density(double rho, PiVariant variant, double rho_bar, const PhysicalParams& p) {
  if (!(rho > 0.0)) throw DomainError("pi: nonpositive density");
  const double scale = p.a / (p.eps * p.eps * (p.gamma - 1.0));
  switch (variant) {
    case PiVariant::pi1: return scale * std::pow(rho, p.gamma);
    case PiVariant::pi2:
      require(rho_bar > 0.0, "pi2 needs a positive reference density");
      return scale * taylor_gap(rho, rho_bar, p.gamma);
    case PiVariant::pi3:
      require(rho_bar == 1.0, "pi3 is defined with reference density 1");
      return scale * taylor_gap(rho, 1.0, p.gamma);
  }
  throw ContractViolation("unknown pi variant");
}

double pi_functional(const ScalarField& rho, PiVariant variant, double rho_bar,
                     const PhysicalParams& p) {
  double acc = 0.0;
  for (double r : rho.values()) acc += pi_density(r, variant, rho_bar, p);
  return acc / double(rho.size()) * kBoxVolume;
}

double energy(const State& s, PiVariant variant, double rho_bar, const PhysicalParams& p) {
  double kin = 0.0;
  for (std::size_t n = 0; n < s.rho.size(); ++n) {
    const double v2 = s.v[0][n] * s.v[0][n] + s.v[1][n] * s.v[1][n] + s.v[2][n] * s.v[2][n];
    const double b2 = s.B[0][n] * s.B[0][n] + s.B[1][n] * s.B[1][n] + s.B[2][n] * s.B[2][n];
    kin += 0.5 * s.rho[n] * v2 + 0.5 * b2;
  }
  return kin / double(s.rho.size()) * kBoxVolume + pi_functional(s.rho, variant, rho_bar, p);
}

namespace {

// Σ_k w(k)|F̂(k)|² · volume over the full spectrum.
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

}  // namespace

double dissipation(const State& s, const PhysicalParams& p) {
  const SpectralVector V = to_spectral(s.v), Bh = to_spectral(s.B);
  double d = 0.0;
  for (int c = 0; c < 3; ++c) {
    d += parseval(V[c], [&](double k1, double k2, double k3) {
      return p.mu_perp * (k1 * k1 + k2 * k2) + p.mu_par * k3 * k3;
    });
    d += parseval(Bh[c], [&](double k1, double k2, double k3) {
      return p.eta_perp * (k1 * k1 + k2 * k2) + p.eta_par * k3 * k3;
    });
  }
  if (p.lambda_bulk > 0.0) {
    const SpectralField div = div_eps(V);
    d += p.lambda_bulk * parseval(div, [](double, double, double) { return 1.0; });
  }
  return d;
}

// ---- convexity --------------------------------------------------------------

double taylor_gap(double x, double xbar, double gamma) {
  if (x < 0.0) throw DomainError("taylor_gap: negative argument");
  require(xbar > 0.0, "taylor_gap: reference must be positive");
  return std::pow(x, gamma) - gamma * x * std::pow(xbar, gamma - 1.0) +
         (gamma - 1.0) * std::pow(xbar, gamma);
}

double orlicz_gauge(double x, double xbar, double gamma, double delta) {
  if (x < 0.0) throw DomainError("orlicz_gauge: negative argument");
  require(xbar > 0.0 && delta > 0.0, "orlicz_gauge: reference and delta must be positive");
  const double d = std::abs(x - xbar);
  return d <= delta ? d * d : std::pow(d, gamma);
}

SandwichConstants scan_sandwich(double xbar, double gamma, double delta, double x_max,
                                int samples) {
  require(samples >= 2 && x_max > 0.0, "scan_sandwich: bad sampling");
  SandwichConstants k{std::numeric_limits<double>::infinity(), 0.0};
  auto visit = [&](double x) {
    if (x < 0.0 || x > x_max) return;
    const double gauge = orlicz_gauge(x, xbar, gamma, delta);
    if (gauge <= 1e-14) return;  // ratio undefined at x̄
    const double r = taylor_gap(x, xbar, gamma) / gauge;
    k.kappa1 = std::min(k.kappa1, r);
    k.kappa2 = std::max(k.kappa2, r);
  };
  for (int q = 0; q < samples; ++q) visit(x_max * q / (samples - 1));
  // both sides of the gauge switch at |x − x̄| = δ
  for (double e : {xbar - delta, xbar + delta}) {
    visit(e);
    visit(std::nextafter(e, e < xbar ? -1.0 : x_max + 1.0));
  }
  return k;
}

ConvexityConstants scan_convexity(double xbar, double gamma, double R, double x_max,
                                  int samples) {
  require(samples >= 2 && x_max > R && R > xbar, "scan_convexity: bad sampling");
  const double inf = std::numeric_limits<double>::infinity();
  ConvexityConstants c{inf, inf, inf};
  auto visit = [&](double x) {
    const double d = std::abs(x - xbar);
    if (d <= 1e-7) return;
    const double gap = taylor_gap(x, xbar, gamma);
    const double quad = gap / (d * d);
    c.nu1 = std::min(c.nu1, quad);
    if (x <= R)
      c.nu2 = std::min(c.nu2, quad);
    else
      c.nu3 = std::min(c.nu3, gap / std::pow(d, gamma));
  };
  for (int q = 0; q < samples; ++q) visit(x_max * q / (samples - 1));
  // regime edges, where the ratios are typically extremal
  visit(R);
  visit(std::nextafter(R, x_max));
  if (gamma < 2.0) c.nu1 = 0.0;  // no global quadratic bound below γ = 2
  return c;
}

// ---- initial data -----------------------------------------------------------

void constrain_B(SpectralVector& B) {
  const GridSpec& g = B[0].grid();
  for_each_mode(g, [&](std::size_t n, int i, int j, int l, int, int, int) {
    const double k1 = derivative_wavenumber(i, g.nx), k2 = derivative_wavenumber(j, g.ny);
    const double k3 = g.eps * derivative_wavenumber(l, g.nz);
    const double kk = k1 * k1 + k2 * k2;
    if (kk == 0.0) {
      if (k3 != 0.0) B[2][n] = 0.0;
      return;
    }
    // B⊥ ← P⊥B⊥ − (ε k₃ B∥ / |k⊥|²) k⊥
    const Complex dot = (k1 * B[0][n] + k2 * B[1][n]) / kk;
    const Complex target = -k3 * B[2][n] / kk;
    B[0][n] += k1 * (target - dot);
    B[1][n] += k2 * (target - dot);
  });
}

namespace {

// Random real field with |k|^slope amplitude on 0 < |k| <= kmax, scaled to RMS `rms`.
SpectralField random_spectrum(const GridSpec& g, std::mt19937_64& rng, double slope, int kmax,
                              double rms) {
  std::normal_distribution<double> normal(0.0, 1.0);
  SpectralField F(g);
  for_each_mode(g, [&](std::size_t, int, int, int l, int k1, int k2, int k3) {
    const long kk = long(k1) * k1 + long(k2) * k2 + long(k3) * k3;
    if (kk == 0 || kk > long(kmax) * kmax) return;
    // one representative per conjugate pair on the self-conjugate planes
    if ((l == 0 || 2 * l == g.nz) && (k1 < 0 || (k1 == 0 && k2 < 0))) return;
    const double re = normal(rng), im = normal(rng);
    F.set(k1, k2, k3, std::pow(std::sqrt(double(kk)), slope) * Complex(re, im));
  });
  // mean square = Σ_full |F̂|²
  double ms = 0.0;
  for_each_mode(g, [&](std::size_t n, int, int, int l, int, int, int) {
    ms += half_spectrum_weight(l, g.nz) * std::norm(F[n]);
  });
  if (ms > 0.0) F *= Complex(rms / std::sqrt(ms));
  return F;
}

}  // namespace

State make_initial_data(const GridSpec& g, const PhysicalParams& p, const InitSpec& spec) {
  g.validate();
  p.validate();
  require(std::abs(g.eps - p.eps) <= 1e-14 * p.eps, "grid eps and params eps differ");
  require(spec.amplitude >= 0.0 && std::isfinite(spec.amplitude), "amplitude must be >= 0");
  const int kmax = spec.kmax > 0 ? spec.kmax : std::min({g.nx, g.ny, g.nz}) / 4;
  require(kmax >= 1, "kmax must be positive");

  // fixed draw order: ϱ₀, v₁, v₂, v₃, B₁, B₂, B₃
  std::mt19937_64 rng(spec.seed);
  SpectralField varrho = random_spectrum(g, rng, spec.spectrum_slope, kmax, spec.amplitude);
  SpectralVector V, Bh;
  for (auto& c : V) c = random_spectrum(g, rng, spec.spectrum_slope, kmax, spec.amplitude);
  for (auto& c : Bh) c = random_spectrum(g, rng, spec.spectrum_slope, kmax, spec.amplitude);

  if (spec.kind == InitKind::prepared) {
    project_P_perp(V[0], V[1]);
    // B∥ = −bϱ₀; the k⊥ = 0 column of ϱ₀ is cleared because B∥ must vanish there
    for_each_mode(g, [&](std::size_t n, int i, int j, int l, int, int, int) {
      if (derivative_wavenumber(i, g.nx) == 0 && derivative_wavenumber(j, g.ny) == 0 &&
          derivative_wavenumber(l, g.nz) != 0)
        varrho[n] = 0.0;
      Bh[2][n] = -p.b() * varrho[n];
    });
  }
  constrain_B(Bh);

  State s;
  s.rho = to_physical(varrho);
  for (auto& r : s.rho.values()) r = 1.0 + g.eps * r;
  for (double r : s.rho.values())
    if (!(r > 0.0)) throw DomainError("initial density not positive; reduce the amplitude");
  s.v = to_physical(V);
  s.B = to_physical(Bh);
  s.t = 0.0;
  return s;
}

// ---- I/O --------------------------------------------------------------------

void write_state(const std::filesystem::path& path, const State& s) {
  const std::vector<ScalarField> fields = {s.rho, s.v[0], s.v[1], s.v[2], s.B[0], s.B[1], s.B[2]};
  write_snapshot(path, fields, s.t);
}

State state_from_snapshot(const Snapshot& snap) {
  require(snap.fields.size() == 7, "snapshot does not hold a penalized-system state");
  const auto& f = snap.fields;
  return {f[0], {f[1], f[2], f[3]}, {f[4], f[5], f[6]}, snap.trailer};
}

State read_state(const std::filesystem::path& path) { return state_from_snapshot(read_snapshot(path)); }

std::string gamma_hypothesis_warning(double gamma) {
  if (gamma > 1.5) return {};
  return "gamma = " + std::to_string(gamma) +
         " is outside the convergence theory's hypothesis gamma > 3/2";
}

}  // namespace rmhd
