#include <cmath>
#include <map>
#include <mutex>
#include <numeric>

#include "rmhd/kernels.hpp"
#include "rmhd/spectral.hpp"

namespace rmhd {

namespace {

const Complex I(0.0, 1.0);

void check_same(const SpectralField& a, const SpectralField& b) {
  require(a.grid().same_shape(b.grid()), "spectral operands on different grids");
}

// Multiply every mode by f(k1, k2, k3) with derivative wavenumbers.
template <class F>
SpectralField map_symbol(const SpectralField& in, F&& f) {
  const GridSpec& g = in.grid();
  SpectralField out(g);
  for_each_mode(g, [&](std::size_t n, int i, int j, int l, int, int, int) {
    const double k1 = derivative_wavenumber(i, g.nx);
    const double k2 = derivative_wavenumber(j, g.ny);
    const double k3 = derivative_wavenumber(l, g.nz);
    out[n] = f(k1, k2, k3) * in[n];
  });
  return out;
}

}  // namespace

SpectralField d1(const SpectralField& F) {
  return map_symbol(F, [](double k1, double, double) { return I * k1; });
}
SpectralField d2(const SpectralField& F) {
  return map_symbol(F, [](double, double k2, double) { return I * k2; });
}
SpectralField d_par(const SpectralField& F) {
  return map_symbol(F, [](double, double, double k3) { return I * k3; });
}
SpectralField lap_perp(const SpectralField& F) {
  return map_symbol(F, [](double k1, double k2, double) { return Complex(-(k1 * k1 + k2 * k2)); });
}
SpectralField lap_par(const SpectralField& F) {
  return map_symbol(F, [](double, double, double k3) { return Complex(-k3 * k3); });
}

SpectralPerp grad_perp(const SpectralField& F) { return {d1(F), d2(F)}; }

SpectralVector grad_eps(const SpectralField& F) {
  SpectralField g3 = d_par(F);
  g3 *= Complex(F.grid().eps);
  return {d1(F), d2(F), std::move(g3)};
}

SpectralField div_perp(const SpectralField& F1, const SpectralField& F2) {
  check_same(F1, F2);
  return d1(F1) + d2(F2);
}

SpectralField div_eps(const SpectralVector& F) {
  check_same(F[0], F[1]);
  check_same(F[0], F[2]);
  SpectralField out = d1(F[0]) + d2(F[1]);
  SpectralField g3 = d_par(F[2]);
  g3 *= Complex(F[2].grid().eps);
  return out += g3;
}

SpectralVector curl_eps(const SpectralVector& F) {
  const double eps = F[0].grid().eps;
  SpectralField e3F1 = d_par(F[0]), e3F2 = d_par(F[1]);
  e3F1 *= Complex(eps);
  e3F2 *= Complex(eps);
  return {d2(F[2]) - e3F2, e3F1 - d1(F[2]), d1(F[1]) - d2(F[0])};
}

DerivOp deriv_op_from_name(const std::string& name) {
  static const std::map<std::string, DerivOp> table = {
      {"d1", DerivOp::d1},           {"d2", DerivOp::d2},
      {"d_par", DerivOp::d_par},     {"grad_perp", DerivOp::grad_perp},
      {"grad_eps", DerivOp::grad_eps}, {"div_perp", DerivOp::div_perp},
      {"div_eps", DerivOp::div_eps}, {"lap_perp", DerivOp::lap_perp},
      {"lap_par", DerivOp::lap_par}};
  auto it = table.find(name);
  if (it == table.end()) throw ContractViolation("unknown derivative operator '" + name + "'");
  return it->second;
}

std::vector<SpectralField> apply_derivative(std::span<const SpectralField> in, DerivOp op) {
  auto need = [&](std::size_t n) {
    require(in.size() == n, "derivative operator received the wrong number of components");
  };
  switch (op) {
    case DerivOp::d1: need(1); return {d1(in[0])};
    case DerivOp::d2: need(1); return {d2(in[0])};
    case DerivOp::d_par: need(1); return {d_par(in[0])};
    case DerivOp::lap_perp: need(1); return {lap_perp(in[0])};
    case DerivOp::lap_par: need(1); return {lap_par(in[0])};
    case DerivOp::grad_perp: {
      need(1);
      auto g = grad_perp(in[0]);
      return {std::move(g[0]), std::move(g[1])};
    }
    case DerivOp::grad_eps: {
      need(1);
      auto g = grad_eps(in[0]);
      return {std::move(g[0]), std::move(g[1]), std::move(g[2])};
    }
    case DerivOp::div_perp: need(2); return {div_perp(in[0], in[1])};
    case DerivOp::div_eps: need(3); return {div_eps({in[0], in[1], in[2]})};
  }
  throw ContractViolation("unknown derivative operator tag");
}

// ---- projections ----------------------------------------------------------

void project_Q_perp(SpectralField& F1, SpectralField& F2) {
  check_same(F1, F2);
  const GridSpec& g = F1.grid();
  for_each_mode(g, [&](std::size_t n, int i, int j, int, int, int, int) {
    const double k1 = derivative_wavenumber(i, g.nx), k2 = derivative_wavenumber(j, g.ny);
    const double kk = k1 * k1 + k2 * k2;
    if (kk == 0.0) {
      F1[n] = F2[n] = 0.0;
      return;
    }
    const Complex dot = (k1 * F1[n] + k2 * F2[n]) / kk;
    F1[n] = k1 * dot;
    F2[n] = k2 * dot;
  });
}

void project_P_perp(SpectralField& F1, SpectralField& F2) {
  check_same(F1, F2);
  const GridSpec& g = F1.grid();
  for_each_mode(g, [&](std::size_t n, int i, int j, int, int, int, int) {
    const double k1 = derivative_wavenumber(i, g.nx), k2 = derivative_wavenumber(j, g.ny);
    const double kk = k1 * k1 + k2 * k2;
    if (kk == 0.0) return;
    const Complex dot = (k1 * F1[n] + k2 * F2[n]) / kk;
    F1[n] -= k1 * dot;
    F2[n] -= k2 * dot;
  });
}

void project_div_eps_free(SpectralVector& F) {
  const GridSpec& g = F[0].grid();
  for_each_mode(g, [&](std::size_t n, int i, int j, int l, int, int, int) {
    const double k1 = derivative_wavenumber(i, g.nx), k2 = derivative_wavenumber(j, g.ny);
    const double k3 = g.eps * derivative_wavenumber(l, g.nz);
    const double kk = k1 * k1 + k2 * k2 + k3 * k3;
    if (kk == 0.0) return;
    const Complex dot = (k1 * F[0][n] + k2 * F[1][n] + k3 * F[2][n]) / kk;
    F[0][n] -= k1 * dot;
    F[1][n] -= k2 * dot;
    F[2][n] -= k3 * dot;
  });
}

PerpSplit leray_perp(const PerpField& v) {
  require(v[0].grid().same_shape(v[1].grid()), "leray_perp components on different grids");
  SpectralField P1 = to_spectral(v[0]), P2 = to_spectral(v[1]);
  SpectralField Q1 = P1, Q2 = P2;
  project_P_perp(P1, P2);
  project_Q_perp(Q1, Q2);
  return {{to_physical(P1), to_physical(P2)}, {to_physical(Q1), to_physical(Q2)}};
}

// ---- norms ----------------------------------------------------------------

double sobolev_norm(const SpectralField& F, double s) {
  require(std::isfinite(s), "sobolev exponent must be finite");
  const GridSpec& g = F.grid();
  double acc = 0.0;
  for_each_mode(g, [&](std::size_t n, int, int, int l, int k1, int k2, int k3) {
    const double kk = double(k1) * k1 + double(k2) * k2 + double(k3) * k3;
    acc += half_spectrum_weight(l, g.nz) * std::pow(1.0 + kk, s) * std::norm(F[n]);
  });
  return std::sqrt(acc * kBoxVolume);
}

double sobolev_norm(const ScalarField& f, double s) { return sobolev_norm(to_spectral(f), s); }

double sobolev_norm(std::span<const SpectralField> F, double s) {
  double acc = 0.0;
  for (const auto& c : F) {
    const double v = sobolev_norm(c, s);
    acc += v * v;
  }
  return std::sqrt(acc);
}

double l2_norm(const ScalarField& f) {
  return std::sqrt(kernels::omp::sum_squares(f.values()) / double(f.size()) * kBoxVolume);
}

double l2_norm(std::span<const ScalarField> f) {
  double acc = 0.0;
  for (const auto& c : f) acc += kernels::omp::sum_squares(c.values()) / double(c.size());
  return std::sqrt(acc * kBoxVolume);
}

double lp_norm(const ScalarField& f, double p) {
  require(p >= 1.0 && std::isfinite(p), "lp_norm needs finite p >= 1");
  double acc = 0.0;
  for (double v : f.values()) acc += std::pow(std::abs(v), p);
  return std::pow(acc / double(f.size()) * kBoxVolume, 1.0 / p);
}

double inner(const ScalarField& f, const ScalarField& g) {
  require(f.grid().same_shape(g.grid()), "inner product on different grids");
  double acc = 0.0;
  for (std::size_t n = 0; n < f.size(); ++n) acc += f[n] * g[n];
  return acc / double(f.size()) * kBoxVolume;
}

double sup_norm(const ScalarField& f) {
  double m = 0.0;
  for (double v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

// ---- dealiasing -----------------------------------------------------------

bool dealias_keeps(int k, int n) { return 3 * std::abs(k) <= n; }

void dealias_inplace(SpectralField& F) {
  const GridSpec& g = F.grid();
  for_each_mode(g, [&](std::size_t n, int, int, int, int k1, int k2, int k3) {
    if (!dealias_keeps(k1, g.nx) || !dealias_keeps(k2, g.ny) || !dealias_keeps(k3, g.nz))
      F[n] = 0.0;
  });
}

SpectralField dealias(SpectralField F) {
  dealias_inplace(F);
  return F;
}

ScalarField product(const ScalarField& a, const ScalarField& b, bool truncate) {
  require(a.grid().same_shape(b.grid()), "product operands on different grids");
  ScalarField out(a.grid());
  kernels::omp::multiply(a.values(), b.values(), out.values());
  if (!truncate) return out;
  SpectralField F = to_spectral(out);
  dealias_inplace(F);
  return to_physical(F);
}

// ---- mollification --------------------------------------------------------

double bump_fourier(double r, const BumpKernel& kernel) {
  // radial transform 4π ∫₀¹ χ(ρ) ρ² sinc(rρ) dρ, normalized by its value at r = 0;
  // the integrand is flat to all orders at both ends so the trapezoid rule is spectral
  const int n = kernel.quadrature_points;
  require(n >= 16, "bump quadrature needs at least 16 points");
  auto chi = [](double rho) { return rho < 1.0 ? std::exp(-1.0 / (1.0 - rho * rho)) : 0.0; };
  double num = 0.0, den = 0.0;
  for (int q = 1; q < n; ++q) {
    const double rho = double(q) / n;
    const double w = chi(rho) * rho * rho;
    const double x = r * rho;
    num += w * (x == 0.0 ? 1.0 : std::sin(x) / x);
    den += w;
  }
  return num / den;
}

SpectralField mollify(const SpectralField& F, double eta, const BumpKernel& kernel) {
  require(eta > 0.0 && eta < 1.0, "mollifier eta must lie in (0, 1)");
  const GridSpec& g = F.grid();
  SpectralField out(g);
  std::map<long, double> cache;  // multiplier depends only on |k|²
  for_each_mode(g, [&](std::size_t n, int, int, int, int k1, int k2, int k3) {
    const long kk = long(k1) * k1 + long(k2) * k2 + long(k3) * k3;
    auto it = cache.find(kk);
    if (it == cache.end())
      it = cache.emplace(kk, bump_fourier(eta * std::sqrt(double(kk)), kernel)).first;
    out[n] = it->second * F[n];
  });
  return out;
}

ScalarField mollify(const ScalarField& f, double eta, const BumpKernel& kernel) {
  return to_physical(mollify(to_spectral(f), eta, kernel));
}

}  // namespace rmhd
