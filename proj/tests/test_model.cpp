#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "rmhd/model.hpp"

using namespace rmhd;

namespace {

PhysicalParams params(double eps = 0.1) {
  PhysicalParams p;
  p.a = 1.0;
  p.gamma = 2.0;
  p.eps = eps;
  return p;
}

}  // namespace

TEST_CASE("derived constants") {
  PhysicalParams p = params();
  p.a = 0.5;
  p.gamma = 3.0;
  CHECK(p.b() == 1.5);
  CHECK(p.c_fast() == 2.5);
  CHECK(p.c_par() == doctest::Approx(1.0 + 1.0 / 1.5));
  p.gamma = 1.0;
  CHECK_THROWS_AS(p.validate(), ContractViolation);
  p.gamma = 2.0;
  p.mu_perp = -1.0;
  CHECK_THROWS_AS(p.validate(), ContractViolation);
}

TEST_CASE("pressure law") {
  const GridSpec g{8, 8, 4, 0.1};
  PhysicalParams p = params();
  CHECK(pressure(ScalarField(g, 1.0), p)[3] == doctest::Approx(1.0));
  CHECK(pressure(ScalarField(g, 1.1), p)[0] == doctest::Approx(1.21));
  p.gamma = 1.5;
  p.a = 0.5;
  CHECK(pressure(ScalarField(g, 4.0), p)[5] == doctest::Approx(4.0));
  CHECK_THROWS_AS(pressure(ScalarField(g, 0.0), p), DomainError);
}

TEST_CASE("pi functionals") {
  const GridSpec g{8, 8, 4, 0.1};
  const PhysicalParams p = params(0.1);
  CHECK(pi_functional(ScalarField(g, 1.0), PiVariant::pi3, 1.0, p) == doctest::Approx(0.0));
  CHECK(pi_density(1.1, PiVariant::pi3, 1.0, p) == doctest::Approx(1.0));
  CHECK_THROWS_AS(pi_functional(ScalarField(g, 1.0), PiVariant::pi3, 1.2, p), ContractViolation);
  // pi2 >= 0 with equality only at the mean
  const ScalarField r = sample(g, [](double x, double, double) { return 1.0 + 0.3 * std::sin(x); });
  CHECK(pi_functional(r, PiVariant::pi2, 1.0, p) > 0.0);
  CHECK(std::abs(pi_functional(ScalarField(g, 1.3), PiVariant::pi2, 1.3, p)) < 1e-12);
  // pi1 and pi2 differ by a linear functional of ρ (mass-conserved)
  const ScalarField r2 = sample(g, [](double, double y, double) { return 1.0 + 0.2 * std::cos(y); });
  const double d1 = pi_functional(r, PiVariant::pi1, 1.0, p) - pi_functional(r, PiVariant::pi2, 1.0, p);
  const double d2 = pi_functional(r2, PiVariant::pi1, 1.0, p) - pi_functional(r2, PiVariant::pi2, 1.0, p);
  CHECK(d1 == doctest::Approx(d2).epsilon(1e-10));
}

TEST_CASE("energy and dissipation") {
  const GridSpec g{16, 16, 8, 0.5};
  PhysicalParams p = params(0.5);
  State s = make_rest_state(g);
  CHECK(energy(s, PiVariant::pi2, 1.0, p) == doctest::Approx(0.0));
  CHECK(dissipation(s, p) == 0.0);
  s.v[0] = ScalarField(g, 0.3);
  s.B[2] = ScalarField(g, -0.2);
  p.mu_perp = p.mu_par = p.eta_perp = p.eta_par = p.lambda_bulk = 1.0;
  CHECK(dissipation(s, p) == doctest::Approx(0.0));
  CHECK(energy(s, PiVariant::pi2, 1.0, p) ==
        doctest::Approx(kBoxVolume * (0.5 * 0.09 + 0.5 * 0.04)));

  PhysicalParams q = params(0.5);
  q.mu_perp = 1.0;
  State t = make_rest_state(g);
  t.v[0] = sample(g, [](double x, double, double) { return std::sin(x); });
  CHECK(dissipation(t, q) == doctest::Approx(kBoxVolume / 2).epsilon(1e-12));

  // translation invariance by a grid shift
  State u = make_rest_state(g);
  u.rho = sample(g, [](double x, double y, double z) { return 1.0 + 0.1 * std::sin(x + y) * std::cos(z); });
  u.v[1] = sample(g, [](double x, double, double z) { return std::cos(2 * x - z); });
  State w = u;
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j)
      for (int k = 0; k < g.nz; ++k) {
        w.rho(i, j, k) = u.rho((i + 3) % g.nx, j, (k + 1) % g.nz);
        w.v[1](i, j, k) = u.v[1]((i + 3) % g.nx, j, (k + 1) % g.nz);
      }
  CHECK(energy(w, PiVariant::pi1, 1.0, q) ==
        doctest::Approx(energy(u, PiVariant::pi1, 1.0, q)).epsilon(1e-10));
  CHECK(dissipation(w, q) == doctest::Approx(dissipation(u, q)).epsilon(1e-10));
}

TEST_CASE("convexity helpers") {
  CHECK(taylor_gap(1.3, 1.3, 1.7) == doctest::Approx(0.0));
  CHECK(taylor_gap(1.1, 1.0, 2.0) == doctest::Approx(0.01));
  CHECK_THROWS_AS(taylor_gap(-0.1, 1.0, 2.0), DomainError);
  CHECK(orlicz_gauge(1.2, 1.0, 3.0, 0.5) == doctest::Approx(0.04));
  CHECK(orlicz_gauge(3.0, 1.0, 3.0, 0.5) == doctest::Approx(8.0));

  const SandwichConstants k = scan_sandwich(1.0, 1.7, 0.5, 10.0, 10000);
  CHECK(k.kappa1 > 0.0);
  CHECK(std::isfinite(k.kappa2));
  for (double x = 0.0; x <= 10.0; x += 0.0137) {
    const double gauge = orlicz_gauge(x, 1.0, 1.7, 0.5);
    if (gauge < 1e-12) continue;
    CHECK(taylor_gap(x, 1.0, 1.7) >= k.kappa1 * gauge * (1 - 1e-6));
    CHECK(taylor_gap(x, 1.0, 1.7) <= k.kappa2 * gauge * (1 + 1e-6));
  }
  const ConvexityConstants c = scan_convexity(1.0, 2.5, 2.0, 20.0, 10000);
  CHECK(c.nu1 > 0.0);
  const ConvexityConstants d = scan_convexity(1.0, 1.5, 2.0, 20.0, 10000);
  CHECK(d.nu1 == 0.0);
  CHECK(d.nu2 > 0.0);
  CHECK(d.nu3 > 0.0);
}

TEST_CASE("initial data") {
  const GridSpec g{16, 16, 8, 0.2};
  const PhysicalParams p = params(0.2);
  InitSpec spec;
  spec.seed = 42;
  const State s = make_initial_data(g, p, spec);
  CHECK(s.rho.mean() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(sobolev_norm(div_eps(to_spectral(s.B)), 0.0) <= 1e-10);
  CHECK(sobolev_norm(div_perp(to_spectral(s.v[0]), to_spectral(s.v[1])), 0.0) <= 1e-10);
  ScalarField phi(g);
  for (std::size_t n = 0; n < phi.size(); ++n) phi[n] = p.b() * (s.rho[n] - 1.0) / p.eps + s.B[2][n];
  CHECK(l2_norm(phi) <= 1e-8);

  const State again = make_initial_data(g, p, spec);
  CHECK(l2_norm(again.rho - s.rho) == 0.0);
  CHECK(l2_norm(again.B[0] - s.B[0]) == 0.0);

  spec.kind = InitKind::unprepared;
  const State u = make_initial_data(g, p, spec);
  CHECK(sobolev_norm(div_eps(to_spectral(u.B)), 0.0) <= 1e-10);
  CHECK(sobolev_norm(div_perp(to_spectral(u.v[0]), to_spectral(u.v[1])), 0.0) > 1e-3);

  // the same draw at another eps keeps ϱ₀ fixed
  const GridSpec g2{16, 16, 8, 0.1};
  spec.kind = InitKind::prepared;
  const State s2 = make_initial_data(g2, params(0.1), spec);
  const State s1 = make_initial_data(g, p, spec);
  double gap = 0.0;
  for (std::size_t n = 0; n < s1.rho.size(); ++n)
    gap = std::max(gap, std::abs((s2.rho[n] - 1.0) / 0.1 - (s1.rho[n] - 1.0) / 0.2));
  CHECK(gap < 1e-12);

  spec.amplitude = 100.0;
  CHECK_THROWS_AS(make_initial_data(GridSpec{16, 16, 8, 1.0}, params(1.0), spec), DomainError);
  CHECK(init_kind_from_name("unprepared") == InitKind::unprepared);
  CHECK_THROWS_AS(init_kind_from_name("warm"), ContractViolation);
}

TEST_CASE("constrain_B touches only the irrotational transverse part") {
  const GridSpec g{16, 16, 8, 0.3};
  SpectralVector B = to_spectral(VectorField{
      sample(g, [](double x, double y, double z) { return std::sin(x + z) + std::cos(y); }),
      sample(g, [](double x, double y, double z) { return std::cos(2 * x - y + z); }),
      sample(g, [](double x, double y, double z) { return std::sin(x - y + 2 * z) + std::cos(z); })});
  SpectralField P1 = B[0], P2 = B[1];
  project_P_perp(P1, P2);
  const SpectralField B3 = B[2];
  constrain_B(B);
  CHECK(sobolev_norm(div_eps(B), 0.0) < 1e-12);
  SpectralField Q1 = B[0], Q2 = B[1];
  project_P_perp(Q1, Q2);
  CHECK(sobolev_norm(Q1 - P1, 0.0) < 1e-13);
  // B∥ unchanged off the k⊥ = 0 column
  CHECK(std::abs(B[2].at(1, -1, 2) - B3.at(1, -1, 2)) < 1e-15);
  CHECK(std::abs(B[2].at(0, 0, 1)) < 1e-15);
}

TEST_CASE("state snapshot round trip") {
  const GridSpec g{8, 8, 4, 0.25};
  InitSpec spec;
  State s = make_initial_data(g, params(0.25), spec);
  s.t = 0.125;
  const auto path = std::filesystem::temp_directory_path() / "rmhd_test_state.bin";
  write_state(path, s);
  const State r = read_state(path);
  CHECK(r.t == 0.125);
  CHECK(r.grid() == g);
  CHECK(l2_norm(r.B[2] - s.B[2]) == 0.0);
  std::filesystem::remove(path);
}

TEST_CASE("gamma hypothesis warning") {
  CHECK(gamma_hypothesis_warning(2.0).empty());
  CHECK_FALSE(gamma_hypothesis_warning(1.2).empty());
}
