#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "rmhd/diagnostics.hpp"
#include "rmhd/rmhd_solver.hpp"

using namespace rmhd;

namespace {

PhysicalParams params() {
  PhysicalParams p;
  p.eps = 0.2;
  p.gamma = 2.0;
  return p;
}

// Divergence-free transverse field with a z dependence.
PerpField solenoidal(const GridSpec& g, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ScalarField a(g), b(g);
  for (auto& x : a.values()) x = u(rng);
  for (auto& x : b.values()) x = u(rng);
  SpectralField A = mollify(to_spectral(a), 0.6), B = mollify(to_spectral(b), 0.6);
  project_P_perp(A, B);
  return {0.5 * to_physical(A), 0.5 * to_physical(B)};
}

double rate_norm(const RmhdRate& r) {
  return l2_norm(r.B_perp[0]) + l2_norm(r.B_perp[1]) + l2_norm(r.v_perp[0]) + l2_norm(r.v_perp[1]) +
         l2_norm(r.B_par) + l2_norm(r.v_par);
}

}  // namespace

TEST_CASE("limit initial data") {
  const GridSpec g{16, 16, 8, 0.2};
  const PhysicalParams p = params();
  State s = make_rest_state(g);
  s.rho = sample(g, [](double x, double, double) { return 1.0 + 0.2 * 0.3 * std::cos(x); });
  s.B[2] = sample(g, [](double, double y, double) { return 0.2 * std::sin(y); });
  s.v[0] = sample(g, [](double x, double y, double) { return std::sin(x) + std::cos(y); });
  s.v[2] = sample(g, [](double, double, double z) { return std::cos(z); });
  const RmhdState r = project_limit_init(s, p);
  const ScalarField Bpar = sample(g, [&](double x, double y, double) {
    return (0.2 * std::sin(y) - 0.3 * std::cos(x)) / p.c_par();
  });
  CHECK(l2_norm(r.B_par - Bpar) < 1e-13);
  CHECK(l2_norm(r.v_perp[0] - sample(g, [](double, double y, double) { return std::cos(y); })) < 1e-13);
  CHECK(l2_norm(r.v_perp[1]) < 1e-13);
  CHECK(l2_norm(r.v_par - s.v[2]) == 0.0);
}

TEST_CASE("zero state and aligned fields") {
  const GridSpec g{16, 16, 8, 0.2};
  PhysicalParams p = params();
  p.mu_perp = p.eta_par = 0.1;
  CHECK(rate_norm(rmhd_rhs(make_zero_rmhd(g), p)) == 0.0);

  // v⊥ = B⊥ cancels every transverse nonlinearity: only ∂∥ terms remain
  RmhdState s = make_zero_rmhd(g);
  s.B_perp = solenoidal(g, 2);
  s.v_perp = s.B_perp;
  const RmhdRate r = rmhd_rhs(s, params(), false);
  for (int c = 0; c < 2; ++c) {
    const ScalarField dz = to_physical(d_par(to_spectral(s.B_perp[c])));
    CHECK(l2_norm(r.B_perp[c] - dz) < 1e-12);
    CHECK(l2_norm(r.v_perp[c] - dz) < 1e-12);
  }
}

TEST_CASE("parallel block is linear in the parallel fields") {
  const GridSpec g{16, 16, 8, 0.2};
  const PhysicalParams p = params();
  RmhdState s = make_zero_rmhd(g);
  s.B_perp = solenoidal(g, 3);
  s.v_perp = solenoidal(g, 4);
  s.B_par = sample(g, [](double x, double, double z) { return std::sin(x + z); });
  s.v_par = sample(g, [](double, double y, double z) { return std::cos(y - 2 * z); });
  RmhdState t = s;
  t.B_par *= 2.0;
  t.v_par *= 2.0;
  const RmhdRate a = rmhd_rhs(s, p), b = rmhd_rhs(t, p);
  CHECK(l2_norm(b.B_par - 2.0 * a.B_par) < 1e-12);
  CHECK(l2_norm(b.v_par - 2.0 * a.v_par) < 1e-12);
  CHECK(l2_norm(b.v_perp[0] - a.v_perp[0]) + l2_norm(b.B_perp[1] - a.B_perp[1]) == 0.0);
}

TEST_CASE("linear wave frequencies") {
  const GridSpec g{16, 16, 8, 0.2};
  const PhysicalParams p = params();
  SolverConfig cfg;

  // shear-Alfvén wave along z: period 2π
  RmhdState s = make_zero_rmhd(g);
  s.v_perp[0] = sample(g, [](double, double y, double z) { return 0.1 * std::cos(y) * std::cos(z); });
  RmhdSolver alf(p, cfg, s);
  for (int i = 0; i < 400; ++i) alf.step(kTwoPi / 400);
  const RmhdState a = alf.state();
  // second-order phase error after one period: 2π (ωh)² / 6
  const double phase = kTwoPi * std::pow(kTwoPi / 400, 2) / 6.0, amp = l2_norm(s.v_perp[0]);
  CHECK(l2_norm(a.v_perp[0] - s.v_perp[0]) < 1.5 * phase * amp);
  CHECK(l2_norm(a.B_perp[0]) < 1.5 * phase * amp);

  // parallel slow wave: ω = |k∥| / √𝕔
  RmhdState q = make_zero_rmhd(g);
  q.B_par = sample(g, [](double, double, double z) { return std::cos(z); });
  const double T = kTwoPi * std::sqrt(p.c_par());
  RmhdSolver par(p, cfg, q);
  for (int i = 0; i < 400; ++i) par.step(T / 400);
  CHECK(l2_norm(par.state().B_par - q.B_par) < 1e-4);
  RmhdSolver halfway(p, cfg, q);
  for (int i = 0; i < 200; ++i) halfway.step(T / 400);
  CHECK(l2_norm(halfway.state().B_par + q.B_par) < 1e-4);
}

TEST_CASE("limit run: energy, constraint, output") {
  const GridSpec g{16, 16, 8, 0.2};
  PhysicalParams p = params();
  p.mu_perp = p.eta_perp = 0.02;  // parallel coefficients left at zero on purpose
  RmhdState s = make_zero_rmhd(g);
  s.B_perp = solenoidal(g, 5);
  s.v_perp = solenoidal(g, 6);
  s.B_par = sample(g, [](double x, double, double z) { return 0.2 * std::sin(x - z); });
  SolverConfig cfg;
  cfg.t_end = 0.5;
  cfg.snapshot_every = 0.1;
  cfg.dt = 0.005;
  const auto dir = std::filesystem::temp_directory_path() / "rmhd_test_limit";
  std::filesystem::remove_all(dir);
  const RmhdRunResult r = rmhd_run(cfg, p, s, {.out_dir = dir});
  REQUIRE(r.records.size() == 6);
  for (std::size_t i = 0; i < r.records.size(); ++i) {
    CHECK(r.records[i].div_perp_B_rel < 1e-12);
    CHECK(std::abs(r.records[i].defect) < 1e-4);
    if (i) CHECK(r.records[i].energy <= r.records[i - 1].energy);
  }
  CHECK(std::filesystem::exists(dir / "rmhd_diagnostics.csv"));
  const RmhdState back = read_rmhd_state(dir / ("rmhd_" + snapshot_name(0.5)));
  CHECK(back.t == doctest::Approx(0.5));
  CHECK(l2_norm(back.B_par - r.final_state.B_par) == 0.0);
  std::filesystem::remove_all(dir);

  // ideal run conserves energy to time-discretization accuracy
  const PhysicalParams ideal = params();
  const RmhdRunResult q = rmhd_run(cfg, ideal, s);
  CHECK(std::abs(q.records.back().energy / q.records.front().energy - 1.0) < 1e-5);
  CHECK(rmhd_dissipation(s, ideal) == 0.0);
}
