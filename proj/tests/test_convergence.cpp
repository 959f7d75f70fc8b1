#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

#include "rmhd/convergence.hpp"
#include "rmhd/diagnostics.hpp"

using namespace rmhd;

namespace {

RunConfig tiny() {
  RunConfig c = default_config();
  c.grid = {8, 8, 4, 0.2};
  c.params.eps = 0.2;
  c.params.mu_perp = c.params.eta_perp = 0.05;
  c.solver.dt = 0.002;
  c.solver.t_end = 0.04;
  c.solver.snapshot_every = 0.01;
  return c;
}

std::string first_line(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::string s;
  std::getline(in, s);
  return s;
}

}  // namespace

TEST_CASE("order fit") {
  const std::vector<double> x{0.4, 0.2, 0.1, 0.05};
  std::vector<double> y;
  for (double e : x) y.push_back(3.0 * e * e);
  const OrderFit f = fit_order("q", x, y);
  CHECK(f.order == doctest::Approx(2.0));
  CHECK(f.points == 4);
  CHECK(f.hi - f.lo < 1e-8);

  // noisy data: the band contains the fitted slope and widens
  const std::vector<double> z{0.41, 0.19, 0.11, 0.048};
  const OrderFit g = fit_order("z", x, z);
  CHECK(g.lo < g.order);
  CHECK(g.order < g.hi);
  CHECK(g.hi - g.lo > 1e-3);

  const OrderFit two = fit_order("two", {0.2, 0.1}, {0.4, 0.1});
  CHECK(two.order == doctest::Approx(2.0));
  CHECK(std::isinf(two.hi));

  // nonpositive entries are dropped
  CHECK(fit_order("d", {0.4, 0.2, 0.1}, {0.0, 0.2, 0.1}).points == 2);
  CHECK_THROWS_AS(fit_order("d", {0.4, 0.2}, {0.0, 0.2}), ContractViolation);
  CHECK_THROWS_AS(fit_order("d", {0.4}, {0.1, 0.2}), ContractViolation);
}

TEST_CASE("sweep plan validation") {
  SweepPlan plan;
  CHECK_THROWS_AS(plan.validate(), ContractViolation);
  plan.eps_list = {0.2, 0.1, 0.1};
  CHECK_THROWS_AS(plan.validate(), ContractViolation);
  plan.eps_list = {0.2, -0.1};
  CHECK_THROWS_AS(plan.validate(), ContractViolation);
  plan.eps_list = {0.4, 0.2};
  CHECK_NOTHROW(plan.validate());
}

TEST_CASE("sweep members") {
  const RunConfig c = tiny();
  const SweepRow a = run_sweep_member(c, 0.2), b = run_sweep_member(c, 0.1);
  REQUIRE(a.ok);
  REQUIRE(b.ok);
  // the limit reference does not see ε
  CHECK(a.reference_vperp_final == doctest::Approx(b.reference_vperp_final).epsilon(1e-12));
  CHECK(a.rho_dev_L2_sup > b.rho_dev_L2_sup);
  CHECK(a.div_B_rel_max < 1e-12);
  CHECK(a.div_perp_B_rel_max < 1e-12);
  CHECK(a.wallclock_s > 0.0);

  RunConfig bad = c;
  bad.init.amplitude = 50.0;
  const SweepRow f = run_sweep_member(bad, 1.0);
  CHECK_FALSE(f.ok);
  CHECK_FALSE(f.error.empty());
}

TEST_CASE("sweep keeps failed rows out of the fit") {
  SweepPlan plan;
  plan.base = tiny();
  plan.base.init.amplitude = 2.0;
  plan.eps_list = {5.0, 0.02, 0.01};
  plan.max_parallel = 1;
  const auto dir = std::filesystem::temp_directory_path() / "rmhd_test_sweep";
  std::filesystem::remove_all(dir);
  const SweepResult r = eps_sweep(plan, dir);
  REQUIRE(r.rows.size() == 3);
  CHECK_FALSE(r.rows[0].ok);
  CHECK(r.rows[1].ok);
  CHECK(r.rows[2].ok);
  REQUIRE_FALSE(r.orders.empty());
  for (const auto& o : r.orders) CHECK(o.points == 2);
  CHECK(first_line(dir / "sweep.csv") ==
        "eps,rho_dev_sup,vperp_err_L2,phi_Hm1_sup,Qv_avg,wallclock_s,rho_dev_L2_sup,"
        "filtered_var_max,phi_perp_Hm1_sup,status");
  CHECK(first_line(dir / "orders.csv").rfind("quantity,", 0) == 0);
  std::filesystem::remove_all(dir);
}

TEST_CASE("filtered profile of a transverse linear run is constant") {
  const GridSpec g{16, 16, 8, 0.1};
  PhysicalParams p;
  p.eps = 0.1;
  State s = make_rest_state(g);
  s.rho = sample(g, [](double x, double y, double) { return 1.0 + 0.01 * std::cos(x) * std::sin(2 * y); });
  s.v[1] = sample(g, [](double, double y, double) { return 0.05 * std::sin(y); });
  SolverConfig cfg;
  cfg.linearized = true;
  cfg.dt = 0.001;
  cfg.t_end = 0.2;
  cfg.snapshot_every = 0.01;
  std::vector<State> traj;
  run_mhd(cfg, p, s, {.on_sample = [&](const State& st, const DiagnosticsRecord&) { traj.push_back(st); }});
  REQUIRE(traj.size() == 21);
  const FilteredReport rep = compare_filtered(traj, p);
  CHECK(rep.rates.size() == 20);
  CHECK(rep.max_raw_rate > 0.1);
  CHECK(rep.max_rate < 1e-10 * rep.max_raw_rate);
  CHECK_THROWS_AS(compare_filtered(std::vector<State>(traj.begin(), traj.begin() + 9), p),
                  ContractViolation);
}
