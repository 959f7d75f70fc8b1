#include "rmhd/convergence.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <future>
#include <iomanip>
#include <limits>
#include <thread>

#include "rmhd/diagnostics.hpp"
#include "rmhd/rmhd_solver.hpp"

namespace rmhd {

void SweepPlan::validate() const {
  require(!eps_list.empty(), "sweep needs at least one eps");
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    require(eps_list[i] > 0.0, "sweep eps must be positive");
    if (i) require(eps_list[i] < eps_list[i - 1], "sweep eps list must be strictly decreasing");
  }
}

namespace {

// two-sided 97.5% Student-t quantiles, df = 1..30
double t975(int df) {
  static const double q[] = {12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228,
                             2.201,  2.179, 2.160, 2.145, 2.131, 2.120, 2.110, 2.101, 2.093, 2.086,
                             2.080,  2.074, 2.069, 2.064, 2.060, 2.056, 2.052, 2.048, 2.045, 2.042};
  if (df < 1) return std::numeric_limits<double>::infinity();
  return df <= 30 ? q[df - 1] : 1.96;
}

}  // namespace

OrderFit fit_order(const std::string& quantity, const std::vector<double>& x,
                   const std::vector<double>& y) {
  require(x.size() == y.size(), "fit_order: size mismatch");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] > 0.0 && y[i] > 0.0 && std::isfinite(y[i])) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  const int n = int(lx.size());
  require(n >= 2, "fit_order: need at least two positive points");
  double mx = 0.0, my = 0.0;
  for (int i = 0; i < n; ++i) mx += lx[i], my += ly[i];
  mx /= n, my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  require(sxx > 0.0, "fit_order: abscissae must differ");
  OrderFit f;
  f.quantity = quantity;
  f.points = n;
  f.order = sxy / sxx;
  if (n > 2) {
    double sse = 0.0;
    const double c = my - f.order * mx;
    for (int i = 0; i < n; ++i) {
      const double r = ly[i] - (c + f.order * lx[i]);
      sse += r * r;
    }
    const double se = std::sqrt(sse / (n - 2) / sxx);
    f.lo = f.order - t975(n - 2) * se;
    f.hi = f.order + t975(n - 2) * se;
  } else {
    f.lo = -std::numeric_limits<double>::infinity();
    f.hi = std::numeric_limits<double>::infinity();
  }
  return f;
}

SweepRow run_sweep_member(const RunConfig& base, double eps) {
  const auto t0 = std::chrono::steady_clock::now();
  SweepRow row;
  row.eps = eps;
  try {
    RunConfig c = base;
    c.params.eps = eps;
    c.grid.eps = eps;
    c.from_snapshot.reset();
    c.validate();
    const State init = make_initial_data(c.grid, c.params, c.init);

    // limit reference on the same sample grid
    std::vector<PerpField> ref;
    const RmhdState lim0 = project_limit_init(init, c.params);
    RmhdRunOptions ropt;
    ropt.on_sample = [&](const RmhdState& s, const RmhdRecord& r) {
      ref.push_back(s.v_perp);
      row.div_perp_B_rel_max = std::max(row.div_perp_B_rel_max, r.div_perp_B_rel);
    };
    const RmhdRunResult lim = rmhd_run(c.solver, c.params, lim0, ropt);
    row.reference_vperp_final = lim.records.back().v_perp_L2;

    std::vector<double> ts, err2, qv;
    RunOptions opt;
    opt.on_sample = [&](const State& s, const DiagnosticsRecord& r) {
      const std::size_t k = ts.size();
      require(k < ref.size(), "limit reference has fewer samples than the penalized run");
      SpectralField V1 = to_spectral(s.v[0]), V2 = to_spectral(s.v[1]);
      project_P_perp(V1, V2);
      const ScalarField d1 = to_physical(V1) - ref[k][0], d2 = to_physical(V2) - ref[k][1];
      const double e = std::hypot(l2_norm(d1), l2_norm(d2));
      ts.push_back(s.t);
      err2.push_back(e * e);
      qv.push_back(r.Q_v_norm);
      row.rho_dev_sup = std::max(row.rho_dev_sup, r.rho_dev_Lgamma);
      row.rho_dev_L2_sup = std::max(row.rho_dev_L2_sup, r.rho_dev_L2);
      row.phi_Hm1_sup = std::max(row.phi_Hm1_sup, r.phi_Hm1);
      row.filtered_var_max = std::max(row.filtered_var_max, r.filtered_var_Hm1);
      row.phi_perp_Hm1_sup = std::max(row.phi_perp_Hm1_sup, r.phi_perp_Hm1);
      row.div_B_rel_max = std::max(row.div_B_rel_max, r.div_B_rel);
      row.energy_defect_max = std::max(row.energy_defect_max, r.defect2);
    };
    run_mhd(c.solver, c.params, init, opt);

    // trapezoid in time over the samples
    double acc = 0.0, qacc = 0.0;
    for (std::size_t k = 1; k < ts.size(); ++k) {
      const double dt = ts[k] - ts[k - 1];
      acc += 0.5 * dt * (err2[k] + err2[k - 1]);
      qacc += 0.5 * dt * (qv[k] + qv[k - 1]);
    }
    const double T = ts.back() - ts.front();
    row.vperp_err_L2 = std::sqrt(acc);
    row.Qv_avg = T > 0.0 ? qacc / T : (qv.empty() ? 0.0 : qv.front());
  } catch (const std::exception& e) {
    row.ok = false;
    row.error = e.what();
  }
  row.wallclock_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return row;
}

SweepResult eps_sweep(const SweepPlan& plan, const std::optional<std::filesystem::path>& out_dir) {
  plan.validate();
  unsigned width = plan.max_parallel ? plan.max_parallel : std::thread::hardware_concurrency();
  width = std::max(1u, width);

  SweepResult res;
  res.rows.resize(plan.eps_list.size());
  for (std::size_t start = 0; start < plan.eps_list.size(); start += width) {
    std::vector<std::future<SweepRow>> jobs;
    const std::size_t stop = std::min(plan.eps_list.size(), start + width);
    for (std::size_t i = start; i < stop; ++i)
      jobs.push_back(std::async(std::launch::async, run_sweep_member, std::cref(plan.base),
                                plan.eps_list[i]));
    for (std::size_t i = start; i < stop; ++i) res.rows[i] = jobs[i - start].get();
  }

  std::vector<double> x, rl, rg, ve, ph, pt;
  for (const auto& r : res.rows) {
    if (!r.ok) continue;
    x.push_back(r.eps);
    rl.push_back(r.rho_dev_L2_sup);
    rg.push_back(r.rho_dev_sup);
    ve.push_back(r.vperp_err_L2);
    ph.push_back(r.phi_Hm1_sup);
    pt.push_back(r.phi_perp_Hm1_sup);
  }
  if (x.size() >= 2) {
    const std::pair<const char*, const std::vector<double>*> qs[] = {
        {"rho_dev_L2_sup", &rl}, {"rho_dev_sup", &rg}, {"vperp_err_L2", &ve}, {"phi_Hm1_sup", &ph},
        {"phi_perp_Hm1_sup", &pt}};
    for (const auto& [name, ys] : qs) {
      try {
        res.orders.push_back(fit_order(name, x, *ys));
      } catch (const ContractViolation&) {
        // quantity vanished identically (e.g. zero data); nothing to fit
      }
    }
  }
  if (out_dir) {
    std::filesystem::create_directories(*out_dir);
    write_sweep_csv(*out_dir / "sweep.csv", res.rows);
    write_orders_csv(*out_dir / "orders.csv", res.orders);
  }
  return res;
}

FilteredReport compare_filtered(const std::vector<State>& traj, const PhysicalParams& p,
                                bool use_limit_c) {
  require(traj.size() >= 10, "compare_filtered needs at least 10 snapshots");
  FilteredReport rep;
  AcousticPair prev = filter_state(traj[0], p, use_limit_c);
  AcousticPair prev_raw = acoustic_pair(traj[0], p, use_limit_c);
  rep.times.push_back(traj[0].t);
  for (std::size_t i = 1; i < traj.size(); ++i) {
    const double dt = traj[i].t - traj[i - 1].t;
    require(dt > 0.0, "compare_filtered: snapshot times must increase");
    AcousticPair cur = filter_state(traj[i], p, use_limit_c);
    AcousticPair raw = acoustic_pair(traj[i], p, use_limit_c);
    rep.rates.push_back(sobolev_norm(cur - prev, -1.0) / dt);
    rep.raw_rates.push_back(sobolev_norm(raw - prev_raw, -1.0) / dt);
    rep.times.push_back(traj[i].t);
    prev = std::move(cur);
    prev_raw = std::move(raw);
  }
  rep.max_rate = *std::max_element(rep.rates.begin(), rep.rates.end());
  rep.max_raw_rate = *std::max_element(rep.raw_rates.begin(), rep.raw_rates.end());
  return rep;
}

void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << "eps,rho_dev_sup,vperp_err_L2,phi_Hm1_sup,Qv_avg,wallclock_s,rho_dev_L2_sup,"
         "filtered_var_max,phi_perp_Hm1_sup,status\n";
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& r : rows) {
    out << r.eps << ',' << r.rho_dev_sup << ',' << r.vperp_err_L2 << ',' << r.phi_Hm1_sup << ','
        << r.Qv_avg << ',' << r.wallclock_s << ',' << r.rho_dev_L2_sup << ','
        << r.filtered_var_max << ',' << r.phi_perp_Hm1_sup << ',' << (r.ok ? "ok" : "failed") << '\n';
    if (!r.ok) out << "# eps=" << r.eps << " failed: " << r.error << '\n';
  }
}

void write_orders_csv(const std::filesystem::path& path, const std::vector<OrderFit>& fits) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << "quantity,order,lo95,hi95,points\n";
  out << std::setprecision(6);
  for (const auto& f : fits)
    out << f.quantity << ',' << f.order << ',' << f.lo << ',' << f.hi << ',' << f.points << '\n';
}

}  // namespace rmhd
