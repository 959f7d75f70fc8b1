#include "rmhd/diagnostics.hpp"

#include <cmath>
#include <cstdio>
#include <iomanip>
#include <limits>

namespace rmhd {

const std::vector<std::string>& diagnostics_columns() {
  static const std::vector<std::string> cols = {
      "t",       "E1",         "E2",           "E3",        "D",          "D_int",
      "defect1", "defect2",    "div_B",        "div_B_rel", "div_perp_v", "phi_L2",
      "phi_Hm1", "P_v_norm",   "Q_v_norm",     "rho_dev_Lgamma", "rho_dev_L2",
      "filtered_var_Hm1", "mass", "B_mean", "phi_perp_Hm1"};
  return cols;
}

std::vector<double> diagnostics_values(const DiagnosticsRecord& r) {
  return {r.t,       r.E1,      r.E2,         r.E3,        r.D,          r.D_int,
          r.defect1, r.defect2, r.div_B,      r.div_B_rel, r.div_perp_v, r.phi_L2,
          r.phi_Hm1, r.P_v_norm, r.Q_v_norm,  r.rho_dev_Lgamma, r.rho_dev_L2,
          r.filtered_var_Hm1, r.mass, r.B_mean, r.phi_perp_Hm1};
}

DiagnosticsRecord measure(const State& s, const PhysicalParams& p, double rho_bar) {
  const GridSpec& g = s.grid();
  DiagnosticsRecord r;
  r.t = s.t;
  r.E1 = energy(s, PiVariant::pi1, rho_bar, p);
  r.E2 = energy(s, PiVariant::pi2, rho_bar, p);
  r.E3 = energy(s, PiVariant::pi3, 1.0, p);
  r.D = dissipation(s, p);

  const SpectralVector Bh = to_spectral(s.B);
  const SpectralField divB = div_eps(Bh);
  r.div_B = sobolev_norm(divB, 0.0);
  const double bh1 = sobolev_norm(std::span<const SpectralField>(Bh.data(), 3), 1.0);
  r.div_B_rel = bh1 > 0.0 ? r.div_B / bh1 : 0.0;

  SpectralField V1 = to_spectral(s.v[0]), V2 = to_spectral(s.v[1]);
  r.div_perp_v = sobolev_norm(div_perp(V1, V2), 0.0);
  SpectralField Q1 = V1, Q2 = V2;
  project_Q_perp(Q1, Q2);
  const SpectralField P1 = V1 - Q1, P2 = V2 - Q2;
  r.P_v_norm = std::hypot(sobolev_norm(P1, 0.0), sobolev_norm(P2, 0.0));
  r.Q_v_norm = std::hypot(sobolev_norm(Q1, 0.0), sobolev_norm(Q2, 0.0));

  ScalarField phi(g), dev(g);
  for (std::size_t n = 0; n < phi.size(); ++n) {
    phi[n] = p.b() * (s.rho[n] - rho_bar) / p.eps + s.B[2][n];
    dev[n] = s.rho[n] - 1.0;
  }
  const SpectralField Phi = to_spectral(phi);
  r.phi_L2 = sobolev_norm(Phi, 0.0);
  r.phi_Hm1 = sobolev_norm(Phi, -1.0);
  // the k⊥ = 0 column carries slow parallel sound that no stiff term acts on
  SpectralField Phi_t = Phi;
  for_each_mode(g, [&](std::size_t n, int, int, int, double k1, double k2, double) {
    if (k1 == 0.0 && k2 == 0.0) Phi_t[n] = 0.0;
  });
  r.phi_perp_Hm1 = sobolev_norm(Phi_t, -1.0);
  r.rho_dev_Lgamma = lp_norm(dev, p.gamma);
  r.rho_dev_L2 = l2_norm(dev);
  r.mass = s.rho.mean();
  r.B_mean = std::sqrt(std::norm(Bh[0][0]) + std::norm(Bh[1][0]) + std::norm(Bh[2][0]));
  return r;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& columns)
    : out_(path), ncols_(columns.size()) {
  if (!out_) throw std::runtime_error("cannot open " + path.string());
  for (std::size_t c = 0; c < columns.size(); ++c) out_ << (c ? "," : "") << columns[c];
  out_ << '\n';
  out_ << std::setprecision(std::numeric_limits<double>::max_digits10);
}

void CsvWriter::row(const std::vector<double>& values) {
  require(values.size() == ncols_, "csv row width mismatch");
  for (std::size_t c = 0; c < values.size(); ++c) out_ << (c ? "," : "") << values[c];
  out_ << '\n';
  out_.flush();
}

void CsvWriter::finish(bool complete, const std::string& reason) {
  if (complete)
    out_ << "# complete\n";
  else
    out_ << "# incomplete: " << reason << '\n';
  out_.flush();
}

int steps_for_interval(double length, double h_target) {
  require(length > 0.0 && h_target > 0.0, "steps_for_interval: lengths must be positive");
  int n = std::max(2, int(std::ceil(length / h_target - 1e-9)));
  if (n % 2) ++n;
  return n;
}

std::vector<double> sample_times(double t0, double t_end, double every) {
  require(every > 0.0, "sampling interval must be positive");
  std::vector<double> ts{t0};
  for (long k = 1;; ++k) {
    const double t = t0 + double(k) * every;
    if (t >= t_end - 1e-12 * std::max(1.0, std::abs(t_end))) break;
    ts.push_back(t);
  }
  if (t_end > t0) ts.push_back(t_end);
  return ts;
}

std::string snapshot_name(double t) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "snap_%.6f.bin", t);
  return buf;
}

RunResult run_mhd(const SolverConfig& cfg, const PhysicalParams& p, const State& init,
                  const RunOptions& opt) {
  cfg.validate();
  MhdSolver solver(p, cfg, init);
  const double rho_bar = solver.rho_bar();
  const bool dissipative = p.dissipative();

  std::optional<CsvWriter> csv;
  if (opt.out_dir) {
    std::filesystem::create_directories(*opt.out_dir);
    csv.emplace(*opt.out_dir / "diagnostics.csv", diagnostics_columns());
  }

  RunResult res;
  State s = solver.state();
  double D_int = 0.0;
  DiagnosticsRecord first;
  AcousticPair prev_filtered = filter_state(s, p, cfg.limit_wave_constant);
  double prev_t = s.t;

  auto emit = [&](const State& st) {
    // the stiff sub-flow can push ρ negative after the last positivity check
    for (double x : st.rho.values())
      if (!(x > 0.0) || !std::isfinite(x)) throw BlowUpError("density lost positivity", st.t);
    DiagnosticsRecord r = measure(st, p, rho_bar);
    r.D_int = D_int;
    if (res.records.empty()) first = r;
    r.defect1 = (r.E1 + D_int - first.E1) / std::abs(first.E1);
    r.defect2 = first.E2 > 0.0 ? (r.E2 + D_int - first.E2) / first.E2 : r.E2 + D_int;
    if (!res.records.empty()) {
      AcousticPair f = filter_state(st, p, cfg.limit_wave_constant);
      r.filtered_var_Hm1 = sobolev_norm(f - prev_filtered, -1.0) / (st.t - prev_t);
      prev_filtered = std::move(f);
      prev_t = st.t;
    }
    res.records.push_back(r);
    if (csv) csv->row(diagnostics_values(r));
    if (opt.out_dir && opt.write_snapshots) write_state(*opt.out_dir / snapshot_name(st.t), st);
    if (opt.on_sample) opt.on_sample(st, r);
  };

  try {
    emit(s);
    const std::vector<double> ts = sample_times(s.t, cfg.t_end, cfg.snapshot_every);
    double D_prev = dissipative ? res.records.back().D : 0.0;
    for (std::size_t k = 1; k < ts.size(); ++k) {
      const double len = ts[k] - ts[k - 1];
      const double h_target = cfg.dt > 0.0 ? cfg.dt : stable_dt(s, cfg, p);
      const int n = steps_for_interval(len, h_target);
      const double h = len / n;
      // composite Simpson over pairs of steps
      double D_mid = 0.0;
      for (int i = 1; i <= n; ++i) {
        solver.step(h);
        ++res.steps;
        if (!dissipative) continue;
        const double D = dissipation(solver.state(), p);
        if (i % 2 == 1) {
          D_mid = D;
        } else {
          D_int += h / 3.0 * (D_prev + 4.0 * D_mid + D);
          D_prev = D;
        }
      }
      s = solver.state();
      s.t = ts[k];  // remove accumulated roundoff in the clock
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

}  // namespace rmhd
