// rmhd_lab: command-line front end.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "rmhd/check.hpp"
#include "rmhd/config.hpp"
#include "rmhd/convergence.hpp"
#include "rmhd/diagnostics.hpp"
#include "rmhd/fast_wave.hpp"
#include "rmhd/rmhd_solver.hpp"
#include "rmhd/waves.hpp"

namespace fs = std::filesystem;
using namespace rmhd;

namespace {

void warn_gamma(double gamma) {
  if (auto w = gamma_hypothesis_warning(gamma); !w.empty()) std::cerr << "warning: " << w << '\n';
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ContractViolation("not a number: '" + item + "'");
    }
  }
  return out;
}

int cmd_simulate(const std::string& config, const fs::path& out, bool snapshots) {
  const RunConfig c = load_config(config);
  warn_gamma(c.params.gamma);
  fs::create_directories(out);
  std::ofstream(out / "config.yaml") << dump_config(c);
  RunOptions opt;
  opt.out_dir = out;
  opt.write_snapshots = snapshots;
  const RunResult r = run_mhd(c.solver, c.params, initial_state(c), opt);
  const auto& last = r.records.back();
  std::cout << "steps " << r.steps << ", t = " << last.t << ", E2 = " << last.E2
            << ", energy defect = " << last.defect2 << ", div B ratio = " << last.div_B_rel
            << '\n';
  return 0;
}

int cmd_rmhd(const std::string& config, const fs::path& out, bool snapshots) {
  const RunConfig c = load_config(config);
  fs::create_directories(out);
  std::ofstream(out / "config.yaml") << dump_config(c);
  const RmhdState init = project_limit_init(initial_state(c), c.params);
  RmhdRunOptions opt;
  opt.out_dir = out;
  opt.write_snapshots = snapshots;
  const RmhdRunResult r = rmhd_run(c.solver, c.params, init, opt);
  const auto& last = r.records.back();
  std::cout << "steps " << r.steps << ", t = " << last.t << ", energy = " << last.energy
            << ", defect = " << last.defect << ", div B_perp ratio = " << last.div_perp_B_rel
            << '\n';
  return 0;
}

int cmd_sweep(const std::string& config, const std::string& eps, const fs::path& out,
              unsigned jobs) {
  SweepPlan plan;
  plan.base = load_config(config);
  plan.eps_list = parse_list(eps);
  plan.max_parallel = jobs;
  warn_gamma(plan.base.params.gamma);
  const SweepResult r = eps_sweep(plan, out);
  for (const auto& row : r.rows)
    std::cout << "eps " << row.eps << (row.ok ? "" : "  FAILED: " + row.error) << "  rho_dev "
              << row.rho_dev_sup << "  vperp_err " << row.vperp_err_L2 << "  phi_Hm1 "
              << row.phi_Hm1_sup << "  (" << row.wallclock_s << " s)\n";
  for (const auto& f : r.orders)
    std::cout << "order " << f.quantity << " = " << f.order << "  [" << f.lo << ", " << f.hi
              << "]\n";
  return 0;
}

int cmd_waves(double vs, double va, int n, const std::string& out) {
  std::ostringstream os;
  os << "cos_theta,c_fast,c_alfven,c_slow\n" << std::setprecision(12);
  for (int i = 0; i < n; ++i) {
    const double c = n == 1 ? 1.0 : -1.0 + 2.0 * i / (n - 1);
    const WaveSpeeds w = mhd_wave_speeds(vs, va, c);
    os << c << ',' << w.c_fast << ',' << w.c_alfven << ',' << w.c_slow << '\n';
  }
  if (out.empty() || out == "-")
    std::cout << os.str();
  else
    std::ofstream(out) << os.str();
  return 0;
}

int cmd_filter(const fs::path& snapshot, const std::string& config, double a, double gamma,
               bool limit_c, const fs::path& out) {
  const State s = read_state(snapshot);
  PhysicalParams p;
  if (!config.empty()) p = load_config(config).params;
  if (a > 0.0) p.a = a;
  if (gamma > 0.0) p.gamma = gamma;
  p.eps = s.grid().eps;
  p.validate();
  const AcousticPair U = filter_state(s, p, limit_c);
  fs::create_directories(out);
  const fs::path stem = snapshot.stem();
  write_pair(out / (stem.string() + "_filtered.bin"), U);
  std::ofstream csv(out / (stem.string() + "_filtered_norms.csv"));
  csv << "t,s,norm\n" << std::setprecision(17);
  for (double sv : {-1.0, 0.0, 1.0}) csv << s.t << ',' << sv << ',' << sobolev_norm(U, sv) << '\n';
  std::cout << "wrote " << (out / (stem.string() + "_filtered.bin")).string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pseudo-spectral lab for anisotropic compressible MHD and its reduced limit"};
  app.require_subcommand(1);

  std::string config, eps_list = "0.4,0.2,0.1,0.05", out = "out", snap, wave_out;
  bool no_snapshots = false, limit_c = false;
  unsigned jobs = 0;
  double vs = 1.0, va = 1.0, a = 0.0, gamma = 0.0, fault = 0.0, check_gamma = 2.0;
  int n = 21;

  auto* sim = app.add_subcommand("simulate", "integrate the penalized system");
  sim->add_option("--config", config, "YAML config")->required()->check(CLI::ExistingFile);
  sim->add_option("--out", out, "output directory");
  sim->add_flag("--no-snapshots", no_snapshots, "skip snap_<t>.bin files");

  auto* lim = app.add_subcommand("rmhd", "integrate the reduced limit system");
  lim->add_option("--config", config, "YAML config")->required()->check(CLI::ExistingFile);
  lim->add_option("--out", out, "output directory");
  lim->add_flag("--no-snapshots", no_snapshots, "skip snapshot files");

  auto* sw = app.add_subcommand("sweep", "eps sweep against the limit system");
  sw->add_option("--config", config, "YAML config")->required()->check(CLI::ExistingFile);
  sw->add_option("--eps", eps_list, "comma-separated, strictly decreasing");
  sw->add_option("--out", out, "output directory");
  sw->add_option("--jobs", jobs, "concurrent members (0 = hardware threads)");

  auto* wv = app.add_subcommand("waves", "dispersion table of the three MHD speeds (CSV)");
  wv->add_option("--vs", vs, "sound speed")->check(CLI::NonNegativeNumber);
  wv->add_option("--va", va, "Alfven speed")->check(CLI::NonNegativeNumber);
  wv->add_option("-n,--points", n, "number of cos(theta) samples")->check(CLI::PositiveNumber);
  wv->add_option("--out", wave_out, "CSV path (default stdout)");

  auto* fl = app.add_subcommand("filter", "apply S(-t/eps) to a snapshot");
  fl->add_option("--snapshot", snap, "state snapshot")->required()->check(CLI::ExistingFile);
  fl->add_option("--config", config, "config supplying a and gamma");
  fl->add_option("--a", a, "override a");
  fl->add_option("--gamma", gamma, "override gamma");
  fl->add_flag("--limit-c", limit_c, "use the wave constant 1 + b");
  fl->add_option("--out", out, "output directory");

  auto* ck = app.add_subcommand("check", "run the invariant suite");
  ck->add_option("--group-phase-fault", fault, "inject a phase error into the group");
  ck->add_option("--gamma", check_gamma, "adiabatic exponent of the smoke run");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sim) return cmd_simulate(config, out, !no_snapshots);
    if (*lim) return cmd_rmhd(config, out, !no_snapshots);
    if (*sw) return cmd_sweep(config, eps_list, out, jobs);
    if (*wv) return cmd_waves(vs, va, n, wave_out);
    if (*fl) return cmd_filter(snap, config, a, gamma, limit_c, out);
    if (*ck) {
      CheckOptions opt;
      opt.group_phase_fault = fault;
      opt.gamma = check_gamma;
      const CheckReport rep = cli_check(opt);
      print_report(std::cout, rep);
      return rep.all_passed() ? 0 : 1;
    }
  } catch (const BlowUpError& e) {
    std::cerr << "blow-up: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
