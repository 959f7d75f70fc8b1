#include "rmhd/check.hpp"

#include <cmath>
#include <functional>
#include <ostream>
#include <random>
#include <sstream>

#include "rmhd/diagnostics.hpp"
#include "rmhd/fast_wave.hpp"
#include "rmhd/model.hpp"
#include "rmhd/waves.hpp"

namespace rmhd {

bool CheckReport::all_passed() const {
  for (const auto& r : results)
    if (!r.passed) return false;
  return true;
}

namespace {

ScalarField random_field(const GridSpec& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ScalarField f(g);
  for (auto& x : f.values()) x = u(rng);
  return f;
}

AcousticPair random_pair(const GridSpec& g, std::mt19937_64& rng, double c) {
  SpectralField P1 = to_spectral(random_field(g, rng)), P2 = to_spectral(random_field(g, rng));
  project_Q_perp(P1, P2);
  return {random_field(g, rng), {to_physical(P1), to_physical(P2)}, c};
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

std::string fmt(const char* what, double v, double tol) {
  std::ostringstream os;
  os << what << " = " << v << " (tol " << tol << ")";
  return os.str();
}

}  // namespace

CheckReport cli_check(const CheckOptions& opt) {
  CheckReport rep;
  auto add = [&](const std::string& name, const std::function<std::pair<bool, std::string>()>& f) {
    try {
      auto [ok, detail] = f();
      rep.results.push_back({name, ok, detail});
    } catch (const std::exception& e) {
      rep.results.push_back({name, false, std::string("threw: ") + e.what()});
    }
  };
  if (auto w = gamma_hypothesis_warning(opt.gamma); !w.empty()) rep.warnings.push_back(w);

  std::mt19937_64 rng(opt.seed);
  const GridSpec small{16, 16, 8, 0.3};

  add("spectral_round_trip", [&] {
    double worst = 0.0;
    for (int r = 0; r < 5; ++r) {
      const ScalarField f = random_field(small, rng);
      const ScalarField g = to_physical(to_spectral(f));
      worst = std::max(worst, l2_norm(g - f) / l2_norm(f));
    }
    return std::pair{worst <= 1e-12, fmt("max relative error", worst, 1e-12)};
  });

  add("parseval", [&] {
    double worst = 0.0;
    for (int r = 0; r < 20; ++r) {
      const ScalarField f = random_field(small, rng);
      worst = std::max(worst, rel(sobolev_norm(f, 0.0), l2_norm(f)));
    }
    return std::pair{worst <= 1e-10, fmt("max relative gap", worst, 1e-10)};
  });

  add("div_grad_is_lap", [&] {
    const SpectralField F = to_spectral(random_field(small, rng));
    const SpectralPerp gp = grad_perp(F);
    const SpectralField d = div_perp(gp[0], gp[1]) - lap_perp(F);
    double m = 0.0, s = 0.0;
    for (std::size_t n = 0; n < d.size(); ++n) m = std::max(m, std::abs(d[n]));
    for (std::size_t n = 0; n < F.size(); ++n) s = std::max(s, std::abs(F[n]));
    return std::pair{m <= 1e-12 * std::max(1.0, s), fmt("max coefficient gap", m, 1e-12)};
  });

  add("leray_split", [&] {
    const PerpField v = {random_field(small, rng), random_field(small, rng)};
    const PerpSplit s = leray_perp(v);
    const double div =
        sobolev_norm(div_perp(to_spectral(s.P[0]), to_spectral(s.P[1])), 0.0) /
        l2_norm(std::span<const ScalarField>(v.data(), 2));
    const double orth = std::abs(inner(s.P[0], s.Q[0]) + inner(s.P[1], s.Q[1])) /
                        (l2_norm(v[0]) * l2_norm(v[0]) + l2_norm(v[1]) * l2_norm(v[1]));
    const bool ok = div <= 1e-10 && orth <= 1e-10;
    return std::pair{ok, fmt("relative div P", div, 1e-10) + ", " + fmt("P·Q", orth, 1e-10)};
  });

  add("group_isometry", [&] {
    GroupOptions go;
    go.phase_fault = opt.group_phase_fault;
    double worst = 0.0;
    for (double tau : {0.1, 1.0, 10.0}) {
      const AcousticPair U = random_pair(small, rng, 3.0);
      SpectralField phi = to_spectral(U.phi), P1 = to_spectral(U.Phi[0]), P2 = to_spectral(U.Phi[1]);
      apply_group_spectral(phi, P1, P2, U.c, tau, go);
      const AcousticPair V{to_physical(phi), {to_physical(P1), to_physical(P2)}, U.c};
      worst = std::max(worst, rel(weighted_norm(V), weighted_norm(U)));
    }
    return std::pair{worst <= 1e-12, fmt("max norm drift", worst, 1e-12)};
  });

  add("group_law", [&] {
    std::uniform_real_distribution<double> ut(-5.0, 5.0);
    double worst = 0.0;
    for (int r = 0; r < 5; ++r) {
      const AcousticPair U = random_pair(small, rng, 2.5);
      const double t1 = ut(rng), t2 = ut(rng);
      const AcousticPair a = apply_group(apply_group(U, t1), t2);
      const AcousticPair b = apply_group(U, t1 + t2);
      worst = std::max(worst, weighted_norm(a - b) / weighted_norm(U));
      const AcousticPair back = apply_group(apply_group(U, t1), -t1);
      worst = std::max(worst, weighted_norm(back - U) / weighted_norm(U));
    }
    return std::pair{worst <= 1e-12, fmt("max relative defect", worst, 1e-12)};
  });

  add("singular_symbol_eigs", [&] {
    std::uniform_real_distribution<double> ua(0.0, kTwoPi), ub(0.05, 10.0);
    double worst = 0.0;
    for (int r = 0; r < 100; ++r) {
      const double th = ua(rng), b = ub(rng);
      const std::array<double, 2> n = {std::cos(th), std::sin(th)};
      const auto c = singular_symbol_eigs(n, b), m = singular_symbol_eigs_numeric(n, b);
      for (int i = 0; i < 4; ++i) worst = std::max(worst, std::abs(c[i] - m[i]));
    }
    return std::pair{worst <= 1e-10, fmt("max eigenvalue gap", worst, 1e-10)};
  });

  add("wave_speed_identities", [&] {
    std::uniform_real_distribution<double> us(0.0, 3.0), uc(-1.0, 1.0);
    double worst = 0.0;
    bool ordered = true;
    for (int r = 0; r < 10000; ++r) {
      const double Vs = us(rng), VA = us(rng), c = uc(rng);
      const WaveSpeeds w = mhd_wave_speeds(Vs, VA, c);
      ordered = ordered && w.c_fast >= w.c_alfven && w.c_alfven >= w.c_slow && w.c_slow >= 0.0;
      const double S = std::max(Vs * Vs + VA * VA, 1e-300);
      worst = std::max(worst, std::abs(w.c_fast * w.c_fast + w.c_slow * w.c_slow - S) / S);
      worst = std::max(worst, std::abs(w.c_fast * w.c_slow - Vs * VA * std::abs(c)) / S);
    }
    return std::pair{ordered && worst <= 1e-10,
                     fmt("max relative Vieta gap", worst, 1e-10) + (ordered ? "" : ", ordering violated")};
  });

  add("taylor_gap_nonnegative", [&] {
    std::uniform_real_distribution<double> ux(0.0, 20.0), ub(0.5, 1.5), ug(1.0, 3.0);
    double worst = 0.0;
    for (int r = 0; r < 100000; ++r) {
      const double g = 4.0 - ug(rng);  // (1, 3]
      worst = std::min(worst, taylor_gap(ux(rng), ub(rng), g));
    }
    // tiny negatives are cancellation roundoff near x = x̄
    return std::pair{worst >= -1e-12, fmt("min gap", worst, -1e-12)};
  });

  add("energy_and_constraint_smoke", [&] {
    const double eps = 0.2;
    PhysicalParams p;
    p.eps = eps;
    p.gamma = opt.gamma;
    p.mu_perp = p.mu_par = p.lambda_bulk = p.eta_perp = p.eta_par = 0.01;
    const GridSpec g{opt.nx, opt.ny, opt.nz, eps};
    InitSpec in;
    in.seed = opt.seed;
    const State s0 = make_initial_data(g, p, in);
    SolverConfig cfg;
    cfg.dt = 0.004;
    cfg.t_end = 0.1;
    cfg.snapshot_every = 0.02;
    const RunResult r = run_mhd(cfg, p, s0);
    double defect = -1e300, divb = 0.0, mass = 0.0;
    const double m0 = r.records.front().mass;
    for (const auto& d : r.records) {
      defect = std::max(defect, d.defect2);
      divb = std::max(divb, d.div_B_rel);
      mass = std::max(mass, std::abs(d.mass - m0));
    }
    const bool ok = defect <= 1e-6 && divb <= 1e-8 && mass <= 1e-12;
    return std::pair{ok, fmt("max energy defect", defect, 1e-6) + ", " +
                             fmt("max div B ratio", divb, 1e-8) + ", " +
                             fmt("mass drift", mass, 1e-12)};
  });

  return rep;
}

void print_report(std::ostream& os, const CheckReport& rep) {
  for (const auto& w : rep.warnings) os << "warning: " << w << '\n';
  for (const auto& r : rep.results)
    os << (r.passed ? "ok    " : "FAILED") << "  " << r.name << "  " << r.detail << '\n';
  os << (rep.all_passed() ? "all checks passed" : "some checks failed") << '\n';
}

}  // namespace rmhd
