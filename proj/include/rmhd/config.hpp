#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "rmhd/grid.hpp"
#include "rmhd/mhd_solver.hpp"
#include "rmhd/model.hpp"

namespace rmhd {

/// Everything one run needs. Keys:
///   grid.{nx,ny,nz}
///   params.{a,gamma,eps,mu_perp,mu_par,lambda,eta_perp,eta_par}
///   init.{kind,seed,slope,amplitude,kmax,from_snapshot}
///   solver.{integrator,dt,t_end,snapshot_every,linearized,dealias,limit_wave_constant}
/// solver.dt accepts a number or "auto". Unknown keys are rejected.
struct RunConfig {
  GridSpec grid{48, 48, 16, 0.1};
  PhysicalParams params;
  InitSpec init;
  std::optional<std::filesystem::path> from_snapshot;
  SolverConfig solver;

  /// grid.eps mirrors params.eps.
  void validate() const;
};

RunConfig default_config();
RunConfig parse_config(const std::string& yaml_text);
RunConfig load_config(const std::filesystem::path& path);
std::string dump_config(const RunConfig& cfg);

/// Initial state from the config: the snapshot if given, else make_initial_data.
State initial_state(const RunConfig& cfg);

}  // namespace rmhd
