#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rmhd {

struct CheckOptions {
  /// Fault injection for the group isometry check (0 = healthy).
  double group_phase_fault = 0.0;
  /// Adiabatic exponent used by the smoke run.
  double gamma = 2.0;
  int nx = 48, ny = 48, nz = 16;
  unsigned seed = 7;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct CheckReport {
  std::vector<CheckResult> results;
  std::vector<std::string> warnings;
  bool all_passed() const;
};

/// Invariant suite: spectral identities, projections, group law and isometry,
/// symbol eigenvalues, wave-speed identities, convexity, and an energy /
/// constraint smoke run.
CheckReport cli_check(const CheckOptions& opt = {});

void print_report(std::ostream& os, const CheckReport& rep);

}  // namespace rmhd
