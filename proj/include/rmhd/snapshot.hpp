#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "rmhd/grid.hpp"

namespace rmhd {

// Binary snapshot, little-endian:
//   0  char[4]  "RMHD"
//   4  u32      version
//   8  u32      nx, ny, nz
//   20 u32      reserved (0)
//   24 f64      eps
//   32 f64[nx*ny*nz] per field, fields back to back in declaration order
//   .. f64      trailer (time stamp, or wave constant for acoustic pairs)
// The field count is implied by the file size.

inline constexpr std::uint32_t kSnapshotVersion = 1;
inline constexpr std::size_t kSnapshotHeaderBytes = 32;

struct Snapshot {
  GridSpec grid;
  std::vector<ScalarField> fields;
  double trailer = 0.0;
};

void write_snapshot(const std::filesystem::path& path, std::span<const ScalarField> fields,
                    double trailer);
Snapshot read_snapshot(const std::filesystem::path& path);

}  // namespace rmhd
