#include "rmhd/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>

namespace rmhd {

static_assert(std::endian::native == std::endian::little, "snapshot I/O assumes a little-endian host");

namespace {

template <class T>
void put(std::ofstream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <class T>
T get(std::ifstream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw ContractViolation("truncated snapshot header");
  return value;
}

}  // namespace

void write_snapshot(const std::filesystem::path& path, std::span<const ScalarField> fields,
                    double trailer) {
  require(!fields.empty(), "snapshot needs at least one field");
  const GridSpec& g = fields.front().grid();
  for (const auto& f : fields) require(f.grid().same_shape(g), "snapshot fields on different grids");

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out.write("RMHD", 4);
  put<std::uint32_t>(out, kSnapshotVersion);
  put<std::uint32_t>(out, std::uint32_t(g.nx));
  put<std::uint32_t>(out, std::uint32_t(g.ny));
  put<std::uint32_t>(out, std::uint32_t(g.nz));
  put<std::uint32_t>(out, 0);
  put<double>(out, g.eps);
  for (const auto& f : fields)
    out.write(reinterpret_cast<const char*>(f.values().data()),
              std::streamsize(f.size() * sizeof(double)));
  put<double>(out, trailer);
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "RMHD", 4) != 0) throw ContractViolation("not an RMHD snapshot");
  const auto version = get<std::uint32_t>(in);
  if (version != kSnapshotVersion) throw ContractViolation("unsupported snapshot version");
  GridSpec g;
  g.nx = int(get<std::uint32_t>(in));
  g.ny = int(get<std::uint32_t>(in));
  g.nz = int(get<std::uint32_t>(in));
  (void)get<std::uint32_t>(in);
  g.eps = get<double>(in);
  g.validate();

  const auto bytes = std::filesystem::file_size(path);
  const std::size_t field_bytes = g.points() * sizeof(double);
  if (bytes < kSnapshotHeaderBytes + sizeof(double) ||
      (bytes - kSnapshotHeaderBytes - sizeof(double)) % field_bytes != 0)
    throw ContractViolation("snapshot size inconsistent with its grid");
  const std::size_t count = (bytes - kSnapshotHeaderBytes - sizeof(double)) / field_bytes;

  Snapshot s{g, {}, 0.0};
  s.fields.reserve(count);
  for (std::size_t c = 0; c < count; ++c) {
    std::vector<double> v(g.points());
    in.read(reinterpret_cast<char*>(v.data()), std::streamsize(field_bytes));
    if (!in) throw ContractViolation("truncated snapshot data");
    s.fields.emplace_back(g, std::move(v));
  }
  s.trailer = get<double>(in);
  return s;
}

}  // namespace rmhd
