#include "rmhd/grid.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace rmhd {

void GridSpec::validate() const {
  auto ok = [](int n) { return n >= 4 && n % 2 == 0; };
  if (!ok(nx) || !ok(ny) || !ok(nz))
    throw ContractViolation("grid sizes must be even and >= 4, got " + std::to_string(nx) + "x" +
                            std::to_string(ny) + "x" + std::to_string(nz));
  if (!(eps > 0.0) || !std::isfinite(eps)) throw ContractViolation("grid eps must be positive");
}

ScalarField::ScalarField(const GridSpec& grid, double value) : grid_(grid) {
  grid.validate();
  values_.assign(grid.points(), value);
}

ScalarField::ScalarField(const GridSpec& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  grid.validate();
  require(values_.size() == grid.points(), "scalar field size does not match grid");
}

double ScalarField::mean() const {
  return std::accumulate(values_.begin(), values_.end(), 0.0) / double(values_.size());
}

bool ScalarField::all_finite() const {
  for (double v : values_)
    if (!std::isfinite(v)) return false;
  return true;
}

ScalarField& ScalarField::operator+=(const ScalarField& other) {
  require(grid_.same_shape(other.grid_), "field shape mismatch");
  for (std::size_t n = 0; n < values_.size(); ++n) values_[n] += other.values_[n];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& other) {
  require(grid_.same_shape(other.grid_), "field shape mismatch");
  for (std::size_t n = 0; n < values_.size(); ++n) values_[n] -= other.values_[n];
  return *this;
}

ScalarField& ScalarField::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }

VectorField make_vector_field(const GridSpec& grid, double value) {
  return {ScalarField(grid, value), ScalarField(grid, value), ScalarField(grid, value)};
}

SpectralField::SpectralField(const GridSpec& grid) : grid_(grid) {
  grid.validate();
  coeffs_.assign(grid.modes(), Complex{});
}

namespace {
int storage_index(int k, int n) {
  require(k >= -n / 2 && k <= n / 2, "wavenumber outside resolved range");
  return k >= 0 ? (k == n / 2 ? n / 2 : k) : k + n;
}
}  // namespace

Complex SpectralField::at(int k1, int k2, int k3) const {
  if (k3 < 0) return std::conj(at(-k1, -k2, -k3));
  require(k3 <= grid_.nz / 2, "k3 outside resolved range");
  const int i = storage_index(k1, grid_.nx);
  const int j = storage_index(k2, grid_.ny);
  return coeffs_[index(i % grid_.nx, j % grid_.ny, k3)];
}

void SpectralField::set(int k1, int k2, int k3, Complex value) {
  if (k3 < 0) {
    set(-k1, -k2, -k3, std::conj(value));
    return;
  }
  require(k3 <= grid_.nz / 2, "k3 outside resolved range");
  const int i = storage_index(k1, grid_.nx);
  const int j = storage_index(k2, grid_.ny);
  coeffs_[index(i % grid_.nx, j % grid_.ny, k3)] = value;
  // self-conjugate planes hold both k and -k
  if (k3 == 0 || 2 * k3 == grid_.nz) {
    const int ci = storage_index(-k1, grid_.nx) % grid_.nx;
    const int cj = storage_index(-k2, grid_.ny) % grid_.ny;
    if (ci == i % grid_.nx && cj == j % grid_.ny)
      coeffs_[index(ci, cj, k3)] = value.real();
    else
      coeffs_[index(ci, cj, k3)] = std::conj(value);
  }
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  require(grid_.same_shape(other.grid_), "spectrum shape mismatch");
  for (std::size_t n = 0; n < coeffs_.size(); ++n) coeffs_[n] += other.coeffs_[n];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  require(grid_.same_shape(other.grid_), "spectrum shape mismatch");
  for (std::size_t n = 0; n < coeffs_.size(); ++n) coeffs_[n] -= other.coeffs_[n];
  return *this;
}

SpectralField& SpectralField::operator*=(Complex s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(Complex s, SpectralField a) { return a *= s; }

}  // namespace rmhd
