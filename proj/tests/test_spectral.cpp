#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "rmhd/kernels.hpp"
#include "rmhd/snapshot.hpp"
#include "rmhd/spectral.hpp"

using namespace rmhd;

namespace {

ScalarField noise(const GridSpec& g, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ScalarField f(g);
  for (auto& x : f.values()) x = u(rng);
  return f;
}

double max_abs(const SpectralField& F) {
  double m = 0.0;
  for (std::size_t n = 0; n < F.size(); ++n) m = std::max(m, std::abs(F[n]));
  return m;
}

double max_abs(const ScalarField& f) { return sup_norm(f); }

const GridSpec g16{16, 16, 8, 0.3};

}  // namespace

TEST_CASE("grid spec validation") {
  CHECK_NOTHROW((GridSpec{4, 4, 4, 1.0}.validate()));
  CHECK_THROWS_AS((GridSpec{5, 4, 4, 1.0}.validate()), ContractViolation);
  CHECK_THROWS_AS((GridSpec{2, 4, 4, 1.0}.validate()), ContractViolation);
  CHECK_THROWS_AS((GridSpec{4, 4, 4, 0.0}.validate()), ContractViolation);
}

TEST_CASE("transform normalization") {
  const ScalarField one(g16, 1.0);
  const SpectralField F = to_spectral(one);
  CHECK(F.at(0, 0, 0).real() == doctest::Approx(1.0).epsilon(1e-14));
  F.at(0, 0, 0);
  SpectralField G = F;
  G.set(0, 0, 0, 0.0);
  CHECK(max_abs(G) < 1e-15);

  const ScalarField c = sample(g16, [](double x, double, double) { return std::cos(x); });
  const SpectralField C = to_spectral(c);
  CHECK(std::abs(C.at(1, 0, 0) - 0.5) < 1e-14);
  CHECK(std::abs(C.at(-1, 0, 0) - 0.5) < 1e-14);
  CHECK(std::abs(C.at(0, 0, 1)) < 1e-14);

  // Hermitian slot handling for negative k₃
  const ScalarField s3 = sample(g16, [](double, double, double z) { return std::sin(2.0 * z); });
  const SpectralField S3 = to_spectral(s3);
  CHECK(std::abs(S3.at(0, 0, 2) - Complex(0, -0.5)) < 1e-14);
  CHECK(std::abs(S3.at(0, 0, -2) - Complex(0, 0.5)) < 1e-14);
}

TEST_CASE("transform round trip") {
  for (unsigned seed = 1; seed <= 5; ++seed) {
    const ScalarField f = noise(g16, seed);
    CHECK(l2_norm(to_physical(to_spectral(f)) - f) <= 1e-12 * l2_norm(f));
  }
}

TEST_CASE("set writes conjugate slot") {
  SpectralField F(g16);
  F.set(1, 2, -3, Complex(0.25, 0.5));
  CHECK(std::abs(F.at(1, 2, -3) - Complex(0.25, 0.5)) < 1e-15);
  CHECK(std::abs(F.at(-1, -2, 3) - Complex(0.25, -0.5)) < 1e-15);
  const ScalarField f = to_physical(F);
  const ScalarField ref = sample(g16, [](double x, double y, double z) {
    const double th = x + 2.0 * y - 3.0 * z;
    return 2.0 * (0.25 * std::cos(th) - 0.5 * std::sin(th));
  });
  CHECK(max_abs(f - ref) < 1e-13);
}

TEST_CASE("derivatives of resolved modes") {
  const ScalarField c = sample(g16, [](double x, double, double) { return std::cos(x); });
  const ScalarField ms = sample(g16, [](double x, double, double) { return -std::sin(x); });
  CHECK(max_abs(to_physical(d1(to_spectral(c))) - ms) < 1e-13);

  // grad_eps symbol (ik₁, ik₂, iεk₃)
  SpectralField E(g16);
  E.set(2, -1, 3, 1.0);
  const SpectralVector G = grad_eps(E);
  CHECK(std::abs(G[0].at(2, -1, 3) - Complex(0, 2)) < 1e-14);
  CHECK(std::abs(G[1].at(2, -1, 3) - Complex(0, -1)) < 1e-14);
  CHECK(std::abs(G[2].at(2, -1, 3) - Complex(0, 3 * g16.eps)) < 1e-14);
  CHECK(std::abs(d_par(E).at(2, -1, 3) - Complex(0, 3)) < 1e-14);

  // Nyquist is dropped by odd symbols, kept (squared symbol zero) by Laplacians
  SpectralField N(g16);
  N.set(8, 0, 0, 1.0);
  CHECK(max_abs(d1(N)) == 0.0);
  CHECK(max_abs(lap_perp(N)) == 0.0);
}

TEST_CASE("operator identities") {
  const SpectralField F = to_spectral(noise(g16, 11));
  const SpectralPerp gp = grad_perp(F);
  CHECK(max_abs(div_perp(gp[0], gp[1]) - lap_perp(F)) <= 1e-12 * max_abs(F) * 64);
  // derivatives commute
  CHECK(max_abs(d1(d2(F)) - d2(d1(F))) < 1e-12 * 64);
  CHECK(max_abs(d_par(d1(F)) - d1(d_par(F))) < 1e-12 * 64);
  // div_eps ∘ curl_eps = 0
  const SpectralVector V = to_spectral(VectorField{noise(g16, 1), noise(g16, 2), noise(g16, 3)});
  CHECK(max_abs(div_eps(curl_eps(V))) < 1e-11);
  // tagged entry point agrees and rejects unknown names
  const SpectralField in[] = {F};
  CHECK(max_abs(apply_derivative(in, DerivOp::lap_par)[0] - lap_par(F)) == 0.0);
  CHECK(deriv_op_from_name("grad_eps") == DerivOp::grad_eps);
  CHECK_THROWS_AS(deriv_op_from_name("curl"), ContractViolation);
}

TEST_CASE("transverse Leray split") {
  const ScalarField phi = sample(g16, [](double x, double y, double z) {
    return std::sin(x + z) * std::cos(2 * y);
  });
  const SpectralPerp gp = grad_perp(to_spectral(phi));
  const PerpField grad = {to_physical(gp[0]), to_physical(gp[1])};
  PerpSplit s = leray_perp(grad);
  CHECK(l2_norm(std::span<const ScalarField>(s.P.data(), 2)) < 1e-12);
  CHECK(l2_norm(s.Q[0] - grad[0]) < 1e-12);

  const PerpField curl = {-1.0 * to_physical(gp[1]), to_physical(gp[0])};
  s = leray_perp(curl);
  CHECK(l2_norm(std::span<const ScalarField>(s.Q.data(), 2)) < 1e-12);

  const PerpField v = {noise(g16, 4), noise(g16, 5)};
  s = leray_perp(v);
  CHECK(l2_norm(s.P[0] + s.Q[0] - v[0]) < 1e-12);
  const double nv = l2_norm(std::span<const ScalarField>(v.data(), 2));
  CHECK(sobolev_norm(div_perp(to_spectral(s.P[0]), to_spectral(s.P[1])), 0.0) <= 1e-10 * nv);
  CHECK(std::abs(inner(s.P[0], s.Q[0]) + inner(s.P[1], s.Q[1])) <= 1e-10 * nv * nv);
  const PerpSplit again = leray_perp(s.P);
  CHECK(l2_norm(again.P[0] - s.P[0]) <= 1e-12 * nv);
  CHECK(l2_norm(again.P[1] - s.P[1]) <= 1e-12 * nv);

  // k⊥ = 0 column belongs to P
  const PerpField col = {sample(g16, [](double, double, double z) { return std::cos(z); }),
                         ScalarField(g16, 0.5)};
  s = leray_perp(col);
  CHECK(l2_norm(s.Q[0]) + l2_norm(s.Q[1]) < 1e-14);
}

TEST_CASE("divergence-free projection along (k1, k2, eps k3)") {
  SpectralVector B = to_spectral(VectorField{noise(g16, 7), noise(g16, 8), noise(g16, 9)});
  project_div_eps_free(B);
  CHECK(sobolev_norm(div_eps(B), 0.0) < 1e-12);
}

TEST_CASE("sobolev norms") {
  const double vol = kBoxVolume;
  CHECK(sobolev_norm(ScalarField(g16, 1.0), 0.7) == doctest::Approx(std::sqrt(vol)).epsilon(1e-13));
  const ScalarField m = sample(g16, [](double x, double y, double z) { return std::cos(x + 2 * y + z); });
  for (double s : {-1.0, 0.0, 1.0, 2.5})
    CHECK(sobolev_norm(m, s) ==
          doctest::Approx(std::pow(1.0 + 6.0, s / 2) * std::sqrt(vol / 2)).epsilon(1e-12));
  for (unsigned seed = 0; seed < 100; ++seed) {
    const ScalarField f = noise(GridSpec{8, 8, 4, 1.0}, seed);
    CHECK(sobolev_norm(f, 0.0) == doctest::Approx(l2_norm(f)).epsilon(1e-10));
  }
  CHECK_THROWS_AS(sobolev_norm(m, NAN), ContractViolation);
  CHECK(lp_norm(ScalarField(g16, 2.0), 3.0) == doctest::Approx(2.0 * std::cbrt(vol)));
}

TEST_CASE("dealiasing by the 2/3 rule") {
  CHECK(dealias_keeps(5, 16));
  CHECK_FALSE(dealias_keeps(6, 16));
  CHECK(dealias_keeps(-5, 16));
  CHECK_FALSE(dealias_keeps(-8, 16));
  const SpectralField F = to_spectral(noise(g16, 3));
  const SpectralField D = dealias(F);
  CHECK(max_abs(dealias(D) - D) == 0.0);
  CHECK(D.at(5, 0, 0) == F.at(5, 0, 0));
  CHECK(D.at(6, 0, 0) == Complex(0.0));
  // product of two low modes is exact and survives truncation
  const ScalarField a = sample(g16, [](double x, double, double) { return std::cos(x); });
  const ScalarField p = product(a, a);
  const ScalarField ref = sample(g16, [](double x, double, double) { return 0.5 + 0.5 * std::cos(2 * x); });
  CHECK(max_abs(p - ref) < 1e-13);
}

TEST_CASE("mollifier") {
  CHECK(bump_fourier(0.0) == doctest::Approx(1.0).epsilon(1e-10));
  const GridSpec g{16, 16, 16, 1.0};
  const ScalarField c(g, 3.0);
  CHECK(max_abs(mollify(c, 0.3) - c) < 1e-12);
  CHECK_THROWS_AS(mollify(c, 1.5), ContractViolation);
  const ScalarField f = sample(g, [](double x, double y, double z) { return std::sin(x) * std::cos(y) + std::sin(2 * z); });
  double prev = 1e300;
  for (double eta : {0.4, 0.2, 0.1}) {
    const double e = l2_norm(mollify(f, eta) - f);
    CHECK(e < prev);
    prev = e;
  }
  CHECK(mollify(f, 0.2).mean() == doctest::Approx(f.mean()).epsilon(1e-14));
}

TEST_CASE("serial and parallel kernels agree") {
  namespace k = kernels;
  const std::size_t n = 10007;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<double> a(n), b(n), o1(n), o2(n);
  for (std::size_t i = 0; i < n; ++i) a[i] = u(rng), b[i] = u(rng);
  k::serial::multiply(a, b, o1);
  k::omp::multiply(a, b, o2);
  CHECK(o1 == o2);
  std::vector<double> y1 = b, y2 = b;
  k::serial::axpy(0.3, a, y1);
  k::omp::axpy(0.3, a, y2);
  CHECK(y1 == y2);
  CHECK(k::serial::sum_squares(a) == doctest::Approx(k::omp::sum_squares(a)).epsilon(1e-13));

  std::vector<k::cplx> c1(n), m1(n);
  for (std::size_t i = 0; i < n; ++i) c1[i] = {a[i], b[i]}, m1[i] = {b[i], -a[i]};
  auto c2 = c1, m2 = m1;
  k::serial::rotate_pairs(c1, m1, b, 1.3, 0.7);
  k::omp::rotate_pairs(c2, m2, b, 1.3, 0.7);
  CHECK(c1 == c2);
  CHECK(m1 == m2);
  k::serial::scale_modes(c1, a);
  k::omp::scale_modes(c2, a);
  CHECK(c1 == c2);
  CHECK(k::serial::weighted_energy(c1, b) ==
        doctest::Approx(k::omp::weighted_energy(c2, b)).epsilon(1e-13));
}

TEST_CASE("snapshot format") {
  const auto path = std::filesystem::temp_directory_path() / "rmhd_test_snapshot.bin";
  const ScalarField f = noise(g16, 21), h = noise(g16, 22);
  const ScalarField fields[] = {f, h};
  write_snapshot(path, fields, 0.375);
  CHECK(std::filesystem::file_size(path) == kSnapshotHeaderBytes + 2 * g16.points() * 8 + 8);
  const Snapshot s = read_snapshot(path);
  CHECK(s.grid == g16);
  REQUIRE(s.fields.size() == 2);
  CHECK(l2_norm(s.fields[1] - h) == 0.0);
  CHECK(s.trailer == 0.375);
  // truncated file is rejected
  std::filesystem::resize_file(path, kSnapshotHeaderBytes + 100);
  CHECK_THROWS(read_snapshot(path));
  std::filesystem::remove(path);
}
