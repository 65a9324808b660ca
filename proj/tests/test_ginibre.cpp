#include "support.hpp"

#include "tfloc/ginibre.hpp"

using namespace tfloc;
using tfloc::testing::kPi;

namespace {

// 2 pi int_0^rmax r f(r) dr by composite Simpson.
template <typename F>
double radial_integral(F f, double rmax, int n = 4000) {
  const double h = rmax / n;
  double s = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double r = i * h;
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    s += w * r * f(r);
  }
  return 2.0 * kPi * s * h / 3.0;
}

double l1_normalized(double area) {
  const double radius = disk_radius_for_area(area);
  // Split at the disk edge so the jump of the indicator falls on a node.
  const double inside = radial_integral([&](double r) { return 1.0 - oracle_accspec(radius, {r, 0.0}); }, radius);
  const double all = radial_integral([&](double r) { return oracle_accspec(radius, {r, 0.0}); }, radius + 8.0);
  const double in_mass = area - inside;
  return (inside + (all - in_mass)) / area;
}

}  // namespace

TEST_CASE("regularized incomplete gamma reference values") {
  // Reference values from scipy.special.gammainc.
  CHECK(reg_incomplete_gamma(1, 1) == doctest::Approx(0.6321205588285577).epsilon(1e-13));
  CHECK(reg_incomplete_gamma(2, 1) == doctest::Approx(0.2642411176571153).epsilon(1e-13));
  CHECK(reg_incomplete_gamma(5, 9) == doctest::Approx(0.945036358504895).epsilon(1e-13));
  CHECK(reg_incomplete_gamma(9, 9) == doctest::Approx(0.5443473956775814).epsilon(1e-13));
  CHECK(reg_incomplete_gamma(18, 9) == doctest::Approx(0.005319571251181632).epsilon(1e-12));
  CHECK(reg_incomplete_gamma(50, 40) == doctest::Approx(0.07033506665939494).epsilon(1e-12));
  CHECK(reg_incomplete_gamma(100, 120) == doctest::Approx(0.9721362601094793).epsilon(1e-12));
  CHECK(reg_incomplete_gamma(3, 0) == 0.0);
  CHECK_THROWS_AS(reg_incomplete_gamma(0, 1), ContractViolation);
  CHECK_THROWS_AS(reg_incomplete_gamma(1, -1), ContractViolation);
}

TEST_CASE("eigenvalues telescope to the area") {
  // sum_{k >= 1} P(k, x) = x
  double s = 0.0;
  for (std::size_t k = 1; k <= 200; ++k) s += oracle_eigenvalue(k, disk_radius_for_area(9.0));
  CHECK(s == doctest::Approx(9.0).epsilon(1e-10));
  const DiskOracle o(disk_radius_for_area(9.0), 30);
  CHECK(o.count() == 30);
  CHECK(o.truncation_defect() >= 0.0);
  CHECK(o.truncation_defect() < 1e-7);
  CHECK(o.eigenvalues[8] == doctest::Approx(0.5443473956775814).epsilon(1e-13));
  for (std::size_t k = 1; k < o.count(); ++k) CHECK(o.eigenvalues[k] < o.eigenvalues[k - 1]);
  CHECK_THROWS_AS(oracle_eigenvalue(0, 1.0), ContractViolation);
}

TEST_CASE("spectrogram mass inside the disk is the eigenvalue") {
  const double r1 = disk_radius_for_area(1.0);
  CHECK(radial_integral([](double r) { return oracle_spectrogram(0, {r, 0.0}); }, r1) ==
        doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-9));
  const double r9 = disk_radius_for_area(9.0);
  for (std::size_t k = 0; k < 12; ++k)
    CHECK(radial_integral([k](double r) { return oracle_spectrogram(k, {0.0, r}); }, r9) ==
          doctest::Approx(oracle_eigenvalue(k + 1, r9)).epsilon(1e-8));
}

TEST_CASE("hermite spectrograms partition unity") {
  for (double r : {0.0, 0.4, 1.0, 2.5}) {
    double s = 0.0;
    for (std::size_t k = 0; k < 200; ++k) s += oracle_spectrogram(k, {r, 0.0});
    CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(oracle_spectrogram(0, {0.0, 0.0}) == doctest::Approx(1.0));
  CHECK(oracle_spectrogram(3, {0.0, 0.0}) == 0.0);
  CHECK(oracle_spectrogram(150, {1.0, 0.0}) >= 0.0);
  // Rotation invariance.
  CHECK(oracle_spectrogram(4, {0.6, 0.8}) == doctest::Approx(oracle_spectrogram(4, {1.0, 0.0})));
}

TEST_CASE("accumulated spectrogram of a disk") {
  const double r9 = disk_radius_for_area(9.0);
  CHECK(oracle_accspec(r9, {0.0, 0.0}) == doctest::Approx(1.0));
  // 1 - P(9, 9)
  CHECK(oracle_accspec(r9, {r9, 0.0}) == doctest::Approx(0.4556526043224186).epsilon(1e-12));
  CHECK(oracle_accspec_modes(9, {0.0, r9}) == doctest::Approx(oracle_accspec(r9, {r9, 0.0})));
  for (double area : {4.0, 9.0, 16.0, 50.0}) {
    const double r = disk_radius_for_area(area);
    const double edge = oracle_accspec(r, {r, 0.0});
    CHECK(edge > 0.4);
    CHECK(edge < 0.6);
    double prev = 2.0;
    for (double s = 0.0; s < r + 4.0; s += 0.05) {
      const double v = oracle_accspec(r, {s, 0.0});
      CHECK(v <= prev + 1e-14);
      CHECK(v >= 0.0);
      CHECK(v <= 1.0 + 1e-15);
      prev = v;
    }
    CHECK(radial_integral([r](double s) { return oracle_accspec(r, {s, 0.0}); }, r + 8.0) ==
          doctest::Approx(std::ceil(area)).epsilon(1e-8));
  }
}

TEST_CASE("normalized L1 error of the disk decreases with the radius") {
  const double e4 = l1_normalized(4.0), e9 = l1_normalized(9.0), e16 = l1_normalized(16.0);
  CHECK(e4 > e9);
  CHECK(e9 > e16);
  // O(1/R) decay: e * R stays bounded.
  CHECK(e16 * 4.0 < 1.2 * e4 * 2.0);
}

TEST_CASE("disk radius for an area") {
  CHECK(disk_radius_for_area(kPi) == doctest::Approx(1.0));
  CHECK_THROWS_AS(disk_radius_for_area(-1.0), ContractViolation);
}
