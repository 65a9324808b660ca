#include "tfloc/ginibre.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "tfloc/errors.hpp"

namespace tfloc {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = 1e-17;
constexpr int kMaxIter = 100000;

double lower_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < kMaxIter; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Modified Lentz evaluation of the continued fraction for Q(a, x).
double upper_fraction(double a, double x) {
  constexpr double tiny = std::numeric_limits<double>::min() / kEps;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIter; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double reg_incomplete_gamma(double a, double x) {
  if (!(a > 0.0)) throw ContractViolation("reg_incomplete_gamma: a must be positive");
  if (x < 0.0) throw ContractViolation("reg_incomplete_gamma: x must be nonnegative");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return lower_series(a, x);
  return 1.0 - upper_fraction(a, x);
}

double oracle_eigenvalue(std::size_t k, double radius) {
  if (k == 0) throw ContractViolation("oracle_eigenvalue: index starts at 1");
  return reg_incomplete_gamma(static_cast<double>(k), kPi * radius * radius);
}

double oracle_spectrogram(std::size_t k, PlanePoint z) {
  const double s = kPi * (z.x * z.x + z.xi * z.xi);
  if (s == 0.0) return k == 0 ? 1.0 : 0.0;
  const double kk = static_cast<double>(k);
  return std::exp(kk * std::log(s) - s - std::lgamma(kk + 1.0));
}

double oracle_accspec_modes(std::size_t modes, PlanePoint z) {
  double sum = 0.0;
  for (std::size_t k = 0; k < modes; ++k) sum += oracle_spectrogram(k, z);
  return sum;
}

double oracle_accspec(double radius, PlanePoint z) {
  const auto modes = static_cast<std::size_t>(std::ceil(kPi * radius * radius));
  return oracle_accspec_modes(modes, z);
}

DiskOracle::DiskOracle(double r, std::size_t count) : radius(r) {
  eigenvalues.reserve(count);
  for (std::size_t k = 1; k <= count; ++k) eigenvalues.push_back(oracle_eigenvalue(k, radius));
}

double DiskOracle::truncation_defect() const {
  double s = 0.0;
  for (double l : eigenvalues) s += l;
  return kPi * radius * radius - s;
}

double disk_radius_for_area(double area) {
  if (!(area >= 0.0)) throw ContractViolation("disk area must be nonnegative");
  return std::sqrt(area / kPi);
}

}  // namespace tfloc
