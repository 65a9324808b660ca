#pragma once

#include <cstddef>
#include <vector>

#include "tfloc/grid.hpp"

namespace tfloc {

// Closed forms for the standard Gaussian window and a disk centered at the origin.
// The eigenfunctions are the Hermite functions for every radius, their spectrograms
// are pi^k/k! |z|^{2k} e^{-pi|z|^2}, and the eigenvalues are regularized incomplete
// gamma values P(k, pi R^2).

/// Regularized lower incomplete gamma P(a, x) = gamma(a, x) / Gamma(a), a > 0, x >= 0.
/// Series below x = a + 1, continued fraction above.
double reg_incomplete_gamma(double a, double x);

/// k-th eigenvalue (k >= 1) for the disk of radius R: P(k, pi R^2).
double oracle_eigenvalue(std::size_t k, double radius);

/// Spectrogram of the Hermite function of order k (k >= 0) at z, in log space.
double oracle_spectrogram(std::size_t k, PlanePoint z);

/// Accumulated spectrogram of the disk of radius R: sum over k < ceil(pi R^2).
double oracle_accspec(double radius, PlanePoint z);

/// Sum of the first `modes` Hermite spectrograms at z.
double oracle_accspec_modes(std::size_t modes, PlanePoint z);

/// Tabulated eigenvalues for one radius.
struct DiskOracle {
  double radius;
  std::vector<double> eigenvalues;  // eigenvalues[k-1] = P(k, pi R^2)

  DiskOracle(double radius, std::size_t count);
  std::size_t count() const { return eigenvalues.size(); }
  /// pi R^2 - sum of the tabulated eigenvalues (the mass of the untabulated modes).
  double truncation_defect() const;
};

/// Radius of the disk with area pi R^2 = area.
double disk_radius_for_area(double area);

}  // namespace tfloc
