#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "tfloc/errors.hpp"

namespace tfloc {

using cplx = std::complex<double>;

/// A point z = (x, xi) of the time-frequency plane.
struct PlanePoint {
  double x = 0.0;
  double xi = 0.0;

  double norm() const { return std::hypot(x, xi); }
};

/// Uniform sampling t_i = t0 + i*dt, 0 <= i < n, of the time axis.
class SignalGrid {
 public:
  SignalGrid(std::size_t n, double dt, double t0);

  std::size_t size() const { return n_; }
  double dt() const { return dt_; }
  double t0() const { return t0_; }
  double coord(std::size_t i) const { return t0_ + static_cast<double>(i) * dt_; }
  /// End of the covered interval [t0, t0 + n*dt].
  double end() const { return t0_ + static_cast<double>(n_) * dt_; }

  bool operator==(const SignalGrid& other) const = default;

 private:
  std::size_t n_;
  double dt_;
  double t0_;
};

/// Uniform lattice z_jk = (x0 + j*dx, xi0 + k*dxi) of cell midpoints in the plane.
class PlaneGrid {
 public:
  PlaneGrid(std::size_t nx, std::size_t nxi, double dx, double dxi, double x0, double xi0);

  /// Grid with odd point counts whose central point is the origin.
  static PlaneGrid centered(double half_x, double half_xi, double dx, double dxi);

  std::size_t nx() const { return nx_; }
  std::size_t nxi() const { return nxi_; }
  std::size_t size() const { return nx_ * nxi_; }
  double dx() const { return dx_; }
  double dxi() const { return dxi_; }
  double x0() const { return x0_; }
  double xi0() const { return xi0_; }
  double cell_area() const { return dx_ * dxi_; }

  double x(std::size_t j) const { return x0_ + static_cast<double>(j) * dx_; }
  double xi(std::size_t k) const { return xi0_ + static_cast<double>(k) * dxi_; }
  PlanePoint point(std::size_t j, std::size_t k) const { return {x(j), xi(k)}; }

  /// Flat storage index; xi runs fastest so that one time column is contiguous.
  std::size_t index(std::size_t j, std::size_t k) const { return j * nxi_ + k; }

  bool same_cells(const PlaneGrid& other) const;
  bool operator==(const PlaneGrid& other) const = default;

 private:
  std::size_t nx_;
  std::size_t nxi_;
  double dx_;
  double dxi_;
  double x0_;
  double xi0_;
};

/// A scalar field over a PlaneGrid. Integrals are midpoint sums weighted by cell_area.
template <typename T>
class BasicPlaneField {
 public:
  explicit BasicPlaneField(PlaneGrid grid, T fill = T{})
      : grid_(grid), values_(grid.size(), fill) {}
  BasicPlaneField(PlaneGrid grid, std::vector<T> values) : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size())
      throw ContractViolation("plane field: value count does not match grid size");
  }

  const PlaneGrid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }

  T& at(std::size_t j, std::size_t k) { return values_[grid_.index(j, k)]; }
  const T& at(std::size_t j, std::size_t k) const { return values_[grid_.index(j, k)]; }
  T& operator[](std::size_t i) { return values_[i]; }
  const T& operator[](std::size_t i) const { return values_[i]; }

  const std::vector<T>& values() const { return values_; }
  std::vector<T>& values() { return values_; }

 private:
  PlaneGrid grid_;
  std::vector<T> values_;
};

using PlaneField = BasicPlaneField<double>;
using ComplexPlaneField = BasicPlaneField<cplx>;

/// Sum of values times cell_area.
double integral(const PlaneField& field);
double max_value(const PlaneField& field);
double min_value(const PlaneField& field);

/// |F|^2 pointwise.
PlaneField squared_modulus(const ComplexPlaneField& field);

}  // namespace tfloc
