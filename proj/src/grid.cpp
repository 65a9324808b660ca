#include "tfloc/grid.hpp"

#include <algorithm>

namespace tfloc {

SignalGrid::SignalGrid(std::size_t n, double dt, double t0) : n_(n), dt_(dt), t0_(t0) {
  if (n < 2) throw ContractViolation("signal grid needs at least two samples");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ContractViolation("signal grid spacing must be positive");
  if (!std::isfinite(t0)) throw ContractViolation("signal grid origin must be finite");
}

PlaneGrid::PlaneGrid(std::size_t nx, std::size_t nxi, double dx, double dxi, double x0, double xi0)
    : nx_(nx), nxi_(nxi), dx_(dx), dxi_(dxi), x0_(x0), xi0_(xi0) {
  if (nx == 0 || nxi == 0) throw ContractViolation("plane grid needs at least one point per axis");
  if (!(dx > 0.0) || !(dxi > 0.0)) throw ContractViolation("plane grid cell sides must be positive");
  if (!std::isfinite(x0) || !std::isfinite(xi0)) throw ContractViolation("plane grid origin must be finite");
}

PlaneGrid PlaneGrid::centered(double half_x, double half_xi, double dx, double dxi) {
  const auto hx = static_cast<std::size_t>(std::ceil(half_x / dx - 1e-9));
  const auto hxi = static_cast<std::size_t>(std::ceil(half_xi / dxi - 1e-9));
  return PlaneGrid(2 * hx + 1, 2 * hxi + 1, dx, dxi, -static_cast<double>(hx) * dx,
                   -static_cast<double>(hxi) * dxi);
}

bool PlaneGrid::same_cells(const PlaneGrid& other) const {
  const double tol = 1e-12;
  return std::abs(dx_ - other.dx_) <= tol * dx_ && std::abs(dxi_ - other.dxi_) <= tol * dxi_;
}

double integral(const PlaneField& field) {
  double s = 0.0;
  for (double v : field.values()) s += v;
  return s * field.grid().cell_area();
}

double max_value(const PlaneField& field) {
  return *std::max_element(field.values().begin(), field.values().end());
}

double min_value(const PlaneField& field) {
  return *std::min_element(field.values().begin(), field.values().end());
}

PlaneField squared_modulus(const ComplexPlaneField& field) {
  PlaneField out(field.grid());
  for (std::size_t i = 0; i < field.size(); ++i) out[i] = std::norm(field[i]);
  return out;
}

}  // namespace tfloc
