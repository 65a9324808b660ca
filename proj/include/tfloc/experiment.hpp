#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tfloc/accspec.hpp"
#include "tfloc/bounds.hpp"
#include "tfloc/domain.hpp"
#include "tfloc/gabor.hpp"
#include "tfloc/locop.hpp"

namespace tfloc {

/// Recipe for a window; the sampling grid is chosen by make_setup.
struct WindowSpec {
  WindowKind kind = WindowKind::gaussian;
  double width = 1.0;
  unsigned order = 0;
  /// Tabulated windows: samples t_i = t0 + i*dt.
  std::vector<cplx> samples;
  double dt = 0.0;
  double t0 = 0.0;
  std::string label;

  static WindowSpec gaussian(double width);
  static WindowSpec hermite(unsigned order);
  static WindowSpec tabulated(std::vector<cplx> samples, double dt, double t0, std::string label);

  double time_scale() const;
  double freq_scale() const;
};

/// Analytic shape, or a raster mask (with a raster-only descriptor) on its own grid.
struct DomainSpec {
  ShapeDescriptor shape;
  std::optional<DomainMask> raster;

  static DomainSpec of(ShapeDescriptor shape) { return {std::move(shape), std::nullopt}; }
  static DomainSpec of(DomainMask raster) { return {{}, std::move(raster)}; }
  BoundingBox bounds(double factor) const;
};

struct Resolution {
  /// Plane cell sides.
  double dx = 1.0 / 16.0;
  double dxi = 1.0 / 16.0;
  /// Largest admissible signal sample spacing.
  double dt_max = 1.0 / 16.0;
  /// Distance from the domain to the plane edge; window-aware when empty.
  std::optional<Margins> margins;
  /// Largest admissible signal dimension.
  std::size_t cap = 1200;
};

/// 3 * max(1, scale) in each direction.
Margins default_margins(const WindowSpec& window);

/// Geometry and window-dependent fields shared by every computation of one run.
struct Setup {
  Window window;
  DomainMask mask;
  PlaneField theta;  // on a centered plane with the mask's cells
  double mstar = 0.0;
  Diagnostics diag;
};

/// Builds the plane around R*Omega (cells on multiples of the cell sides, origin included),
/// a signal grid covering the plane's x range whose spacing divides the cell and
/// whose frequency period covers the plane's xi range, the window, the mask,
/// Theta and the squared M* norm.
/// Throws ResourceLimit when the signal dimension exceeds res.cap.
Setup make_setup(const WindowSpec& window, const DomainSpec& domain, double factor, const Resolution& res);

/// Signal dimension make_setup would use, without building anything.
std::size_t planned_dimension(const WindowSpec& window, const DomainSpec& domain, double factor,
                              const Resolution& res);

struct Run {
  Setup setup;
  LocalizationOperator op;
  SpectralDecomposition dec;
  AccumulatedSpectrogram rho;
  PlaneField mollified;  // 1_Omega * Theta
};

/// Assembly, full eigendecomposition, rho and 1_Omega * Theta.
Run run(Setup setup);

ErrorReport report(const Run& r, std::span<const double> deltas, std::span<const double> exponents = {});

struct SweepRow {
  double factor = 0.0;
  bool skipped = false;
  std::string note;
  std::size_t dimension = 0;
  double measure = 0.0;
  double perimeter = 0.0;
  double mstar = 0.0;
  /// integral of |rho_{R Omega}(R z) - 1_Omega(z)| dz.
  double l1_rescaled = 0.0;
  double l1_normalized = 0.0;
  double e_omega = 0.0;
  double eqc_ratio = 0.0;
  std::size_t a_omega = 0;
  std::size_t count_half = 0;
  std::map<double, double> weak_l2_constants;
  double gap_at_cut = 0.0;
};

/// One row per dilation factor; factors whose dimension exceeds the cap are marked skipped.
std::vector<SweepRow> dilation_sweep(const DomainSpec& domain, const WindowSpec& window,
                                     std::span<const double> factors, const Resolution& res,
                                     std::span<const double> deltas);

}  // namespace tfloc
