#include "tfloc/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace tfloc {

namespace {

struct Geometry {
  PlaneGrid plane;
  SignalGrid signal;
  Margins margins;
};

long floor_cells(double v, double h) { return static_cast<long>(std::floor(v / h + 1e-9)); }
long ceil_cells(double v, double h) { return static_cast<long>(std::ceil(v / h - 1e-9)); }

std::size_t integer_ratio(double a, double b, const char* what) {
  const double r = a / b;
  const double n = std::round(r);
  if (n < 1.0 || std::abs(r - n) > 1e-9 * r) throw ContractViolation(what);
  return static_cast<std::size_t>(n);
}

Geometry plan(const WindowSpec& window, const DomainSpec& domain, double factor, const Resolution& res) {
  if (!(factor > 0.0)) throw ContractViolation("dilation factor must be positive");
  if (!(res.dx > 0.0) || !(res.dxi > 0.0) || !(res.dt_max > 0.0))
    throw ContractViolation("resolution must be positive");
  const double h = res.dx;
  const Margins mg = res.margins.value_or(default_margins(window));
  if (mg.x < 0.0 || mg.xi < 0.0) throw ContractViolation("margins must be nonnegative");
  const BoundingBox bb = domain.bounds(factor);

  const long jx0 = floor_cells(std::min(bb.x_min, 0.0) - mg.x, h);
  const long jx1 = ceil_cells(std::max(bb.x_max, 0.0) + mg.x, h);
  const long kx0 = floor_cells(std::min(bb.xi_min, 0.0) - mg.xi, res.dxi);
  const long kx1 = ceil_cells(std::max(bb.xi_max, 0.0) + mg.xi, res.dxi);
  const auto nx = static_cast<std::size_t>(jx1 - jx0 + 1);
  const auto nxi = static_cast<std::size_t>(kx1 - kx0 + 1);
  PlaneGrid plane(nx, nxi, h, res.dxi, static_cast<double>(jx0) * h, static_cast<double>(kx0) * res.dxi);
  // Frequency period 1/dt = m/dx of the sampled model must cover the plane's xi range.
  const double min_m = static_cast<double>(nxi) * res.dxi * h;

  std::size_t m = 0;
  if (window.kind == WindowKind::tabulated) {
    m = integer_ratio(h, window.dt, "tabulated window: sample spacing must divide the plane cell");
    if (static_cast<double>(m) < min_m - 1e-9)
      throw ContractViolation("tabulated window: sample spacing too coarse for the plane's frequency range");
  } else {
    const auto by_cap = static_cast<std::size_t>(std::ceil(h / res.dt_max - 1e-9));
    const auto by_period = static_cast<std::size_t>(std::ceil(min_m - 1e-9));
    m = std::max<std::size_t>({1, by_cap, by_period});
  }
  const std::size_t n = (nx - 1) * m + 1;
  return {plane, SignalGrid(n, h / static_cast<double>(m), plane.x0()), mg};
}

Window make_window(const WindowSpec& spec, const SignalGrid& grid) {
  switch (spec.kind) {
    case WindowKind::gaussian:
      return gaussian_window(grid, spec.width);
    case WindowKind::hermite:
      return hermite_window(grid, spec.order);
    case WindowKind::tabulated:
      break;
  }
  const double offset = (spec.t0 - grid.t0()) / grid.dt();
  const long shift = std::lround(offset);
  if (std::abs(offset - static_cast<double>(shift)) > 1e-6)
    throw ContractViolation("tabulated window: sample positions are off the signal lattice");
  std::vector<cplx> samples(grid.size());
  double lost = 0.0, total = 0.0;
  for (std::size_t i = 0; i < spec.samples.size(); ++i) {
    const long dst = static_cast<long>(i) + shift;
    total += std::norm(spec.samples[i]);
    if (dst >= 0 && dst < static_cast<long>(grid.size()))
      samples[static_cast<std::size_t>(dst)] = spec.samples[i];
    else
      lost += std::norm(spec.samples[i]);
  }
  if (total == 0.0) throw ContractViolation("tabulated window: all samples are zero");
  if (lost > kWindowTailLimit * total) throw TruncationError("tabulated window extends past the signal grid");
  return tabulated_window(grid, std::move(samples), spec.label);
}

DomainMask make_mask(const DomainSpec& domain, double factor, const PlaneGrid& plane, Margins mg) {
  if (domain.raster) {
    const DomainMask moved = dilate(domain.raster->raster_only(), factor, plane);
    return DomainMask(plane, moved.cells(), {}, mg);
  }
  if (std::holds_alternative<std::monostate>(domain.shape)) throw ContractViolation("domain has no shape");
  return rasterize(plane, scaled(domain.shape, factor), mg);
}

}  // namespace

WindowSpec WindowSpec::gaussian(double width) {
  WindowSpec s;
  s.kind = WindowKind::gaussian;
  s.width = width;
  return s;
}

WindowSpec WindowSpec::hermite(unsigned order) {
  WindowSpec s;
  s.kind = WindowKind::hermite;
  s.order = order;
  return s;
}

WindowSpec WindowSpec::tabulated(std::vector<cplx> samples, double dt, double t0, std::string label) {
  WindowSpec s;
  s.kind = WindowKind::tabulated;
  s.samples = std::move(samples);
  s.dt = dt;
  s.t0 = t0;
  s.label = std::move(label);
  return s;
}

double WindowSpec::time_scale() const {
  switch (kind) {
    case WindowKind::gaussian:
      return width;
    case WindowKind::hermite:
      return std::sqrt(2.0 * order + 1.0);
    case WindowKind::tabulated:
      break;
  }
  if (samples.size() < 2) throw ContractViolation("tabulated window needs at least two samples");
  return tabulated_window(SignalGrid(samples.size(), dt, t0), samples, label).time_scale();
}

double WindowSpec::freq_scale() const {
  switch (kind) {
    case WindowKind::gaussian:
      return 1.0 / width;
    case WindowKind::hermite:
      return std::sqrt(2.0 * order + 1.0);
    case WindowKind::tabulated:
      break;
  }
  if (samples.size() < 2) throw ContractViolation("tabulated window needs at least two samples");
  return tabulated_window(SignalGrid(samples.size(), dt, t0), samples, label).freq_scale();
}

BoundingBox DomainSpec::bounds(double factor) const {
  if (raster) {
    const PlaneGrid& g = raster->grid();
    BoundingBox bb{0.0, 0.0, 0.0, 0.0};
    bool first = true;
    for (std::size_t j = 0; j < g.nx(); ++j)
      for (std::size_t k = 0; k < g.nxi(); ++k) {
        if (!raster->inside(j, k)) continue;
        const double x = g.x(j), xi = g.xi(k);
        if (first) {
          bb = {x, x, xi, xi};
          first = false;
        }
        bb = {std::min(bb.x_min, x), std::max(bb.x_max, x), std::min(bb.xi_min, xi), std::max(bb.xi_max, xi)};
      }
    if (first) throw ContractViolation("raster domain is empty");
    // Cell extents, then the dilation about the origin.
    bb.x_min -= g.dx() / 2;
    bb.x_max += g.dx() / 2;
    bb.xi_min -= g.dxi() / 2;
    bb.xi_max += g.dxi() / 2;
    return {bb.x_min * factor, bb.x_max * factor, bb.xi_min * factor, bb.xi_max * factor};
  }
  if (std::holds_alternative<std::monostate>(shape)) throw ContractViolation("domain has no shape");
  return bounding_box(scaled(shape, factor));
}

Margins default_margins(const WindowSpec& window) {
  return {3.0 * std::max(1.0, window.time_scale()), 3.0 * std::max(1.0, window.freq_scale())};
}

std::size_t planned_dimension(const WindowSpec& window, const DomainSpec& domain, double factor,
                              const Resolution& res) {
  return plan(window, domain, factor, res).signal.size();
}

Setup make_setup(const WindowSpec& window, const DomainSpec& domain, double factor, const Resolution& res) {
  const Geometry geo = plan(window, domain, factor, res);
  if (geo.signal.size() > res.cap) {
    std::ostringstream msg;
    msg << "signal dimension " << geo.signal.size() << " exceeds the cap " << res.cap;
    throw ResourceLimit(msg.str());
  }
  Window g = make_window(window, geo.signal);
  DomainMask mask = make_mask(domain, factor, geo.plane, geo.margins);
  const PlaneGrid tplane = PlaneGrid::centered(geo.margins.x, geo.margins.xi, res.dx, res.dxi);
  PlaneField th = theta(g, tplane);
  Diagnostics diag;
  const double ms = mstar_norm(g, tplane, &diag);
  return Setup{std::move(g), std::move(mask), std::move(th), ms, std::move(diag)};
}

Run run(Setup setup) {
  LocalizationOperator op = build_operator(setup.window, setup.mask);
  SpectralDecomposition dec = eigendecompose(op);
  const double mes = measure(setup.mask);
  AccumulatedSpectrogram rho = accumulated(dec, setup.window, setup.mask.grid(), mes);
  PlaneField moll = convolve_indicator(setup.mask, setup.theta);
  return Run{std::move(setup), std::move(op), std::move(dec), std::move(rho), std::move(moll)};
}

ErrorReport report(const Run& r, std::span<const double> deltas, std::span<const double> exponents) {
  ReportInputs in;
  in.rho = &r.rho;
  in.mollified = &r.mollified;
  in.mask = &r.setup.mask;
  in.dec = &r.dec;
  in.mstar = r.setup.mstar;
  in.deltas = deltas;
  in.exponents = exponents;
  return error_report(in);
}

std::vector<SweepRow> dilation_sweep(const DomainSpec& domain, const WindowSpec& window,
                                     std::span<const double> factors, const Resolution& res,
                                     std::span<const double> deltas) {
  std::vector<SweepRow> rows;
  for (double f : factors) {
    SweepRow row;
    row.factor = f;
    row.dimension = planned_dimension(window, domain, f, res);
    if (row.dimension > res.cap) {
      row.skipped = true;
      std::ostringstream msg;
      msg << "dimension " << row.dimension << " exceeds cap " << res.cap;
      row.note = msg.str();
      rows.push_back(std::move(row));
      continue;
    }
    const Run r = run(make_setup(window, domain, f, res));
    const ErrorReport e = report(r, deltas);
    row.measure = e.measure;
    row.perimeter = e.perimeter;
    row.mstar = e.mstar;
    // Change of variables w = R z: the rescaled error is R^{-2} ||rho_{R Omega} - 1_{R Omega}||_1,
    // and R^{-2} = |Omega| / |R Omega|.
    row.l1_rescaled = e.l1_raw / (f * f);
    row.l1_normalized = e.l1_normalized;
    row.e_omega = e.e_omega;
    row.eqc_ratio = e.eqc_ratio;
    row.a_omega = e.a_omega;
    row.count_half = count_above(r.dec, 0.5);
    row.weak_l2_constants = e.weak_l2_constants;
    row.gap_at_cut = e.gap_at_cut;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace tfloc
