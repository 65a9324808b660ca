#include "tfloc/domain.hpp"

#include <algorithm>
#include <array>
#include <numbers>
#include <sstream>

#include "tfloc/parallel.hpp"

namespace tfloc {

namespace {

constexpr double kPi = std::numbers::pi;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool in_polygon(const std::vector<PlanePoint>& poly, PlanePoint z) {
  bool in = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const PlanePoint& a = poly[i];
    const PlanePoint& b = poly[j];
    if ((a.xi > z.xi) != (b.xi > z.xi)) {
      const double x_cross = a.x + (z.xi - a.xi) * (b.x - a.x) / (b.xi - a.xi);
      if (z.x < x_cross) in = !in;
    }
  }
  return in;
}

double polygon_area(const std::vector<PlanePoint>& poly) {
  double s = 0.0;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++)
    s += poly[j].x * poly[i].xi - poly[i].x * poly[j].xi;
  return std::abs(s) / 2.0;
}

double polygon_perimeter(const std::vector<PlanePoint>& poly) {
  double s = 0.0;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++)
    s += std::hypot(poly[i].x - poly[j].x, poly[i].xi - poly[j].xi);
  return s;
}

void validate(const StarShape& s) {
  if (s.points < 3) throw ContractViolation("star needs at least 3 points");
  if (!(s.r_in > 0.0) || !(s.r_in < s.r_out)) throw ContractViolation("star radii must satisfy 0 < r_in < r_out");
}

void validate(const ShapeDescriptor& shape) {
  std::visit(overloaded{[](std::monostate) {},
                        [](const DiskShape& d) {
                          if (!(d.radius > 0.0)) throw ContractViolation("disk radius must be positive");
                        },
                        [](const RectShape& r) {
                          if (!(r.width > 0.0) || !(r.height > 0.0))
                            throw ContractViolation("rectangle sides must be positive");
                        },
                        [](const StarShape& s) { validate(s); }},
             shape);
}

}  // namespace

std::vector<PlanePoint> StarShape::vertices() const {
  std::vector<PlanePoint> v;
  v.reserve(2 * points);
  for (unsigned m = 0; m < 2 * points; ++m) {
    const double angle = kPi / 2.0 + m * kPi / points;
    const double r = (m % 2 == 0) ? r_out : r_in;
    v.push_back({center.x + r * std::cos(angle), center.xi + r * std::sin(angle)});
  }
  return v;
}

StarShape StarShape::with_area(unsigned points, double area, double ratio, PlanePoint center) {
  if (!(ratio > 0.0 && ratio < 1.0)) throw ContractViolation("star radius ratio must lie in (0, 1)");
  if (!(area > 0.0)) throw ContractViolation("star area must be positive");
  // Area of the alternating polygon: points * r_in * r_out * sin(pi / points).
  const double r_out = std::sqrt(area / (points * ratio * std::sin(kPi / points)));
  StarShape s{points, ratio * r_out, r_out, center};
  validate(s);
  return s;
}

bool contains(const ShapeDescriptor& shape, PlanePoint z) {
  return std::visit(overloaded{[](std::monostate) -> bool {
                                 throw ContractViolation("raster-only domain has no analytic membership test");
                               },
                               [&](const DiskShape& d) {
                                 return std::hypot(z.x - d.center.x, z.xi - d.center.xi) <= d.radius;
                               },
                               [&](const RectShape& r) {
                                 return std::abs(z.x - r.center.x) <= r.width / 2.0 &&
                                        std::abs(z.xi - r.center.xi) <= r.height / 2.0;
                               },
                               [&](const StarShape& s) { return in_polygon(s.vertices(), z); }},
                    shape);
}

double shape_area(const ShapeDescriptor& shape) {
  return std::visit(overloaded{[](std::monostate) -> double {
                                 throw ContractViolation("raster-only domain has no analytic area");
                               },
                               [](const DiskShape& d) { return kPi * d.radius * d.radius; },
                               [](const RectShape& r) { return r.width * r.height; },
                               [](const StarShape& s) { return polygon_area(s.vertices()); }},
                    shape);
}

double shape_perimeter(const ShapeDescriptor& shape) {
  return std::visit(overloaded{[](std::monostate) -> double {
                                 throw ContractViolation("raster-only domain has no analytic perimeter");
                               },
                               [](const DiskShape& d) { return 2.0 * kPi * d.radius; },
                               [](const RectShape& r) { return 2.0 * (r.width + r.height); },
                               [](const StarShape& s) { return polygon_perimeter(s.vertices()); }},
                    shape);
}

ShapeDescriptor scaled(const ShapeDescriptor& shape, double factor) {
  if (!(factor > 0.0)) throw ContractViolation("dilation factor must be positive");
  const auto scale = [factor](PlanePoint p) { return PlanePoint{p.x * factor, p.xi * factor}; };
  return std::visit(
      overloaded{[](std::monostate) -> ShapeDescriptor { return std::monostate{}; },
                 [&](const DiskShape& d) -> ShapeDescriptor { return DiskShape{scale(d.center), d.radius * factor}; },
                 [&](const RectShape& r) -> ShapeDescriptor {
                   return RectShape{scale(r.center), r.width * factor, r.height * factor};
                 },
                 [&](const StarShape& s) -> ShapeDescriptor {
                   return StarShape{s.points, s.r_in * factor, s.r_out * factor, scale(s.center)};
                 }},
      shape);
}

BoundingBox bounding_box(const ShapeDescriptor& shape) {
  return std::visit(
      overloaded{[](std::monostate) -> BoundingBox {
                   throw ContractViolation("raster-only domain has no analytic bounding box");
                 },
                 [](const DiskShape& d) {
                   return BoundingBox{d.center.x - d.radius, d.center.x + d.radius, d.center.xi - d.radius,
                                      d.center.xi + d.radius};
                 },
                 [](const RectShape& r) {
                   return BoundingBox{r.center.x - r.width / 2, r.center.x + r.width / 2,
                                      r.center.xi - r.height / 2, r.center.xi + r.height / 2};
                 },
                 [](const StarShape& s) {
                   BoundingBox b{s.center.x, s.center.x, s.center.xi, s.center.xi};
                   for (const PlanePoint& p : s.vertices()) {
                     b.x_min = std::min(b.x_min, p.x);
                     b.x_max = std::max(b.x_max, p.x);
                     b.xi_min = std::min(b.xi_min, p.xi);
                     b.xi_max = std::max(b.xi_max, p.xi);
                   }
                   return b;
                 }},
      shape);
}

DomainMask::DomainMask(PlaneGrid grid, std::vector<std::uint8_t> inside, ShapeDescriptor shape, Margins margins)
    : grid_(grid), inside_(std::move(inside)), shape_(std::move(shape)), margins_(margins) {
  if (inside_.size() != grid_.size()) throw ContractViolation("mask: indicator size does not match grid");
  validate(shape_);
  const double x_lo = grid_.x(0), x_hi = grid_.x(grid_.nx() - 1);
  const double xi_lo = grid_.xi(0), xi_hi = grid_.xi(grid_.nxi() - 1);
  const double tol = 1e-9;
  if (has_shape()) {
    const BoundingBox b = bounding_box(shape_);
    if (b.x_min < x_lo - grid_.dx() / 2 - tol || b.x_max > x_hi + grid_.dx() / 2 + tol ||
        b.xi_min < xi_lo - grid_.dxi() / 2 - tol || b.xi_max > xi_hi + grid_.dxi() / 2 + tol)
      throw MarginViolation("domain extends past the plane grid");
  }
  for (std::size_t j = 0; j < grid_.nx(); ++j) {
    for (std::size_t k = 0; k < grid_.nxi(); ++k) {
      std::uint8_t& v = inside_[grid_.index(j, k)];
      v = v ? 1 : 0;
      if (!v) continue;
      ++count_;
      const double x = grid_.x(j), xi = grid_.xi(k);
      if (x - x_lo < margins_.x - tol || x_hi - x < margins_.x - tol || xi - xi_lo < margins_.xi - tol ||
          xi_hi - xi < margins_.xi - tol) {
        std::ostringstream msg;
        msg << "domain cell at (" << x << ", " << xi << ") violates the grid margin (" << margins_.x << ", "
            << margins_.xi << ")";
        throw MarginViolation(msg.str());
      }
    }
  }
}

DomainMask DomainMask::raster_only() const { return DomainMask(grid_, inside_, std::monostate{}, margins_); }

DomainMask rasterize(const PlaneGrid& grid, const ShapeDescriptor& shape, Margins margins) {
  validate(shape);
  std::vector<std::uint8_t> inside(grid.size(), 0);
  parallel_for(0, grid.nx(), [&](std::size_t j) {
    for (std::size_t k = 0; k < grid.nxi(); ++k) inside[grid.index(j, k)] = contains(shape, grid.point(j, k)) ? 1 : 0;
  });
  return DomainMask(grid, std::move(inside), shape, margins);
}

DomainMask disk(const PlaneGrid& grid, PlanePoint center, double radius, Margins margins) {
  return rasterize(grid, DiskShape{center, radius}, margins);
}

DomainMask rectangle(const PlaneGrid& grid, PlanePoint center, double width, double height, Margins margins) {
  return rasterize(grid, RectShape{center, width, height}, margins);
}

DomainMask star(const PlaneGrid& grid, unsigned points, double r_in, double r_out, PlanePoint center,
                Margins margins) {
  return rasterize(grid, StarShape{points, r_in, r_out, center}, margins);
}

double measure(const DomainMask& mask) {
  return static_cast<double>(mask.cell_count()) * mask.grid().cell_area();
}

namespace {

// One pass of the separable [1 2 1]/4 filter, zero outside the grid.
PlaneField binomial_smooth(const PlaneField& f) {
  const PlaneGrid& g = f.grid();
  PlaneField a(g), b(g);
  for (std::size_t j = 0; j < g.nx(); ++j)
    for (std::size_t k = 0; k < g.nxi(); ++k) {
      double s = 2.0 * f.at(j, k);
      if (j > 0) s += f.at(j - 1, k);
      if (j + 1 < g.nx()) s += f.at(j + 1, k);
      a.at(j, k) = s / 4.0;
    }
  for (std::size_t j = 0; j < g.nx(); ++j)
    for (std::size_t k = 0; k < g.nxi(); ++k) {
      double s = 2.0 * a.at(j, k);
      if (k > 0) s += a.at(j, k - 1);
      if (k + 1 < g.nxi()) s += a.at(j, k + 1);
      b.at(j, k) = s / 4.0;
    }
  return b;
}

}  // namespace

double perimeter(const DomainMask& mask) {
  if (mask.has_shape()) return shape_perimeter(mask.shape());
  // On a 0/1 field the interpolated crossings sit at edge midpoints and the contour
  // is an 8-direction staircase (about 5% long on circles); smoothing once fixes that.
  return contour_length(binomial_smooth(indicator_field(mask)), 0.5);
}

double contour_length(const PlaneField& field, double level) {
  const PlaneGrid& g = field.grid();
  const long nx = static_cast<long>(g.nx());
  const long nxi = static_cast<long>(g.nxi());
  const auto value = [&](long j, long k) {
    if (j < 0 || k < 0 || j >= nx || k >= nxi) return 0.0;
    return field.at(static_cast<std::size_t>(j), static_cast<std::size_t>(k));
  };

  double total = 0.0;
  for (long j = -1; j < nx; ++j) {
    for (long k = -1; k < nxi; ++k) {
      // Corners counter-clockwise from bottom-left; edge e joins corner e and e+1.
      const std::array<long, 4> cj{j, j + 1, j + 1, j};
      const std::array<long, 4> ck{k, k, k + 1, k + 1};
      std::array<double, 4> v{};
      std::array<bool, 4> up{};
      int n_up = 0;
      for (int c = 0; c < 4; ++c) {
        v[c] = value(cj[c], ck[c]);
        up[c] = v[c] > level;
        n_up += up[c];
      }
      if (n_up == 0 || n_up == 4) continue;

      std::array<PlanePoint, 4> cross{};
      for (int e = 0; e < 4; ++e) {
        const int a = e, b = (e + 1) % 4;
        if (up[a] == up[b]) continue;
        const double t = (level - v[a]) / (v[b] - v[a]);
        const double xa = g.x0() + cj[a] * g.dx(), xia = g.xi0() + ck[a] * g.dxi();
        const double xb = g.x0() + cj[b] * g.dx(), xib = g.xi0() + ck[b] * g.dxi();
        cross[e] = {xa + t * (xb - xa), xia + t * (xib - xia)};
      }
      const auto seg = [&](int e1, int e2) {
        return std::hypot(cross[e1].x - cross[e2].x, cross[e1].xi - cross[e2].xi);
      };

      const bool saddle = n_up == 2 && up[0] == up[2];
      if (saddle) {
        const bool center_up = (v[0] + v[1] + v[2] + v[3]) / 4.0 > level;
        // Cut off the two corners that are not joined through the center.
        for (int c = 0; c < 4; ++c)
          if (up[c] != center_up) total += seg((c + 3) % 4, c);
      } else {
        int first = -1, second = -1;
        for (int e = 0; e < 4; ++e) {
          if (up[e] == up[(e + 1) % 4]) continue;
          (first < 0 ? first : second) = e;
        }
        total += seg(first, second);
      }
    }
  }
  return total;
}

PlaneField indicator_field(const DomainMask& mask) {
  PlaneField f(mask.grid());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = mask.cells()[i] ? 1.0 : 0.0;
  return f;
}

DomainMask dilate(const DomainMask& mask, double factor) { return dilate(mask, factor, mask.grid()); }

DomainMask dilate(const DomainMask& mask, double factor, const PlaneGrid& target) {
  if (!(factor > 0.0)) throw ContractViolation("dilation factor must be positive");
  if (!target.same_cells(mask.grid())) throw ContractViolation("dilate: target grid must keep the cell size");
  if (mask.has_shape()) return rasterize(target, scaled(mask.shape(), factor), mask.margins());

  // Bilinear lookup of the source indicator at z / R.
  const PlaneGrid& src = mask.grid();
  const auto sample = [&](long j, long k) -> double {
    if (j < 0 || k < 0 || j >= static_cast<long>(src.nx()) || k >= static_cast<long>(src.nxi())) return 0.0;
    return mask.inside(static_cast<std::size_t>(j), static_cast<std::size_t>(k)) ? 1.0 : 0.0;
  };
  std::vector<std::uint8_t> inside(target.size(), 0);
  for (std::size_t j = 0; j < target.nx(); ++j) {
    for (std::size_t k = 0; k < target.nxi(); ++k) {
      const double u = (target.x(j) / factor - src.x0()) / src.dx();
      const double w = (target.xi(k) / factor - src.xi0()) / src.dxi();
      const long j0 = static_cast<long>(std::floor(u));
      const long k0 = static_cast<long>(std::floor(w));
      const double fu = u - j0, fw = w - k0;
      const double v = (1 - fu) * (1 - fw) * sample(j0, k0) + fu * (1 - fw) * sample(j0 + 1, k0) +
                       (1 - fu) * fw * sample(j0, k0 + 1) + fu * fw * sample(j0 + 1, k0 + 1);
      inside[target.index(j, k)] = v >= 0.5 ? 1 : 0;
    }
  }
  return DomainMask(target, std::move(inside), std::monostate{}, mask.margins());
}

PlaneField convolve_indicator(const DomainMask& mask, const PlaneField& theta) {
  const PlaneGrid& g = mask.grid();
  const PlaneGrid& tg = theta.grid();
  if (!g.same_cells(tg)) throw ContractViolation("convolve_indicator: theta and mask cells differ");
  const double ax = -tg.x0() / tg.dx(), axi = -tg.xi0() / tg.dxi();
  if (std::abs(ax - std::round(ax)) > 1e-9 || std::abs(axi - std::round(axi)) > 1e-9)
    throw ContractViolation("convolve_indicator: theta lattice must contain the origin");
  const long ox = std::lround(ax), oxi = std::lround(axi);
  const long tnx = static_cast<long>(tg.nx()), tnxi = static_cast<long>(tg.nxi());
  const long nx = static_cast<long>(g.nx()), nxi = static_cast<long>(g.nxi());
  const double area = g.cell_area();

  // Inside cells listed per column.
  std::vector<std::vector<long>> rows(g.nx());
  for (std::size_t j = 0; j < g.nx(); ++j)
    for (std::size_t k = 0; k < g.nxi(); ++k)
      if (mask.inside(j, k)) rows[j].push_back(static_cast<long>(k));

  PlaneField out(g);
  parallel_for(0, g.nx(), [&](std::size_t jj) {
    const long j = static_cast<long>(jj);
    for (long a = -ox; a < tnx - ox; ++a) {
      const long src = j - a;
      if (src < 0 || src >= nx) continue;
      for (long ks : rows[static_cast<std::size_t>(src)]) {
        for (long b = -oxi; b < tnxi - oxi; ++b) {
          const long k = ks + b;
          if (k < 0 || k >= nxi) continue;
          out.at(jj, static_cast<std::size_t>(k)) +=
              theta.at(static_cast<std::size_t>(a + ox), static_cast<std::size_t>(b + oxi));
        }
      }
    }
    for (long k = 0; k < nxi; ++k) out.at(jj, static_cast<std::size_t>(k)) *= area;
  });
  return out;
}

}  // namespace tfloc
