#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "tfloc/grid.hpp"

namespace tfloc {

struct DiskShape {
  PlanePoint center;
  double radius = 1.0;
};

struct RectShape {
  PlanePoint center;
  double width = 1.0;
  double height = 1.0;
};

/// Star polygon with alternating outer/inner vertices; the first outer vertex
/// points along +xi.
struct StarShape {
  unsigned points = 5;
  double r_in = 0.5;
  double r_out = 1.0;
  PlanePoint center;

  std::vector<PlanePoint> vertices() const;
  /// Star with the given inner/outer radius ratio scaled to an exact area.
  static StarShape with_area(unsigned points, double area, double ratio, PlanePoint center = {});
};

/// Analytic description of a domain; monostate marks raster-only masks.
using ShapeDescriptor = std::variant<std::monostate, DiskShape, RectShape, StarShape>;

bool contains(const ShapeDescriptor& shape, PlanePoint z);
double shape_area(const ShapeDescriptor& shape);
double shape_perimeter(const ShapeDescriptor& shape);
/// The set R*shape (dilation about the origin).
ShapeDescriptor scaled(const ShapeDescriptor& shape, double factor);

struct BoundingBox {
  double x_min, x_max, xi_min, xi_max;
};
BoundingBox bounding_box(const ShapeDescriptor& shape);

/// Minimum distance between occupied cells and the grid edge.
struct Margins {
  double x = 3.0;
  double xi = 3.0;
};

/// Rasterized indicator of a compact domain: a cell is inside iff its midpoint is.
class DomainMask {
 public:
  /// Validates that every inside cell keeps the required margin from the grid edge.
  DomainMask(PlaneGrid grid, std::vector<std::uint8_t> inside, ShapeDescriptor shape = {},
             Margins margins = {});

  const PlaneGrid& grid() const { return grid_; }
  bool inside(std::size_t j, std::size_t k) const { return inside_[grid_.index(j, k)] != 0; }
  const std::vector<std::uint8_t>& cells() const { return inside_; }
  std::size_t cell_count() const { return count_; }
  bool empty() const { return count_ == 0; }
  const ShapeDescriptor& shape() const { return shape_; }
  bool has_shape() const { return !std::holds_alternative<std::monostate>(shape_); }
  const Margins& margins() const { return margins_; }

  /// Same cells, analytic descriptor dropped.
  DomainMask raster_only() const;

 private:
  PlaneGrid grid_;
  std::vector<std::uint8_t> inside_;
  ShapeDescriptor shape_;
  Margins margins_;
  std::size_t count_ = 0;
};

DomainMask rasterize(const PlaneGrid& grid, const ShapeDescriptor& shape, Margins margins = {});
DomainMask disk(const PlaneGrid& grid, PlanePoint center, double radius, Margins margins = {});
DomainMask rectangle(const PlaneGrid& grid, PlanePoint center, double width, double height,
                     Margins margins = {});
DomainMask star(const PlaneGrid& grid, unsigned points, double r_in, double r_out, PlanePoint center,
                Margins margins = {});

/// cell count * cell area; the discrete measure used by every downstream formula.
double measure(const DomainMask& mask);

/// Exact perimeter for analytic shapes; otherwise the marching-squares contour length of
/// the once-smoothed indicator at level 1/2.
double perimeter(const DomainMask& mask);

/// Total length of the level-set contour of a field, by marching squares with
/// linear interpolation along cell edges. Values outside the grid count as 0.
double contour_length(const PlaneField& field, double level);

/// The mask of R*Omega on the same grid.
DomainMask dilate(const DomainMask& mask, double factor);
/// The mask of R*Omega on a caller-provided (typically enlarged) grid with the same cells.
DomainMask dilate(const DomainMask& mask, double factor, const PlaneGrid& target);

/// 1 inside, 0 outside.
PlaneField indicator_field(const DomainMask& mask);

/// (1_Omega * theta)(z) = sum over inside cells z' of theta(z - z') * cell_area, on the
/// mask grid. theta must live on a grid with identical cells whose lattice contains
/// the origin; offsets beyond it count as zero.
PlaneField convolve_indicator(const DomainMask& mask, const PlaneField& theta);

}  // namespace tfloc
