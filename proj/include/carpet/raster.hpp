#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "carpet/dynamics.hpp"

namespace carpet {

/// Rectangular viewport sampled on a res_x by res_y pixel lattice.
/// Row 0 is the top row (largest imaginary part).
struct GridSpec {
  Complex center{0.0, 0.0};
  double width = 1.0;
  double height = 1.0;
  int res_x = 16;
  int res_y = 16;
  int max_iter = 256;
  /// 0 selects default_escape_radius(map).
  double escape_radius = 0.0;
  /// 2x2 subsamples per pixel; a pixel is Bounded if any subsample is.
  bool supersample = false;
  /// When positive, escaping pixels whose distance estimate to the Julia set
  /// is below this many pixel widths are classified Bounded, so the Julia set
  /// is drawn at least about one pixel thick. McMullen maps only.
  double boundary_width = 0.0;

  void validate() const;
  Complex pixel_center(int col, int row) const;
  /// Plane position of lattice corner (cx, cy), 0 <= cx <= res_x, 0 <= cy <= res_y.
  Complex corner(int cx, int cy) const;
  double pixel_width() const { return width / res_x; }
  double pixel_height() const { return height / res_y; }
  std::size_t pixel_count() const { return static_cast<std::size_t>(res_x) * res_y; }
};

/// Square viewport [lo, hi]^2 at a square resolution.
GridSpec square_grid(double lo, double hi, int resolution, int max_iter);

inline constexpr std::int32_t kBounded = -1;

struct ClassifiedGrid {
  GridSpec spec;
  /// Escape index per pixel, row-major, or kBounded.
  std::vector<std::int32_t> labels;

  std::int32_t at(int col, int row) const { return labels[static_cast<std::size_t>(row) * spec.res_x + col]; }
  bool escaping(int col, int row) const { return at(col, row) != kBounded; }
  double bounded_fraction() const;
};

/// OpenMP kernel, parallel over rows. `threads` <= 0 uses the OpenMP default.
ClassifiedGrid classify_grid(const MapSpec& map, const GridSpec& grid, int threads = 0);
/// Serial per-pixel reference for classify_grid.
ClassifiedGrid classify_grid_reference(const MapSpec& map, const GridSpec& grid);

/// Classifies lambda pixels of the McMullen family of the given degree:
/// Bounded iff the free critical orbit stays bounded for grid.max_iter steps.
/// The pixel containing lambda = 0 is Escaping(0) by convention.
ClassifiedGrid classify_parameter_plane(int degree, const GridSpec& region, int threads = 0);
ClassifiedGrid classify_parameter_plane_reference(int degree, const GridSpec& region);

struct Component {
  int id = 0;
  std::int64_t area = 0;
  /// Touches the viewport edge.
  bool clipped = false;
  /// Row-major pixel indices, ascending.
  std::vector<std::int32_t> pixels;
};

struct ComponentMap {
  int width = 0;
  int height = 0;
  /// Component id per pixel, -1 for bounded pixels.
  std::vector<std::int32_t> label;
  std::vector<Component> components;
};

/// 4-connected components of the escaping pixels. Ids follow the row-major
/// position of each component's first pixel.
ComponentMap label_components(const ClassifiedGrid& grid);

std::vector<Component> filter_components(std::span<const Component> components, std::int64_t min_area,
                                         bool exclude_clipped);

struct Corner {
  int x = 0;
  int y = 0;
  friend auto operator<=>(const Corner&, const Corner&) = default;
};

/// Outer pixel-boundary contour of one component. `vertices` and `corners`
/// are closed: the first entry is repeated at the end.
struct PeripheralCurve {
  int id = 0;
  std::vector<Complex> vertices;
  std::vector<Corner> corners;
  std::int64_t area = 0;
  bool clipped = false;

  /// Vertices without the closing duplicate.
  std::span<const Complex> open_vertices() const {
    return std::span<const Complex>(vertices).first(vertices.empty() ? 0 : vertices.size() - 1);
  }
};

PeripheralCurve trace_boundary(const ClassifiedGrid& grid, const ComponentMap& components, int id);

/// Twice the signed shoelace area of a closed corner path, in pixel units.
std::int64_t shoelace_twice_area(std::span<const Corner> closed_corners);

enum class Palette { TwoTone, EscapeTime };

/// Binary PPM (P6): "P6\n<w> <h>\n255\n" then RGB triples, top row first.
std::string render_ppm(const ClassifiedGrid& grid, Palette palette);
void write_file(const std::filesystem::path& path, const std::string& bytes);

}  // namespace carpet
