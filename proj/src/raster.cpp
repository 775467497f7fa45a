#include "carpet/raster.hpp"

#include <omp.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>

#include "carpet/error.hpp"

namespace carpet {
namespace {

std::int32_t fold_outcome(const OrbitOutcome& outcome) {
  switch (outcome.kind) {
    case OrbitOutcome::Kind::Escaped: return outcome.index;
    case OrbitOutcome::Kind::HitPole: return outcome.index + 1;  // the pole maps to infinity
    case OrbitOutcome::Kind::Bounded: break;
  }
  return kBounded;
}

double resolved_radius(const MapSpec& map, const GridSpec& grid) {
  if (grid.escape_radius > 0.0) return grid.escape_radius;
  return default_escape_radius(map);
}

std::int32_t classify_point(const MapSpec& map, const GridSpec& grid, double radius, Complex z) {
  if (grid.boundary_width <= 0.0) return fold_outcome(escape_time(map, z, grid.max_iter, radius));
  const EscapeEstimate estimate = escape_with_distance(map, z, grid.max_iter, radius);
  const double band = grid.boundary_width * std::min(grid.pixel_width(), grid.pixel_height());
  if (estimate.outcome.kind == OrbitOutcome::Kind::Escaped && estimate.distance < band) return kBounded;
  return fold_outcome(estimate.outcome);
}

std::int32_t classify_pixel(const MapSpec& map, const GridSpec& grid, double radius, int col, int row) {
  if (!grid.supersample) return classify_point(map, grid, radius, grid.pixel_center(col, row));

  std::int32_t best = kBounded;
  for (int sy = 0; sy < 2; ++sy) {
    for (int sx = 0; sx < 2; ++sx) {
      const double x = grid.center.real() +
                       ((4.0 * col + 1.0 + 2.0 * sx - 2.0 * grid.res_x) * grid.width) / (4.0 * grid.res_x);
      const double y = grid.center.imag() -
                       ((4.0 * row + 1.0 + 2.0 * sy - 2.0 * grid.res_y) * grid.height) / (4.0 * grid.res_y);
      const std::int32_t label = classify_point(map, grid, radius, Complex{x, y});
      if (label == kBounded) return kBounded;
      best = (best == kBounded) ? label : std::min(best, label);
    }
  }
  return best;
}

bool pixel_contains_origin(const GridSpec& grid, int col, int row) {
  const Complex top_left = grid.corner(col, row);
  const Complex bottom_right = grid.corner(col + 1, row + 1);
  return top_left.real() <= 0.0 && 0.0 <= bottom_right.real() && bottom_right.imag() <= 0.0 &&
         0.0 <= top_left.imag();
}

std::int32_t classify_parameter(int degree, const GridSpec& region, int col, int row) {
  if (pixel_contains_origin(region, col, row)) return 0;
  const MapSpec map = MapSpec::mcmullen(degree, region.pixel_center(col, row));
  const double radius = std::max(region.escape_radius, default_escape_radius(map));
  return fold_outcome(free_critical_outcome(map, region.max_iter, radius));
}

int thread_count(int threads) { return threads > 0 ? threads : omp_get_max_threads(); }

std::array<std::uint8_t, 3> escape_color(std::int32_t label, int max_iter) {
  if (label == kBounded) return {0, 0, 0};
  const double t = std::log1p(static_cast<double>(label)) / std::log1p(static_cast<double>(max_iter));
  const double u = 1.0 - t;
  auto channel = [](double v) { return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0)); };
  // Escapes after few steps render bright, slow escapes near the Julia set render dark.
  return {channel(u * u * (3.0 - 2.0 * u)), channel(u * u), channel(0.35 + 0.65 * u)};
}

}  // namespace

void GridSpec::validate() const {
  if (res_x < 16 || res_y < 16) throw Error(Errc::InvalidArgument, "resolution must be >= 16 per side");
  if (!(width > 0.0) || !(height > 0.0)) throw Error(Errc::InvalidArgument, "viewport extent must be positive");
  if (max_iter < 1) throw Error(Errc::InvalidArgument, "max_iter must be >= 1");
  if (escape_radius < 0.0) throw Error(Errc::InvalidArgument, "escape radius must be >= 0");
  if (boundary_width < 0.0) throw Error(Errc::InvalidArgument, "boundary width must be >= 0");
}

Complex GridSpec::pixel_center(int col, int row) const {
  // Written so that rows r and res_y-1-r are exact mirrors about center.imag().
  const double x = center.real() + ((2.0 * col + 1.0 - res_x) * width) / (2.0 * res_x);
  const double y = center.imag() - ((2.0 * row + 1.0 - res_y) * height) / (2.0 * res_y);
  return {x, y};
}

Complex GridSpec::corner(int cx, int cy) const {
  const double x = center.real() + ((2.0 * cx - res_x) * width) / (2.0 * res_x);
  const double y = center.imag() - ((2.0 * cy - res_y) * height) / (2.0 * res_y);
  return {x, y};
}

GridSpec square_grid(double lo, double hi, int resolution, int max_iter) {
  GridSpec grid;
  grid.center = Complex{(lo + hi) / 2.0, (lo + hi) / 2.0};
  grid.width = hi - lo;
  grid.height = hi - lo;
  grid.res_x = resolution;
  grid.res_y = resolution;
  grid.max_iter = max_iter;
  return grid;
}

double ClassifiedGrid::bounded_fraction() const {
  if (labels.empty()) return 0.0;
  const auto bounded = std::count(labels.begin(), labels.end(), kBounded);
  return static_cast<double>(bounded) / static_cast<double>(labels.size());
}

ClassifiedGrid classify_grid(const MapSpec& map, const GridSpec& grid, int threads) {
  grid.validate();
  const double radius = resolved_radius(map, grid);
  ClassifiedGrid out{grid, std::vector<std::int32_t>(grid.pixel_count(), kBounded)};
  std::int32_t* labels = out.labels.data();
  const int rows = grid.res_y;
  const int cols = grid.res_x;

#pragma omp parallel for schedule(dynamic, 1) num_threads(thread_count(threads))
  for (int row = 0; row < rows; ++row) {
    std::int32_t* line = labels + static_cast<std::size_t>(row) * cols;
    for (int col = 0; col < cols; ++col) line[col] = classify_pixel(map, grid, radius, col, row);
  }
  return out;
}

ClassifiedGrid classify_grid_reference(const MapSpec& map, const GridSpec& grid) {
  grid.validate();
  const double radius = resolved_radius(map, grid);
  ClassifiedGrid out{grid, {}};
  out.labels.reserve(grid.pixel_count());
  for (int row = 0; row < grid.res_y; ++row)
    for (int col = 0; col < grid.res_x; ++col) out.labels.push_back(classify_pixel(map, grid, radius, col, row));
  return out;
}

ClassifiedGrid classify_parameter_plane(int degree, const GridSpec& region, int threads) {
  region.validate();
  if (degree < 2) throw Error(Errc::InvalidArgument, "degree must be >= 2");
  ClassifiedGrid out{region, std::vector<std::int32_t>(region.pixel_count(), kBounded)};
  std::int32_t* labels = out.labels.data();
  const int rows = region.res_y;
  const int cols = region.res_x;

#pragma omp parallel for schedule(dynamic, 1) num_threads(thread_count(threads))
  for (int row = 0; row < rows; ++row) {
    std::int32_t* line = labels + static_cast<std::size_t>(row) * cols;
    for (int col = 0; col < cols; ++col) line[col] = classify_parameter(degree, region, col, row);
  }
  return out;
}

ClassifiedGrid classify_parameter_plane_reference(int degree, const GridSpec& region) {
  region.validate();
  if (degree < 2) throw Error(Errc::InvalidArgument, "degree must be >= 2");
  ClassifiedGrid out{region, {}};
  out.labels.reserve(region.pixel_count());
  for (int row = 0; row < region.res_y; ++row)
    for (int col = 0; col < region.res_x; ++col) out.labels.push_back(classify_parameter(degree, region, col, row));
  return out;
}

ComponentMap label_components(const ClassifiedGrid& grid) {
  const int w = grid.spec.res_x;
  const int h = grid.spec.res_y;
  ComponentMap map{w, h, std::vector<std::int32_t>(grid.labels.size(), -1), {}};
  std::vector<std::int32_t> stack;

  for (std::int32_t start = 0; start < static_cast<std::int32_t>(grid.labels.size()); ++start) {
    if (grid.labels[start] == kBounded || map.label[start] != -1) continue;
    Component comp;
    comp.id = static_cast<int>(map.components.size());
    map.label[start] = comp.id;
    stack.push_back(start);
    while (!stack.empty()) {
      const std::int32_t idx = stack.back();
      stack.pop_back();
      comp.pixels.push_back(idx);
      const int col = idx % w;
      const int row = idx / w;
      if (col == 0 || row == 0 || col == w - 1 || row == h - 1) comp.clipped = true;
      auto visit = [&](int c, int r) {
        if (c < 0 || r < 0 || c >= w || r >= h) return;
        const std::int32_t n = r * w + c;
        if (grid.labels[n] == kBounded || map.label[n] != -1) return;
        map.label[n] = comp.id;
        stack.push_back(n);
      };
      visit(col + 1, row);
      visit(col - 1, row);
      visit(col, row + 1);
      visit(col, row - 1);
    }
    std::sort(comp.pixels.begin(), comp.pixels.end());
    comp.area = static_cast<std::int64_t>(comp.pixels.size());
    map.components.push_back(std::move(comp));
  }
  return map;
}

std::vector<Component> filter_components(std::span<const Component> components, std::int64_t min_area,
                                         bool exclude_clipped) {
  std::vector<Component> kept;
  for (const auto& comp : components) {
    if (comp.area < min_area) continue;
    if (exclude_clipped && comp.clipped) continue;
    kept.push_back(comp);
  }
  return kept;
}

PeripheralCurve trace_boundary(const ClassifiedGrid& grid, const ComponentMap& components, int id) {
  if (id < 0 || id >= static_cast<int>(components.components.size()) || components.components[id].pixels.empty())
    throw Error(Errc::InvalidArgument, "unknown component id " + std::to_string(id));
  const Component& comp = components.components[id];
  const int w = components.width;
  const int h = components.height;
  auto inside = [&](int col, int row) {
    return col >= 0 && row >= 0 && col < w && row < h && components.label[static_cast<std::size_t>(row) * w + col] == id;
  };

  // Headings E, S, W, N in lattice coordinates with y pointing down; index+1 turns right.
  static constexpr std::array<Corner, 4> kStep{{{1, 0}, {0, 1}, {-1, 0}, {0, -1}}};
  auto quadrant_pixel = [&](Corner v, Corner a, Corner b) {
    const int dx = a.x + b.x;
    const int dy = a.y + b.y;
    return inside(v.x + (dx > 0 ? 0 : -1), v.y + (dy > 0 ? 0 : -1));
  };

  // The first pixel in row-major order has its top edge on the outer boundary;
  // walk it eastwards with the component on the right.
  const Corner start{comp.pixels.front() % w, comp.pixels.front() / w};
  PeripheralCurve curve;
  curve.id = id;
  curve.area = comp.area;
  curve.corners.push_back(start);
  Corner v = start;
  int heading = 0;
  do {
    v = {v.x + kStep[heading].x, v.y + kStep[heading].y};
    curve.corners.push_back(v);
    const Corner ahead = kStep[heading];
    const Corner right = kStep[(heading + 1) % 4];
    const Corner left = kStep[(heading + 3) % 4];
    if (quadrant_pixel(v, ahead, right))
      heading = quadrant_pixel(v, ahead, left) ? (heading + 3) % 4 : heading;
    else
      heading = (heading + 1) % 4;
  } while (!(v == start && heading == 0));

  if (curve.corners.size() < 5) throw Error(Errc::DegenerateComponent, "contour has fewer than 4 vertices");
  curve.vertices.reserve(curve.corners.size());
  for (const auto& c : curve.corners) {
    curve.vertices.push_back(grid.spec.corner(c.x, c.y));
    if (c.x == 0 || c.y == 0 || c.x == w || c.y == h) curve.clipped = true;
  }
  return curve;
}

std::int64_t shoelace_twice_area(std::span<const Corner> closed_corners) {
  std::int64_t acc = 0;
  for (std::size_t i = 0; i + 1 < closed_corners.size(); ++i)
    acc += static_cast<std::int64_t>(closed_corners[i].x) * closed_corners[i + 1].y -
           static_cast<std::int64_t>(closed_corners[i + 1].x) * closed_corners[i].y;
  return acc;
}

std::string render_ppm(const ClassifiedGrid& grid, Palette palette) {
  const int w = grid.spec.res_x;
  const int h = grid.spec.res_y;
  std::string out = "P6\n" + std::to_string(w) + " " + std::to_string(h) + "\n255\n";
  const std::size_t header = out.size();
  out.resize(header + 3 * grid.labels.size());
  for (std::size_t i = 0; i < grid.labels.size(); ++i) {
    std::array<std::uint8_t, 3> rgb{};
    if (palette == Palette::TwoTone) {
      const std::uint8_t v = grid.labels[i] == kBounded ? 0 : 255;
      rgb = {v, v, v};
    } else {
      rgb = escape_color(grid.labels[i], grid.spec.max_iter);
    }
    for (int k = 0; k < 3; ++k) out[header + 3 * i + k] = static_cast<char>(rgb[k]);
  }
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(Errc::Io, "cannot open " + path.string() + " for writing");
  file.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!file) throw Error(Errc::Io, "failed writing " + path.string());
}

}  // namespace carpet
