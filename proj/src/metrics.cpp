#include "carpet/metrics.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "carpet/error.hpp"

namespace carpet {
namespace {

constexpr std::size_t kNaiveDiameterLimit = 64;

bool lex_less(const Complex& a, const Complex& b) {
  return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
}

double cross(const Complex& o, const Complex& a, const Complex& b) {
  return (a.real() - o.real()) * (b.imag() - o.imag()) - (a.imag() - o.imag()) * (b.real() - o.real());
}

double naive_diameter(PointSpan points) {
  double best = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j) best = std::max(best, std::abs(points[i] - points[j]));
  return best;
}

// Andrew's monotone chain. Collinear points are kept so that no extreme point
// is lost to a rounding-level orientation test.
std::vector<Complex> convex_hull(PointSpan points) {
  std::vector<Complex> sorted(points.begin(), points.end());
  std::sort(sorted.begin(), sorted.end(), lex_less);
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  if (sorted.size() < 3) return sorted;

  std::vector<Complex> hull;
  hull.reserve(2 * sorted.size());
  for (const auto& p : sorted) {
    while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), p) < 0.0) hull.pop_back();
    hull.push_back(p);
  }
  const std::size_t lower = hull.size() + 1;
  for (auto it = sorted.rbegin() + 1; it != sorted.rend(); ++it) {
    while (hull.size() >= lower && cross(hull[hull.size() - 2], hull.back(), *it) < 0.0) hull.pop_back();
    hull.push_back(*it);
  }
  hull.pop_back();
  return hull;
}

void require_nonempty(PointSpan points, const char* name) {
  if (points.empty()) throw Error(Errc::EmptySet, std::string(name) + " is empty");
}

}  // namespace

double diameter(PointSpan points) {
  require_nonempty(points, "point set");
  if (points.size() <= kNaiveDiameterLimit) return naive_diameter(points);
  const auto hull = convex_hull(points);
  return naive_diameter(hull);
}

double set_distance(PointSpan a, PointSpan b) {
  require_nonempty(a, "first set");
  require_nonempty(b, "second set");
  std::vector<Complex> sorted(b.begin(), b.end());
  std::sort(sorted.begin(), sorted.end(), lex_less);

  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : a) {
    const auto split = std::lower_bound(sorted.begin(), sorted.end(), p.real(),
                                        [](const Complex& q, double x) { return q.real() < x; });
    for (auto it = split; it != sorted.end(); ++it) {
      if (it->real() - p.real() >= best) break;
      best = std::min(best, std::abs(p - *it));
    }
    for (auto it = split; it != sorted.begin();) {
      --it;
      if (p.real() - it->real() >= best) break;
      best = std::min(best, std::abs(p - *it));
    }
    if (best == 0.0) break;
  }
  return best;
}

double relative_distance(PointSpan a, PointSpan b) {
  const double smaller = std::min(diameter(a), diameter(b));
  if (smaller == 0.0) throw Error(Errc::DegenerateSet, "relative distance needs sets of positive diameter");
  return set_distance(a, b) / smaller;
}

double turning(PointSpan e, Complex z1, Complex z2) {
  if (e.size() < 2) throw Error(Errc::DegenerateSet, "turning needs at least two points");
  const bool has1 = std::find(e.begin(), e.end(), z1) != e.end();
  const bool has2 = std::find(e.begin(), e.end(), z2) != e.end();
  if (!has1 || !has2) throw Error(Errc::PointsNotInSet, "turning endpoints must belong to the set");
  if (z1 == z2) return std::numeric_limits<double>::infinity();
  return diameter(e) / std::abs(z1 - z2);
}

ArcSplit split_arcs(PointSpan polygon, std::size_t x, std::size_t y) {
  const std::size_t n = polygon.size();
  if (x >= n || y >= n) throw Error(Errc::InvalidArgument, "arc endpoint index out of range");
  if (x == y) throw Error(Errc::IdenticalEndpoints, "arc endpoints must differ");

  auto chain = [&](std::size_t from, std::size_t to) {
    std::vector<std::size_t> interior;
    for (std::size_t i = (from + 1) % n; i != to; i = (i + 1) % n) interior.push_back(i);
    std::vector<Complex> closed{polygon[from]};
    for (auto i : interior) closed.push_back(polygon[i]);
    closed.push_back(polygon[to]);
    return std::pair{std::move(interior), diameter(closed)};
  };
  auto [first, first_diam] = chain(x, y);
  auto [second, second_diam] = chain(y, x);

  bool first_smaller;
  if (first_diam != second_diam)
    first_smaller = first_diam < second_diam;
  else if (first.size() != second.size())
    first_smaller = first.size() < second.size();
  else
    first_smaller = !lex_less(polygon[y], polygon[x]);

  if (first_smaller) return {std::move(first), std::move(second), first_diam, second_diam};
  return {std::move(second), std::move(first), second_diam, first_diam};
}

ArcSplit split_arcs(const PeripheralCurve& curve, std::size_t x, std::size_t y) {
  return split_arcs(curve.open_vertices(), x, y);
}

std::size_t quasicircle_stride(std::size_t vertex_count, std::size_t max_pairs) {
  if (max_pairs < 1) throw Error(Errc::InvalidArgument, "max_pairs must be >= 1");
  for (std::size_t s = 1; s < vertex_count; ++s) {
    const std::size_t m = (vertex_count + s - 1) / s;
    if (m * (m - 1) / 2 <= max_pairs) return s;
  }
  return std::max<std::size_t>(vertex_count, 1);
}

QuasicircleEstimate quasicircle_estimate(PointSpan polygon, std::size_t max_pairs) {
  const std::size_t n = polygon.size();
  if (n < 3) throw Error(Errc::CurveTooSmall, "polygon needs at least 3 vertices");
  const std::size_t s = quasicircle_stride(n, max_pairs);
  const std::size_t m = (n + s - 1) / s;

  QuasicircleEstimate result;
  result.stride = s;
  if (m < 2) return result;

  auto point = [&](std::size_t i) { return polygon[i % n]; };
  auto anchor = [&](std::size_t k) { return k * s; };  // k may reach m, which wraps to vertex 0
  auto block_end = [&](std::size_t k) { return k + 1 == m ? n : anchor(k + 1); };

  // span[len - 1][k] = diameter of vertices anchor(k) .. anchor(k + len), cyclically.
  std::vector<std::vector<double>> span(m - 1, std::vector<double>(m, 0.0));
  for (std::size_t k = 0; k < m; ++k) {
    double best = 0.0;
    for (std::size_t u = anchor(k); u <= block_end(k); ++u)
      for (std::size_t v = u + 1; v <= block_end(k); ++v) best = std::max(best, std::abs(point(u) - point(v)));
    span[0][k] = best;
  }
  for (std::size_t len = 2; len < m; ++len) {
    for (std::size_t k = 0; k < m; ++k) {
      // Pairs not inside either shorter range straddle the head of block k
      // and the tail of the last block.
      const std::size_t last = (k + len - 1) % m;
      const std::size_t last_lo = anchor(last) + 1;
      const std::size_t last_hi = block_end(last);
      double best = std::max(span[len - 2][k], span[len - 2][(k + 1) % m]);
      for (std::size_t u = anchor(k); u < block_end(k); ++u)
        for (std::size_t v = last_lo; v <= last_hi; ++v) best = std::max(best, std::abs(point(u) - point(v)));
      span[len - 1][k] = best;
    }
  }

  bool found = false;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      ++result.pairs;
      const double chord = std::abs(point(anchor(i)) - point(anchor(j)));
      if (chord == 0.0) continue;
      const std::size_t len = j - i;
      const double value = std::min(span[len - 1][i], span[m - len - 1][j]) / chord;
      if (!found || value > result.constant) {
        found = true;
        result.constant = value;
        result.x = anchor(i);
        result.y = anchor(j);
      }
    }
  }
  return result;
}

double quasicircle_constant(PointSpan polygon, std::size_t max_pairs) {
  return quasicircle_estimate(polygon, max_pairs).constant;
}

double quasicircle_constant(const PeripheralCurve& curve, std::size_t max_pairs) {
  if (curve.clipped) throw Error(Errc::ClippedCurve, "curve touches the viewport edge");
  if (curve.open_vertices().size() < 8) throw Error(Errc::CurveTooSmall, "curve needs at least 8 vertices");
  return quasicircle_constant(curve.open_vertices(), max_pairs);
}

double shape(PointSpan boundary, Complex z) {
  require_nonempty(boundary, "boundary");
  double far = 0.0;
  double near = std::numeric_limits<double>::infinity();
  for (const auto& w : boundary) {
    const double r = std::abs(w - z);
    far = std::max(far, r);
    near = std::min(near, r);
  }
  if (near == 0.0) throw Error(Errc::CenterOnBoundary, "center lies on the boundary");
  return far / near;
}

SeparationMatrix separation_matrix(std::span<const std::vector<Complex>> curves, std::span<const int> ids,
                                   int threads) {
  const std::size_t n = curves.size();
  if (n < 2) throw Error(Errc::TooFewCurves, "separation matrix needs at least two curves");
  if (ids.size() != n) throw Error(Errc::InvalidArgument, "one id per curve required");

  std::vector<double> diam(n);
  for (std::size_t i = 0; i < n; ++i) {
    diam[i] = diameter(curves[i]);
    if (diam[i] == 0.0) throw Error(Errc::DegenerateSet, "curve " + std::to_string(ids[i]) + " has zero diameter");
  }

  SeparationMatrix out;
  out.ids.assign(ids.begin(), ids.end());
  out.delta.assign(n * n, std::numeric_limits<double>::quiet_NaN());

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  const long count = static_cast<long>(pairs.size());
  double* delta = out.delta.data();

#pragma omp parallel for schedule(dynamic, 1) num_threads(threads > 0 ? threads : omp_get_max_threads())
  for (long p = 0; p < count; ++p) {
    const auto [i, j] = pairs[p];
    const double value = set_distance(curves[i], curves[j]) / std::min(diam[i], diam[j]);
    delta[i * n + j] = value;
    delta[j * n + i] = value;
  }

  out.min_delta = std::numeric_limits<double>::infinity();
  for (const auto& [i, j] : pairs) {
    if (out.delta[i * n + j] < out.min_delta) {
      out.min_delta = out.delta[i * n + j];
      out.min_i = static_cast<int>(i);
      out.min_j = static_cast<int>(j);
    }
  }
  return out;
}

SeparationMatrix separation_matrix(std::span<const PeripheralCurve> curves, int threads) {
  std::vector<std::vector<Complex>> points;
  std::vector<int> ids;
  for (const auto& c : curves) {
    const auto open = c.open_vertices();
    points.emplace_back(open.begin(), open.end());
    ids.push_back(c.id);
  }
  return separation_matrix(points, ids, threads);
}

}  // namespace carpet
