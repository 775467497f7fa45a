#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "carpet/dynamics.hpp"
#include "carpet/raster.hpp"

namespace carpet {

using PointSpan = std::span<const Complex>;

/// Largest pairwise distance; 0 for a singleton. Convex hull accelerated.
double diameter(PointSpan points);

/// Infimum of pairwise distances between the sets (nearest pair).
double set_distance(PointSpan a, PointSpan b);

/// set_distance(a, b) / min(diameter(a), diameter(b)).
double relative_distance(PointSpan a, PointSpan b);

/// diameter(e) / |z1 - z2|, +infinity when z1 == z2. Both points must be members of e.
double turning(PointSpan e, Complex z1, Complex z2);

/// The two vertex chains of a closed polygon between vertices x and y.
/// Interiors exclude x and y, so together they partition the other vertices;
/// diameters are taken over the closed chains (endpoints included).
struct ArcSplit {
  std::vector<std::size_t> smaller;
  std::vector<std::size_t> larger;
  double smaller_diameter = 0.0;
  double larger_diameter = 0.0;
};

/// `polygon` lists each vertex once (no closing duplicate); x and y are indices.
ArcSplit split_arcs(PointSpan polygon, std::size_t x, std::size_t y);
ArcSplit split_arcs(const PeripheralCurve& curve, std::size_t x, std::size_t y);

/// Vertex stride used by quasicircle_constant: the smallest s >= 1 such that
/// the m = ceil(n / s) sampled vertices form at most max_pairs pairs.
std::size_t quasicircle_stride(std::size_t vertex_count, std::size_t max_pairs);

struct QuasicircleEstimate {
  /// Empirical constant: max over sampled pairs of the smaller arc's turning.
  double constant = 1.0;
  std::size_t x = 0;
  std::size_t y = 0;
  std::size_t stride = 1;
  std::size_t pairs = 0;
};

/// Sampled vertices are 0, s, 2s, ...; every unordered pair of them is scored
/// by diam(smaller closed arc) / |x - y|, with arcs running over all vertices.
/// Pairs whose vertices coincide in the plane (pinch points of a pixel
/// contour) are skipped.
QuasicircleEstimate quasicircle_estimate(PointSpan polygon, std::size_t max_pairs);
double quasicircle_constant(PointSpan polygon, std::size_t max_pairs);
/// Rejects clipped curves and curves with fewer than 8 vertices.
double quasicircle_constant(const PeripheralCurve& curve, std::size_t max_pairs);

/// max |w - z| / min |w - z| over the boundary samples.
double shape(PointSpan boundary, Complex z);

struct SeparationMatrix {
  std::vector<int> ids;
  /// Row-major n x n relative distances; the diagonal holds NaN.
  std::vector<double> delta;
  double min_delta = 0.0;
  int min_i = 0;
  int min_j = 1;

  std::size_t size() const { return ids.size(); }
  double at(std::size_t i, std::size_t j) const { return delta[i * ids.size() + j]; }
};

/// Pairwise relative distances; OpenMP over pairs. Minimum ties go to the
/// lexicographically first (i, j).
SeparationMatrix separation_matrix(std::span<const std::vector<Complex>> curves, std::span<const int> ids,
                                   int threads = 0);
SeparationMatrix separation_matrix(std::span<const PeripheralCurve> curves, int threads = 0);

}  // namespace carpet
