#pragma once

#include <complex>
#include <vector>

namespace carpet {

using Complex = std::complex<double>;

/// Iterates closer than this to a pole are treated as landing on it.
inline constexpr double kPoleTolerance = 1e-12;

enum class Family { McMullen, GeneralRational };

/// A rational map. McMullen maps are z^d + lambda / z^d; general rational maps
/// are N(z)/D(z) with coefficients listed in ascending powers of z.
class MapSpec {
 public:
  static MapSpec mcmullen(int degree, Complex lambda);
  static MapSpec rational(std::vector<Complex> numerator, std::vector<Complex> denominator);

  Family family() const noexcept { return family_; }
  int degree() const noexcept { return degree_; }
  Complex lambda() const noexcept { return lambda_; }
  const std::vector<Complex>& numerator() const noexcept { return numerator_; }
  const std::vector<Complex>& denominator() const noexcept { return denominator_; }
  /// Finite poles; {0} for McMullen maps.
  const std::vector<Complex>& poles() const noexcept { return poles_; }

 private:
  MapSpec() = default;

  Family family_ = Family::McMullen;
  int degree_ = 2;
  Complex lambda_{1.0, 0.0};
  std::vector<Complex> numerator_;
  std::vector<Complex> denominator_;
  std::vector<Complex> poles_;
};

struct OrbitOutcome {
  enum class Kind { Escaped, Bounded, HitPole };

  Kind kind = Kind::Bounded;
  /// Escape index, pole-hit index, or the iteration budget for Bounded.
  int index = 0;

  static OrbitOutcome escaped(int n) { return {Kind::Escaped, n}; }
  static OrbitOutcome bounded(int max_iter) { return {Kind::Bounded, max_iter}; }
  static OrbitOutcome hit_pole(int k) { return {Kind::HitPole, k}; }

  friend bool operator==(const OrbitOutcome&, const OrbitOutcome&) = default;
};

/// f(z) in double precision. Throws Errc::PoleHit within kPoleTolerance of a pole.
Complex evaluate(const MapSpec& map, Complex z);

/// The 2d solutions of c^{2d} = lambda. The non-free critical points 0 and
/// infinity are not included. McMullen family only.
std::vector<Complex> critical_points(const MapSpec& map);

/// max(2, 2|lambda|^{1/d}, 2^{1/(d-1)}); beyond it |f(z)| >= 1.5|z|.
double default_escape_radius(const MapSpec& map);

OrbitOutcome escape_time(const MapSpec& map, Complex z0, int max_iter, double escape_radius);

struct EscapeEstimate {
  OrbitOutcome outcome;
  /// Distance estimate to the Julia set, |z_n| log|z_n| / |dz_n/dz_0| taken
  /// once |z_n| exceeds 1e8. +infinity for pole hits, 0 for bounded orbits.
  double distance = 0.0;
};

/// escape_time plus a distance estimate. `outcome` always equals
/// escape_time(map, z0, max_iter, escape_radius). McMullen family only.
EscapeEstimate escape_with_distance(const MapSpec& map, Complex z0, int max_iter, double escape_radius);

/// Outcome of the orbit of one free critical point, the principal 2d-th root
/// of lambda. All free critical orbits share their outcome by symmetry.
OrbitOutcome free_critical_outcome(const MapSpec& map, int max_iter, double escape_radius);

/// True iff the free critical orbits escape (or hit the pole) within budget.
bool free_critical_escape(const MapSpec& map, int max_iter, double escape_radius);

}  // namespace carpet
