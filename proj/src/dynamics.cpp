#include "carpet/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "carpet/error.hpp"

namespace carpet {
namespace {

// Relative residual below which a denominator root also counts as a numerator root.
constexpr double kCommonRootTolerance = 1e-9;

Complex ipow(Complex z, int n) {
  Complex result{1.0, 0.0};
  while (n > 0) {
    if (n & 1) result *= z;
    z *= z;
    n >>= 1;
  }
  return result;
}

Complex horner(const std::vector<Complex>& coeffs, Complex z) {
  Complex acc{0.0, 0.0};
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + *it;
  return acc;
}

double coefficient_scale(const std::vector<Complex>& coeffs, double r) {
  double acc = 0.0;
  double power = 1.0;
  for (const auto& c : coeffs) {
    acc += std::abs(c) * power;
    power *= r;
  }
  return acc;
}

void trim_leading_zeros(std::vector<Complex>& coeffs) {
  while (coeffs.size() > 1 && coeffs.back() == Complex{}) coeffs.pop_back();
}

// Durand-Kerner iteration on the monic normalization of the polynomial.
std::vector<Complex> polynomial_roots(const std::vector<Complex>& coeffs) {
  const int n = static_cast<int>(coeffs.size()) - 1;
  if (n < 1) return {};
  std::vector<Complex> monic(coeffs.size());
  for (std::size_t i = 0; i < coeffs.size(); ++i) monic[i] = coeffs[i] / coeffs.back();

  double bound = 0.0;
  for (int i = 0; i < n; ++i) bound = std::max(bound, std::abs(monic[i]));
  bound += 1.0;

  std::vector<Complex> roots(n);
  const Complex seed{0.4, 0.9};
  for (int i = 0; i < n; ++i) roots[i] = bound * ipow(seed, i) / std::abs(ipow(seed, i));

  for (int iter = 0; iter < 2000; ++iter) {
    double change = 0.0;
    for (int i = 0; i < n; ++i) {
      Complex denom{1.0, 0.0};
      for (int j = 0; j < n; ++j)
        if (j != i) denom *= roots[i] - roots[j];
      if (denom == Complex{}) denom = Complex{1e-300, 0.0};
      const Complex delta = horner(monic, roots[i]) / denom;
      roots[i] -= delta;
      change = std::max(change, std::abs(delta) / std::max(1.0, std::abs(roots[i])));
    }
    if (change < 1e-15) break;
  }
  return roots;
}

inline Complex mcmullen_step(Complex z, int degree, Complex lambda) {
  const Complex zd = ipow(z, degree);
  return zd + lambda / zd;
}

void require_escape_radius(const MapSpec& map, double escape_radius) {
  if (!(escape_radius > 0.0) || !std::isfinite(escape_radius))
    throw Error(Errc::InvalidArgument, "escape radius must be positive and finite");
  if (map.family() == Family::McMullen && escape_radius < default_escape_radius(map))
    throw Error(Errc::InvalidArgument,
                "escape radius " + std::to_string(escape_radius) +
                    " is below the certified threshold " +
                    std::to_string(default_escape_radius(map)));
}

}  // namespace

MapSpec MapSpec::mcmullen(int degree, Complex lambda) {
  if (degree < 2) throw Error(Errc::InvalidArgument, "McMullen degree must be >= 2");
  if (lambda == Complex{}) throw Error(Errc::InvalidArgument, "McMullen parameter must be nonzero");
  MapSpec map;
  map.family_ = Family::McMullen;
  map.degree_ = degree;
  map.lambda_ = lambda;
  map.poles_ = {Complex{0.0, 0.0}};
  return map;
}

MapSpec MapSpec::rational(std::vector<Complex> numerator, std::vector<Complex> denominator) {
  trim_leading_zeros(numerator);
  trim_leading_zeros(denominator);
  if (numerator.empty() || numerator.back() == Complex{})
    throw Error(Errc::InvalidArgument, "numerator leading coefficient must be nonzero");
  if (denominator.empty() || denominator.back() == Complex{})
    throw Error(Errc::InvalidArgument, "denominator leading coefficient must be nonzero");

  MapSpec map;
  map.family_ = Family::GeneralRational;
  map.degree_ = static_cast<int>(std::max(numerator.size(), denominator.size())) - 1;
  map.numerator_ = std::move(numerator);
  map.denominator_ = std::move(denominator);
  map.poles_ = polynomial_roots(map.denominator_);
  for (const auto& root : map.poles_) {
    const double residual = std::abs(horner(map.numerator_, root));
    const double scale = coefficient_scale(map.numerator_, std::abs(root));
    if (residual <= kCommonRootTolerance * scale)
      throw Error(Errc::InvalidArgument, "numerator and denominator share a root");
  }
  return map;
}

Complex evaluate(const MapSpec& map, Complex z) {
  for (const auto& pole : map.poles())
    if (std::abs(z - pole) < kPoleTolerance) throw Error(Errc::PoleHit, "argument lies on a pole");
  if (map.family() == Family::McMullen) return mcmullen_step(z, map.degree(), map.lambda());
  const Complex den = horner(map.denominator(), z);
  if (den == Complex{}) throw Error(Errc::PoleHit, "denominator vanishes");
  return horner(map.numerator(), z) / den;
}

std::vector<Complex> critical_points(const MapSpec& map) {
  if (map.family() != Family::McMullen)
    throw Error(Errc::Unsupported, "critical points are only provided for McMullen maps");
  const int count = 2 * map.degree();
  const double modulus = std::pow(std::abs(map.lambda()), 1.0 / count);
  const double base_arg = std::arg(map.lambda()) / count;
  std::vector<Complex> points;
  points.reserve(count);
  for (int k = 0; k < count; ++k)
    points.push_back(std::polar(modulus, base_arg + 2.0 * std::numbers::pi * k / count));
  return points;
}

double default_escape_radius(const MapSpec& map) {
  if (map.family() != Family::McMullen)
    throw Error(Errc::Unsupported, "no certified escape radius for general rational maps");
  const double d = map.degree();
  return std::max({2.0, 2.0 * std::pow(std::abs(map.lambda()), 1.0 / d), std::pow(2.0, 1.0 / (d - 1.0))});
}

OrbitOutcome escape_time(const MapSpec& map, Complex z0, int max_iter, double escape_radius) {
  if (max_iter < 1) throw Error(Errc::InvalidArgument, "max_iter must be >= 1");
  require_escape_radius(map, escape_radius);
  const double r2 = escape_radius * escape_radius;

  Complex z = z0;
  if (map.family() == Family::McMullen) {
    const int degree = map.degree();
    const Complex lambda = map.lambda();
    constexpr double pole2 = kPoleTolerance * kPoleTolerance;
    for (int k = 0;; ++k) {
      const double n2 = std::norm(z);
      if (n2 > r2) return OrbitOutcome::escaped(k);
      if (n2 < pole2) return OrbitOutcome::hit_pole(k);
      if (k == max_iter) return OrbitOutcome::bounded(max_iter);
      z = mcmullen_step(z, degree, lambda);
    }
  }

  for (int k = 0;; ++k) {
    if (std::norm(z) > r2) return OrbitOutcome::escaped(k);
    for (const auto& pole : map.poles())
      if (std::abs(z - pole) < kPoleTolerance) return OrbitOutcome::hit_pole(k);
    if (k == max_iter) return OrbitOutcome::bounded(max_iter);
    const Complex den = horner(map.denominator(), z);
    if (den == Complex{}) return OrbitOutcome::hit_pole(k);
    z = horner(map.numerator(), z) / den;
  }
}

EscapeEstimate escape_with_distance(const MapSpec& map, Complex z0, int max_iter, double escape_radius) {
  if (map.family() != Family::McMullen)
    throw Error(Errc::Unsupported, "distance estimates are only provided for McMullen maps");
  const OrbitOutcome outcome = escape_time(map, z0, max_iter, escape_radius);
  if (outcome.kind == OrbitOutcome::Kind::Bounded) return {outcome, 0.0};
  if (outcome.kind == OrbitOutcome::Kind::HitPole) return {outcome, std::numeric_limits<double>::infinity()};

  // Iterate z and dz/dz0 past the escape index until |z| is large enough
  // for the Green's function asymptotics.
  constexpr double kBailout = 1e8;
  const int degree = map.degree();
  const Complex lambda = map.lambda();
  Complex z = z0;
  Complex dz{1.0, 0.0};
  for (int k = 0; k < outcome.index + 64 && std::abs(z) <= kBailout; ++k) {
    if (std::norm(z) < kPoleTolerance * kPoleTolerance) return {outcome, std::numeric_limits<double>::infinity()};
    const Complex zd1 = ipow(z, degree - 1);
    const Complex zd = zd1 * z;
    dz *= static_cast<double>(degree) * (zd1 - lambda / (zd * z));
    z = zd + lambda / zd;
  }
  const double r = std::abs(z);
  const double dr = std::abs(dz);
  if (!std::isfinite(r) || !std::isfinite(dr) || dr == 0.0) return {outcome, std::numeric_limits<double>::infinity()};
  return {outcome, r * std::log(r) / dr};
}

OrbitOutcome free_critical_outcome(const MapSpec& map, int max_iter, double escape_radius) {
  if (map.family() != Family::McMullen)
    throw Error(Errc::Unsupported, "free critical orbits are defined for McMullen maps");
  return escape_time(map, critical_points(map).front(), max_iter, escape_radius);
}

bool free_critical_escape(const MapSpec& map, int max_iter, double escape_radius) {
  return free_critical_outcome(map, max_iter, escape_radius).kind != OrbitOutcome::Kind::Bounded;
}

}  // namespace carpet
