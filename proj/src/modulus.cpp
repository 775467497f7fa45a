#include "carpet/modulus.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "carpet/error.hpp"

namespace carpet {
namespace {

constexpr double kPi = std::numbers::pi;

double agm(double a, double b) {
  for (int i = 0; i < 64; ++i) {
    const double mean = 0.5 * (a + b);
    const double geo = std::sqrt(a * b);
    if (std::abs(mean - geo) <= 1e-16 * mean) return mean;
    a = mean;
    b = geo;
  }
  return 0.5 * (a + b);
}

// sqrt(1 - x^2) without cancellation near x = 1.
double complement(double x) { return std::sqrt((1.0 - x) * (1.0 + x)); }

// Bisection in log r on (r_min, 1/sqrt 2], where mu decreases from ~mu(r_min) to pi/2.
double mu_inverse_small(double m) {
  double lo = std::log(1e-300);
  double hi = std::log(std::numbers::sqrt2 / 2.0);
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (grotzsch_mu(std::exp(mid)) > m)
      lo = mid;
    else
      hi = mid;
  }
  return std::exp(0.5 * (lo + hi));
}

void require_positive(double m, const char* name) {
  if (!(m > 0.0) || !std::isfinite(m)) throw Error(Errc::DomainError, std::string(name) + " must be positive and finite");
}

}  // namespace

double elliptic_K(double k) {
  if (!(k >= 0.0 && k < 1.0)) throw Error(Errc::DomainError, "elliptic_K needs 0 <= k < 1");
  return kPi / (2.0 * agm(1.0, complement(k)));
}

double grotzsch_mu(double r) {
  if (!(r > 0.0 && r < 1.0)) throw Error(Errc::DomainError, "grotzsch_mu needs 0 < r < 1");
  // K(r') / K(r) = AGM(1, r') / AGM(1, r) with r' = sqrt(1 - r^2).
  return 0.5 * kPi * agm(1.0, complement(r)) / agm(1.0, r);
}

double mu_inverse(double m) {
  require_positive(m, "modulus");
  if (m >= 0.5 * kPi) return mu_inverse_small(m);
  // mu(r) mu(r') = pi^2 / 4, so solve for the complementary modulus instead.
  // Below m ~ 0.2 the answer is within an ulp of 1; keep it inside (0, 1).
  const double r_complement = mu_inverse_small(kPi * kPi / (4.0 * m));
  return std::min(complement(r_complement), std::nextafter(1.0, 0.0));
}

double separation_lower_bound(double m) {
  require_positive(m, "modulus");
  const double r = mu_inverse(m / 2.0);
  return 0.5 * (1.0 / (r * r) - 1.0);
}

double teichmuller_upper_bound(double R) {
  require_positive(R, "R");
  return 2.0 * grotzsch_mu(std::sqrt(1.0 / (1.0 + R)));
}

KoebeBounds koebe_growth_bounds(double t, double deriv_at_0) {
  if (!(t >= 0.0 && t < 1.0)) throw Error(Errc::DomainError, "Koebe bounds need 0 <= |z| < 1");
  if (!(deriv_at_0 > 0.0)) throw Error(Errc::DomainError, "|f'(0)| must be positive");
  const double p = 1.0 + t;
  const double q = 1.0 - t;
  return {deriv_at_0 * t / (p * p), deriv_at_0 * t / (q * q), deriv_at_0 * q / (p * p * p),
          deriv_at_0 * p / (q * q * q)};
}

double distortion_constant(double m) {
  require_positive(m, "modulus");
  const double r = mu_inverse(m);
  return std::pow((1.0 + r) / (1.0 - r), 8);
}

double round_annulus_modulus(double r_in, double r_out) {
  if (!(r_in > 0.0 && r_in < r_out) || !std::isfinite(r_out))
    throw Error(Errc::DomainError, "round annulus needs 0 < r_in < r_out");
  return std::log(r_out / r_in) / (2.0 * kPi);
}

}  // namespace carpet
