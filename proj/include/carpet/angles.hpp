#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace carpet {

using BigInt = boost::multiprecision::cpp_int;

/// Nonnegative rational in lowest terms.
class Rational {
 public:
  Rational() = default;
  Rational(BigInt num, BigInt den);
  static Rational integer(long value) { return Rational(BigInt(value), BigInt(1)); }
  /// Skips normalization; the caller guarantees 0 <= num, den > 0 and lowest terms.
  static Rational from_reduced(BigInt num, BigInt den);

  const BigInt& num() const noexcept { return num_; }
  const BigInt& den() const noexcept { return den_; }
  std::string to_string() const;

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

  friend Rational operator+(const Rational& a, const Rational& b);
  /// Requires a >= b.
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);

 private:
  BigInt num_ = 0;
  BigInt den_ = 1;
};

/// A point of R/Z as an exact rational in [0, 1).
class Angle {
 public:
  Angle() = default;
  /// Reduces p/q modulo 1; q must be positive.
  Angle(BigInt p, BigInt q);
  explicit Angle(const Rational& value);
  /// Skips normalization; the caller guarantees 0 <= num < den in lowest terms.
  static Angle from_reduced(BigInt num, BigInt den);

  const Rational& value() const noexcept { return value_; }
  const BigInt& num() const noexcept { return value_.num(); }
  const BigInt& den() const noexcept { return value_.den(); }
  std::string to_string() const { return value_.to_string(); }

  friend bool operator==(const Angle&, const Angle&) = default;
  friend auto operator<=>(const Angle& a, const Angle& b) { return a.value_ <=> b.value_; }

 private:
  Rational value_;
};

/// Parses "p/q" (or a bare integer) into an angle reduced mod 1.
Angle parse_angle(std::string_view text);

/// First n binary digits after the point; represents [value, value + 2^-n].
struct BinaryPrefix {
  std::vector<std::uint8_t> bits;

  std::size_t size() const noexcept { return bits.size(); }
  Rational lower() const;
  Rational upper() const;
  std::string to_string() const;
};

/// Parses "0.b1b2..." or a bare bit string "b1b2...".
BinaryPrefix parse_binary_prefix(std::string_view text);
/// Parses a bit string of '0'/'1' characters.
std::vector<std::uint8_t> parse_bits(std::string_view text);

struct OrbitClass {
  /// 0 for a purely periodic orbit.
  std::size_t preperiod = 0;
  std::size_t period = 1;

  bool periodic() const noexcept { return preperiod == 0; }
  /// "Periodic(p)" or "PrePeriodic(k, p)".
  std::string to_string() const;
  friend bool operator==(const OrbitClass&, const OrbitClass&) = default;
};

/// q(t) = 2t mod 1.
Angle doubling(const Angle& t);
/// T(t) = min(2t, 2 - 2t) on [0, 1].
Rational tent(const Rational& t);
/// l(t) = 2t on [0, 1/2), 2 - 2t on [1/2, 1).
Rational ell(const Angle& t);

/// Preperiod and period of t under doubling, by exact cycle detection.
OrbitClass classify_orbit(const Angle& t);

/// Whether T^n(l(t)) <= l(t) for every n >= 0, by enumerating the finite tent orbit.
bool in_R(const Angle& t);

/// T(l(t)) == l(q(t)).
bool conjugacy_check(const Angle& t);

/// 0.(0 1^99) repeating = (2^99 - 1)/(2^100 - 1).
Angle theta_prime();

/// Prefix 0, then leading_run ones, then alternating runs of zeros and ones of
/// lengths a_i + 1, starting with zeros.
BinaryPrefix build_theta(const std::vector<std::uint8_t>& alpha_bits, std::size_t leading_run = 100);

/// Maximal runs of equal bits, in order.
std::vector<std::size_t> run_lengths(const BinaryPrefix& prefix);

struct ChainCertificate {
  enum class Status { Certified, Inconclusive, Refuted };

  Status status = Status::Inconclusive;
  /// The n at which certification stopped (0 when certified or for n-independent links).
  std::size_t failing_n = 0;
  std::string failing_comparison;
  std::size_t comparisons = 0;
  /// Smallest gap between the two sides over all certified comparisons.
  Rational min_gap;

  bool certified() const noexcept { return status == Status::Certified; }
  /// "CERTIFIED", "INCONCLUSIVE(n)" or "REFUTED(n)".
  std::string to_string() const;
};

/// Certifies, for 2 <= n <= n_max,
///   0 < l(q(t')) < l(q^n(theta)), l(q^n(t')) < l(t') < l(theta)
/// where t' = theta_prime() is exact and theta is known only through its
/// prefix; every theta term is a closed dyadic interval.
ChainCertificate verify_inequalities(const BinaryPrefix& theta_prefix, std::size_t n_max);

}  // namespace carpet
