#include "carpet/angles.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "carpet/error.hpp"

namespace carpet {
namespace {

struct Interval {
  Rational lo;
  Rational hi;
};

const Rational& one_half() {
  static const Rational half(1, 2);
  return half;
}

Rational dyadic(const BigInt& numerator, std::size_t bits) { return Rational(numerator, BigInt(1) << bits); }

Rational bits_value(const std::vector<std::uint8_t>& bits, std::size_t from) {
  BigInt acc = 0;
  for (std::size_t i = from; i < bits.size(); ++i) acc = (acc << 1) | bits[i];
  return dyadic(acc, bits.size() - std::min(from, bits.size()));
}

// Image of a closed interval of [0, 1] under l, which is continuous on R/Z.
Interval ell_image(const Interval& t) {
  const Rational two = Rational::integer(2);
  if (t.hi <= one_half()) return {two * t.lo, two * t.hi};
  if (t.lo >= one_half()) return {two - two * t.hi, two - two * t.lo};
  const Rational left = two * t.lo;
  const Rational right = two - two * t.hi;
  return {std::min(left, right), Rational::integer(1)};
}

Interval point(const Rational& v) { return {v, v}; }

// Interval enclosing q^n(theta) from the prefix bits after position n.
Interval shifted(const BinaryPrefix& prefix, std::size_t n) {
  if (n >= prefix.size()) return {Rational::integer(0), Rational::integer(1)};
  const Rational lo = bits_value(prefix.bits, n);
  return {lo, lo + dyadic(1, prefix.size() - n)};
}

Angle iterate_doubling(Angle t, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) t = doubling(t);
  return t;
}

}  // namespace

Rational::Rational(BigInt num, BigInt den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_ <= 0) throw Error(Errc::DomainError, "rational denominator must be positive");
  if (num_ < 0) throw Error(Errc::DomainError, "rational must be nonnegative");
  const BigInt g = boost::multiprecision::gcd(num_, den_);
  if (g > 1) {
    num_ /= g;
    den_ /= g;
  }
  if (num_ == 0) den_ = 1;
}

Rational Rational::from_reduced(BigInt num, BigInt den) {
  Rational r;
  r.num_ = std::move(num);
  r.den_ = std::move(den);
  return r;
}

std::string Rational::to_string() const { return num_.str() + "/" + den_.str(); }

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  const BigInt lhs = a.num_ * b.den_;
  const BigInt rhs = b.num_ * a.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

Rational operator+(const Rational& a, const Rational& b) {
  return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) {
  const BigInt diff = a.num_ * b.den_ - b.num_ * a.den_;
  if (diff < 0) throw Error(Errc::DomainError, "rational subtraction would go negative");
  return Rational(diff, a.den_ * b.den_);
}

Rational operator*(const Rational& a, const Rational& b) { return Rational(a.num_ * b.num_, a.den_ * b.den_); }

Angle::Angle(BigInt p, BigInt q) {
  if (q <= 0) throw Error(Errc::DomainError, "angle denominator must be positive");
  BigInt r = p % q;
  if (r < 0) r += q;
  value_ = Rational(std::move(r), std::move(q));
}

Angle::Angle(const Rational& value) : Angle(value.num(), value.den()) {}

Angle Angle::from_reduced(BigInt num, BigInt den) {
  Angle a;
  a.value_ = Rational::from_reduced(std::move(num), std::move(den));
  return a;
}

Angle parse_angle(std::string_view text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  const auto slash = s.find('/');
  const std::string p = s.substr(0, slash);
  const std::string q = slash == std::string::npos ? "1" : s.substr(slash + 1);
  auto digits = [](const std::string& v) {
    return !v.empty() && std::all_of(v.begin(), v.end(), [](unsigned char c) { return std::isdigit(c); });
  };
  if (!digits(p) || !digits(q)) throw Error(Errc::ParseError, "expected p/q, got '" + std::string(text) + "'");
  BigInt den(q);
  if (den == 0) throw Error(Errc::ParseError, "zero denominator in '" + std::string(text) + "'");
  return Angle(BigInt(p), den);
}

Rational BinaryPrefix::lower() const { return bits_value(bits, 0); }

Rational BinaryPrefix::upper() const { return lower() + dyadic(1, bits.size()); }

std::string BinaryPrefix::to_string() const {
  std::string out = "0.";
  for (auto b : bits) out.push_back(b ? '1' : '0');
  return out;
}

std::vector<std::uint8_t> parse_bits(std::string_view text) {
  std::vector<std::uint8_t> bits;
  for (char c : text) {
    if (c == '0' || c == '1')
      bits.push_back(static_cast<std::uint8_t>(c - '0'));
    else
      throw Error(Errc::ParseError, "bit strings may only contain 0 and 1");
  }
  if (bits.empty()) throw Error(Errc::ParseError, "empty bit string");
  return bits;
}

BinaryPrefix parse_binary_prefix(std::string_view text) {
  if (text.starts_with("0.")) text.remove_prefix(2);
  return BinaryPrefix{parse_bits(text)};
}

std::string OrbitClass::to_string() const {
  if (preperiod == 0) return "Periodic(" + std::to_string(period) + ")";
  return "PrePeriodic(" + std::to_string(preperiod) + ", " + std::to_string(period) + ")";
}

Angle doubling(const Angle& t) {
  // Reduced p/q: for even q, p is odd and p mod (q/2) over q/2 stays reduced; for odd q, 2p mod q over q.
  if (t.num() == 0) return t;
  if ((t.den() & 1) == 0) {
    const BigInt half = t.den() >> 1;
    if (half == 1) return Angle{};
    return Angle::from_reduced(t.num() >= half ? BigInt(t.num() - half) : t.num(), half);
  }
  BigInt n = t.num() << 1;
  if (n >= t.den()) n -= t.den();
  return Angle::from_reduced(std::move(n), t.den());
}

Rational tent(const Rational& t) {
  const Rational two = Rational::integer(2);
  if (t > Rational::integer(1)) throw Error(Errc::DomainError, "tent map is defined on [0, 1]");
  if (t <= one_half()) return two * t;
  return two - two * t;
}

Rational ell(const Angle& t) {
  const Rational two = Rational::integer(2);
  if (t.value() < one_half()) return two * t.value();
  return two - two * t.value();
}

OrbitClass classify_orbit(const Angle& t) {
  // Brent's cycle detection; the orbit is finite because doubling never grows the denominator.
  std::size_t power = 1;
  std::size_t period = 1;
  Angle tortoise = t;
  Angle hare = doubling(t);
  while (tortoise != hare) {
    if (power == period) {
      tortoise = hare;
      power *= 2;
      period = 0;
    }
    hare = doubling(hare);
    ++period;
  }
  tortoise = t;
  hare = iterate_doubling(t, period);
  std::size_t preperiod = 0;
  while (tortoise != hare) {
    tortoise = doubling(tortoise);
    hare = doubling(hare);
    ++preperiod;
  }
  return {preperiod, period};
}

bool in_R(const Angle& t) {
  const Rational length = ell(t);
  std::set<Rational> seen;
  Rational x = length;
  while (seen.insert(x).second) {
    if (x > length) return false;
    x = tent(x);
  }
  return true;
}

bool conjugacy_check(const Angle& t) { return tent(ell(t)) == ell(doubling(t)); }

Angle theta_prime() {
  const BigInt one = 1;
  return Angle((one << 99) - 1, (one << 100) - 1);
}

BinaryPrefix build_theta(const std::vector<std::uint8_t>& alpha_bits, std::size_t leading_run) {
  if (alpha_bits.empty()) throw Error(Errc::EmptyBits, "build_theta needs at least one input bit");
  BinaryPrefix prefix;
  prefix.bits.push_back(0);
  prefix.bits.insert(prefix.bits.end(), leading_run, 1);
  for (std::size_t i = 0; i < alpha_bits.size(); ++i) {
    if (alpha_bits[i] > 1) throw Error(Errc::InvalidArgument, "input bits must be 0 or 1");
    const std::uint8_t value = (i % 2 == 0) ? 0 : 1;
    prefix.bits.insert(prefix.bits.end(), alpha_bits[i] + 1u, value);
  }
  return prefix;
}

std::vector<std::size_t> run_lengths(const BinaryPrefix& prefix) {
  std::vector<std::size_t> runs;
  for (std::size_t i = 0; i < prefix.bits.size(); ++i) {
    if (i == 0 || prefix.bits[i] != prefix.bits[i - 1])
      runs.push_back(1);
    else
      ++runs.back();
  }
  return runs;
}

std::string ChainCertificate::to_string() const {
  switch (status) {
    case Status::Certified: return "CERTIFIED";
    case Status::Inconclusive: return "INCONCLUSIVE(" + std::to_string(failing_n) + ")";
    case Status::Refuted: return "REFUTED(" + std::to_string(failing_n) + ")";
  }
  return "INCONCLUSIVE";
}

ChainCertificate verify_inequalities(const BinaryPrefix& theta_prefix, std::size_t n_max) {
  if (n_max < 2) throw Error(Errc::InvalidArgument, "n_max must be >= 2");
  if (theta_prefix.bits.empty()) throw Error(Errc::EmptyBits, "empty theta prefix");

  ChainCertificate cert;
  bool have_gap = false;
  // Returns false once the chain cannot be certified; records why.
  auto less = [&](const Interval& x, const Interval& y, std::size_t n, const std::string& what) {
    ++cert.comparisons;
    if (x.hi < y.lo) {
      const Rational gap = y.lo - x.hi;
      if (!have_gap || gap < cert.min_gap) cert.min_gap = gap;
      have_gap = true;
      return true;
    }
    cert.status = (x.lo >= y.hi) ? ChainCertificate::Status::Refuted : ChainCertificate::Status::Inconclusive;
    cert.failing_n = n;
    cert.failing_comparison = what;
    return false;
  };

  const Angle tp = theta_prime();
  const Interval l_tp = point(ell(tp));
  const Interval l_q_tp = point(ell(doubling(tp)));
  const Interval l_theta = ell_image({theta_prefix.lower(), theta_prefix.upper()});

  if (!less(point(Rational::integer(0)), l_q_tp, 0, "0 < l(q(theta'))")) return cert;
  if (!less(l_tp, l_theta, 0, "l(theta') < l(theta)")) return cert;

  Angle tp_n = doubling(tp);
  for (std::size_t n = 2; n <= n_max; ++n) {
    tp_n = doubling(tp_n);
    const Interval l_theta_n = ell_image(shifted(theta_prefix, n));
    const Interval l_tp_n = point(ell(tp_n));
    if (!less(l_q_tp, l_theta_n, n, "l(q(theta')) < l(q^n(theta))")) return cert;
    if (!less(l_q_tp, l_tp_n, n, "l(q(theta')) < l(q^n(theta'))")) return cert;
    if (!less(l_theta_n, l_tp, n, "l(q^n(theta)) < l(theta')")) return cert;
    if (!less(l_tp_n, l_tp, n, "l(q^n(theta')) < l(theta')")) return cert;
  }
  cert.status = ChainCertificate::Status::Certified;
  return cert;
}

}  // namespace carpet
