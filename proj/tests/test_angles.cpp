#include <doctest.h>

#include <algorithm>
#include <bit>
#include <numeric>

#include "carpet/angles.hpp"
#include "test_util.hpp"

using namespace carpet;

namespace {

Angle A(long p, long q) { return Angle(BigInt(p), BigInt(q)); }
Rational R(long p, long q) { return Rational(BigInt(p), BigInt(q)); }

std::vector<std::uint8_t> thue_morse(std::size_t n) {
  std::vector<std::uint8_t> bits;
  for (std::size_t i = 0; i < n; ++i) bits.push_back(static_cast<std::uint8_t>(std::popcount(i) & 1));
  return bits;
}

// Some tail of length >= 2p + 1 repeats with period p.
bool eventually_periodic_in_window(const std::vector<std::size_t>& s) {
  const std::size_t n = s.size();
  for (std::size_t p = 1; 2 * p + 1 <= n; ++p) {
    std::size_t k = n - p;  // smallest start with s[i] == s[i + p] for all i >= start
    while (k > 0 && s[k - 1] == s[k - 1 + p]) --k;
    if (n - k >= 2 * p + 1) return true;
  }
  return false;
}

// Orbit of t under doubling by direct enumeration with a visited list.
OrbitClass naive_orbit(long p, long q) {
  std::vector<long> seen;
  long x = p % q;
  while (std::find(seen.begin(), seen.end(), x) == seen.end()) {
    seen.push_back(x);
    x = (2 * x) % q;
  }
  const auto first = static_cast<std::size_t>(std::find(seen.begin(), seen.end(), x) - seen.begin());
  return {first, seen.size() - first};
}

}  // namespace

TEST_CASE("rationals and angles are reduced") {
  CHECK(R(6, 8) == R(3, 4));
  CHECK(R(0, 5).den() == 1);
  CHECK(A(7, 3) == A(1, 3));
  CHECK(A(3, 3) == A(0, 1));
  CHECK(R(1, 3) < R(1, 2));
  CHECK(R(1, 3) + R(1, 6) == R(1, 2));
  CHECK(R(1, 2) - R(1, 3) == R(1, 6));
  CHECK(R(2, 3) * R(3, 4) == R(1, 2));
  CHECK_ERRC(R(1, 3) - R(1, 2), Errc::DomainError);
  CHECK_ERRC(R(1, 0), Errc::DomainError);
}

TEST_CASE("parse_angle") {
  CHECK(parse_angle("1/7") == A(1, 7));
  CHECK(parse_angle("9/7") == A(2, 7));
  CHECK(parse_angle(" 2 / 4 ") == A(1, 2));
  CHECK(parse_angle("0") == A(0, 1));
  CHECK_ERRC(parse_angle("1/0"), Errc::ParseError);
  CHECK_ERRC(parse_angle("-1/3"), Errc::ParseError);
  CHECK_ERRC(parse_angle("a/b"), Errc::ParseError);
  CHECK_ERRC(parse_angle("1/3/5"), Errc::ParseError);
}

TEST_CASE("binary prefixes") {
  const BinaryPrefix p = parse_binary_prefix("0.101");
  CHECK(p.lower() == R(5, 8));
  CHECK(p.upper() == R(3, 4));
  CHECK(p.to_string() == "0.101");
  CHECK(parse_binary_prefix("0011").lower() == R(3, 16));
  CHECK_ERRC(parse_bits("0102"), Errc::ParseError);
  CHECK_ERRC(parse_bits(""), Errc::ParseError);
}

TEST_CASE("doubling, tent and ell") {
  CHECK(doubling(A(1, 3)) == A(2, 3));
  CHECK(doubling(A(2, 3)) == A(1, 3));
  CHECK(doubling(A(0, 1)) == A(0, 1));
  CHECK(doubling(A(1, 2)) == A(0, 1));
  CHECK(doubling(A(3, 4)) == A(1, 2));

  CHECK(tent(R(1, 3)) == R(2, 3));
  CHECK(tent(R(3, 4)) == R(1, 2));
  CHECK(tent(R(1, 2)) == R(1, 1));
  CHECK(tent(R(1, 1)) == R(0, 1));
  CHECK_ERRC(tent(R(3, 2)), Errc::DomainError);

  CHECK(ell(A(1, 3)) == R(2, 3));
  CHECK(ell(A(2, 3)) == R(2, 3));
  CHECK(ell(A(0, 1)) == R(0, 1));
  CHECK(ell(A(1, 2)) == R(1, 1));
}

TEST_CASE("ell coincides with the tent map on [0, 1)") {
  for (long q = 1; q <= 64; ++q)
    for (long p = 0; p < q; ++p) CHECK(ell(A(p, q)) == tent(R(p, q)));
}

TEST_CASE("doubling agrees with integer arithmetic") {
  for (long q = 1; q <= 200; ++q)
    for (long p = 0; p < q; ++p) {
      const Angle got = doubling(A(p, q));
      CHECK(got == A((2 * p) % q, q));
      CHECK(got.num() < got.den());
      CHECK(boost::multiprecision::gcd(got.num(), got.den()) == 1);
    }
}

TEST_CASE("classify_orbit") {
  CHECK(classify_orbit(A(1, 3)) == OrbitClass{0, 2});
  CHECK(classify_orbit(A(1, 6)) == OrbitClass{1, 2});
  CHECK(classify_orbit(A(1, 7)) == OrbitClass{0, 3});
  CHECK(classify_orbit(A(0, 1)) == OrbitClass{0, 1});
  CHECK(classify_orbit(A(1, 8)) == OrbitClass{3, 1});
  CHECK(classify_orbit(A(1, 7)).to_string() == "Periodic(3)");
  CHECK(classify_orbit(A(1, 6)).to_string() == "PrePeriodic(1, 2)");

  for (long q = 1; q <= 120; ++q)
    for (long p = 0; p < q; ++p) {
      if (std::gcd(p, q) != 1) continue;
      const OrbitClass got = classify_orbit(A(p, q));
      CHECK(got == naive_orbit(p, q));
      if (q % 2 == 1) CHECK(got.periodic());
    }
}

TEST_CASE("in_R") {
  CHECK(in_R(A(0, 1)));
  CHECK(in_R(A(1, 3)));
  CHECK_FALSE(in_R(A(1, 7)));
  CHECK(in_R(A(1, 2)));
}

TEST_CASE("conjugacy between tent and doubling") {
  CHECK(conjugacy_check(A(1, 3)));
  CHECK(conjugacy_check(A(3, 8)));
  for (long q = 1; q <= 128; ++q)
    for (long p = 0; p < q; ++p)
      if (std::gcd(p, q) == 1) CHECK(conjugacy_check(A(p, q)));
}

TEST_CASE("theta_prime") {
  const BigInt one = 1;
  const Angle tp = theta_prime();
  CHECK(tp.num() == (one << 99) - 1);
  CHECK(tp.den() == (one << 100) - 1);
  CHECK(classify_orbit(tp) == OrbitClass{0, 100});
  CHECK(in_R(tp));
  // l(theta') = 2 theta' since theta' < 1/2
  CHECK(ell(tp) == Rational((one << 100) - 2, (one << 100) - 1));
  // the repeating block of l(theta') is 1^99 0 read from the first digit
  Rational x = ell(tp);
  std::string digits;
  for (int i = 0; i < 200; ++i) {
    x = x * Rational::integer(2);
    if (x >= Rational::integer(1)) {
      digits.push_back('1');
      x = x - Rational::integer(1);
    } else {
      digits.push_back('0');
    }
  }
  const std::string block = std::string(99, '1') + "0";
  CHECK(digits == block + block);
}

TEST_CASE("build_theta") {
  const BinaryPrefix a = build_theta({0});
  CHECK(run_lengths(a) == std::vector<std::size_t>{1, 100, 1});
  CHECK(a.bits.back() == 0);

  const BinaryPrefix b = build_theta({1, 0});
  CHECK(b.to_string() == "0.0" + std::string(100, '1') + "001");

  const BinaryPrefix small = build_theta({1, 1, 0}, 3);
  CHECK(small.to_string() == "0.011100110");

  const auto runs = run_lengths(build_theta(thue_morse(200)));
  for (std::size_t i = 2; i < runs.size(); ++i) {
    CHECK(runs[i] >= 1);
    CHECK(runs[i] <= 2);
  }
  CHECK_ERRC(build_theta({}), Errc::EmptyBits);
  CHECK_ERRC(build_theta({2}), Errc::InvalidArgument);
}

TEST_CASE("run lengths of theta inherit aperiodicity from the input") {
  auto tail = [](const BinaryPrefix& p) {
    const auto runs = run_lengths(p);
    return std::vector<std::size_t>(runs.begin() + 2, runs.end());
  };
  CHECK_FALSE(eventually_periodic_in_window(tail(build_theta(thue_morse(256)))));
  std::vector<std::uint8_t> periodic;
  for (int i = 0; i < 256; ++i) periodic.push_back(static_cast<std::uint8_t>(i % 3 == 0));
  CHECK(eventually_periodic_in_window(tail(build_theta(periodic))));
}

TEST_CASE("verify_inequalities") {
  SUBCASE("64 input bits certify the chain up to n = 50") {
    const ChainCertificate cert = verify_inequalities(build_theta(thue_morse(64)), 50);
    CHECK(cert.certified());
    CHECK(cert.to_string() == "CERTIFIED");
    CHECK(cert.comparisons == 2 + 4 * 49);
    CHECK(cert.min_gap > Rational::integer(0));
  }
  SUBCASE("a 10-bit prefix is inconclusive") {
    const ChainCertificate cert = verify_inequalities(parse_binary_prefix("0111111111"), 50);
    CHECK(cert.status == ChainCertificate::Status::Inconclusive);
    CHECK(cert.to_string().starts_with("INCONCLUSIVE("));
  }
  SUBCASE("a prefix contradicting the chain is refuted") {
    // theta = 0.001... gives l(theta) < l(theta') outright
    const ChainCertificate cert = verify_inequalities(parse_binary_prefix("0.00100000000"), 50);
    CHECK(cert.status == ChainCertificate::Status::Refuted);
    CHECK(cert.failing_n == 0);
  }
  CHECK_ERRC(verify_inequalities(build_theta({0}), 1), Errc::InvalidArgument);
}
