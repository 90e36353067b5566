#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "rlab/arith.hpp"
#include "rlab/errors.hpp"
#include "rlab/ramanujan_sum.hpp"

using namespace rlab;

TEST_CASE("csum examples") {
  for (std::int64_t n = -20; n <= 20; ++n) {
    CHECK(csum(1, n) == 1);
    CHECK(csum(2, n) == (n % 2 == 0 ? 1 : -1));
  }
  CHECK(csum(6, 3) == -2);
  CHECK(csum_divisor_form(4, 2) == -2);
  CHECK(csum_trig_form(1, 7) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(csum(7, 0) == 6);
  CHECK_THROWS_AS(csum(0, 1), DomainError);
  CHECK_THROWS_AS(csum_divisor_form(0, 1), DomainError);
}

TEST_CASE("csum at coprime n is mu(q)") {
  for (std::uint64_t q = 1; q <= 200; ++q) {
    for (std::int64_t n = 1; n <= 50; ++n) {
      if (oracle::gcd(q, static_cast<std::uint64_t>(n)) == 1) REQUIRE(csum(q, n) == oracle::mu(q));
    }
  }
}

TEST_CASE("prime modulus two-divisor case") {
  for (std::uint64_t p = 2; p <= 100; ++p) {
    if (!oracle::is_prime(p)) continue;
    for (std::int64_t n = 1; n <= 300; ++n) {
      REQUIRE(csum_divisor_form(p, n) == (n % static_cast<std::int64_t>(p) == 0 ? static_cast<std::int64_t>(p) - 1 : -1));
    }
  }
}

TEST_CASE("three forms against the brute-force cosine sum") {
  for (std::uint64_t q = 1; q <= 120; ++q) {
    for (std::int64_t n = 0; n <= 120; ++n) {
      const auto ref = oracle::csum(q, n);
      REQUIRE(csum(q, n) == ref);
      REQUIRE(csum_divisor_form(q, n) == ref);
      REQUIRE(std::fabs(csum_trig_form(q, n) - static_cast<double>(ref)) < 1e-6);
    }
  }
}

TEST_CASE("periodicity, parity, gcd bound") {
  for (std::uint64_t q = 1; q <= 100; ++q) {
    const RamanujanSum c(q);
    REQUIRE(c.totient() == oracle::phi(q));
    for (std::int64_t n = 0; n <= 200; ++n) {
      REQUIRE(c(n + static_cast<std::int64_t>(q)) == c(n));
      REQUIRE(c(-n) == c(n));
      REQUIRE(static_cast<std::uint64_t>(std::llabs(c(n))) <= oracle::gcd(q, static_cast<std::uint64_t>(n)));
    }
  }
}

TEST_CASE("multiplicative in q") {
  for (std::uint64_t q1 = 1; q1 <= 100; q1 += 3) {
    for (std::uint64_t q2 = 1; q2 <= 100; q2 += 7) {
      if (oracle::gcd(q1, q2) != 1) continue;
      for (std::int64_t n = 1; n <= 200; n += 5) REQUIRE(csum(q1 * q2, n) == csum(q1, n) * csum(q2, n));
    }
  }
}

TEST_CASE("indicator identity") {
  CHECK(indicator_identity_check(6, 12).divisor_sum == 6);
  CHECK(indicator_identity_check(6, 12).holds);
  CHECK(indicator_identity_check(5, 7).divisor_sum == 0);
  CHECK(indicator_identity_check(5, 7).holds);
  for (std::int64_t n = 0; n <= 30; ++n) CHECK(indicator_identity_check(1, n).divisor_sum == 1);
  for (std::uint64_t q = 1; q <= 60; ++q) {
    for (std::int64_t n = 0; n <= 60; ++n) {
      std::int64_t s = 0;
      for (auto d : oracle::divisors(q)) s += oracle::csum(d, n);
      REQUIRE(s == (n % static_cast<std::int64_t>(q) == 0 ? static_cast<std::int64_t>(q) : 0));
      REQUIRE(indicator_identity_check(q, n).divisor_sum == s);
    }
  }
}

TEST_CASE("Delange bound") {
  const auto b = delange_bound_check(1, 1);
  CHECK(b.lhs == 1);
  CHECK(b.rhs == 1);
  CHECK(b.holds);
  const auto b6 = delange_bound_check(6, 6);
  CHECK(b6.lhs == 6);
  CHECK(b6.rhs == 24);
  for (std::uint64_t d = 1; d <= 80; ++d) {
    for (std::uint64_t n = 1; n <= 80; ++n) {
      std::int64_t lhs = 0;
      for (auto l : oracle::divisors(d)) lhs += std::llabs(oracle::csum(l, static_cast<std::int64_t>(n)));
      const auto r = delange_bound_check(d, n);
      REQUIRE(r.lhs == lhs);
      REQUIRE(r.rhs == static_cast<std::int64_t>(n) << oracle::omega(d));
      REQUIRE(r.holds);
    }
  }
}

TEST_CASE("table invariants") {
  const RamanujanSumTable t(40, 100);
  for (std::uint64_t q = 1; q <= 40; ++q) {
    REQUIRE(t.at(q, 0) == static_cast<std::int64_t>(oracle::phi(q)));
    for (std::uint64_t n = 0; n <= 100; ++n) {
      REQUIRE(t.at(q, n) == csum(q, static_cast<std::int64_t>(n)));
      if (n >= q) REQUIRE(t.at(q, n) == t.at(q, n % q));
    }
  }
}

TEST_CASE("csum_prefix") {
  for (std::uint64_t q = 1; q <= 30; ++q) {
    std::int64_t s = 0;
    for (std::uint64_t a = 1; a <= 200; ++a) {
      s += oracle::csum(q, static_cast<std::int64_t>(a));
      REQUIRE(csum_prefix(q, a) == s);
    }
  }
}

namespace {

double direct_orthogonality(std::uint64_t q, std::uint64_t l, std::int64_t n, std::uint64_t x) {
  double s = 0;
  for (std::uint64_t a = 1; a <= x; ++a) {
    s += static_cast<double>(oracle::csum(q, n + static_cast<std::int64_t>(a)) * oracle::csum(l, static_cast<std::int64_t>(a)));
  }
  return s / static_cast<double>(x);
}

}  // namespace

TEST_CASE("orthogonality estimates") {
  const auto e11 = orthogonality_estimate(1, 1, 4, {1000, 10000, 100000});
  for (double v : e11.estimates) CHECK(v == 1.0);

  const auto e23 = orthogonality_estimate(2, 3, 1, {25000, 50000, 100000});
  CHECK(std::fabs(e23.value()) < 0.01);
  CHECK(e23.value() == doctest::Approx(direct_orthogonality(2, 3, 1, 100000)).epsilon(1e-12));

  const auto e55 = orthogonality_estimate(5, 5, 5, {250000, 500000, 1000000});
  CHECK(std::fabs(e55.value() - 4.0) < 0.01);
  CHECK(e55.converged());

  CHECK(orthogonality_estimate(4, 6, 3, {777}).value() == doctest::Approx(direct_orthogonality(4, 6, 3, 777)));
  CHECK_THROWS_AS(orthogonality_estimate(2, 3, 1, {}), DomainError);
  CHECK_THROWS_AS(orthogonality_estimate(2, 3, 1, {100, 50}), DomainError);
}

TEST_CASE("absolute series partials grow") {
  const auto p = absolute_series_partials(1, {10, 100, 1000});
  double s = 0;
  for (std::uint64_t q = 1; q <= 1000; ++q) {
    s += std::fabs(static_cast<double>(oracle::mu(q))) / static_cast<double>(q);
    if (q == 10) CHECK(p[0] == doctest::Approx(s));
  }
  CHECK(p[2] == doctest::Approx(s));
  CHECK(p[0] < p[1]);
  CHECK(p[1] < p[2]);
}
