#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "rlab/errors.hpp"
#include "rlab/finite_re.hpp"
#include "rlab/shift_re.hpp"

using namespace rlab;

namespace {

Table<Rational> constant(std::uint64_t len, Rational v = Rational(1)) {
  Table<Rational> t(len);
  for (std::uint64_t n = 1; n <= len; ++n) t[n] = v;
  return t;
}

Table<Rational> even(std::uint64_t len) {
  Table<Rational> t(len);
  for (std::uint64_t n = 2; n <= len; n += 2) t[n] = Rational(1);
  return t;
}

Table<Rational> random_tds(Rng& rng, std::uint64_t range, std::uint64_t len) {
  return oracle::divisor_sum(random_sparse_table(rng, range, 0.5), len);
}

Table<Rational> cut_at(const Table<Rational>& g, std::uint64_t n, std::uint64_t len) {
  auto gp = oracle::mobius(g.prefix(n));
  return oracle::divisor_sum(gp, len);
}

}  // namespace

TEST_CASE("correlation examples") {
  const auto one = correlate(constant(10), constant(40), 10, 30);
  for (std::uint64_t a = 1; a <= 30; ++a) CHECK(one.values[a] == Rational(10));
  const auto ev = correlate(even(11), even(41), 11, 30);
  for (std::uint64_t a = 1; a <= 30; ++a) CHECK(ev.values[a] == Rational(a % 2 == 0 ? 5 : 0));
  const auto mu = correlate<Rational>(ArithmeticFunction::builtin(BuiltinName::mu), ArithmeticFunction::builtin(BuiltinName::one),
                            10, 1);
  CHECK(mu.values[1] == Rational(-1));
  CHECK_THROWS_AS(correlate(constant(5), constant(7), 5, 3), DomainError);
}

TEST_CASE("correlation cache, transform and truncation invariance") {
  Rng rng(41);
  for (int i = 0; i < 10; ++i) {
    const std::uint64_t n = random_integer(rng, 1, 30), amax = 50;
    const auto f = random_rational_table(rng, n + 20), g = random_rational_table(rng, n + amax + 20);
    const auto c = correlate(f, g, n, amax);
    const auto truncated = correlate(f.prefix(n), g.prefix(n + amax), n, amax);
    REQUIRE(c.values == truncated.values);
    for (std::uint64_t a = 1; a <= amax; ++a) {
      REQUIRE(c.values[a] == oracle::correlation(f, g, n, a));
      REQUIRE(c.recompute(a) == c.values[a]);
    }
    REQUIRE(c.transform == oracle::mobius(c.values));
  }
}

TEST_CASE("cut correlations") {
  Rng rng(1);
  const auto g = random_tds(rng, 6, 60);
  const auto c = cut_correlation(constant(10), g, 10, 50);
  REQUIRE(c.remainder.has_value());
  for (std::uint64_t a = 1; a <= 50; ++a) CHECK(c.remainder->at(a).is_zero());
  CHECK(c.fair);

  const std::uint64_t n = 20, a = 5;
  const auto d2 = ArithmeticFunction::builtin(BuiltinName::divisor_k, 2).tabulate<Rational>(n + a);
  const auto cd = cut_correlation(constant(n), d2, n, a);
  Rational rem;
  for (std::uint64_t m = 1; m <= n; ++m) {
    for (std::uint64_t q = n + 1; q <= m + a; ++q) rem += Rational((m + a) % q == 0 ? 1 : 0);
  }
  CHECK(cd.remainder->at(a) == rem);
}

TEST_CASE("QRC") {
  const auto one = cut_correlation(constant(7), constant(20), 7, 12);
  const auto q1 = qrc(one, 7);
  CHECK(q1.entries[1] == Rational(7));
  for (std::uint64_t q = 2; q <= 7; ++q) CHECK(q1.entries[q].is_zero());

  const auto ev = cut_correlation(even(10), even(20), 10, 10);
  CHECK(ev.base.transform[1].is_zero());
  CHECK(ev.base.transform[2] == Rational(5));
  const auto q4 = qrc(ev, 4);
  CHECK(q4.entries[1] == Rational(5, 2));
  CHECK(q4.entries[2] == Rational(5, 2));
  CHECK(q4.entries[3].is_zero());
  CHECK(q4.entries[4].is_zero());
  CHECK(q4.entries.size() == 4);
  CHECK_THROWS_AS(qrc(ev, 11), DomainError);
}

TEST_CASE("correlation divisor identity") {
  const auto one = cut_correlation(constant(6), constant(20), 6, 14);
  for (std::uint64_t a = 1; a <= 14; ++a) {
    const auto r = identity12_check(one, a);
    CHECK(r.equal);
    CHECK(r.main == Rational(6));
    CHECK(r.tail.is_zero());
  }
  Rng rng(7);
  std::size_t with_tail = 0;
  for (int i = 0; i < 30; ++i) {
    const std::uint64_t n = random_integer(rng, 1, 64), amax = 256;
    const auto f = random_tds(rng, random_integer(rng, 1, 16), n);
    const auto g = random_tds(rng, random_integer(rng, 1, 16), n + amax);
    const auto c = cut_correlation(f, g, n, amax);
    for (std::uint64_t a : {std::uint64_t{1}, n, 2 * n, amax}) {
      const auto r = identity12_check(c, a);
      Rational main, tail;
      for (std::uint64_t q = 1; q <= n; ++q) main += oracle::wintner(c.base.transform, q, n) * Rational(oracle::csum(q, static_cast<std::int64_t>(a)));
      for (auto d : oracle::divisors(a)) {
        if (d > n) tail += c.base.transform[d];
      }
      REQUIRE(r.lhs == oracle::correlation(f, cut_at(g, n, n + amax), n, a));
      REQUIRE(r.main == main);
      REQUIRE(r.tail == tail);
      REQUIRE(r.equal);
      with_tail += !tail.is_zero();
    }
  }
  CHECK(with_tail > 0);
}

TEST_CASE("(CC) coefficients") {
  const std::uint64_t n = 10;
  const auto ev = cut_correlation(even(n), even(n + 20), n, 20);
  const auto cc = cc_coefficients(ev, n + 2);
  CHECK(cc[2] == Rational(5, 2));
  CHECK(cc[11].is_zero());
  CHECK(cc[12].is_zero());

  const auto one = cut_correlation(constant(n), constant(n + 10000), n, 10000);
  CHECK(cc_coefficients(one, 3)[1] == Rational(10));
  CHECK(cc_coefficients(one, 3)[2].is_zero());

  const auto est = carmichael_vs_cc(one, 1, {100, 1000, 10000}, 0.1);
  for (double v : est.estimates) CHECK(v == 10.0);
  const auto ev_big = cut_correlation(even(n), even(n + 100000), n, 100000);
  CHECK(std::fabs(carmichael_vs_cc(ev_big, 2, {1000, 10000, 100000}, 0.1).value() - 2.5) < 1e-2 * n);
  CHECK(std::fabs(carmichael_vs_cc(ev_big, 13, {1000, 10000, 100000}, 0.1).value()) < 1e-2 * n);

  const auto unfair = unfair_correlation(constant(n), even(n), n, 20);
  CHECK_FALSE(unfair.fair);
  CHECK_THROWS_WITH_AS(cc_coefficients(unfair, 5), doctest::Contains("fair"), PreconditionError);
}

TEST_CASE("L(q) and the Reef") {
  Rng rng(3);
  const std::uint64_t n = 60;
  for (int i = 0; i < 5; ++i) {
    const auto f = random_tds(rng, random_integer(rng, 1, 6), n);
    const auto g = random_tds(rng, random_integer(rng, 1, 6), n + 200);
    const auto c = cut_correlation(f, g, n, 200);
    for (std::uint64_t q = 1; q <= n + 5; ++q) REQUIRE(exact_l(c, q).is_zero());
    for (std::uint64_t a = 1; a <= 200; ++a) {
      const auto r = reef_check(c, a);
      REQUIRE(r.tail_free);
      REQUIRE(r.reef_exact);
    }
  }

  // One x d_2 at N = 5: C' reaches past N, so there is a tail.
  const std::uint64_t m = 5, amax = 10000;
  const auto d2 = ArithmeticFunction::builtin(BuiltinName::divisor_k, 2).tabulate<Rational>(m + amax);
  const auto c = cut_correlation(constant(m), d2, m, amax);
  std::size_t tails = 0;
  for (std::uint64_t a = 1; a <= 60; ++a) {
    const auto r = reef_check(c, a);
    REQUIRE(r.corrected_deviation == r.tail);
    REQUIRE(r.deviation == r.tail - r.l_term);
    tails += !r.tail.is_zero();
  }
  CHECK(tails > 0);
  for (std::uint64_t q = m + 1; q <= 12; ++q) CHECK(exact_l(c, q).is_zero());

  // L(q) from its defining average, summed independently at x = 10^4.
  std::vector<Rational> tail(10001);
  for (std::uint64_t d = m + 1; d <= 10000; ++d) {
    for (std::uint64_t x = d; x <= 10000; x += d) tail[x] += c.base.transform[d];
  }
  for (std::uint64_t q = 1; q <= m; ++q) {
    double s = 0;
    for (std::uint64_t x = 1; x <= 10000; ++x) {
      s += static_cast<double>(oracle::csum(q, static_cast<std::int64_t>(x))) * tail[x].to_double();
    }
    s /= 10000.0 * static_cast<double>(oracle::phi(q));
    const auto e = l_estimate(c, q, {100, 1000, 10000});
    CHECK(e.value() == doctest::Approx(s).epsilon(1e-9));
  }
  CHECK_THROWS_WITH_AS(l_estimate(c, 1, {100000}), doctest::Contains("amax"), DomainError);
}

TEST_CASE("Weak Reef and short averages") {
  const std::uint64_t m = 5, amax = 100000;
  const auto d2 = ArithmeticFunction::builtin(BuiltinName::divisor_k, 2).tabulate<Rational>(m + amax);
  const auto c = cut_correlation(constant(m), d2, m, amax);
  const std::vector<std::uint64_t> lgrid{1000, 10000, 100000};
  for (std::uint64_t a = 1; a <= 8; ++a) {
    const auto w = weak_reef_check(c, a, lgrid);
    CHECK(w.exact_residual.is_zero());
    CHECK(std::fabs(w.residuals.back()) <= std::fabs(w.residuals.front()));
  }
  const auto gm = cut_at(d2, m, 2 * m);
  for (std::uint64_t a_cut = 1; a_cut <= m; ++a_cut) {
    const auto s = short_average(c, a_cut, lgrid);
    Rational lhs;
    for (std::uint64_t a = 1; a <= a_cut; ++a) lhs += oracle::correlation(constant(m), gm, m, a);
    CHECK(s.lhs == lhs);
    CHECK(s.equal);
    for (const auto& t : s.terms) {
      std::int64_t cs = 0;
      for (std::uint64_t a = 1; a <= a_cut; ++a) cs += oracle::csum(t.q, static_cast<std::int64_t>(a));
      CHECK(t.csum_sum == cs);
    }
    double summed = 0;
    for (std::uint64_t a = 1; a <= a_cut; ++a) summed += weak_reef_check(c, a, lgrid).residuals.back();
    CHECK(s.residuals.back() == doctest::Approx(summed).epsilon(1e-9));
  }
  const auto one = cut_correlation(constant(6), constant(20), 6, 14);
  CHECK(short_average(one, 6).lhs == Rational(36));
  CHECK(short_average(one, 6).rhs == Rational(36));
  CHECK_THROWS_AS(short_average(one, 7), DomainError);

  const auto ev = cut_correlation(even(12), even(40), 12, 24);
  for (std::uint64_t a_cut = 1; a_cut <= 12; ++a_cut) CHECK(short_average(ev, a_cut).equal);
}
