#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "rlab/errors.hpp"
#include "rlab/expansions.hpp"
#include "rlab/finite_re.hpp"

using namespace rlab;

namespace {

CoefficientSeq<Rational> seq(std::vector<Rational> v) {
  CoefficientSeq<Rational> s;
  s.entries = Table<Rational>(std::move(v));
  return s;
}

RamanujanExpansion<Rational> pure(std::vector<Rational> v) {
  RamanujanExpansion<Rational> e;
  e.coefficients = seq(std::move(v));
  return e;
}

}  // namespace

TEST_CASE("partial sums") {
  CHECK(evaluate_partial(pure({0, 0, 0}), 5, 3).is_zero());
  CHECK(evaluate_partial(pure({Rational(3, 2), Rational(1, 2)}), 2, 2) == Rational(2));

  const auto z = ZeroCloudElement<double>{1.0, 0.0}.truncated(10000);
  double mertens = 0;
  for (std::uint64_t q = 1; q <= 10000; ++q) mertens += oracle::mu(q) / static_cast<double>(q);
  const double p = evaluate_partial(z, 1, 10000);
  CHECK(p == doctest::Approx(mertens).epsilon(1e-10));
  CHECK(std::fabs(p) < 0.01);

  auto infinite = pure({1, 2});
  infinite.coefficients.finite = false;
  CHECK_THROWS_AS(evaluate_partial(infinite, 1, 3), DomainError);
  CHECK(evaluate_partial(pure({1, 2}), 3, 5) == Rational(1) + Rational(2) * Rational(oracle::csum(2, 3)));
}

TEST_CASE("zero cloud trend") {
  for (auto [a, b] : std::vector<std::pair<double, double>>{{1, 0}, {0, 1}, {1, 1}}) {
    for (std::uint64_t n = 1; n <= 4; ++n) {
      const auto p = zero_cloud_partials({a, b}, n, {100, 100000});
      CHECK(std::fabs(p[1]) < std::fabs(p[0]));
    }
  }
  const auto zero = ZeroCloudElement<Rational>{}.truncated(20);
  for (std::uint64_t q = 1; q <= 20; ++q) CHECK(zero.coefficients.entries[q].is_zero());
}

TEST_CASE("blend of two coefficient sequences evaluates linearly") {
  Rng rng(4);
  const auto a = random_rational_table(rng, 40), b = random_rational_table(rng, 40);
  for (Rational lam : {Rational(0), Rational(1, 2), Rational(1)}) {
    Table<Rational> blend(40);
    for (std::uint64_t q = 1; q <= 40; ++q) blend[q] = lam * a[q] + (Rational(1) - lam) * b[q];
    RamanujanExpansion<Rational> ea, eb, ec;
    ea.coefficients.entries = a;
    eb.coefficients.entries = b;
    ec.coefficients.entries = blend;
    for (std::uint64_t n = 1; n <= 30; ++n) {
      for (std::uint64_t cut : {7, 40}) {
        REQUIRE(evaluate_partial(ec, n, cut) ==
                lam * evaluate_partial(ea, n, cut) + (Rational(1) - lam) * evaluate_partial(eb, n, cut));
      }
    }
  }
}

TEST_CASE("Wintner-Delange reconstruction") {
  Table<Rational> delta(50);
  delta[1] = Rational(1);
  for (std::uint64_t cut : {1, 7, 50}) CHECK(wintner_delange_reconstruct(delta, 9, cut).value == Rational(1));

  Table<double> fp(10000);
  for (std::uint64_t d = 1; d <= 10000; ++d) fp[d] = 1.0 / static_cast<double>(d * d);
  const auto r = wintner_delange_reconstruct(fp, 6, 10000);
  CHECK(r.target == doctest::Approx(1.0 + 0.25 + 1.0 / 9 + 1.0 / 36));
  CHECK(std::fabs(r.value - r.target) < 1e-6);

  Rng rng(8);
  const auto tds = random_rational_table(rng, 12);
  Table<Rational> padded(60);
  for (std::uint64_t d = 1; d <= 12; ++d) padded[d] = tds[d];
  const auto f = oracle::divisor_sum(tds, 60);
  for (std::uint64_t n = 1; n <= 60; ++n) REQUIRE(wintner_delange_reconstruct(padded, n, 12).value == f[n]);
}

TEST_CASE("Lucht identity") {
  std::vector<Rational> inv;
  for (std::int64_t q = 1; q <= 100; ++q) inv.emplace_back(1, q);
  const auto l = lucht_evaluate(seq(inv), 1, 100);
  Rational mobius_partial;
  for (std::int64_t k = 1; k <= 100; ++k) mobius_partial += Rational(oracle::mu(static_cast<std::uint64_t>(k)), k);
  CHECK(l.lhs == mobius_partial);
  CHECK(l.rhs == mobius_partial);

  const Rational f1(5, 3), f2(-2, 7);
  const auto two = lucht_evaluate(seq({f1, f2}), 2, 2);
  CHECK(two.lhs == f1 + f2);
  CHECK(two.rhs == f1 + f2);
  CHECK(lucht_evaluate(seq({0, 0}), 6, 2).equal);

  Rng rng(21);
  for (int i = 0; i < 5; ++i) {
    const auto t = random_rational_table(rng, 60);
    const auto s = seq(std::vector<Rational>(t.values().begin(), t.values().end()));
    for (std::uint64_t a = 1; a <= 30; ++a) {
      const auto sweep = lucht_sweep(s, a, 60);
      REQUIRE_FALSE(sweep.mismatch.has_value());
      const auto at = lucht_evaluate(s, a, 37);
      Rational lhs;
      for (std::uint64_t q = 1; q <= 37; ++q) lhs += s.entries[q] * Rational(oracle::csum(q, static_cast<std::int64_t>(a)));
      REQUIRE(at.lhs == lhs);
      REQUIRE(at.equal);
    }
  }
}

TEST_CASE("coefficient inversion") {
  const auto delta = theorem4_inversion(seq({1, 0, 0}));
  CHECK(delta.fprime[1] == Rational(1));
  CHECK(delta.fprime[2].is_zero());
  const auto t = theorem4_inversion(seq({Rational(3, 2), Rational(1, 2)}));
  CHECK(t.fprime[1] == Rational(1));
  CHECK(t.fprime[2] == Rational(1));
  Rng rng(6);
  for (int i = 0; i < 30; ++i) {
    const auto fhat = random_rational_table(rng, random_integer(rng, 1, 64));
    const auto r = theorem4_inversion(seq(std::vector<Rational>(fhat.values().begin(), fhat.values().end())));
    REQUIRE(r.roundtrip);
    for (std::uint64_t q = 1; q <= fhat.size(); ++q) REQUIRE(oracle::wintner(r.fprime, q, fhat.size()) == fhat[q]);
  }
  auto infinite = seq({1});
  infinite.finite = false;
  CHECK_THROWS_AS(theorem4_inversion(infinite), PreconditionError);
}

TEST_CASE("Carmichael formula for pure finite expansions") {
  const auto one = carmichael_formula_check(pure({1}), 1, {10, 100, 1000});
  for (double v : one.estimates) CHECK(v == 1.0);
  const auto e = pure({Rational(3, 2), Rational(1, 2)});
  CHECK(std::fabs(carmichael_formula_check(e, 2, {1000, 10000, 100000}).value() - 0.5) < 1e-2);
  CHECK(std::fabs(carmichael_formula_check(e, 5, {1000, 10000, 100000}).value()) < 1e-2);
  auto dependent = e;
  dependent.purity = Purity::n_dependent;
  CHECK_THROWS_AS(carmichael_formula_check(dependent, 1, {100}), PreconditionError);
}

TEST_CASE("standard finite expansion") {
  const auto s1 = standard_fre(Table<Rational>(std::vector<Rational>{Rational(7, 3)}), 1);
  CHECK(s1.coefficients[1] == Rational(7, 3));
  CHECK(s1.reconstruction == Rational(7, 3));
  const auto d2 = standard_fre(ArithmeticFunction::builtin(BuiltinName::divisor_k, 2).tabulate<Rational>(6), 6);
  CHECK(d2.reconstruction == Rational(4));
  CHECK(d2.exact);
  Rng rng(12);
  for (int i = 0; i < 10; ++i) {
    const auto f = random_rational_table(rng, 200);
    const auto fp = oracle::mobius(f);
    const std::uint64_t n = random_integer(rng, 1, 200);
    const auto r = standard_fre(f, n);
    Rational rec;
    for (std::uint64_t l = 1; l <= n; ++l) {
      REQUIRE(r.coefficients[l] == oracle::wintner(fp, l, n));
      rec += r.coefficients[l] * Rational(oracle::csum(l, static_cast<std::int64_t>(n)));
    }
    REQUIRE(rec == f[n]);
    REQUIRE(standard_fre_sweep(f, 200).mismatches.empty());
  }
}

TEST_CASE("d_K coefficients") {
  for (std::uint64_t n = 1; n <= 100; ++n) {
    const auto c = dk_coefficient(n, 1);
    const double expect = -std::log(static_cast<double>(n)) / static_cast<double>(n);
    if (n == 1) CHECK(c.value == 0.0);
    else REQUIRE(std::fabs(c.value - expect) <= 1e-12 * std::fabs(expect));
  }
  for (int k = 1; k <= 4; ++k) CHECK(dk_coefficient(1, k).value == 0.0);

  CHECK(inner_series_closed_form(2, 2, 1) == Rational(6));
  const auto c22 = dk_coefficient(2, 2);
  CHECK(c22.rational == Rational(1, 2) * Rational(1, 2) * Rational(2, 3));
  CHECK(c22.value == doctest::Approx(std::pow(std::log(2.0), 2) / 6.0).epsilon(1e-14));

  for (int k = 1; k <= 4; ++k) {
    for (std::uint64_t p : {2, 3, 5, 7, 11, 13}) {
      for (int l = 0; l <= 4; ++l) {
        // Direct summation with exact binomials, independent of the term-ratio recursion.
        long double s = 0;
        for (int lam = l; lam < l + 200; ++lam) {
          long double b = 1;
          for (int i = 1; i <= k - 1; ++i) b = b * (lam + i) / i;
          s += b * std::pow(static_cast<long double>(p), static_cast<long double>(l - lam));
        }
        const double closed = inner_series_closed_form(k, p, l).to_double();
        REQUIRE(std::fabs(closed - static_cast<double>(s)) <= 1e-12 * closed);
        REQUIRE(std::fabs(closed - inner_series_partial(k, p, l, 1000)) <= 1e-10 * closed);
      }
    }
  }
  CHECK_THROWS(dk_expansion(1, 10));
  CHECK(dk_expansion(2, 10).coefficients.entries[6] == doctest::Approx(dk_coefficient(6, 1).value));
}
