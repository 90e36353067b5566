#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "rlab/dirichlet.hpp"
#include "rlab/errors.hpp"
#include "rlab/ramanujan_sum.hpp"
#include "rlab/transforms.hpp"

using namespace rlab;

namespace {

Table<double> power_decay(std::uint64_t len, double s) {
  Table<double> t(len);
  for (std::uint64_t d = 1; d <= len; ++d) t[d] = std::pow(static_cast<double>(d), -s);
  return t;
}

}  // namespace

TEST_CASE("Eratosthenes transform examples") {
  const auto one = eratosthenes<Rational>(ArithmeticFunction::builtin(BuiltinName::one), 50);
  CHECK(one.values[1] == Rational(1));
  for (std::uint64_t d = 2; d <= 50; ++d) CHECK(one.values[d].is_zero());

  const auto id = eratosthenes<Rational>(ArithmeticFunction::builtin(BuiltinName::id), 100);
  const auto d2 = eratosthenes<Rational>(ArithmeticFunction::builtin(BuiltinName::divisor_k, 2), 100);
  for (std::uint64_t d = 1; d <= 100; ++d) {
    REQUIRE(id.values[d] == Rational(static_cast<std::int64_t>(oracle::phi(d))));
    REQUIRE(d2.values[d] == Rational(1));
  }
  CHECK_THROWS_WITH_AS(eratosthenes<Rational>(ArithmeticFunction::table({1, 2, 3}), 10), doctest::Contains("4"),
                       DomainError);
}

TEST_CASE("Eratosthenes roundtrip on random tables") {
  Rng rng(17);
  for (int i = 0; i < 10; ++i) {
    const std::size_t n = random_integer(rng, 1, 500);
    const auto f = random_rational_table(rng, n);
    const auto t = eratosthenes<Rational>(ArithmeticFunction::from_table(f), n);
    REQUIRE(t.values == oracle::mobius(f));
    REQUIRE(t.reconvolve() == f);
  }
}

TEST_CASE("Wintner partials") {
  Table<Rational> delta(30);
  delta[1] = Rational(1);
  for (std::uint64_t q = 1; q <= 30; ++q) CHECK(wintner_coefficient(delta, q, 30).partial == Rational(q == 1 ? 1 : 0));

  const auto w = wintner_coefficient(power_decay(10000, 2.0), 2, 10000, DecayHint{1.0, 2.0});
  long double ref = 0;
  for (std::uint64_t m = 10000000; m >= 1; --m) ref += 1.0L / std::pow(2.0L * static_cast<long double>(m), 3.0L);
  CHECK(std::fabs(w.partial - static_cast<double>(ref)) < 1e-8);
  REQUIRE(w.tail_bound.has_value());
  CHECK(std::fabs(w.partial - static_cast<double>(ref)) <= *w.tail_bound);
  CHECK_FALSE(wintner_coefficient(power_decay(100, 2.0), 2, 100).tail_bound.has_value());
  CHECK(std::isinf(wintner_tail_bound(1, 100, {1.0, 0.0})));

  Rng rng(2);
  const auto fp = random_rational_table(rng, 120);
  const auto table = wintner_table(fp, 120);
  for (std::uint64_t q = 1; q <= 120; ++q) REQUIRE(table[q] == oracle::wintner(fp, q, 120));
}

TEST_CASE("completely multiplicative shortcut") {
  const std::uint64_t cut = 1000000;
  const auto lambda = ArithmeticFunction::builtin(BuiltinName::liouville).tabulate<double>(cut);
  const auto s = wintner_cm_shortcut(lambda, 4, cut);
  CompensatedSum ref;
  for (std::uint64_t m = 1; m <= cut; ++m) ref.add(lambda[m] / static_cast<double>(m));
  CHECK(s.shortcut == doctest::Approx(0.25 * ref.value()).epsilon(1e-12));
  CompensatedSum direct;
  for (std::uint64_t d = 4; d <= cut; d += 4) direct.add(lambda[d] / static_cast<double>(d));
  CHECK(s.matched == doctest::Approx(direct.value()).epsilon(1e-12));

  const auto inv = wintner_cm_shortcut(power_decay(3000, 1.0), 3, 3000);
  CompensatedSum zeta2;
  for (std::uint64_t m = 1; m <= 3000; ++m) zeta2.add(1.0 / static_cast<double>(m * m));
  CHECK(inv.shortcut == doctest::Approx(zeta2.value() / 9.0).epsilon(1e-12));

  Table<Rational> one(60);
  for (std::uint64_t d = 1; d <= 60; ++d) one[d] = Rational(1);
  CHECK(wintner_cm_shortcut(one, 5, 60).matched == wintner_coefficient(one, 5, 60).partial);

  Table<Rational> cm(64);
  for (std::uint64_t d = 1; d <= 64; ++d) cm[d] = Rational(1, static_cast<std::int64_t>(d));
  for (std::uint64_t q : {2, 5, 8}) {
    const auto r = wintner_cm_shortcut(cm, q, 64);
    Rational gap;
    for (std::uint64_t m = 64 / q + 1; m <= 64; ++m) gap += cm[m] / Rational(static_cast<std::int64_t>(m));
    CHECK(r.shortcut - r.matched == cm[q] / Rational(static_cast<std::int64_t>(q)) * gap);
  }

  CHECK_THROWS_AS(wintner_cm_shortcut(ArithmeticFunction::builtin(BuiltinName::mu).tabulate<Rational>(50), 2, 50),
                  PreconditionError);
}

TEST_CASE("Carmichael estimates") {
  const auto one = ArithmeticFunction::builtin(BuiltinName::one);
  const auto c1 = carmichael_estimate(one, 1, {10, 1000, 100000});
  for (double v : c1.estimates) CHECK(v == 1.0);
  for (std::uint64_t q = 2; q <= 10; ++q) {
    CHECK(std::fabs(carmichael_estimate(one, q, {250000, 500000, 1000000}).value()) < 0.01);
  }
  const auto sq = carmichael_estimate(ArithmeticFunction::builtin(BuiltinName::square_indicator), 1, {1000000});
  CHECK(sq.value() == doctest::Approx(1e-3).epsilon(1e-12));

  // The estimate carries the 1/phi(q) normalization; the raw mean of c_3^2 is phi(3).
  std::vector<Rational> c3(100000);
  for (std::size_t n = 1; n <= c3.size(); ++n) c3[n - 1] = Rational(oracle::csum(3, static_cast<std::int64_t>(n)));
  const auto e3 = carmichael_estimate(ArithmeticFunction::table(c3), 3, {1000, 10000, 100000});
  CHECK(std::fabs(e3.value() * 2.0 - 2.0) < 0.01);
  CHECK(e3.exact_estimates.size() == 3);

  CHECK_THROWS_AS(carmichael_estimate(one, 1, {100, 10}), DomainError);
  CHECK_THROWS_AS(carmichael_estimate(one, 1, {}), DomainError);
}

TEST_CASE("condition verdicts") {
  const auto dh = condition_check(Condition::delange, power_decay(100000, 2.0), 100000);
  CHECK(dh.verdict == ConditionVerdict::satisfied_at_cut);
  const Sieve sv(100000);
  const auto w = sv.omega_table();
  CompensatedSum ref;
  for (std::uint64_t d = 1; d <= 100000; ++d) ref.add(std::ldexp(1.0, w[d]) / std::pow(static_cast<double>(d), 3.0));
  CHECK(dh.partial == doctest::Approx(ref.value()).epsilon(1e-12));

  Table<double> slow(100000);
  for (std::uint64_t d = 1; d <= 100000; ++d) slow[d] = 1.0 / std::log(static_cast<double>(d) + 1.0);
  CHECK(condition_check(Condition::slow_decay, slow, 100000).verdict == ConditionVerdict::satisfied_at_cut);
  CHECK(condition_check(Condition::wintner, slow, 100000).verdict == ConditionVerdict::violated_at_cut);
  CHECK(condition_check(Condition::slow_decay, power_decay(100000, 0.0), 100000).verdict ==
        ConditionVerdict::violated_at_cut);

  Rng rng(9);
  const auto noise = to_double(random_rational_table(rng, 10000));
  for (auto kind : {Condition::wintner, Condition::delange, Condition::dual_delange}) {
    const auto r = condition_check(kind, noise, 10000);
    for (std::size_t i = 1; i < r.trend.size(); ++i) REQUIRE(r.trend[i] >= r.trend[i - 1]);
    REQUIRE(r.partial >= r.trend.back());
  }
  CHECK(parse_condition("DD7") == Condition::dual_delange);
  CHECK_THROWS(parse_condition("XX"));
}

TEST_CASE("approximate Carmichael-Wintner formula") {
  const std::vector<std::uint64_t> grid{1000, 10000, 100000};
  const auto one = ArithmeticFunction::builtin(BuiltinName::one).tabulate<double>(100000);
  CHECK(cw_approximate_check(one, 3, grid).bounded);

  const auto d2 = ArithmeticFunction::builtin(BuiltinName::divisor_k, 2).tabulate<double>(100000);
  const auto r = cw_approximate_check(d2, 2, grid);
  CHECK(r.max_ratio <= 50.0);
  CHECK(r.bounded);
  // Independent evaluation of both sides at x = 1000.
  double lhs = 0, rhs = 0, mass = 0;
  for (std::uint64_t n = 1; n <= 1000; ++n) lhs += d2[n] * static_cast<double>(oracle::csum(2, static_cast<std::int64_t>(n)));
  lhs /= 1000.0;
  for (std::uint64_t d = 2; d <= 1000; d += 2) rhs += 1.0 / static_cast<double>(d);
  mass = 1000.0;
  CHECK(r.points[0].lhs == doctest::Approx(lhs).epsilon(1e-12));
  CHECK(r.points[0].rhs == doctest::Approx(rhs).epsilon(1e-12));
  CHECK(*r.points[0].ratio == doctest::Approx(1000.0 * std::fabs(lhs - rhs) / mass).epsilon(1e-9));

  const auto sq = ArithmeticFunction::builtin(BuiltinName::square_indicator).tabulate<double>(100000);
  for (const auto& p : cw_approximate_check(sq, 1, grid).points) CHECK(std::isfinite(p.ratio.value()));

  Table<double> zero(1000);
  CHECK_FALSE(cw_approximate_check(zero, 1, {1000}).points[0].ratio.has_value());
}

TEST_CASE("nonnegative mean inequality") {
  const std::vector<std::uint64_t> grid{100, 1000, 10000};
  CHECK(lemma2_check(ArithmeticFunction::builtin(BuiltinName::square_indicator).tabulate<Rational>(10000), 30, grid)
            .holds());
  CHECK(lemma2_check(Table<Rational>(10000), 30, grid).holds());
  CHECK(lemma2_check(ArithmeticFunction::builtin(BuiltinName::one).tabulate<Rational>(10000), 30, grid).holds());
  auto neg = ArithmeticFunction::builtin(BuiltinName::one).tabulate<Rational>(100);
  neg[37] = Rational(-1);
  CHECK_THROWS_WITH_AS(lemma2_check(neg, 3, {100}), doctest::Contains("37"), PreconditionError);
}

TEST_CASE("vanishing high partials search") {
  const auto free = conjecture1_search(Conjecture1Family::free, 2, 4, 0, 1);
  CHECK(free.unknowns == 2);
  CHECK(free.rank == 2);
  CHECK(free.nullspace.empty());
  CHECK(free.counterexamples.empty());
  for (std::uint64_t q = 2; q <= 6; ++q) {
    for (auto family : {Conjecture1Family::completely_multiplicative, Conjecture1Family::nonnegative}) {
      const auto r = conjecture1_search(family, q, 24, 30, 5);
      CHECK(r.counterexamples.empty());
      CHECK_FALSE(r.fault);
    }
  }
  Table<Rational> fp(2);
  fp[1] = Rational(1);
  fp[2] = Rational(1);
  Conjecture1Candidate data;
  CHECK_FALSE(verify_conjecture1_candidate(fp, 1, &data));
  CHECK(data.win1 == Rational(3, 2));
  CHECK(data.high_partials == std::vector<Rational>{Rational(1, 2)});
  CHECK(parse_conjecture1_family("cm") == Conjecture1Family::completely_multiplicative);
}

TEST_CASE("concordance under slow decay at desk scale") {
  const std::uint64_t x = 100000;
  const auto r = concordance_slow_decay(power_decay(x, 2.0), 10, {x / 100, x / 10, x}, 1e-3);
  for (std::size_t i = 0; i < r.moduli.size(); ++i) {
    CHECK(std::fabs(r.difference[i]) < 1e-3 + wintner_tail_bound(r.moduli[i], x, {1.0, 2.0}));
  }
}
