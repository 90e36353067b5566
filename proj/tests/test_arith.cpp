#include <doctest.h>

#include "oracles.hpp"
#include "rlab/arith.hpp"
#include "rlab/dirichlet.hpp"
#include "rlab/errors.hpp"
#include "rlab/function.hpp"

using namespace rlab;

TEST_CASE("factor examples") {
  CHECK(factor(1).factors.empty());
  CHECK(factor(12).factors == std::vector<std::pair<std::uint64_t, int>>{{2, 2}, {3, 1}});
  CHECK(factor(97).factors == std::vector<std::pair<std::uint64_t, int>>{{97, 1}});
  CHECK_THROWS_AS(factor(0), DomainError);
  CHECK_THROWS_AS(factor_signed(-4), DomainError);
}

TEST_CASE("factor reproduces n with prime factors up to 10^4") {
  for (std::uint64_t n = 1; n <= 10000; ++n) {
    const auto f = factor(n);
    std::uint64_t prod = 1, last = 1;
    for (auto [p, e] : f.factors) {
      REQUIRE(oracle::is_prime(p));
      REQUIRE(p > last);
      REQUIRE(e >= 1);
      last = p;
      for (int i = 0; i < e; ++i) prod *= p;
    }
    REQUIRE(prod == n);
  }
}

TEST_CASE("factor handles large semiprimes") {
  const std::uint64_t p = 1000003, q = 999983;
  const auto f = factor(p * q);
  CHECK(f.factors == std::vector<std::pair<std::uint64_t, int>>{{q, 1}, {p, 1}});
  CHECK(factor(1000000007ULL * 998244353ULL).factors.size() == 2);
}

TEST_CASE("multiplicative primitives at small n") {
  CHECK(mu(1) == 1);
  CHECK(phi(1) == 1);
  CHECK(omega(1) == 0);
  CHECK(mu(6) == 1);
  CHECK(phi(6) == 2);
  CHECK(omega(6) == 2);
  CHECK(mu(12) == 0);
  for (std::uint64_t n = 1; n <= 300; ++n) {
    REQUIRE(mu(n) == oracle::mu(n));
    REQUIRE(phi(n) == oracle::phi(n));
    REQUIRE(omega(n) == oracle::omega(n));
    REQUIRE(divisors(n) == oracle::divisors(n));
    std::size_t squarefree = 0;
    for (auto d : divisors(n)) squarefree += mu(d) != 0;
    REQUIRE(squarefree == (std::size_t{1} << omega(n)));
  }
}

TEST_CASE("d_K") {
  CHECK(divisor_k(12, 2) == 6);
  CHECK(divisor_k(4, 3) == 6);
  for (std::uint64_t n = 1; n <= 60; ++n) {
    REQUIRE(divisor_k(n, 1) == 1);
    for (int k = 2; k <= 4; ++k) REQUIRE(divisor_k(n, k) == oracle::divisor_k(n, k));
  }
}

TEST_CASE("primes of a temporary sieve") {
  std::vector<std::uint32_t> seen;
  for (auto p : Sieve(13).primes()) seen.push_back(p);
  CHECK(seen == std::vector<std::uint32_t>{2, 3, 5, 7, 11, 13});
}

TEST_CASE("sieve tables agree with pointwise functions") {
  const Sieve s(2000);
  const auto m = s.mu_table();
  const auto p = s.phi_table();
  const auto w = s.omega_table();
  const auto d3 = s.divisor_k_table(3);
  for (std::uint64_t n = 1; n <= 2000; ++n) {
    REQUIRE(m[n] == mu(n));
    REQUIRE(p[n] == phi(n));
    REQUIRE(w[n] == omega(n));
    REQUIRE(d3[n] == divisor_k(n, 3));
  }
}

TEST_CASE("multiplicativity on coprime pairs") {
  Rng rng(11);
  for (int i = 0; i < 2000; ++i) {
    const auto a = random_integer(rng, 1, 500), b = random_integer(rng, 1, 500);
    if (gcd(a, b) != 1) continue;
    REQUIRE(phi(a * b) == phi(a) * phi(b));
    REQUIRE(mu(a * b) == mu(a) * mu(b));
    for (int k = 1; k <= 4; ++k) REQUIRE(divisor_k(a * b, k) == divisor_k(a, k) * divisor_k(b, k));
  }
}

TEST_CASE("rational arithmetic is exact") {
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const Rational a = random_rational(rng), c = random_rational(rng);
    REQUIRE((a + c) - c == a);
    if (!c.is_zero()) REQUIRE((a * c) / c == a);
  }
  CHECK(Rational(6, 4).str() == "3/2");
  CHECK(Rational(-6, 4).str() == "-3/2");
  CHECK(Rational(4, 2).str() == "2");
  CHECK(Rational::parse("-7/21") == Rational(-1, 3));
  CHECK_THROWS_AS(Rational::parse("1/0"), SchemaError);
  CHECK_THROWS_AS(Rational::parse("1.5"), SchemaError);
}

TEST_CASE("dirichlet products of builtins") {
  const std::uint64_t n_max = 100;
  const auto one = ArithmeticFunction::builtin(BuiltinName::one);
  const auto mu_f = ArithmeticFunction::builtin(BuiltinName::mu);
  const auto phi_f = ArithmeticFunction::builtin(BuiltinName::phi);
  const auto mu_one = dirichlet_convolve(mu_f, one, n_max);
  const auto phi_one = dirichlet_convolve(phi_f, one, n_max);
  const auto one_one = dirichlet_convolve(one, one, n_max);
  for (std::uint64_t n = 1; n <= n_max; ++n) {
    REQUIRE(mu_one.exact_value(n) == Rational(n == 1 ? 1 : 0));
    Rational s;
    for (auto d : oracle::divisors(n)) s += Rational(static_cast<std::int64_t>(oracle::phi(d)));
    REQUIRE(phi_one.exact_value(n) == s);
    REQUIRE(one_one.exact_value(n) == Rational(static_cast<std::int64_t>(oracle::divisors(n).size())));
  }
  CHECK_THROWS_AS((void)dirichlet_convolve(ArithmeticFunction::table({1, 2, 3}), one, 10), DomainError);
}

TEST_CASE("dirichlet convolution is commutative and associative") {
  Rng rng(5);
  for (int i = 0; i < 20; ++i) {
    const std::size_t n = random_integer(rng, 1, 200);
    const auto f = random_rational_table(rng, n), g = random_rational_table(rng, n), h = random_rational_table(rng, n);
    REQUIRE(dirichlet_convolve(f, g) == dirichlet_convolve(g, f));
    REQUIRE(dirichlet_convolve(dirichlet_convolve(f, g), h) == dirichlet_convolve(f, dirichlet_convolve(g, h)));
  }
}

TEST_CASE("registry JSON") {
  const auto f = ArithmeticFunction::from_json(nlohmann::json::parse(R"({"kind":"builtin","name":"d_K","K":3})"));
  CHECK(f.exact_value(4) == Rational(6));
  const auto t = ArithmeticFunction::from_json(nlohmann::json::parse(R"({"kind":"table","values":["1/2",3],"after":"zero"})"));
  CHECK(t.exact_value(1) == Rational(1, 2));
  CHECK(t.exact_value(9) == Rational(0));
  const auto e = ArithmeticFunction::from_json(nlohmann::json::parse(R"({"kind":"table","values":[1]})"));
  CHECK_THROWS_AS((void)e.exact_value(2), DomainError);
  const auto tds = ArithmeticFunction::from_json(
      nlohmann::json::parse(R"({"kind":"tds","range":2,"fprime":{"kind":"builtin","name":"one"}})"));
  CHECK(tds.exact_value(6) == Rational(2));
  CHECK(tds.exact_value(5) == Rational(1));
  CHECK(ArithmeticFunction::from_json(tds.to_json()).tabulate<Rational>(30) == tds.tabulate<Rational>(30));
  CHECK_FALSE(ArithmeticFunction::builtin(BuiltinName::von_mangoldt).exact());
  CHECK_THROWS((void)ArithmeticFunction::from_json(nlohmann::json::parse(R"({"kind":"builtin","name":"sigma"})")));
  CHECK_THROWS_AS((void)f.exact_value(0), DomainError);
}
