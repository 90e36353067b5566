#include "rlab/ramanujan_sum.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <string>
#include <utility>

#include "rlab/errors.hpp"
#include "rlab/numeric.hpp"

namespace rlab {

namespace {

std::uint64_t magnitude(std::int64_t n) {
  return n < 0 ? static_cast<std::uint64_t>(-(n + 1)) + 1 : static_cast<std::uint64_t>(n);
}

void require_modulus(std::uint64_t q) {
  if (q == 0) throw DomainError("Ramanujan sum modulus q must be >= 1");
}

}  // namespace

RamanujanSum::RamanujanSum(std::uint64_t q) : RamanujanSum(factor(q == 0 ? 0 : q)) {}

RamanujanSum::RamanujanSum(FactoredInteger q) : q_(std::move(q)), phi_(phi(q_)) {}

std::int64_t RamanujanSum::operator()(std::int64_t n) const {
  const std::uint64_t g = std::gcd(q_.n, magnitude(n));  // gcd(q, 0) = q
  // m = q / g, read off prime by prime from the factorization of q.
  int mu_m = 1;
  std::uint64_t phi_m = 1;
  for (const auto& [p, e] : q_.factors) {
    int v = 0;
    std::uint64_t gg = g;
    while (v < e && gg % p == 0) {
      gg /= p;
      ++v;
    }
    const int k = e - v;
    if (k == 0) continue;
    if (k >= 2) return 0;
    mu_m = -mu_m;
    phi_m *= p - 1;
  }
  return static_cast<std::int64_t>(phi_ / phi_m) * mu_m;
}

std::int64_t csum(std::uint64_t q, std::int64_t n) {
  require_modulus(q);
  return RamanujanSum(q)(n);
}

std::int64_t csum_divisor_form(std::uint64_t q, std::int64_t n) {
  require_modulus(q);
  const std::uint64_t m = magnitude(n);
  std::int64_t s = 0;
  for (std::uint64_t d : divisors(q)) {
    if (m % d != 0) continue;
    s += static_cast<std::int64_t>(d) * mu(q / d);
  }
  return s;
}

double csum_trig_form(std::uint64_t q, std::int64_t n) {
  require_modulus(q);
  if (q > 100'000) throw DomainError("trigonometric form limited to q <= 10^5");
  const std::uint64_t r = magnitude(n) % q;
  CompensatedSum s;
  for (std::uint64_t j = 1; j <= q; ++j) {
    if (std::gcd(j, q) != 1) continue;
    const std::uint64_t k = (j * r) % q;
    s.add(std::cos(2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(q)));
  }
  return s.value();
}

std::int64_t csum_prefix(std::uint64_t q, std::uint64_t a_max) {
  require_modulus(q);
  std::int64_t s = 0;
  for (std::uint64_t d : divisors(q)) {
    const int m = mu(q / d);
    if (m == 0) continue;
    s += m * static_cast<std::int64_t>(d) * static_cast<std::int64_t>(a_max / d);
  }
  return s;
}

IndicatorIdentity indicator_identity_check(std::uint64_t q, std::int64_t n) {
  require_modulus(q);
  if (n < 0) throw DomainError("indicator identity checked for n >= 0");
  IndicatorIdentity r;
  for (std::uint64_t d : divisors(q)) r.divisor_sum += csum(d, n);
  const bool divides = static_cast<std::uint64_t>(n) % q == 0;
  r.holds = r.divisor_sum == (divides ? static_cast<std::int64_t>(q) : 0);
  return r;
}

DelangeBound delange_bound_check(std::uint64_t d, std::uint64_t n) {
  if (d == 0 || n == 0) throw DomainError("Delange bound needs d, n >= 1");
  DelangeBound r;
  const FactoredInteger fd = factor(d);
  for (std::uint64_t l : divisors(fd)) {
    const std::int64_t c = csum(l, static_cast<std::int64_t>(n));
    r.lhs += c < 0 ? -c : c;
  }
  r.rhs = static_cast<std::int64_t>(n) << fd.factors.size();
  r.holds = r.lhs <= r.rhs;
  return r;
}

RamanujanSumTable::RamanujanSumTable(std::uint64_t q_max, std::uint64_t n_max)
    : q_max_(q_max), n_max_(n_max), values_(q_max * (n_max + 1)) {
  for (std::uint64_t q = 1; q <= q_max; ++q) {
    const RamanujanSum c(q);
    // One period, then copy: c_q(n) = c_q(n mod q).
    for (std::uint64_t n = 0; n <= n_max; ++n) {
      values_[(q - 1) * (n_max + 1) + n] =
          n < q ? c(static_cast<std::int64_t>(n)) : values_[(q - 1) * (n_max + 1) + n % q];
    }
  }
}

std::int64_t RamanujanSumTable::at(std::uint64_t q, std::uint64_t n) const {
  if (q == 0 || q > q_max_ || n > n_max_) {
    throw DomainError("RamanujanSumTable index (" + std::to_string(q) + ", " + std::to_string(n) +
                      ") out of range");
  }
  return values_[(q - 1) * (n_max_ + 1) + n];
}

LimitEstimate orthogonality_estimate(std::uint64_t q, std::uint64_t l, std::int64_t n,
                                     const std::vector<std::uint64_t>& grid, double tol) {
  if (q == 0 || l == 0 || n < 1) throw DomainError("orthogonality needs q, l, n >= 1");
  validate_grid(grid);
  const std::uint64_t period = lcm(q, l);
  if (grid.front() < period) {
    throw DomainError("grid points must be >= lcm(q, l) = " + std::to_string(period));
  }
  const RamanujanSum cq(q), cl(l);
  std::vector<std::int64_t> prefix(period + 1, 0);
  for (std::uint64_t a = 1; a <= period; ++a) {
    const auto ai = static_cast<std::int64_t>(a);
    prefix[a] = prefix[a - 1] + cq(n + ai) * cl(ai);
  }
  std::vector<double> estimates;
  std::vector<Rational> exact;
  for (std::uint64_t x : grid) {
    const std::int64_t total =
        static_cast<std::int64_t>(x / period) * prefix[period] + prefix[x % period];
    exact.emplace_back(total, static_cast<std::int64_t>(x));
    estimates.push_back(exact.back().to_double());
  }
  const double target = q == l ? static_cast<double>(cl(n)) : 0.0;
  LimitEstimate e = LimitEstimate::judge(grid, std::move(estimates), {tol, 0.0, target});
  e.exact_estimates = std::move(exact);
  return e;
}

std::vector<double> absolute_series_partials(std::int64_t n, const std::vector<std::uint64_t>& cuts) {
  validate_grid(cuts);
  const std::uint64_t x_max = cuts.back();
  const Sieve sieve(x_max);
  const auto mu_t = sieve.mu_table();
  const auto phi_t = sieve.phi_table();
  const std::uint64_t m = magnitude(n);
  std::vector<double> out;
  CompensatedSum s;
  std::size_t next = 0;
  for (std::uint64_t q = 1; q <= x_max; ++q) {
    const std::uint64_t r = q / std::gcd(q, m);
    if (mu_t[r] != 0) {
      s.add(static_cast<double>(phi_t[q] / phi_t[r]) / static_cast<double>(q));
    }
    if (q == cuts[next]) {
      out.push_back(s.value());
      ++next;
    }
  }
  return out;
}

}  // namespace rlab
