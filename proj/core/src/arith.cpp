#include "rlab/arith.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "rlab/errors.hpp"

namespace rlab {

namespace {

constexpr std::uint64_t kSieveLimit = 1'000'000;

const Sieve& base_sieve() {
  static const Sieve sieve(kSieveLimit);
  return sieve;
}

__extension__ typedef unsigned __int128 u128;

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e > 0) {
    if (e & 1U) r = mul_mod(r, b, m);
    b = mul_mod(b, b, m);
    e >>= 1U;
  }
  return r;
}

// Deterministic for all 64-bit n with these bases.
bool miller_rabin(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1U) == 0) {
    d >>= 1U;
    ++s;
  }
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

// Brent's variant; n odd composite without small factors.
std::uint64_t pollard_rho(std::uint64_t n) {
  for (std::uint64_t c = 1;; ++c) {
    auto f = [&](std::uint64_t x) { return (mul_mod(x, x, n) + c) % n; };
    std::uint64_t x = 2, y = 2, d = 1;
    while (d == 1) {
      x = f(x);
      y = f(f(y));
      d = std::gcd(x > y ? x - y : y - x, n);
    }
    if (d != n) return d;
  }
}

void factor_large(std::uint64_t n, std::vector<std::uint64_t>& out) {
  if (n == 1) return;
  if (miller_rabin(n)) {
    out.push_back(n);
    return;
  }
  const std::uint64_t d = pollard_rho(n);
  factor_large(d, out);
  factor_large(n / d, out);
}

}  // namespace

Sieve::Sieve(std::uint64_t limit) : limit_(limit), spf_(limit + 1, 0) {
  if (limit > std::numeric_limits<std::uint32_t>::max()) {
    throw ResourceError("sieve limit " + std::to_string(limit) + " too large");
  }
  if (limit >= 1) spf_[1] = 1;
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (spf_[i] == 0) {
      spf_[i] = static_cast<std::uint32_t>(i);
      primes_.push_back(static_cast<std::uint32_t>(i));
    }
    for (std::uint32_t p : primes_) {
      const std::uint64_t m = static_cast<std::uint64_t>(p) * i;
      if (p > spf_[i] || m > limit) break;
      spf_[m] = p;
    }
  }
}

FactoredInteger Sieve::factor(std::uint64_t n) const {
  if (n == 0 || n > limit_) throw DomainError("Sieve::factor: " + std::to_string(n) + " out of range");
  FactoredInteger f{n, {}};
  while (n > 1) {
    const std::uint64_t p = spf_[n];
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    f.factors.emplace_back(p, e);
  }
  return f;
}

std::vector<std::int8_t> Sieve::mu_table() const {
  std::vector<std::int8_t> t(limit_ + 1, 0);
  if (limit_ >= 1) t[1] = 1;
  for (std::uint64_t n = 2; n <= limit_; ++n) {
    const std::uint64_t p = spf_[n];
    const std::uint64_t m = n / p;
    t[n] = (m % p == 0) ? 0 : static_cast<std::int8_t>(-t[m]);
  }
  return t;
}

std::vector<std::uint64_t> Sieve::phi_table() const {
  std::vector<std::uint64_t> t(limit_ + 1, 0);
  if (limit_ >= 1) t[1] = 1;
  for (std::uint64_t n = 2; n <= limit_; ++n) {
    const std::uint64_t p = spf_[n];
    const std::uint64_t m = n / p;
    t[n] = (m % p == 0) ? t[m] * p : t[m] * (p - 1);
  }
  return t;
}

std::vector<std::uint8_t> Sieve::omega_table() const {
  std::vector<std::uint8_t> t(limit_ + 1, 0);
  for (std::uint64_t n = 2; n <= limit_; ++n) {
    const std::uint64_t p = spf_[n];
    const std::uint64_t m = n / p;
    t[n] = static_cast<std::uint8_t>(t[m] + (m % p == 0 ? 0 : 1));
  }
  return t;
}

std::vector<std::int8_t> Sieve::liouville_table() const {
  std::vector<std::int8_t> t(limit_ + 1, 0);
  if (limit_ >= 1) t[1] = 1;
  for (std::uint64_t n = 2; n <= limit_; ++n) {
    t[n] = static_cast<std::int8_t>(-t[n / spf_[n]]);
  }
  return t;
}

std::vector<std::uint64_t> Sieve::divisor_k_table(int k) const {
  if (k < 1) throw DomainError("divisor_k: K must be >= 1");
  std::vector<std::uint64_t> t(limit_ + 1, 0);
  if (limit_ >= 1) t[1] = 1;
  for (std::uint64_t n = 2; n <= limit_; ++n) {
    // Split n = p^e * rest with p the smallest prime factor.
    const std::uint64_t p = spf_[n];
    std::uint64_t rest = n;
    std::uint64_t e = 0;
    while (rest % p == 0) {
      rest /= p;
      ++e;
    }
    t[n] = t[rest] * binomial(e + static_cast<std::uint64_t>(k) - 1, static_cast<std::uint64_t>(k) - 1);
  }
  return t;
}

FactoredInteger factor(std::uint64_t n) {
  if (n == 0) throw DomainError("factor: n must be positive");
  if (n > kFactorBound) throw DomainError("factor: n = " + std::to_string(n) + " above supported bound");
  const Sieve& sieve = base_sieve();
  if (n <= sieve.limit()) return sieve.factor(n);

  FactoredInteger f{n, {}};
  std::uint64_t m = n;
  for (std::uint64_t p : sieve.primes()) {
    if (p * p > m) break;
    if (m % p != 0) continue;
    int e = 0;
    while (m % p == 0) {
      m /= p;
      ++e;
    }
    f.factors.emplace_back(p, e);
  }
  if (m > 1) {
    // Every prime factor of m exceeds 10^6; m <= 10^12 means m is prime.
    std::vector<std::uint64_t> primes;
    factor_large(m, primes);
    std::sort(primes.begin(), primes.end());
    for (std::size_t i = 0; i < primes.size();) {
      std::size_t j = i;
      while (j < primes.size() && primes[j] == primes[i]) ++j;
      f.factors.emplace_back(primes[i], static_cast<int>(j - i));
      i = j;
    }
  }
  return f;
}

FactoredInteger factor_signed(std::int64_t n) {
  if (n <= 0) throw DomainError("factor: n must be positive, got " + std::to_string(n));
  return factor(static_cast<std::uint64_t>(n));
}

bool is_prime(std::uint64_t n) {
  if (n <= kSieveLimit) return n >= 2 && base_sieve().smallest_prime_factor(n) == n;
  return miller_rabin(n);
}

int mu(const FactoredInteger& f) {
  int s = 1;
  for (const auto& [p, e] : f.factors) {
    if (e > 1) return 0;
    s = -s;
  }
  return s;
}

std::uint64_t phi(const FactoredInteger& f) {
  std::uint64_t r = 1;
  for (const auto& [p, e] : f.factors) {
    r *= p - 1;
    for (int i = 1; i < e; ++i) r *= p;
  }
  return r;
}

int mu(std::uint64_t n) { return mu(factor(n)); }
std::uint64_t phi(std::uint64_t n) { return phi(factor(n)); }
int omega(std::uint64_t n) { return static_cast<int>(factor(n).factors.size()); }

int big_omega(std::uint64_t n) {
  int s = 0;
  for (const auto& [p, e] : factor(n).factors) s += e;
  return s;
}

int liouville(std::uint64_t n) { return (big_omega(n) % 2 == 0) ? 1 : -1; }

double von_mangoldt(std::uint64_t n) {
  const FactoredInteger f = factor(n);
  if (f.factors.size() != 1) return 0.0;
  return std::log(static_cast<double>(f.factors.front().first));
}

std::vector<std::uint64_t> divisors(const FactoredInteger& f) {
  std::vector<std::uint64_t> out{1};
  for (const auto& [p, e] : f.factors) {
    const std::size_t base = out.size();
    std::uint64_t pk = 1;
    for (int k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::uint64_t> divisors(std::uint64_t n) { return divisors(factor(n)); }

std::uint64_t divisor_k(std::uint64_t n, int k) {
  if (k < 1) throw DomainError("divisor_k: K must be >= 1");
  std::uint64_t r = 1;
  for (const auto& [p, e] : factor(n).factors) {
    r *= binomial(static_cast<std::uint64_t>(e) + static_cast<std::uint64_t>(k) - 1,
                  static_cast<std::uint64_t>(k) - 1);
  }
  return r;
}

std::uint64_t gcd(std::uint64_t a, std::uint64_t b) { return std::gcd(a, b); }

std::uint64_t lcm(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  const std::uint64_t g = std::gcd(a, b);
  const u128 r = static_cast<u128>(a / g) * b;
  if (r > std::numeric_limits<std::uint64_t>::max()) throw DomainError("lcm overflow");
  return static_cast<std::uint64_t>(r);
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  u128 r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > std::numeric_limits<std::uint64_t>::max()) throw DomainError("binomial overflow");
  }
  return static_cast<std::uint64_t>(r);
}

}  // namespace rlab
