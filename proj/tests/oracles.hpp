#pragma once

// Brute-force reference implementations. Nothing here calls into rlab
// algorithms; only the value types are shared.

#include <cmath>
#include <cstdint>
#include <vector>

#include "rlab/numeric.hpp"
#include "rlab/random.hpp"
#include "rlab/rational.hpp"

namespace oracle {

using rlab::Rational;
using rlab::Table;

inline std::uint64_t gcd(std::uint64_t a, std::uint64_t b) {
  while (b != 0) {
    const std::uint64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

inline std::vector<std::uint64_t> divisors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 1; d <= n; ++d) {
    if (n % d == 0) out.push_back(d);
  }
  return out;
}

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

inline int mu(std::uint64_t n) {
  int sign = 1;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    n /= p;
    if (n % p == 0) return 0;
    sign = -sign;
  }
  return n > 1 ? -sign : sign;
}

inline std::uint64_t phi(std::uint64_t n) {
  std::uint64_t c = 0;
  for (std::uint64_t j = 1; j <= n; ++j) c += gcd(j, n) == 1;
  return c;
}

inline int omega(std::uint64_t n) {
  int w = 0;
  for (std::uint64_t p = 2; p <= n; ++p) {
    if (n % p == 0 && is_prime(p)) ++w;
  }
  return w;
}

// Ordered K-tuples with product n, by recursion over the first factor.
inline std::uint64_t divisor_k(std::uint64_t n, int k) {
  if (k == 1) return 1;
  std::uint64_t total = 0;
  for (std::uint64_t d : divisors(n)) total += divisor_k(n / d, k - 1);
  return total;
}

// Rounded sum of cos(2 pi j n / q) over reduced residues j.
inline std::int64_t csum(std::uint64_t q, std::int64_t n) {
  long double s = 0;
  const long double two_pi = 6.283185307179586476925286766559L;
  const auto m = static_cast<std::uint64_t>(n < 0 ? -n : n) % q;
  for (std::uint64_t j = 1; j <= q; ++j) {
    if (gcd(j, q) == 1) s += std::cos(two_pi * static_cast<long double>((j * m) % q) / static_cast<long double>(q));
  }
  return std::llround(s);
}

inline Table<Rational> mobius(const Table<Rational>& f) {
  Table<Rational> out(f.size());
  for (std::uint64_t n = 1; n <= f.size(); ++n) {
    for (std::uint64_t d : divisors(n)) out[n] += f[d] * Rational(mu(n / d));
  }
  return out;
}

inline Table<Rational> divisor_sum(const Table<Rational>& fprime, std::uint64_t n_max) {
  Table<Rational> out(n_max);
  for (std::uint64_t n = 1; n <= n_max; ++n) {
    for (std::uint64_t d = 1; d <= std::min<std::uint64_t>(n, fprime.size()); ++d) {
      if (n % d == 0) out[n] += fprime[d];
    }
  }
  return out;
}

inline Rational wintner(const Table<Rational>& fprime, std::uint64_t q, std::uint64_t cut) {
  Rational s;
  for (std::uint64_t d = q; d <= cut; d += q) s += fprime[d] / Rational(static_cast<std::int64_t>(d));
  return s;
}

inline Rational expansion_value(const Table<Rational>& fhat, std::uint64_t n) {
  Rational s;
  for (std::uint64_t q = 1; q <= fhat.size(); ++q) s += fhat[q] * Rational(csum(q, static_cast<std::int64_t>(n)));
  return s;
}

// C(N, a) = sum_{n <= N} f(n) g(n + a), straight from the definition.
inline Rational correlation(const Table<Rational>& f, const Table<Rational>& g, std::uint64_t n, std::uint64_t a) {
  Rational s;
  for (std::uint64_t m = 1; m <= n; ++m) s += f[m] * g[m + a];
  return s;
}

}  // namespace oracle
