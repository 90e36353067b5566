#pragma once

#include <algorithm>
#include <cstdint>

#include "rlab/arith.hpp"
#include "rlab/numeric.hpp"

namespace rlab {

/// (f * g)(n) = sum over d | n of f(d) g(n/d), for n up to min(|f|, |g|).
template <Scalar T>
Table<T> dirichlet_convolve(const Table<T>& f, const Table<T>& g) {
  const std::uint64_t n_max = std::min(f.size(), g.size());
  Table<T> out(n_max);
  for (std::uint64_t d = 1; d <= n_max; ++d) {
    if (is_zero(f[d])) continue;
    for (std::uint64_t k = 1; d * k <= n_max; ++k) {
      if (is_zero(g[k])) continue;
      out[d * k] += f[d] * g[k];
    }
  }
  return out;
}

/// F * mu: the Eratosthenes transform of a tabulated F.
template <Scalar T>
Table<T> mobius_transform(const Table<T>& f) {
  const std::uint64_t n_max = f.size();
  Table<T> out(n_max);
  if (n_max == 0) return out;
  const auto mu_t = Sieve(n_max).mu_table();
  for (std::uint64_t t = 1; t <= n_max; ++t) {
    if (is_zero(f[t])) continue;
    for (std::uint64_t k = 1; t * k <= n_max; ++k) {
      if (mu_t[k] == 0) continue;
      if (mu_t[k] > 0) {
        out[t * k] += f[t];
      } else {
        out[t * k] -= f[t];
      }
    }
  }
  return out;
}

/// F' * 1: summatory divisor sums, the inverse of mobius_transform.
template <Scalar T>
Table<T> divisor_sum_transform(const Table<T>& fprime) {
  const std::uint64_t n_max = fprime.size();
  Table<T> out(n_max);
  for (std::uint64_t d = 1; d <= n_max; ++d) {
    if (is_zero(fprime[d])) continue;
    for (std::uint64_t m = d; m <= n_max; m += d) out[m] += fprime[d];
  }
  return out;
}

}  // namespace rlab
