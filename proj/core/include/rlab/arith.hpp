#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace rlab {

/// n = product of p^e over `factors`, primes strictly increasing, e >= 1.
struct FactoredInteger {
  std::uint64_t n = 1;
  std::vector<std::pair<std::uint64_t, int>> factors;

  friend bool operator==(const FactoredInteger&, const FactoredInteger&) = default;
};

/// Largest argument accepted by factor() and the functions built on it.
inline constexpr std::uint64_t kFactorBound = std::uint64_t{1} << 62;

/// Prime factorization. Trial division over a prime sieve to 10^6, then
/// Miller-Rabin and Pollard rho for the cofactor. Throws DomainError for
/// n = 0 or n > kFactorBound.
FactoredInteger factor(std::uint64_t n);

/// Signed overload; negative n and 0 throw DomainError.
FactoredInteger factor_signed(std::int64_t n);

bool is_prime(std::uint64_t n);

int mu(std::uint64_t n);
std::uint64_t phi(std::uint64_t n);
int omega(std::uint64_t n);
int big_omega(std::uint64_t n);
int liouville(std::uint64_t n);
/// log p when n = p^k, else 0.
double von_mangoldt(std::uint64_t n);
/// Sorted positive divisors.
std::vector<std::uint64_t> divisors(std::uint64_t n);
std::vector<std::uint64_t> divisors(const FactoredInteger& f);
/// Number of ordered K-tuples of positive integers with product n.
std::uint64_t divisor_k(std::uint64_t n, int k);

std::uint64_t gcd(std::uint64_t a, std::uint64_t b);
/// Throws DomainError on 64-bit overflow.
std::uint64_t lcm(std::uint64_t a, std::uint64_t b);
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

int mu(const FactoredInteger& f);
std::uint64_t phi(const FactoredInteger& f);

/// Smallest-prime-factor sieve on 1..limit for bulk tabulation of
/// multiplicative functions. Immutable after construction.
class Sieve {
 public:
  explicit Sieve(std::uint64_t limit);

  [[nodiscard]] std::uint64_t limit() const { return limit_; }
  [[nodiscard]] std::uint32_t smallest_prime_factor(std::uint64_t n) const { return spf_[n]; }
  [[nodiscard]] const std::vector<std::uint32_t>& primes() const& { return primes_; }
  [[nodiscard]] std::vector<std::uint32_t> primes() && { return std::move(primes_); }
  [[nodiscard]] FactoredInteger factor(std::uint64_t n) const;

  /// Tables indexed 0..limit (entry 0 is unused and zero).
  [[nodiscard]] std::vector<std::int8_t> mu_table() const;
  [[nodiscard]] std::vector<std::uint64_t> phi_table() const;
  [[nodiscard]] std::vector<std::uint8_t> omega_table() const;
  [[nodiscard]] std::vector<std::int8_t> liouville_table() const;
  [[nodiscard]] std::vector<std::uint64_t> divisor_k_table(int k) const;

 private:
  std::uint64_t limit_;
  std::vector<std::uint32_t> spf_;
  std::vector<std::uint32_t> primes_;
};

}  // namespace rlab
