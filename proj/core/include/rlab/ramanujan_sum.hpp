#pragma once

#include <cstdint>
#include <vector>

#include "rlab/arith.hpp"
#include "rlab/limit.hpp"

namespace rlab {

/// c_q(n) for a fixed modulus q, via phi(q) mu(q/(q,n)) / phi(q/(q,n)).
/// Factors q once; each evaluation costs one gcd.
class RamanujanSum {
 public:
  explicit RamanujanSum(std::uint64_t q);
  explicit RamanujanSum(FactoredInteger q);

  /// Any integer n; c_q(-n) = c_q(n) and c_q(0) = phi(q).
  std::int64_t operator()(std::int64_t n) const;

  [[nodiscard]] std::uint64_t modulus() const { return q_.n; }
  [[nodiscard]] std::uint64_t totient() const { return phi_; }

 private:
  FactoredInteger q_;
  std::uint64_t phi_;
};

/// Canonical evaluation path (closed form). q = 0 throws DomainError.
std::int64_t csum(std::uint64_t q, std::int64_t n);

/// sum over d | q, d | n of d mu(q/d). Exact oracle.
std::int64_t csum_divisor_form(std::uint64_t q, std::int64_t n);

/// sum over j <= q, (j,q) = 1 of cos(2 pi j n / q), compensated. q <= 10^5.
double csum_trig_form(std::uint64_t q, std::int64_t n);

/// sum_{a=1}^{A} c_q(a), exactly, as sum over d | q of d mu(q/d) floor(A/d).
std::int64_t csum_prefix(std::uint64_t q, std::uint64_t a_max);

struct IndicatorIdentity {
  std::int64_t divisor_sum = 0;  // sum over d | q of c_d(n)
  bool holds = false;            // divisor_sum == q * [q | n]
};

/// 1_{q|n} = (1/q) sum over d | q of c_d(n); q >= 1, n >= 0.
IndicatorIdentity indicator_identity_check(std::uint64_t q, std::int64_t n);

struct DelangeBound {
  std::int64_t lhs = 0;  // sum over l | d of |c_l(n)|
  std::int64_t rhs = 0;  // n 2^omega(d)
  bool holds = false;
};

DelangeBound delange_bound_check(std::uint64_t d, std::uint64_t n);

/// Dense c_q(n) for 1 <= q <= q_max, 0 <= n <= n_max.
class RamanujanSumTable {
 public:
  RamanujanSumTable(std::uint64_t q_max, std::uint64_t n_max);

  [[nodiscard]] std::uint64_t q_max() const { return q_max_; }
  [[nodiscard]] std::uint64_t n_max() const { return n_max_; }
  [[nodiscard]] std::int64_t at(std::uint64_t q, std::uint64_t n) const;

 private:
  std::uint64_t q_max_;
  std::uint64_t n_max_;
  std::vector<std::int64_t> values_;
};

/// Estimates lim (1/x) sum_{a <= x} c_q(n + a) c_l(a) on the grid, with the
/// exact target 1_{q = l} c_l(n). The summand has period lcm(q, l), so each
/// average is summed exactly as full periods plus a remainder.
LimitEstimate orthogonality_estimate(std::uint64_t q, std::uint64_t l, std::int64_t n,
                                     const std::vector<std::uint64_t>& grid, double tol = 1e-2);

/// Partial sums sum_{q <= X} |c_q(n)| / q at each cut X (increasing).
std::vector<double> absolute_series_partials(std::int64_t n, const std::vector<std::uint64_t>& cuts);

}  // namespace rlab
