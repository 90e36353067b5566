#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rlab/function.hpp"
#include "rlab/limit.hpp"
#include "rlab/numeric.hpp"
#include "rlab/random.hpp"

namespace rlab {

/// F' = F * mu on 1..bound, with the source it was computed from.
template <Scalar T>
struct EratosthenesTransform {
  std::string source;
  std::uint64_t bound = 0;
  Table<T> values;

  /// F' * 1 on 1..bound; reproduces F exactly when T is exact.
  [[nodiscard]] Table<T> reconvolve() const;
};

/// Throws DomainError naming the missing index when F is not evaluable to D.
template <Scalar T>
EratosthenesTransform<T> eratosthenes(const ArithmeticFunction& f, std::uint64_t bound);

/// |F'(d)| <= c d^(-s) for all d.
struct DecayHint {
  double c = 1.0;
  double s = 0.0;
};

/// Majorant of |sum over d > cut, q | d of F'(d)/d| under the hint:
/// c q^(-s-1) M^(-s) / s with M = floor(cut/q). Infinite when s <= 0.
double wintner_tail_bound(std::uint64_t q, std::uint64_t cut, const DecayHint& hint);

template <Scalar T>
struct WintnerPartial {
  T partial{};                        // sum over d <= cut, q | d of F'(d)/d
  std::optional<double> tail_bound;   // present only with a decay hint
};

template <Scalar T>
WintnerPartial<T> wintner_coefficient(const Table<T>& fprime, std::uint64_t q, std::uint64_t cut,
                                      std::optional<DecayHint> hint = std::nullopt);

/// Wintner partials at `cut` for every q <= cut (the finite Ramanujan
/// coefficients of the cut-truncated function).
template <Scalar T>
Table<T> wintner_table(const Table<T>& fprime, std::uint64_t cut);

/// F'(1) in {0, 1} and F'(p m) = F'(p) F'(m) for every p m <= bound with p
/// the smallest prime factor; equivalent to complete multiplicativity on
/// 1..bound.
template <Scalar T>
bool is_completely_multiplicative(const Table<T>& f, std::uint64_t bound);

template <Scalar T>
struct CmShortcut {
  T shortcut{};      // F'(q)/q * (q = 1 partial at cut)
  T matched{};       // F'(q)/q * (q = 1 partial at floor(cut/q)); equals wintner_coefficient
  T cut_mismatch{};  // shortcut - matched
};

/// Throws PreconditionError when F' fails the multiplicativity check.
template <Scalar T>
CmShortcut<T> wintner_cm_shortcut(const Table<T>& fprime, std::uint64_t q, std::uint64_t cut);

/// (1/phi(q)) (1/x) sum_{n <= x} F(n) c_q(n) on the grid. Exact accumulation
/// for rational tables (kept in exact_estimates), compensated for doubles.
template <Scalar T>
LimitEstimate carmichael_estimate(const Table<T>& f, std::uint64_t q, const std::vector<std::uint64_t>& grid,
                                  const LimitPolicy& policy = {});

/// Tabulates F to the last grid point, exactly when F is exact.
LimitEstimate carmichael_estimate(const ArithmeticFunction& f, std::uint64_t q,
                                  const std::vector<std::uint64_t>& grid, const LimitPolicy& policy = {});

enum class Condition {
  wintner,        // WA: sum |F'(d)|/d
  delange,        // DH: sum 2^omega(d) |F'(d)|/d
  dual_delange,   // sum 2^omega(q) |F^(q)|
  slow_decay,     // SD: (1/x) sum_{d <= x} |F'(d)| -> 0
  delange_mean,   // Delange (i): (1/x) sum_{n <= x} |F(n)| bounded
};

enum class ConditionVerdict { satisfied_at_cut, violated_at_cut, undetermined };

std::string to_string(Condition c);
std::string to_string(ConditionVerdict v);
Condition parse_condition(const std::string& s);  // WA|DH|DD7|SD|DI

/// At-cut report for one of the hypotheses. `trend` holds the partial sums
/// (absolute-series conditions) or the averages (SD, DI) at the decade
/// points 10, 100, ... <= cut; `partial` is the value at the cut itself.
struct ConditionReport {
  Condition condition = Condition::wintner;
  std::uint64_t cut = 0;
  double partial = 0.0;
  std::vector<std::uint64_t> trend_points;
  std::vector<double> trend;
  ConditionVerdict verdict = ConditionVerdict::undetermined;
};

/// `seq` is F' for WA/DH/SD, the coefficients F^ for DD7 and F for DI.
/// Verdict thresholds on the last two decade steps:
///   absolute series: step ratio <= 0.5 satisfied, >= 0.7 violated;
///   SD: averages decreasing and last <= half the first satisfied, last >= 0.9 previous violated;
///   DI: last <= 1.02 max(previous) satisfied, last >= 1.1 previous violated.
template <Scalar T>
ConditionReport condition_check(Condition kind, const Table<T>& seq, std::uint64_t cut);

struct CwPoint {
  std::uint64_t x = 0;
  double lhs = 0.0;                // (1/phi(q)) (1/x) sum_{n <= x} F(n) c_q(n)
  double rhs = 0.0;                // sum over d <= x, q | d of F'(d)/d
  std::optional<double> ratio;     // x |lhs - rhs| / sum_{d <= x} |F'(d)|; empty when skipped
};

/// Approximate Carmichael-Wintner check. The constant `bound` = q follows
/// from |c_q| <= phi(q) and the q-periodicity of K -> c_q(dK): every
/// divisor contributes an error below q.
struct CwReport {
  std::uint64_t q = 0;
  std::vector<CwPoint> points;
  double max_ratio = 0.0;
  double bound = 0.0;
  bool bounded = false;
};

template <Scalar T>
CwReport cw_approximate_check(const Table<T>& f, std::uint64_t q, const std::vector<std::uint64_t>& grid);

/// |sum_{n<=x} F(n) c_q(n)| <= phi(q) sum_{n<=x} F(n) for q <= q_max, x in the
/// grid, checked exactly. Throws PreconditionError naming the first n with
/// F(n) < 0.
struct Lemma2Report {
  std::size_t checks = 0;
  std::vector<std::string> violations;
  [[nodiscard]] bool holds() const { return violations.empty(); }
};

Lemma2Report lemma2_check(const Table<Rational>& f, std::uint64_t q_max, const std::vector<std::uint64_t>& grid);

enum class Conjecture1Family { completely_multiplicative, nonnegative, free };

std::string to_string(Conjecture1Family f);
Conjecture1Family parse_conjecture1_family(const std::string& s);

/// F' on 1..D whose truncated Wintner partials vanish for Q < q <= D while
/// the q = 1 partial does not and F' is nonzero somewhere in (Q, D].
struct Conjecture1Candidate {
  Table<Rational> fprime;
  Rational win1;
  std::vector<Rational> high_partials;  // q = Q+1 .. D
};

struct Conjecture1Report {
  Conjecture1Family family = Conjecture1Family::free;
  std::uint64_t q_cut = 0;
  std::uint64_t d_cut = 0;
  // Free family: the linear system over the unknowns F'(Q+1..D).
  std::size_t unknowns = 0;
  std::size_t equations = 0;
  std::size_t rank = 0;
  std::vector<std::vector<Rational>> nullspace;
  // Constrained families: number of random instances verified.
  std::size_t trials = 0;
  std::vector<Conjecture1Candidate> counterexamples;
  /// A counterexample inside a family where one is impossible.
  bool fault = false;
};

Conjecture1Report conjecture1_search(Conjecture1Family family, std::uint64_t q_cut, std::uint64_t d_cut,
                                     std::size_t trials, std::uint64_t seed);

/// Checks a candidate directly from its definition.
bool verify_conjecture1_candidate(const Table<Rational>& fprime, std::uint64_t q_cut,
                                  Conjecture1Candidate* out = nullptr);

/// Per-q comparison of Carmichael estimates (at the last grid point) with
/// Wintner partials at the same cut, under a hypothesis report.
struct ConcordanceReport {
  ConditionReport hypothesis;
  std::vector<std::uint64_t> moduli;
  std::vector<LimitEstimate> carmichael;
  std::vector<double> wintner;
  std::vector<double> difference;
  double tol = 0.0;
  bool consistent = false;
};

/// Carmichael against Wintner under Slow Decay, for F = F' * 1.
ConcordanceReport concordance_slow_decay(const Table<double>& fprime, std::uint64_t q_max,
                                         const std::vector<std::uint64_t>& grid, double tol);

/// Carmichael against Wintner under Delange's mean-boundedness (i).
ConcordanceReport concordance_delange_mean(const Table<double>& f, std::uint64_t q_max,
                                           const std::vector<std::uint64_t>& grid, double tol);

}  // namespace rlab
