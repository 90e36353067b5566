#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rlab/function.hpp"
#include "rlab/limit.hpp"
#include "rlab/numeric.hpp"

namespace rlab {

/// C(N, a) = sum over n <= N of f(n) g(n + a) for 1 <= a <= amax, with its
/// Moebius transform in a, C'(N, d) = sum over t | d of C(N, t) mu(d/t).
template <Scalar T>
struct Correlation {
  std::string f_label;
  std::string g_label;
  std::uint64_t n = 0;
  std::uint64_t amax = 0;
  Table<T> f;          // 1..N
  Table<T> g;          // 1..N+amax
  Table<T> values;     // a = 1..amax
  Table<T> transform;  // d = 1..amax

  /// Direct double sum, ignoring the cache.
  [[nodiscard]] T recompute(std::uint64_t a) const;
};

/// f given to N, g to N + amax. Throws DomainError on a shortfall.
template <Scalar T>
Correlation<T> correlate(const Table<T>& f, const Table<T>& g, std::uint64_t n, std::uint64_t amax);

template <Scalar T>
Correlation<T> correlate(const ArithmeticFunction& f, const ArithmeticFunction& g, std::uint64_t n,
                         std::uint64_t amax);

/// The correlation of f with g_N(m) = sum over q | m, q <= N of g'(q).
template <Scalar T>
struct CutCorrelation {
  Correlation<T> base;      // g replaced by g_N
  Table<T> gprime;          // g' on 1..N
  bool fair = true;
  /// C_{f,g}(N, a) - C_{f,g_N}(N, a), when g was available to N + amax.
  std::optional<Table<T>> remainder;
};

/// `g` may be shorter than N + amax; the remainder is then omitted.
template <Scalar T>
CutCorrelation<T> cut_correlation(const Table<T>& f, const Table<T>& g, std::uint64_t n, std::uint64_t amax);

template <Scalar T>
CutCorrelation<T> cut_correlation(const ArithmeticFunction& f, const ArithmeticFunction& g, std::uint64_t n,
                                  std::uint64_t amax);

/// Cut correlation whose n-range depends on the shift:
/// C(a) = sum over n <= min(N, a) of f(n) g_N(n + a). Marked unfair.
template <Scalar T>
CutCorrelation<T> unfair_correlation(const Table<T>& f, const Table<T>& gprime, std::uint64_t n,
                                     std::uint64_t amax);

template <Scalar T>
struct ShiftCoefficients {
  std::uint64_t n = 0;
  std::uint64_t q_cut = 0;
  Table<T> entries;  // q = 1..Q; zero beyond
};

/// C^(N, Q, q) = sum over d <= Q, q | d of C'(N, d)/d. Needs Q <= amax.
template <Scalar T>
ShiftCoefficients<T> qrc(const CutCorrelation<T>& c, std::uint64_t q_cut);

/// sum over d | a, d > N of C'(N, d). Needs a <= amax.
template <Scalar T>
T divisor_tail(const CutCorrelation<T>& c, std::uint64_t a);

template <Scalar T>
struct Identity12 {
  std::uint64_t a = 0;
  T lhs{};   // C(N, a)
  T main{};  // sum over q <= N of C^(N, N, q) c_q(a)
  T tail{};  // sum over d | a, d > N of C'(N, d)
  bool equal = false;
};

template <Scalar T>
Identity12<T> identity12_check(const CutCorrelation<T>& c, std::uint64_t a);

/// (g^_N(l)/phi(l)) sum over n <= N of f(n) c_l(n), l = 1..lmax.
/// Throws PreconditionError for an unfair correlation.
template <Scalar T>
Table<T> cc_coefficients(const CutCorrelation<T>& c, std::uint64_t lmax);

/// (1/phi(l)) (1/x) sum over a <= x of C(N, a) c_l(a), judged against the
/// (CC) value with absolute tolerance tol. Needs amax >= the last grid point.
template <Scalar T>
LimitEstimate carmichael_vs_cc(const CutCorrelation<T>& c, std::uint64_t ell, const std::vector<std::uint64_t>& grid,
                               double tol);

/// L(q) = CC(q) - C^(N, N, q), and 0 for q > N. Fair correlations only.
template <Scalar T>
T exact_l(const CutCorrelation<T>& c, std::uint64_t q);

/// (1/phi(q)) (1/x) sum over m <= x of c_q(m) sum over d | m, d > N of C'(N, d),
/// judged against exact_l. Throws DomainError when amax is below the grid.
template <Scalar T>
LimitEstimate l_estimate(const CutCorrelation<T>& c, std::uint64_t q, const std::vector<std::uint64_t>& grid,
                         double tol = 1e-2);

template <Scalar T>
struct ReefReport {
  std::uint64_t a = 0;
  T lhs{};
  T reef_rhs{};          // sum over q <= N of CC(q) c_q(a)
  T deviation{};         // lhs - reef_rhs
  T l_term{};            // sum over q <= N of L(q) c_q(a)
  T tail{};
  T corrected_deviation{};  // lhs - sum over q <= N of (CC(q) - L(q)) c_q(a); equals tail
  bool tail_free = false;   // C' vanishes on (N, amax] and every L(q) is zero
  bool reef_exact = false;  // deviation == 0
};

template <Scalar T>
ReefReport<T> reef_check(const CutCorrelation<T>& c, std::uint64_t a);

template <Scalar T>
struct WeakReef {
  std::uint64_t a = 0;
  T lhs{};
  T tail{};
  T exact_residual{};             // with exact L; zero
  std::vector<std::uint64_t> lgrid;
  std::vector<double> residuals;  // with L estimated at each depth
};

template <Scalar T>
WeakReef<T> weak_reef_check(const CutCorrelation<T>& c, std::uint64_t a, const std::vector<std::uint64_t>& lgrid);

template <Scalar T>
struct ShortAverageTerm {
  std::uint64_t q = 0;
  T coefficient{};           // CC(q) - L(q)
  std::int64_t csum_sum = 0; // sum over a <= A of c_q(a)
  T contribution{};
};

template <Scalar T>
struct ShortAverage {
  std::uint64_t a_cut = 0;
  T lhs{};  // sum over a <= A of C(N, a)
  T rhs{};  // with exact L
  bool equal = false;
  std::vector<ShortAverageTerm<T>> terms;
  std::vector<std::uint64_t> lgrid;
  std::vector<double> residuals;  // lhs - rhs with L estimated at each depth
};

/// Needs A <= N (DomainError otherwise).
template <Scalar T>
ShortAverage<T> short_average(const CutCorrelation<T>& c, std::uint64_t a_cut,
                              const std::vector<std::uint64_t>& lgrid = {});

}  // namespace rlab
