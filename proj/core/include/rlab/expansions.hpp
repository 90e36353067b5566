#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rlab/limit.hpp"
#include "rlab/numeric.hpp"
#include "rlab/rational.hpp"

namespace rlab {

/// q -> coefficient on 1..support. A finite sequence is zero past its
/// support; otherwise it is a truncation and reading past it is an error.
template <Scalar T>
struct CoefficientSeq {
  std::string label;
  Table<T> entries;
  bool finite = true;

  [[nodiscard]] std::uint64_t support() const { return entries.size(); }
  [[nodiscard]] T at(std::uint64_t q) const;
  /// Throws DomainError unless coefficients 1..q are available.
  void require(std::uint64_t q) const;
};

/// {"support":Q,"entries":{"1":"3/2",...}}; absent entries are zero.
nlohmann::json to_json(const CoefficientSeq<Rational>& s);
CoefficientSeq<Rational> coefficient_seq_from_json(const nlohmann::json& j);

enum class Purity { pure, n_dependent };
enum class Provenance { user, wintner_delange, zero_ram, zero_har, dk_lucht, fre };

std::string to_string(Purity p);
std::string to_string(Provenance p);

template <Scalar T>
struct RamanujanExpansion {
  CoefficientSeq<T> coefficients;
  Purity purity = Purity::pure;
  Provenance provenance = Provenance::user;
};

/// q -> alpha/q + beta/phi(q).
template <Scalar T>
struct ZeroCloudElement {
  T alpha{};
  T beta{};

  [[nodiscard]] RamanujanExpansion<T> truncated(std::uint64_t q_cut) const;
};

/// sum over q <= Q of F^(q) c_q(n).
template <Scalar T>
T evaluate_partial(const RamanujanExpansion<T>& e, std::uint64_t n, std::uint64_t q_cut);

/// Partial sums of sum_q c_q(n) (alpha/q + beta/phi(q)) at each cut.
std::vector<double> zero_cloud_partials(const ZeroCloudElement<double>& z, std::uint64_t n,
                                        const std::vector<std::uint64_t>& cuts);

template <Scalar T>
struct Reconstruction {
  std::uint64_t n = 0;
  std::uint64_t cut = 0;
  T value{};   // sum over l <= D of Win_l(D) c_l(n)
  T target{};  // F(n) = sum over d | n of F'(d)
  double error = 0.0;
};

/// Coefficients Win_l truncated at D, as an expansion.
template <Scalar T>
RamanujanExpansion<T> wintner_delange_expansion(const Table<T>& fprime, std::uint64_t cut);

template <Scalar T>
Reconstruction<T> wintner_delange_reconstruct(const Table<T>& fprime, std::uint64_t n, std::uint64_t cut);

/// Same for several n with one coefficient table.
template <Scalar T>
std::vector<Reconstruction<T>> wintner_delange_reconstruct(const Table<T>& fprime,
                                                           const std::vector<std::uint64_t>& ns,
                                                           std::uint64_t cut);

template <Scalar T>
struct LuchtCheck {
  T lhs{};  // sum over q <= X of F^(q) c_q(a)
  T rhs{};  // sum over d | a of d sum over K <= X/d of F^(dK) mu(K)
  bool equal = false;
};

template <Scalar T>
LuchtCheck<T> lucht_evaluate(const CoefficientSeq<T>& fhat, std::uint64_t a, std::uint64_t cut);

struct LuchtSweep {
  std::uint64_t a = 0;
  std::uint64_t cuts = 0;                 // X = 1..cut all compared
  std::optional<std::uint64_t> mismatch;  // first X where the sides differ
};

/// Both sides of lucht_evaluate at every cut X = 1..cut, each side updated
/// incrementally as X grows. Exact coefficients only.
LuchtSweep lucht_sweep(const CoefficientSeq<Rational>& fhat, std::uint64_t a, std::uint64_t cut);

struct Theorem4Result {
  Table<Rational> fprime;  // d sum over K of mu(K) F^(dK)
  Table<Rational> wintner; // Win_q recomputed from fprime
  bool roundtrip = false;
};

/// Finite support only; an infinite sequence throws PreconditionError.
Theorem4Result theorem4_inversion(const CoefficientSeq<Rational>& fhat);

/// (1/phi(l)) (1/x) sum_{h <= x} F(h) c_l(h) for F given by a pure finite
/// expansion, judged against the stored coefficient.
LimitEstimate carmichael_formula_check(const RamanujanExpansion<Rational>& e, std::uint64_t ell,
                                       const std::vector<std::uint64_t>& grid, double tol = 1e-2);

template <Scalar T>
struct StandardFre {
  std::uint64_t n = 0;
  Table<T> coefficients;  // F^(l, n) = sum over d <= n, l | d of F'(d)/d
  T reconstruction{};
  T value{};
  bool exact = false;
};

/// F given on 1..n at least.
template <Scalar T>
StandardFre<T> standard_fre(const Table<T>& f, std::uint64_t n);

struct StandardFreSweep {
  std::uint64_t n_max = 0;
  std::size_t checked = 0;
  std::vector<std::uint64_t> mismatches;
};

/// standard_fre for every n <= n_max, updating the coefficients as n grows.
StandardFreSweep standard_fre_sweep(const Table<Rational>& f, std::uint64_t n_max);

/// sum over lambda >= l of C(K+lambda-1, K-1) p^(l-lambda), in closed form.
Rational inner_series_closed_form(int k, std::uint64_t p, int ell);

/// The same series summed term by term to `terms` terms past lambda = l.
double inner_series_partial(int k, std::uint64_t p, int ell, int terms);

/// Coefficient q -> d^_{K+1}(q): a rational factor times log^K(q).
struct DkCoefficient {
  std::uint64_t q = 0;
  int k = 0;
  Rational rational;  // ((-1)^K / K!) (1/q) prod over p^l || q of ((1-1/p)^K S)^(-1)
  double value = 0.0; // rational * log(q)^K
};

DkCoefficient dk_coefficient(std::uint64_t q, int k);

/// Coefficients of d_K (K >= 2) to Q, from dk_coefficient(q, K - 1).
RamanujanExpansion<double> dk_expansion(int divisor_k, std::uint64_t q_cut);

}  // namespace rlab
