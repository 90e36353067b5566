#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rlab/numeric.hpp"
#include "rlab/rational.hpp"
#include "rlab/transforms.hpp"

namespace rlab {

/// F(n) = sum over d | n, d <= Q of F'(d), with F' given on 1..Q.
struct TruncatedDivisorSum {
  std::uint64_t range = 0;
  Table<Rational> fprime;

  TruncatedDivisorSum() = default;
  /// range = fprime.size().
  explicit TruncatedDivisorSum(Table<Rational> fprime);

  [[nodiscard]] Rational evaluate(std::uint64_t n) const;
  /// Largest d with F'(d) != 0 (0 for the zero function).
  [[nodiscard]] std::uint64_t normalized_range() const;
  [[nodiscard]] Table<Rational> tabulate(std::uint64_t n_max) const;

  [[nodiscard]] nlohmann::json to_json() const;
  static TruncatedDivisorSum from_json(const nlohmann::json& j);

  /// Compares normalized forms, so trailing zeros in F' are ignored.
  friend bool operator==(const TruncatedDivisorSum& a, const TruncatedDivisorSum& b);
};

/// F(n) = sum over q <= Q of F^(q) c_q(n), with F^ given on 1..Q.
struct FiniteExpansion {
  std::uint64_t range = 0;
  Table<Rational> fhat;

  FiniteExpansion() = default;
  explicit FiniteExpansion(Table<Rational> fhat);

  [[nodiscard]] Rational evaluate(std::uint64_t n) const;
  [[nodiscard]] std::uint64_t normalized_range() const;
  /// evaluate(n) for n = 1..n_max, summed over a common denominator.
  [[nodiscard]] Table<Rational> tabulate(std::uint64_t n_max) const;

  [[nodiscard]] nlohmann::json to_json() const;
  static FiniteExpansion from_json(const nlohmann::json& j);

  friend bool operator==(const FiniteExpansion& a, const FiniteExpansion& b);
};

/// F^(q) = sum over d <= Q, q | d of F'(d)/d.
FiniteExpansion tds_to_fre(const TruncatedDivisorSum& t);

/// F'(d) = d sum over K <= Q/d of F^(dK) mu(K).
TruncatedDivisorSum fre_to_tds(const FiniteExpansion& e);

/// F_Q: F' restricted to 1..Q. Throws DomainError when fprime is shorter.
TruncatedDivisorSum truncate(const Table<Rational>& fprime, std::uint64_t q_cut);

struct HighCoefficientReport {
  std::uint64_t q_cut = 0;
  std::size_t checked = 0;
  std::vector<std::uint64_t> violations;
  [[nodiscard]] bool holds() const { return violations.empty(); }
};

/// Checks F^_{F_Q}(q) = F'(q)/q for every Q/2 < q <= Q.
HighCoefficientReport high_coefficient_check(const Table<Rational>& fprime, std::uint64_t q_cut);

enum class LowVerdict { consistent, inconsistent, no_hint };

std::string to_string(LowVerdict v);

struct LowCoefficientRow {
  std::uint64_t q = 0;
  double truncated = 0.0;      // F^_{F_Q}(q)
  double wintner = 0.0;        // Wintner partial at the full table length
  double tail_bound = 0.0;     // bound on |truncated - wintner|
  double relative_difference = 0.0;
  std::optional<double> relative_bound;
};

struct LowCoefficientReport {
  std::uint64_t q_cut = 0;
  std::uint64_t q0 = 0;
  std::uint64_t deep_cut = 0;
  std::vector<LowCoefficientRow> rows;
  LowVerdict verdict = LowVerdict::no_hint;
};

/// Compares the truncated coefficients for q <= Q0 with Wintner partials at
/// the table length (>= Q). `support_in_table` declares F'(d) = 0 beyond the
/// table; the bound is then the exact absolute tail over (Q, length] and no
/// hint is needed.
LowCoefficientReport low_coefficient_report(const Table<double>& fprime, std::uint64_t q_cut, std::uint64_t q0,
                                            std::optional<DecayHint> hint, bool support_in_table = false);

/// Rational tables as JSON arrays of "p/q" strings.
nlohmann::json rational_table_json(const Table<Rational>& t);
Table<Rational> rational_table_from_json(const nlohmann::json& j);

}  // namespace rlab
