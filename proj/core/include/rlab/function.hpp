#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "rlab/numeric.hpp"
#include "rlab/rational.hpp"

namespace rlab {

/// Closed registry of builtin arithmetic functions.
enum class BuiltinName {
  one,
  id,
  mu,
  phi,
  liouville,
  von_mangoldt,  // log p on prime powers; float-valued only
  divisor_k,     // d_K, K >= 1
  square_indicator,
};

/// What a finite table returns past its last entry.
enum class TableTail { zero, error };

/// A total map N -> values: a builtin closed form, a finite table, or a
/// truncated divisor sum F(n) = sum over d | n, d <= Q of F'(d).
///
/// Immutable; copies share nested t.d.s. sources. The value domain is exact
/// (rational) unless the function is von Mangoldt or a table of doubles.
class ArithmeticFunction {
 public:
  static ArithmeticFunction builtin(BuiltinName name, int k = 0);
  static ArithmeticFunction table(std::vector<Rational> values, TableTail tail = TableTail::error);
  static ArithmeticFunction real_table(std::vector<double> values, TableTail tail = TableTail::error);
  template <Scalar T>
  static ArithmeticFunction from_table(const Table<T>& t, TableTail tail = TableTail::error);
  /// F(n) = sum over d | n with d <= range of fprime(d).
  static ArithmeticFunction tds(std::uint64_t range, ArithmeticFunction fprime);

  /// Registry schema:
  ///   {"kind":"builtin","name":"mu"}  ({"name":"d_K","K":3} for d_K)
  ///   {"kind":"table","values":["1/2",3,...],"after":"zero"|"error"}
  ///   {"kind":"tds","range":Q,"fprime":{...}}
  /// String and integer entries are exact, JSON floats make the table real.
  static ArithmeticFunction from_json(const nlohmann::json& j);
  [[nodiscard]] nlohmann::json to_json() const;

  [[nodiscard]] bool exact() const;
  /// Largest n the function can be evaluated at, if finite.
  [[nodiscard]] std::optional<std::uint64_t> domain_bound() const;
  /// Declared essential-boundedness flag (f(n) << n^eps); never verified.
  [[nodiscard]] bool essentially_bounded() const;
  [[nodiscard]] std::string describe() const;

  [[nodiscard]] Rational exact_value(std::uint64_t n) const;
  [[nodiscard]] double real_value(std::uint64_t n) const;

  template <Scalar T>
  [[nodiscard]] T value(std::uint64_t n) const {
    if constexpr (std::same_as<T, double>) {
      return real_value(n);
    } else {
      return exact_value(n);
    }
  }

  /// Values on 1..n_max. Sieve-based for builtins, multiples loop for t.d.s.
  template <Scalar T>
  [[nodiscard]] Table<T> tabulate(std::uint64_t n_max) const;

 private:
  struct Builtin {
    BuiltinName name;
    int k;
  };
  struct ExactTable {
    std::vector<Rational> values;
    TableTail tail;
  };
  struct RealTable {
    std::vector<double> values;
    TableTail tail;
  };
  struct Tds {
    std::uint64_t range;
    std::shared_ptr<const ArithmeticFunction> fprime;
  };
  using Kind = std::variant<Builtin, ExactTable, RealTable, Tds>;

  explicit ArithmeticFunction(Kind kind) : kind_(std::move(kind)) {}

  void check_domain(std::uint64_t n) const;

  Kind kind_;
};

template <Scalar T>
ArithmeticFunction ArithmeticFunction::from_table(const Table<T>& t, TableTail tail) {
  std::vector<T> v(t.values().begin(), t.values().end());
  if constexpr (std::same_as<T, double>) {
    return real_table(std::move(v), tail);
  } else {
    return table(std::move(v), tail);
  }
}

/// Dirichlet product on 1..bound as a table function (tail = error). Exact
/// when both inputs are exact.
ArithmeticFunction dirichlet_convolve(const ArithmeticFunction& f, const ArithmeticFunction& g,
                                      std::uint64_t bound);

std::string to_string(BuiltinName name);

}  // namespace rlab
