#pragma once

#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rlab/errors.hpp"
#include "rlab/rational.hpp"

namespace rlab {

/// The two value types every algorithm is instantiated for: exact
/// rationals for identity checks, doubles for limit estimates.
template <class T>
concept Scalar = std::same_as<T, Rational> || std::same_as<T, double>;

inline double to_double(const Rational& x) { return x.to_double(); }
inline double to_double(double x) { return x; }

inline double abs_value(double x) { return std::fabs(x); }
inline Rational abs_value(const Rational& x) { return abs(x); }

inline bool is_zero(double x) { return x == 0.0; }
inline bool is_zero(const Rational& x) { return x.is_zero(); }

template <Scalar T>
T from_integer(std::int64_t n) {
  if constexpr (std::same_as<T, double>) {
    return static_cast<double>(n);
  } else {
    return Rational(n);
  }
}

/// Neumaier-compensated floating-point sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  [[nodiscard]] double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Exact running sum for rationals, compensated running sum for doubles.
template <Scalar T>
class Accumulator {
 public:
  void add(const T& x) {
    if constexpr (std::same_as<T, double>) {
      sum_.add(x);
    } else {
      sum_ += x;
    }
  }
  [[nodiscard]] T value() const {
    if constexpr (std::same_as<T, double>) {
      return sum_.value();
    } else {
      return sum_;
    }
  }

 private:
  std::conditional_t<std::same_as<T, double>, CompensatedSum, Rational> sum_{};
};

/// Values of an arithmetic function on 1..size(). Index 0 does not exist.
template <Scalar T>
class Table {
 public:
  Table() = default;
  explicit Table(std::size_t size) : values_(size, from_integer<T>(0)) {}
  explicit Table(std::vector<T> values) : values_(std::move(values)) {}

  [[nodiscard]] std::size_t size() const { return values_.size(); }
  [[nodiscard]] bool empty() const { return values_.empty(); }

  /// Unchecked 1-based access.
  const T& operator[](std::uint64_t n) const { return values_[n - 1]; }
  T& operator[](std::uint64_t n) { return values_[n - 1]; }

  /// Checked 1-based access.
  const T& at(std::uint64_t n) const {
    if (n == 0 || n > values_.size()) {
      throw DomainError("table index " + std::to_string(n) + " outside 1.." +
                        std::to_string(values_.size()));
    }
    return values_[n - 1];
  }

  [[nodiscard]] std::span<const T> values() const { return values_; }
  [[nodiscard]] std::vector<T>& mutable_values() { return values_; }

  /// Restriction to 1..n (n <= size()).
  [[nodiscard]] Table prefix(std::size_t n) const {
    if (n > values_.size()) {
      throw DomainError("table prefix " + std::to_string(n) + " exceeds size " +
                        std::to_string(values_.size()));
    }
    return Table(std::vector<T>(values_.begin(), values_.begin() + static_cast<std::ptrdiff_t>(n)));
  }

  friend bool operator==(const Table&, const Table&) = default;

 private:
  std::vector<T> values_;
};

/// Elementwise conversion of an exact table to doubles.
inline Table<double> to_double(const Table<Rational>& t) {
  std::vector<double> out;
  out.reserve(t.size());
  for (const auto& v : t.values()) out.push_back(v.to_double());
  return Table<double>(std::move(out));
}

}  // namespace rlab
