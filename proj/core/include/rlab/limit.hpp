#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rlab/rational.hpp"

namespace rlab {

enum class Verdict { converged, undetermined };

std::string to_string(Verdict v);

/// How a sequence of estimates on an increasing x-grid is judged.
struct LimitPolicy {
  double tol = 1e-3;
  /// Minimum span log10(x_last / x_first) of the grid.
  double min_decades = 2.0;
  /// Exact target the final estimate must also match within tol.
  std::optional<double> target;
};

/// A numerically estimated limit of an average (1/x) sum_{n <= x}.
///
/// `deltas[i] = estimates[i+1] - estimates[i]`. The verdict is converged only
/// when the last delta is below tol, the grid spans the policy's decades and
/// the optional target is met; nothing is claimed about the true limit.
struct LimitEstimate {
  std::vector<std::uint64_t> grid;
  std::vector<double> estimates;
  std::vector<double> deltas;
  /// Exact per-x averages when the accumulation was exact.
  std::vector<Rational> exact_estimates;
  Verdict verdict = Verdict::undetermined;
  double tol = 0.0;
  std::optional<double> target;

  static LimitEstimate judge(std::vector<std::uint64_t> grid, std::vector<double> estimates,
                             const LimitPolicy& policy);

  [[nodiscard]] bool converged() const { return verdict == Verdict::converged; }
  [[nodiscard]] double value() const { return estimates.empty() ? 0.0 : estimates.back(); }
};

/// Throws DomainError unless the grid is non-empty, positive and strictly
/// increasing.
void validate_grid(const std::vector<std::uint64_t>& grid);

}  // namespace rlab
