#include "rlab/limit.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "rlab/errors.hpp"

namespace rlab {

std::string to_string(Verdict v) { return v == Verdict::converged ? "converged" : "undetermined"; }

void validate_grid(const std::vector<std::uint64_t>& grid) {
  if (grid.empty()) throw DomainError("empty evaluation grid");
  if (grid.front() == 0) throw DomainError("grid points must be positive");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (grid[i] <= grid[i - 1]) throw DomainError("grid must be strictly increasing");
  }
}

LimitEstimate LimitEstimate::judge(std::vector<std::uint64_t> grid, std::vector<double> estimates,
                                   const LimitPolicy& policy) {
  LimitEstimate e;
  e.grid = std::move(grid);
  e.estimates = std::move(estimates);
  e.tol = policy.tol;
  e.target = policy.target;
  for (std::size_t i = 1; i < e.estimates.size(); ++i) {
    e.deltas.push_back(e.estimates[i] - e.estimates[i - 1]);
  }
  bool ok = !e.deltas.empty() && std::fabs(e.deltas.back()) < policy.tol;
  if (ok) {
    const double span = std::log10(static_cast<double>(e.grid.back()) / static_cast<double>(e.grid.front()));
    ok = span + 1e-12 >= policy.min_decades;
  }
  if (ok && policy.target) ok = std::fabs(e.estimates.back() - *policy.target) < policy.tol;
  e.verdict = ok ? Verdict::converged : Verdict::undetermined;
  return e;
}

}  // namespace rlab
