#include "rlab/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "rlab/arith.hpp"
#include "rlab/dirichlet.hpp"
#include "rlab/errors.hpp"
#include "rlab/ramanujan_sum.hpp"

namespace rlab {

namespace {

void require_size(std::size_t have, std::uint64_t need, const char* what) {
  if (have < need) {
    throw DomainError(std::string(what) + " available to " + std::to_string(have) + ", need " +
                      std::to_string(need) + " (missing index " + std::to_string(have + 1) + ")");
  }
}

std::vector<std::uint64_t> decade_points(std::uint64_t cut) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 10; p <= cut; p *= 10) {
    out.push_back(p);
    if (p > std::numeric_limits<std::uint64_t>::max() / 10) break;
  }
  return out;
}

template <Scalar T>
T divide(const T& x, std::uint64_t d) {
  if constexpr (std::same_as<T, double>) {
    return x / static_cast<double>(d);
  } else {
    return x / Rational(static_cast<std::int64_t>(d));
  }
}

}  // namespace

template <Scalar T>
Table<T> EratosthenesTransform<T>::reconvolve() const {
  return divisor_sum_transform(values);
}

template <Scalar T>
EratosthenesTransform<T> eratosthenes(const ArithmeticFunction& f, std::uint64_t bound) {
  return {f.describe(), bound, mobius_transform(f.tabulate<T>(bound))};
}

double wintner_tail_bound(std::uint64_t q, std::uint64_t cut, const DecayHint& hint) {
  if (q == 0 || cut < q) throw DomainError("Wintner tail needs 1 <= q <= cut");
  if (hint.s <= 0.0) return std::numeric_limits<double>::infinity();
  const double m = static_cast<double>(cut / q);
  return hint.c * std::pow(static_cast<double>(q), -(hint.s + 1.0)) * std::pow(m, -hint.s) / hint.s;
}

template <Scalar T>
WintnerPartial<T> wintner_coefficient(const Table<T>& fprime, std::uint64_t q, std::uint64_t cut,
                                      std::optional<DecayHint> hint) {
  if (q == 0 || cut < q) throw DomainError("Wintner coefficient needs 1 <= q <= cut");
  require_size(fprime.size(), cut, "F'");
  Accumulator<T> s;
  for (std::uint64_t d = q; d <= cut; d += q) {
    if (!is_zero(fprime[d])) s.add(divide(fprime[d], d));
  }
  WintnerPartial<T> out{s.value(), std::nullopt};
  if (hint) out.tail_bound = wintner_tail_bound(q, cut, *hint);
  return out;
}

template <Scalar T>
Table<T> wintner_table(const Table<T>& fprime, std::uint64_t cut) {
  require_size(fprime.size(), cut, "F'");
  Table<T> scaled(cut);
  for (std::uint64_t d = 1; d <= cut; ++d) {
    if (!is_zero(fprime[d])) scaled[d] = divide(fprime[d], d);
  }
  Table<T> out(cut);
  for (std::uint64_t q = 1; q <= cut; ++q) {
    Accumulator<T> s;
    for (std::uint64_t d = q; d <= cut; d += q) {
      if (!is_zero(scaled[d])) s.add(scaled[d]);
    }
    out[q] = s.value();
  }
  return out;
}

template <Scalar T>
bool is_completely_multiplicative(const Table<T>& f, std::uint64_t bound) {
  require_size(f.size(), bound, "F'");
  if (bound == 0) return true;
  const auto eq = [](const T& a, const T& b) {
    if constexpr (std::same_as<T, double>) {
      return std::fabs(a - b) <= 1e-12 * std::max({1.0, std::fabs(a), std::fabs(b)});
    } else {
      return a == b;
    }
  };
  const T one = from_integer<T>(1);
  if (!is_zero(f[1]) && !eq(f[1], one)) return false;
  const Sieve sieve(bound);
  for (std::uint64_t n = 2; n <= bound; ++n) {
    const std::uint64_t p = sieve.smallest_prime_factor(n);
    if (!eq(f[n], f[p] * f[n / p])) return false;
  }
  return true;
}

template <Scalar T>
CmShortcut<T> wintner_cm_shortcut(const Table<T>& fprime, std::uint64_t q, std::uint64_t cut) {
  if (q == 0 || cut < q) throw DomainError("Wintner shortcut needs 1 <= q <= cut");
  if (!is_completely_multiplicative(fprime, cut)) {
    throw PreconditionError("F' is not completely multiplicative on 1.." + std::to_string(cut));
  }
  const T factor = divide(fprime[q], q);
  CmShortcut<T> out;
  out.shortcut = factor * wintner_coefficient(fprime, 1, cut).partial;
  out.matched = factor * wintner_coefficient(fprime, 1, cut / q).partial;
  out.cut_mismatch = out.shortcut - out.matched;
  return out;
}

template <Scalar T>
LimitEstimate carmichael_estimate(const Table<T>& f, std::uint64_t q, const std::vector<std::uint64_t>& grid,
                                  const LimitPolicy& policy) {
  validate_grid(grid);
  if (q == 0) throw DomainError("Carmichael coefficient needs q >= 1");
  require_size(f.size(), grid.back(), "F");
  const RamanujanSum c(q);
  const auto phi_q = static_cast<std::int64_t>(c.totient());
  Accumulator<T> s;
  std::vector<double> estimates;
  std::vector<Rational> exact;
  std::size_t next = 0;
  for (std::uint64_t n = 1; n <= grid.back(); ++n) {
    if (!is_zero(f[n])) {
      const std::int64_t cn = c(static_cast<std::int64_t>(n));
      if (cn != 0) s.add(f[n] * from_integer<T>(cn));
    }
    if (n == grid[next]) {
      const std::int64_t denom = phi_q * static_cast<std::int64_t>(n);
      if constexpr (std::same_as<T, Rational>) {
        exact.push_back(s.value() / Rational(denom));
        estimates.push_back(exact.back().to_double());
      } else {
        estimates.push_back(s.value() / static_cast<double>(denom));
      }
      ++next;
    }
  }
  LimitEstimate e = LimitEstimate::judge(grid, std::move(estimates), policy);
  e.exact_estimates = std::move(exact);
  return e;
}

LimitEstimate carmichael_estimate(const ArithmeticFunction& f, std::uint64_t q,
                                  const std::vector<std::uint64_t>& grid, const LimitPolicy& policy) {
  validate_grid(grid);
  if (f.exact()) return carmichael_estimate(f.tabulate<Rational>(grid.back()), q, grid, policy);
  return carmichael_estimate(f.tabulate<double>(grid.back()), q, grid, policy);
}

std::string to_string(Condition c) {
  switch (c) {
    case Condition::wintner:
      return "WA";
    case Condition::delange:
      return "DH";
    case Condition::dual_delange:
      return "DD7";
    case Condition::slow_decay:
      return "SD";
    case Condition::delange_mean:
      return "DI";
  }
  return "?";
}

std::string to_string(ConditionVerdict v) {
  switch (v) {
    case ConditionVerdict::satisfied_at_cut:
      return "satisfied-at-cut";
    case ConditionVerdict::violated_at_cut:
      return "violated-at-cut";
    case ConditionVerdict::undetermined:
      return "undetermined";
  }
  return "?";
}

Condition parse_condition(const std::string& s) {
  if (s == "WA") return Condition::wintner;
  if (s == "DH") return Condition::delange;
  if (s == "DD7") return Condition::dual_delange;
  if (s == "SD") return Condition::slow_decay;
  if (s == "DI") return Condition::delange_mean;
  throw SchemaError("unknown condition '" + s + "' (expected WA|DH|DD7|SD|DI)");
}

template <Scalar T>
ConditionReport condition_check(Condition kind, const Table<T>& seq, std::uint64_t cut) {
  if (cut == 0) throw DomainError("condition check needs cut >= 1");
  require_size(seq.size(), cut, "sequence");
  ConditionReport r;
  r.condition = kind;
  r.cut = cut;
  r.trend_points = decade_points(cut);

  const bool absolute_series =
      kind == Condition::wintner || kind == Condition::delange || kind == Condition::dual_delange;
  std::vector<std::uint8_t> omega_t;
  if (kind == Condition::delange || kind == Condition::dual_delange) omega_t = Sieve(cut).omega_table();

  CompensatedSum s;
  std::size_t next = 0;
  for (std::uint64_t d = 1; d <= cut; ++d) {
    const double a = std::fabs(to_double(seq[d]));
    double term = a;
    switch (kind) {
      case Condition::wintner:
        term = a / static_cast<double>(d);
        break;
      case Condition::delange:
        term = std::ldexp(a, omega_t[d]) / static_cast<double>(d);
        break;
      case Condition::dual_delange:
        term = std::ldexp(a, omega_t[d]);
        break;
      case Condition::slow_decay:
      case Condition::delange_mean:
        break;
    }
    s.add(term);
    if (next < r.trend_points.size() && d == r.trend_points[next]) {
      r.trend.push_back(absolute_series ? s.value() : s.value() / static_cast<double>(d));
      ++next;
    }
  }
  r.partial = absolute_series ? s.value() : s.value() / static_cast<double>(cut);

  const std::size_t k = r.trend.size();
  if (k < 3) return r;
  const double last = r.trend[k - 1], prev = r.trend[k - 2], prev2 = r.trend[k - 3];
  if (absolute_series) {
    const double step = last - prev, step_prev = prev - prev2;
    if (step == 0.0) {
      r.verdict = ConditionVerdict::satisfied_at_cut;
    } else if (step_prev > 0.0) {
      const double ratio = step / step_prev;
      if (ratio <= 0.5) r.verdict = ConditionVerdict::satisfied_at_cut;
      else if (ratio >= 0.7) r.verdict = ConditionVerdict::violated_at_cut;
    }
  } else if (kind == Condition::slow_decay) {
    if (last == 0.0 || (last < prev && prev < prev2 && last <= 0.5 * r.trend.front())) {
      r.verdict = ConditionVerdict::satisfied_at_cut;
    } else if (last >= 0.9 * prev) {
      r.verdict = ConditionVerdict::violated_at_cut;
    }
  } else {
    const double earlier_max = *std::max_element(r.trend.begin(), r.trend.end() - 1);
    if (last <= 1.02 * earlier_max) r.verdict = ConditionVerdict::satisfied_at_cut;
    else if (last >= 1.1 * prev) r.verdict = ConditionVerdict::violated_at_cut;
  }
  return r;
}

template <Scalar T>
CwReport cw_approximate_check(const Table<T>& f, std::uint64_t q, const std::vector<std::uint64_t>& grid) {
  validate_grid(grid);
  if (q == 0) throw DomainError("CW check needs q >= 1");
  require_size(f.size(), grid.back(), "F");
  const std::uint64_t x_max = grid.back();
  Table<double> fd;
  if constexpr (std::same_as<T, double>) {
    fd = f.prefix(x_max);
  } else {
    fd = to_double(f.prefix(x_max));
  }
  const Table<T> fprime_exact = mobius_transform(f.prefix(x_max));
  const Table<double> fprime = [&] {
    if constexpr (std::same_as<T, double>) return fprime_exact;
    else return to_double(fprime_exact);
  }();

  const RamanujanSum c(q);
  const auto phi_q = static_cast<double>(c.totient());
  CwReport r;
  r.q = q;
  r.bound = static_cast<double>(q);
  CompensatedSum lhs_sum, rhs_sum, abs_sum;
  std::size_t next = 0;
  for (std::uint64_t n = 1; n <= x_max; ++n) {
    if (fd[n] != 0.0) lhs_sum.add(fd[n] * static_cast<double>(c(static_cast<std::int64_t>(n))));
    if (n % q == 0 && fprime[n] != 0.0) rhs_sum.add(fprime[n] / static_cast<double>(n));
    abs_sum.add(std::fabs(fprime[n]));
    if (n == grid[next]) {
      CwPoint p;
      p.x = n;
      const double x = static_cast<double>(n);
      p.lhs = lhs_sum.value() / (phi_q * x);
      p.rhs = rhs_sum.value();
      const double denom = abs_sum.value();
      if (denom > 0.0) {
        p.ratio = std::fabs(lhs_sum.value() / phi_q - x * p.rhs) / denom;
        r.max_ratio = std::max(r.max_ratio, *p.ratio);
      }
      r.points.push_back(p);
      ++next;
    }
  }
  r.bounded = r.max_ratio <= r.bound;
  return r;
}

Lemma2Report lemma2_check(const Table<Rational>& f, std::uint64_t q_max, const std::vector<std::uint64_t>& grid) {
  validate_grid(grid);
  if (q_max == 0) throw DomainError("lemma2 needs q_max >= 1");
  require_size(f.size(), grid.back(), "F");
  for (std::uint64_t n = 1; n <= grid.back(); ++n) {
    if (f[n].sign() < 0) {
      throw PreconditionError("F(" + std::to_string(n) + ") = " + f[n].str() + " is negative");
    }
  }
  std::vector<std::uint64_t> support;
  for (std::uint64_t n = 1; n <= grid.back(); ++n) {
    if (!f[n].is_zero()) support.push_back(n);
  }
  Lemma2Report r;
  for (std::uint64_t q = 1; q <= q_max; ++q) {
    const RamanujanSum c(q);
    const Rational phi_q(static_cast<std::int64_t>(c.totient()));
    Rational weighted(0), mass(0);
    std::size_t i = 0;
    for (std::uint64_t x : grid) {
      for (; i < support.size() && support[i] <= x; ++i) {
        const std::uint64_t n = support[i];
        weighted += f[n] * Rational(c(static_cast<std::int64_t>(n)));
        mass += f[n];
      }
      ++r.checks;
      if (abs(weighted) > phi_q * mass) {
        r.violations.push_back("q=" + std::to_string(q) + " x=" + std::to_string(x));
      }
    }
  }
  return r;
}

std::string to_string(Conjecture1Family f) {
  switch (f) {
    case Conjecture1Family::completely_multiplicative:
      return "completely-multiplicative";
    case Conjecture1Family::nonnegative:
      return "nonnegative";
    case Conjecture1Family::free:
      return "free";
  }
  return "?";
}

Conjecture1Family parse_conjecture1_family(const std::string& s) {
  if (s == "completely-multiplicative" || s == "cm") return Conjecture1Family::completely_multiplicative;
  if (s == "nonnegative") return Conjecture1Family::nonnegative;
  if (s == "free") return Conjecture1Family::free;
  throw SchemaError("unknown conjecture1 family '" + s + "'");
}

bool verify_conjecture1_candidate(const Table<Rational>& fprime, std::uint64_t q_cut, Conjecture1Candidate* out) {
  const std::uint64_t d_cut = fprime.size();
  bool nonzero_high = false;
  for (std::uint64_t d = q_cut + 1; d <= d_cut; ++d) nonzero_high = nonzero_high || !fprime[d].is_zero();
  const Table<Rational> win = wintner_table(fprime, d_cut);
  bool high_vanish = true;
  for (std::uint64_t q = q_cut + 1; q <= d_cut; ++q) high_vanish = high_vanish && win[q].is_zero();
  const bool ok = nonzero_high && high_vanish && d_cut >= 1 && !win[1].is_zero();
  if (out != nullptr) {
    out->fprime = fprime;
    out->win1 = d_cut >= 1 ? win[1] : Rational(0);
    out->high_partials.clear();
    for (std::uint64_t q = q_cut + 1; q <= d_cut; ++q) out->high_partials.push_back(win[q]);
  }
  return ok;
}

namespace {

// Reduced row echelon form in place; pivot = largest |numerator| in the
// column (first such row on ties). Returns pivot columns.
std::vector<std::size_t> row_reduce(std::vector<std::vector<Rational>>& a, std::size_t cols) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < a.size(); ++col) {
    std::size_t best = a.size();
    mpz_class best_mag;
    for (std::size_t r = row; r < a.size(); ++r) {
      if (a[r][col].is_zero()) continue;
      mpz_class mag = abs(a[r][col].numerator());
      if (best == a.size() || mag > best_mag) {
        best = r;
        best_mag = mag;
      }
    }
    if (best == a.size()) continue;
    std::swap(a[row], a[best]);
    const Rational inv = Rational(1) / a[row][col];
    for (auto& v : a[row]) v *= inv;
    for (std::size_t r = 0; r < a.size(); ++r) {
      if (r == row || a[r][col].is_zero()) continue;
      const Rational factor = a[r][col];
      for (std::size_t c = col; c < cols; ++c) {
        if (!a[row][c].is_zero()) a[r][c] -= factor * a[row][c];
      }
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

}  // namespace

Conjecture1Report conjecture1_search(Conjecture1Family family, std::uint64_t q_cut, std::uint64_t d_cut,
                                     std::size_t trials, std::uint64_t seed) {
  if (q_cut < 1 || d_cut <= q_cut) throw DomainError("conjecture1 needs D > Q >= 1");
  Conjecture1Report r;
  r.family = family;
  r.q_cut = q_cut;
  r.d_cut = d_cut;

  if (family == Conjecture1Family::free) {
    const std::size_t n = d_cut - q_cut;
    r.unknowns = n;
    r.equations = n;
    std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n, Rational(0)));
    for (std::uint64_t q = q_cut + 1; q <= d_cut; ++q) {
      for (std::uint64_t d = q; d <= d_cut; d += q) {
        a[q - q_cut - 1][d - q_cut - 1] = Rational(1, static_cast<std::int64_t>(d));
      }
    }
    const auto pivots = row_reduce(a, n);
    r.rank = pivots.size();
    std::vector<bool> is_pivot(n, false);
    for (std::size_t c : pivots) is_pivot[c] = true;
    for (std::size_t free_col = 0; free_col < n; ++free_col) {
      if (is_pivot[free_col]) continue;
      std::vector<Rational> v(n, Rational(0));
      v[free_col] = Rational(1);
      for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -a[i][free_col];
      r.nullspace.push_back(v);
    }
    for (const auto& v : r.nullspace) {
      for (std::int64_t head : {1, 2}) {
        Table<Rational> fprime(d_cut);
        fprime[1] = Rational(head);
        for (std::size_t j = 0; j < n; ++j) fprime[q_cut + 1 + j] = v[j];
        Conjecture1Candidate cand;
        if (verify_conjecture1_candidate(fprime, q_cut, &cand)) {
          r.counterexamples.push_back(std::move(cand));
          break;
        }
      }
    }
    return r;
  }

  Rng rng(seed);
  const Sieve sieve(d_cut);
  for (std::size_t t = 0; t < trials; ++t) {
    Table<Rational> fprime(d_cut);
    if (family == Conjecture1Family::completely_multiplicative) {
      fprime[1] = Rational(1);
      for (std::uint64_t n = 2; n <= d_cut; ++n) {
        const std::uint64_t p = sieve.smallest_prime_factor(n);
        if (p == n) {
          const bool zero = random_integer(rng, 0, 1) == 0;
          const Rational v = random_rational(rng);
          fprime[n] = zero ? Rational(0) : v;
        } else {
          fprime[n] = fprime[p] * fprime[n / p];
        }
      }
    } else {
      for (std::uint64_t n = 1; n <= d_cut; ++n) {
        const bool zero = random_integer(rng, 0, 1) == 0;
        const Rational v = random_nonnegative_rational(rng);
        fprime[n] = zero ? Rational(0) : v;
      }
    }
    ++r.trials;
    Conjecture1Candidate cand;
    if (verify_conjecture1_candidate(fprime, q_cut, &cand)) {
      r.counterexamples.push_back(std::move(cand));
      r.fault = true;
    }
  }
  return r;
}

namespace {

ConcordanceReport concordance(const Table<double>& f, const Table<double>& fprime, ConditionReport hypothesis,
                              std::uint64_t q_max, const std::vector<std::uint64_t>& grid, double tol) {
  ConcordanceReport r;
  r.hypothesis = std::move(hypothesis);
  r.tol = tol;
  r.consistent = true;
  for (std::uint64_t q = 1; q <= q_max; ++q) {
    r.moduli.push_back(q);
    r.carmichael.push_back(carmichael_estimate(f, q, grid, {tol, 2.0, std::nullopt}));
    r.wintner.push_back(wintner_coefficient(fprime, q, grid.back()).partial);
    r.difference.push_back(r.carmichael.back().value() - r.wintner.back());
    r.consistent = r.consistent && std::fabs(r.difference.back()) < tol;
  }
  return r;
}

}  // namespace

ConcordanceReport concordance_slow_decay(const Table<double>& fprime, std::uint64_t q_max,
                                         const std::vector<std::uint64_t>& grid, double tol) {
  validate_grid(grid);
  require_size(fprime.size(), grid.back(), "F'");
  const Table<double> fp = fprime.prefix(grid.back());
  return concordance(divisor_sum_transform(fp), fp, condition_check(Condition::slow_decay, fp, grid.back()),
                     q_max, grid, tol);
}

ConcordanceReport concordance_delange_mean(const Table<double>& f, std::uint64_t q_max,
                                           const std::vector<std::uint64_t>& grid, double tol) {
  validate_grid(grid);
  require_size(f.size(), grid.back(), "F");
  const Table<double> ff = f.prefix(grid.back());
  return concordance(ff, mobius_transform(ff), condition_check(Condition::delange_mean, ff, grid.back()), q_max,
                     grid, tol);
}

#define RLAB_INSTANTIATE(T)                                                                                     \
  template struct EratosthenesTransform<T>;                                                                     \
  template EratosthenesTransform<T> eratosthenes<T>(const ArithmeticFunction&, std::uint64_t);                  \
  template WintnerPartial<T> wintner_coefficient<T>(const Table<T>&, std::uint64_t, std::uint64_t,              \
                                                    std::optional<DecayHint>);                                  \
  template Table<T> wintner_table<T>(const Table<T>&, std::uint64_t);                                           \
  template bool is_completely_multiplicative<T>(const Table<T>&, std::uint64_t);                                \
  template CmShortcut<T> wintner_cm_shortcut<T>(const Table<T>&, std::uint64_t, std::uint64_t);                 \
  template LimitEstimate carmichael_estimate<T>(const Table<T>&, std::uint64_t, const std::vector<std::uint64_t>&, \
                                                const LimitPolicy&);                                            \
  template ConditionReport condition_check<T>(Condition, const Table<T>&, std::uint64_t);                       \
  template CwReport cw_approximate_check<T>(const Table<T>&, std::uint64_t, const std::vector<std::uint64_t>&);

RLAB_INSTANTIATE(Rational)
RLAB_INSTANTIATE(double)

#undef RLAB_INSTANTIATE

}  // namespace rlab
