#include "rlab/shift_re.hpp"

#include <algorithm>
#include <cmath>

#include "rlab/arith.hpp"
#include "rlab/dirichlet.hpp"
#include "rlab/errors.hpp"
#include "rlab/ramanujan_sum.hpp"
#include "rlab/transforms.hpp"

namespace rlab {

namespace {

template <Scalar T>
T times(const T& x, std::int64_t c) {
  if constexpr (std::same_as<T, double>) {
    return x * static_cast<double>(c);
  } else {
    return x * Rational(c);
  }
}

template <Scalar T>
bool same(const T& a, const T& b) {
  if constexpr (std::same_as<T, double>) {
    return std::fabs(a - b) <= 1e-9 * std::max({1.0, std::fabs(a), std::fabs(b)});
  } else {
    return a == b;
  }
}

void require_depth(std::uint64_t amax, std::uint64_t need, const std::string& what) {
  if (need > amax) {
    throw DomainError(what + " needs the correlation to a = " + std::to_string(need) + ", cache holds " +
                      std::to_string(amax) + "; rebuild with amax >= " + std::to_string(need));
  }
}

template <Scalar T>
Table<T> tabulate_tds(const Table<T>& gprime, std::uint64_t range, std::uint64_t m_max) {
  Table<T> out(m_max);
  for (std::uint64_t q = 1; q <= std::min(range, m_max); ++q) {
    if (is_zero(gprime[q])) continue;
    for (std::uint64_t m = q; m <= m_max; m += q) out[m] += gprime[q];
  }
  return out;
}

template <Scalar T>
void fill_values(Correlation<T>& c) {
  c.values = Table<T>(c.amax);
  std::vector<Accumulator<T>> acc(c.amax);
  for (std::uint64_t k = 1; k <= c.n; ++k) {
    if (is_zero(c.f[k])) continue;
    const T fk = c.f[k];
    for (std::uint64_t a = 1; a <= c.amax; ++a) {
      const T& gv = c.g[k + a];
      if (!is_zero(gv)) acc[a - 1].add(fk * gv);
    }
  }
  for (std::uint64_t a = 1; a <= c.amax; ++a) c.values[a] = acc[a - 1].value();
  c.transform = mobius_transform(c.values);
}

// C(N, a) with the n-range cut at min(N, a).
template <Scalar T>
void fill_unfair_values(Correlation<T>& c) {
  c.values = Table<T>(c.amax);
  for (std::uint64_t a = 1; a <= c.amax; ++a) {
    Accumulator<T> s;
    for (std::uint64_t k = 1; k <= std::min(c.n, a); ++k) {
      if (!is_zero(c.f[k]) && !is_zero(c.g[k + a])) s.add(c.f[k] * c.g[k + a]);
    }
    c.values[a] = s.value();
  }
  c.transform = mobius_transform(c.values);
}

template <Scalar T>
struct ReefParts {
  Table<T> cc;    // 1..N
  Table<T> qhat;  // 1..N
};

template <Scalar T>
ReefParts<T> reef_parts(const CutCorrelation<T>& c) {
  const std::uint64_t n = c.base.n;
  return {cc_coefficients(c, n), qrc(c, n).entries};
}

template <Scalar T>
Table<T> tail_table(const CutCorrelation<T>& c, std::uint64_t m_max) {
  Table<T> out(m_max);
  for (std::uint64_t d = c.base.n + 1; d <= m_max; ++d) {
    if (is_zero(c.base.transform[d])) continue;
    for (std::uint64_t m = d; m <= m_max; m += d) out[m] += c.base.transform[d];
  }
  return out;
}

template <Scalar T>
std::vector<LimitEstimate> l_estimates(const CutCorrelation<T>& c, const ReefParts<T>& parts,
                                       const std::vector<std::uint64_t>& grid, double tol) {
  validate_grid(grid);
  require_depth(c.base.amax, grid.back(), "L(q) estimation");
  const Table<T> tail = tail_table(c, grid.back());
  std::vector<LimitEstimate> out;
  for (std::uint64_t q = 1; q <= c.base.n; ++q) {
    const double target = to_double(parts.cc[q] - parts.qhat[q]);
    out.push_back(carmichael_estimate(tail, q, grid, LimitPolicy{tol, 2.0, target}));
  }
  return out;
}

}  // namespace

template <Scalar T>
T Correlation<T>::recompute(std::uint64_t a) const {
  if (a == 0 || a > amax) throw DomainError("shift " + std::to_string(a) + " outside 1..amax");
  Accumulator<T> s;
  for (std::uint64_t k = 1; k <= n; ++k) s.add(f[k] * g[k + a]);
  return s.value();
}

template <Scalar T>
Correlation<T> correlate(const Table<T>& f, const Table<T>& g, std::uint64_t n, std::uint64_t amax) {
  if (n == 0) throw DomainError("correlation length N must be >= 1");
  if (f.size() < n) throw DomainError("f available to " + std::to_string(f.size()) + ", need N = " + std::to_string(n));
  if (g.size() < n + amax) {
    throw DomainError("g available to " + std::to_string(g.size()) + ", need N + amax = " + std::to_string(n + amax));
  }
  Correlation<T> c;
  c.f_label = "table";
  c.g_label = "table";
  c.n = n;
  c.amax = amax;
  c.f = f.prefix(n);
  c.g = g.prefix(n + amax);
  fill_values(c);
  return c;
}

template <Scalar T>
Correlation<T> correlate(const ArithmeticFunction& f, const ArithmeticFunction& g, std::uint64_t n,
                         std::uint64_t amax) {
  Correlation<T> c = correlate(f.tabulate<T>(n), g.tabulate<T>(n + amax), n, amax);
  c.f_label = f.describe();
  c.g_label = g.describe();
  return c;
}

template <Scalar T>
CutCorrelation<T> cut_correlation(const Table<T>& f, const Table<T>& g, std::uint64_t n, std::uint64_t amax) {
  if (n == 0) throw DomainError("correlation length N must be >= 1");
  if (g.size() < n) throw DomainError("g available to " + std::to_string(g.size()) + ", need N = " + std::to_string(n));
  CutCorrelation<T> c;
  c.gprime = mobius_transform(g.prefix(n));
  c.base = correlate(f, tabulate_tds(c.gprime, n, n + amax), n, amax);
  c.base.g_label = "g_N";
  if (g.size() >= n + amax) {
    const Correlation<T> full = correlate(f, g, n, amax);
    Table<T> rem(amax);
    for (std::uint64_t a = 1; a <= amax; ++a) rem[a] = full.values[a] - c.base.values[a];
    c.remainder = std::move(rem);
  }
  return c;
}

template <Scalar T>
CutCorrelation<T> cut_correlation(const ArithmeticFunction& f, const ArithmeticFunction& g, std::uint64_t n,
                                  std::uint64_t amax) {
  std::uint64_t g_len = n + amax;
  if (auto b = g.domain_bound(); b && *b < g_len) g_len = std::max(*b, n);
  CutCorrelation<T> c = cut_correlation(f.tabulate<T>(n), g.tabulate<T>(g_len), n, amax);
  c.base.f_label = f.describe();
  c.base.g_label = g.describe() + " cut at N";
  return c;
}

template <Scalar T>
CutCorrelation<T> unfair_correlation(const Table<T>& f, const Table<T>& gprime, std::uint64_t n,
                                     std::uint64_t amax) {
  if (n == 0) throw DomainError("correlation length N must be >= 1");
  if (f.size() < n || gprime.size() < n) throw DomainError("f and g' must be available to N");
  CutCorrelation<T> c;
  c.fair = false;
  c.gprime = gprime.prefix(n);
  c.base.f_label = "table, summed to min(N, a)";
  c.base.g_label = "g_N";
  c.base.n = n;
  c.base.amax = amax;
  c.base.f = f.prefix(n);
  c.base.g = tabulate_tds(c.gprime, n, n + amax);
  fill_unfair_values(c.base);
  return c;
}

template <Scalar T>
ShiftCoefficients<T> qrc(const CutCorrelation<T>& c, std::uint64_t q_cut) {
  require_depth(c.base.amax, q_cut, "QRC");
  ShiftCoefficients<T> s;
  s.n = c.base.n;
  s.q_cut = q_cut;
  s.entries = q_cut == 0 ? Table<T>{} : wintner_table(c.base.transform, q_cut);
  return s;
}

template <Scalar T>
T divisor_tail(const CutCorrelation<T>& c, std::uint64_t a) {
  require_depth(c.base.amax, a, "divisor tail");
  Accumulator<T> s;
  for (std::uint64_t d : divisors(a)) {
    if (d > c.base.n) s.add(c.base.transform[d]);
  }
  return s.value();
}

template <Scalar T>
Identity12<T> identity12_check(const CutCorrelation<T>& c, std::uint64_t a) {
  if (a == 0) throw DomainError("shift a must be >= 1");
  require_depth(c.base.amax, std::max(a, c.base.n), "correlation divisor identity");
  const ShiftCoefficients<T> s = qrc(c, c.base.n);
  Identity12<T> r;
  r.a = a;
  r.lhs = c.base.values[a];
  Accumulator<T> main;
  for (std::uint64_t q = 1; q <= c.base.n; ++q) {
    if (is_zero(s.entries[q])) continue;
    const std::int64_t cq = csum(q, static_cast<std::int64_t>(a));
    if (cq != 0) main.add(times(s.entries[q], cq));
  }
  r.main = main.value();
  r.tail = divisor_tail(c, a);
  r.equal = same(r.lhs, r.main + r.tail);
  return r;
}

template <Scalar T>
Table<T> cc_coefficients(const CutCorrelation<T>& c, std::uint64_t lmax) {
  if (!c.fair) {
    throw PreconditionError(
        "correlation is not fair: its shift dependence is not confined to the argument of g, so the "
        "orthogonality step behind the (CC) formula does not apply");
  }
  const std::uint64_t n = c.base.n;
  const Table<T> ghat = wintner_table(c.gprime, n);
  Table<T> out(lmax);
  for (std::uint64_t l = 1; l <= std::min(lmax, n); ++l) {
    if (is_zero(ghat[l])) continue;
    const RamanujanSum cl(l);
    Accumulator<T> s;
    for (std::uint64_t k = 1; k <= n; ++k) {
      if (is_zero(c.base.f[k])) continue;
      const std::int64_t v = cl(static_cast<std::int64_t>(k));
      if (v != 0) s.add(times(c.base.f[k], v));
    }
    const T phi_l = from_integer<T>(static_cast<std::int64_t>(cl.totient()));
    out[l] = ghat[l] * s.value() / phi_l;
  }
  return out;
}

template <Scalar T>
LimitEstimate carmichael_vs_cc(const CutCorrelation<T>& c, std::uint64_t ell, const std::vector<std::uint64_t>& grid,
                               double tol) {
  validate_grid(grid);
  require_depth(c.base.amax, grid.back(), "Carmichael estimate over shifts");
  const Table<T> cc = cc_coefficients(c, ell);
  return carmichael_estimate(c.base.values, ell, grid, LimitPolicy{tol, 0.0, to_double(cc[ell])});
}

template <Scalar T>
T exact_l(const CutCorrelation<T>& c, std::uint64_t q) {
  if (q == 0) throw DomainError("L(q) needs q >= 1");
  if (q > c.base.n) return from_integer<T>(0);
  const ReefParts<T> parts = reef_parts(c);
  return parts.cc[q] - parts.qhat[q];
}

template <Scalar T>
LimitEstimate l_estimate(const CutCorrelation<T>& c, std::uint64_t q, const std::vector<std::uint64_t>& grid,
                         double tol) {
  if (q == 0) throw DomainError("L(q) needs q >= 1");
  validate_grid(grid);
  require_depth(c.base.amax, grid.back(), "L(q) estimation");
  const double target = to_double(exact_l(c, q));
  return carmichael_estimate(tail_table(c, grid.back()), q, grid, LimitPolicy{tol, 2.0, target});
}

template <Scalar T>
ReefReport<T> reef_check(const CutCorrelation<T>& c, std::uint64_t a) {
  if (a == 0) throw DomainError("shift a must be >= 1");
  require_depth(c.base.amax, std::max(a, c.base.n), "Reef check");
  const ReefParts<T> parts = reef_parts(c);
  ReefReport<T> r;
  r.a = a;
  r.lhs = c.base.values[a];
  Accumulator<T> reef, lterm;
  bool l_zero = true;
  for (std::uint64_t q = 1; q <= c.base.n; ++q) {
    const T l = parts.cc[q] - parts.qhat[q];
    l_zero = l_zero && is_zero(l);
    const std::int64_t cq = csum(q, static_cast<std::int64_t>(a));
    if (cq == 0) continue;
    reef.add(times(parts.cc[q], cq));
    lterm.add(times(l, cq));
  }
  r.reef_rhs = reef.value();
  r.deviation = r.lhs - r.reef_rhs;
  r.l_term = lterm.value();
  r.tail = divisor_tail(c, a);
  r.corrected_deviation = r.lhs - (r.reef_rhs - r.l_term);
  bool high_zero = true;
  for (std::uint64_t d = c.base.n + 1; d <= c.base.amax; ++d) high_zero = high_zero && is_zero(c.base.transform[d]);
  r.tail_free = high_zero && l_zero;
  r.reef_exact = is_zero(r.deviation);
  return r;
}

template <Scalar T>
WeakReef<T> weak_reef_check(const CutCorrelation<T>& c, std::uint64_t a, const std::vector<std::uint64_t>& lgrid) {
  if (a == 0) throw DomainError("shift a must be >= 1");
  require_depth(c.base.amax, std::max(a, c.base.n), "Weak Reef check");
  const ReefParts<T> parts = reef_parts(c);
  WeakReef<T> r;
  r.a = a;
  r.lhs = c.base.values[a];
  r.tail = divisor_tail(c, a);
  r.lgrid = lgrid;
  std::vector<std::int64_t> cq(c.base.n + 1, 0);
  Accumulator<T> exact;
  for (std::uint64_t q = 1; q <= c.base.n; ++q) {
    cq[q] = csum(q, static_cast<std::int64_t>(a));
    exact.add(times(parts.qhat[q], cq[q]));
  }
  r.exact_residual = r.lhs - exact.value() - r.tail;
  if (lgrid.empty()) return r;
  const auto ls = l_estimates(c, parts, lgrid, 1e-2);
  for (std::size_t i = 0; i < lgrid.size(); ++i) {
    CompensatedSum s;
    for (std::uint64_t q = 1; q <= c.base.n; ++q) {
      if (cq[q] != 0) s.add((to_double(parts.cc[q]) - ls[q - 1].estimates[i]) * static_cast<double>(cq[q]));
    }
    r.residuals.push_back(to_double(r.lhs) - s.value() - to_double(r.tail));
  }
  return r;
}

template <Scalar T>
ShortAverage<T> short_average(const CutCorrelation<T>& c, std::uint64_t a_cut, const std::vector<std::uint64_t>& lgrid) {
  if (a_cut == 0 || a_cut > c.base.n) {
    throw DomainError("short average needs 1 <= A <= N (A = " + std::to_string(a_cut) +
                      ", N = " + std::to_string(c.base.n) + ")");
  }
  require_depth(c.base.amax, c.base.n, "short average");
  const ReefParts<T> parts = reef_parts(c);
  ShortAverage<T> r;
  r.a_cut = a_cut;
  Accumulator<T> lhs, rhs;
  for (std::uint64_t a = 1; a <= a_cut; ++a) lhs.add(c.base.values[a]);
  r.lhs = lhs.value();
  for (std::uint64_t q = 1; q <= c.base.n; ++q) {
    ShortAverageTerm<T> t;
    t.q = q;
    t.coefficient = parts.cc[q] - (parts.cc[q] - parts.qhat[q]);
    t.csum_sum = csum_prefix(q, a_cut);
    t.contribution = times(t.coefficient, t.csum_sum);
    rhs.add(t.contribution);
    r.terms.push_back(std::move(t));
  }
  r.rhs = rhs.value();
  r.equal = same(r.lhs, r.rhs);
  r.lgrid = lgrid;
  if (!lgrid.empty()) {
    const auto ls = l_estimates(c, parts, lgrid, 1e-2);
    for (std::size_t i = 0; i < lgrid.size(); ++i) {
      CompensatedSum s;
      for (const auto& t : r.terms) {
        s.add((to_double(parts.cc[t.q]) - ls[t.q - 1].estimates[i]) * static_cast<double>(t.csum_sum));
      }
      r.residuals.push_back(to_double(r.lhs) - s.value());
    }
  }
  return r;
}

#define RLAB_INSTANTIATE(T)                                                                                       \
  template struct Correlation<T>;                                                                                 \
  template Correlation<T> correlate<T>(const Table<T>&, const Table<T>&, std::uint64_t, std::uint64_t);           \
  template Correlation<T> correlate<T>(const ArithmeticFunction&, const ArithmeticFunction&, std::uint64_t,       \
                                       std::uint64_t);                                                            \
  template CutCorrelation<T> cut_correlation<T>(const Table<T>&, const Table<T>&, std::uint64_t, std::uint64_t);  \
  template CutCorrelation<T> cut_correlation<T>(const ArithmeticFunction&, const ArithmeticFunction&,             \
                                                std::uint64_t, std::uint64_t);                                    \
  template CutCorrelation<T> unfair_correlation<T>(const Table<T>&, const Table<T>&, std::uint64_t,               \
                                                   std::uint64_t);                                                \
  template ShiftCoefficients<T> qrc<T>(const CutCorrelation<T>&, std::uint64_t);                                  \
  template T divisor_tail<T>(const CutCorrelation<T>&, std::uint64_t);                                            \
  template Identity12<T> identity12_check<T>(const CutCorrelation<T>&, std::uint64_t);                            \
  template Table<T> cc_coefficients<T>(const CutCorrelation<T>&, std::uint64_t);                                 \
  template LimitEstimate carmichael_vs_cc<T>(const CutCorrelation<T>&, std::uint64_t,                             \
                                             const std::vector<std::uint64_t>&, double);                          \
  template T exact_l<T>(const CutCorrelation<T>&, std::uint64_t);                                                 \
  template LimitEstimate l_estimate<T>(const CutCorrelation<T>&, std::uint64_t, const std::vector<std::uint64_t>&, \
                                       double);                                                                   \
  template ReefReport<T> reef_check<T>(const CutCorrelation<T>&, std::uint64_t);                                  \
  template WeakReef<T> weak_reef_check<T>(const CutCorrelation<T>&, std::uint64_t,                                \
                                          const std::vector<std::uint64_t>&);                                     \
  template ShortAverage<T> short_average<T>(const CutCorrelation<T>&, std::uint64_t,                              \
                                            const std::vector<std::uint64_t>&);

RLAB_INSTANTIATE(Rational)
RLAB_INSTANTIATE(double)

#undef RLAB_INSTANTIATE

}  // namespace rlab
