#include "rlab/expansions.hpp"

#include <cmath>

#include "rlab/arith.hpp"
#include "rlab/dirichlet.hpp"
#include "rlab/errors.hpp"
#include "rlab/finite_re.hpp"
#include "rlab/ramanujan_sum.hpp"
#include "rlab/transforms.hpp"

namespace rlab {

namespace {

// c_q(n) for q = 1..q_cut (index q), as sum over d | n of d mu(q/d).
std::vector<std::int64_t> csum_column(std::uint64_t n, std::uint64_t q_cut) {
  std::vector<std::int64_t> c(q_cut + 1, 0);
  const auto mu_t = Sieve(q_cut).mu_table();
  for (std::uint64_t d : divisors(n)) {
    if (d > q_cut) break;
    for (std::uint64_t k = 1; k * d <= q_cut; ++k) {
      if (mu_t[k] != 0) c[k * d] += static_cast<std::int64_t>(d) * mu_t[k];
    }
  }
  return c;
}

template <Scalar T>
T times(const T& x, std::int64_t c) {
  if constexpr (std::same_as<T, double>) {
    return x * static_cast<double>(c);
  } else {
    return x * Rational(c);
  }
}

template <Scalar T>
double gap(const T& a, const T& b) {
  return std::fabs(to_double(a - b));
}

}  // namespace

template <Scalar T>
T CoefficientSeq<T>::at(std::uint64_t q) const {
  if (q >= 1 && q <= entries.size()) return entries[q];
  if (q >= 1 && finite) return from_integer<T>(0);
  throw DomainError("coefficient " + std::to_string(q) + " not available (" + label + " known to " +
                    std::to_string(entries.size()) + ")");
}

template <Scalar T>
void CoefficientSeq<T>::require(std::uint64_t q) const {
  if (q > entries.size() && !finite) {
    throw DomainError("coefficients needed to " + std::to_string(q) + ", " + label + " known to " +
                      std::to_string(entries.size()));
  }
}

nlohmann::json to_json(const CoefficientSeq<Rational>& s) {
  nlohmann::json entries = nlohmann::json::object();
  for (std::uint64_t q = 1; q <= s.support(); ++q) {
    if (!s.entries[q].is_zero()) entries[std::to_string(q)] = s.entries[q].str();
  }
  nlohmann::json j{{"support", s.support()}, {"entries", entries}};
  if (!s.label.empty()) j["label"] = s.label;
  if (!s.finite) j["finite"] = false;
  return j;
}

CoefficientSeq<Rational> coefficient_seq_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("support") || !j.contains("entries")) {
    throw SchemaError("coefficient sequence needs 'support' and 'entries'");
  }
  CoefficientSeq<Rational> s;
  const auto support = j.at("support").get<std::uint64_t>();
  s.entries = Table<Rational>(support);
  s.finite = j.value("finite", true);
  s.label = j.value("label", std::string("user"));
  const auto& entries = j.at("entries");
  if (!entries.is_object()) throw SchemaError("'entries' must map indices to rationals");
  for (const auto& [key, v] : entries.items()) {
    std::uint64_t q = 0;
    try {
      q = std::stoull(key);
    } catch (const std::exception&) {
      throw SchemaError("coefficient index '" + key + "' is not an integer");
    }
    if (q == 0 || q > support) throw SchemaError("coefficient index " + key + " outside 1..support");
    if (v.is_string()) s.entries[q] = Rational::parse(v.get<std::string>());
    else if (v.is_number_integer()) s.entries[q] = Rational(v.get<std::int64_t>());
    else throw SchemaError("coefficient values must be \"p/q\" strings or integers");
  }
  return s;
}

std::string to_string(Purity p) { return p == Purity::pure ? "pure" : "n-dependent"; }

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::user:
      return "user";
    case Provenance::wintner_delange:
      return "wintner-delange";
    case Provenance::zero_ram:
      return "zero-ram";
    case Provenance::zero_har:
      return "zero-har";
    case Provenance::dk_lucht:
      return "dK-lucht";
    case Provenance::fre:
      return "fre";
  }
  return "?";
}

template <Scalar T>
RamanujanExpansion<T> ZeroCloudElement<T>::truncated(std::uint64_t q_cut) const {
  RamanujanExpansion<T> e;
  e.coefficients.label = "zero-cloud";
  e.coefficients.finite = false;
  e.coefficients.entries = Table<T>(q_cut);
  if (is_zero(alpha) && !is_zero(beta)) e.provenance = Provenance::zero_har;
  else e.provenance = Provenance::zero_ram;
  const auto phi_t = Sieve(q_cut).phi_table();
  for (std::uint64_t q = 1; q <= q_cut; ++q) {
    const T qq = from_integer<T>(static_cast<std::int64_t>(q));
    const T ph = from_integer<T>(static_cast<std::int64_t>(phi_t[q]));
    e.coefficients.entries[q] = alpha / qq + beta / ph;
  }
  return e;
}

template <Scalar T>
T evaluate_partial(const RamanujanExpansion<T>& e, std::uint64_t n, std::uint64_t q_cut) {
  if (n == 0) throw DomainError("expansion evaluated at n = 0");
  if (q_cut == 0) return from_integer<T>(0);
  e.coefficients.require(q_cut);
  const auto c = csum_column(n, q_cut);
  Accumulator<T> s;
  for (std::uint64_t q = 1; q <= q_cut; ++q) {
    if (c[q] == 0) continue;
    const T& v = q <= e.coefficients.support() ? e.coefficients.entries[q] : from_integer<T>(0);
    if (!is_zero(v)) s.add(times(v, c[q]));
  }
  return s.value();
}

std::vector<double> zero_cloud_partials(const ZeroCloudElement<double>& z, std::uint64_t n,
                                        const std::vector<std::uint64_t>& cuts) {
  validate_grid(cuts);
  if (n == 0) throw DomainError("zero cloud evaluated at n = 0");
  const std::uint64_t q_max = cuts.back();
  const auto c = csum_column(n, q_max);
  const auto phi_t = Sieve(q_max).phi_table();
  std::vector<double> out;
  CompensatedSum s;
  std::size_t next = 0;
  for (std::uint64_t q = 1; q <= q_max; ++q) {
    if (c[q] != 0) {
      const double coef = z.alpha / static_cast<double>(q) + z.beta / static_cast<double>(phi_t[q]);
      s.add(coef * static_cast<double>(c[q]));
    }
    if (q == cuts[next]) {
      out.push_back(s.value());
      ++next;
    }
  }
  return out;
}

template <Scalar T>
RamanujanExpansion<T> wintner_delange_expansion(const Table<T>& fprime, std::uint64_t cut) {
  RamanujanExpansion<T> e;
  e.coefficients.label = "wintner";
  e.coefficients.entries = wintner_table(fprime, cut);
  e.provenance = Provenance::wintner_delange;
  return e;
}

template <Scalar T>
std::vector<Reconstruction<T>> wintner_delange_reconstruct(const Table<T>& fprime,
                                                           const std::vector<std::uint64_t>& ns,
                                                           std::uint64_t cut) {
  const RamanujanExpansion<T> e = wintner_delange_expansion(fprime, cut);
  std::vector<Reconstruction<T>> out;
  for (std::uint64_t n : ns) {
    Reconstruction<T> r;
    r.n = n;
    r.cut = cut;
    r.value = evaluate_partial(e, n, cut);
    Accumulator<T> target;
    for (std::uint64_t d : divisors(n)) {
      if (d > fprime.size()) {
        throw DomainError("F' available to " + std::to_string(fprime.size()) + ", F(" + std::to_string(n) +
                          ") needs index " + std::to_string(d));
      }
      target.add(fprime[d]);
    }
    r.target = target.value();
    r.error = gap(r.value, r.target);
    out.push_back(std::move(r));
  }
  return out;
}

template <Scalar T>
Reconstruction<T> wintner_delange_reconstruct(const Table<T>& fprime, std::uint64_t n, std::uint64_t cut) {
  return wintner_delange_reconstruct(fprime, std::vector<std::uint64_t>{n}, cut).front();
}

template <Scalar T>
LuchtCheck<T> lucht_evaluate(const CoefficientSeq<T>& fhat, std::uint64_t a, std::uint64_t cut) {
  if (a == 0) throw DomainError("Lucht evaluation needs a >= 1");
  LuchtCheck<T> r;
  if (cut == 0) {
    r.equal = true;
    return r;
  }
  fhat.require(cut);
  const auto c = csum_column(a, cut);
  Accumulator<T> lhs;
  for (std::uint64_t q = 1; q <= cut; ++q) {
    if (c[q] == 0) continue;
    const T v = fhat.at(q);
    if (!is_zero(v)) lhs.add(times(v, c[q]));
  }
  const auto mu_t = Sieve(cut).mu_table();
  Accumulator<T> rhs;
  for (std::uint64_t d : divisors(a)) {
    if (d > cut) break;
    Accumulator<T> inner;
    for (std::uint64_t k = 1; k * d <= cut; ++k) {
      if (mu_t[k] == 0) continue;
      const T v = fhat.at(d * k);
      if (!is_zero(v)) inner.add(times(v, mu_t[k]));
    }
    rhs.add(times(inner.value(), static_cast<std::int64_t>(d)));
  }
  r.lhs = lhs.value();
  r.rhs = rhs.value();
  if constexpr (std::same_as<T, double>) {
    r.equal = std::fabs(r.lhs - r.rhs) <= 1e-12 * std::max(1.0, std::fabs(r.lhs));
  } else {
    r.equal = r.lhs == r.rhs;
  }
  return r;
}

LuchtSweep lucht_sweep(const CoefficientSeq<Rational>& fhat, std::uint64_t a, std::uint64_t cut) {
  if (a == 0) throw DomainError("Lucht evaluation needs a >= 1");
  fhat.require(cut);
  LuchtSweep r;
  r.a = a;
  const auto c = csum_column(a, cut);
  const auto mu_t = Sieve(cut).mu_table();
  const auto divs = divisors(a);
  Rational lhs(0), rhs(0);
  for (std::uint64_t x = 1; x <= cut; ++x) {
    const Rational v = fhat.at(x);
    if (!v.is_zero()) {
      if (c[x] != 0) lhs += v * Rational(c[x]);
      for (std::uint64_t d : divs) {
        if (d > x) break;
        if (x % d == 0 && mu_t[x / d] != 0) rhs += v * Rational(static_cast<std::int64_t>(d) * mu_t[x / d]);
      }
    }
    ++r.cuts;
    if (!(lhs == rhs)) {
      r.mismatch = x;
      break;
    }
  }
  return r;
}

Theorem4Result theorem4_inversion(const CoefficientSeq<Rational>& fhat) {
  if (!fhat.finite) {
    throw PreconditionError("coefficient inversion is implemented for finite support only");
  }
  Theorem4Result r;
  r.fprime = fre_to_tds(FiniteExpansion(fhat.entries)).fprime;
  r.wintner = fhat.support() == 0 ? Table<Rational>{} : wintner_table(r.fprime, fhat.support());
  r.roundtrip = r.wintner == fhat.entries;
  return r;
}

LimitEstimate carmichael_formula_check(const RamanujanExpansion<Rational>& e, std::uint64_t ell,
                                       const std::vector<std::uint64_t>& grid, double tol) {
  if (e.purity != Purity::pure) {
    throw PreconditionError("Carmichael formula needs a pure expansion; coefficients depend on n");
  }
  if (!e.coefficients.finite) {
    throw PreconditionError("Carmichael formula check needs a finite (uniformly convergent) expansion");
  }
  validate_grid(grid);
  const TruncatedDivisorSum t = fre_to_tds(FiniteExpansion(e.coefficients.entries));
  const LimitPolicy policy{tol, 0.0, e.coefficients.at(ell).to_double()};
  return carmichael_estimate(t.tabulate(grid.back()), ell, grid, policy);
}

template <Scalar T>
StandardFre<T> standard_fre(const Table<T>& f, std::uint64_t n) {
  if (n == 0) throw DomainError("standard expansion needs n >= 1");
  if (f.size() < n) {
    throw DomainError("F available to " + std::to_string(f.size()) + ", need " + std::to_string(n));
  }
  StandardFre<T> r;
  r.n = n;
  const Table<T> fp = mobius_transform(f.prefix(n));
  r.coefficients = wintner_table(fp, n);
  RamanujanExpansion<T> e;
  e.coefficients.entries = r.coefficients;
  e.purity = Purity::n_dependent;
  r.reconstruction = evaluate_partial(e, n, n);
  r.value = f[n];
  if constexpr (std::same_as<T, double>) {
    r.exact = std::fabs(r.reconstruction - r.value) <= 1e-9 * std::max(1.0, std::fabs(r.value));
  } else {
    r.exact = r.reconstruction == r.value;
  }
  return r;
}

StandardFreSweep standard_fre_sweep(const Table<Rational>& f, std::uint64_t n_max) {
  if (f.size() < n_max) {
    throw DomainError("F available to " + std::to_string(f.size()) + ", need " + std::to_string(n_max));
  }
  StandardFreSweep r;
  r.n_max = n_max;
  if (n_max == 0) return r;
  const Table<Rational> fp = mobius_transform(f.prefix(n_max));
  const RamanujanSumTable c(n_max, n_max);
  Table<Rational> coef(n_max);
  for (std::uint64_t n = 1; n <= n_max; ++n) {
    if (!fp[n].is_zero()) {
      const Rational step = fp[n] / Rational(static_cast<std::int64_t>(n));
      for (std::uint64_t l : divisors(n)) coef[l] += step;
    }
    Rational s(0);
    for (std::uint64_t l = 1; l <= n; ++l) {
      const std::int64_t cl = c.at(l, n);
      if (cl != 0 && !coef[l].is_zero()) s += coef[l] * Rational(cl);
    }
    ++r.checked;
    if (!(s == f[n])) r.mismatches.push_back(n);
  }
  return r;
}

Rational inner_series_closed_form(int k, std::uint64_t p, int ell) {
  if (k < 1 || ell < 0 || p < 2) throw DomainError("inner series needs K >= 1, p >= 2, l >= 0");
  const auto pk = static_cast<std::int64_t>(p);
  // sum over lambda >= 0 of C(K+lambda-1, K-1) x^lambda = (1-x)^(-K), x = 1/p.
  Rational head(0);
  for (int lam = 0; lam < ell; ++lam) {
    head += Rational(static_cast<std::int64_t>(binomial(static_cast<std::uint64_t>(k + lam - 1),
                                                        static_cast<std::uint64_t>(k - 1)))) /
            pow(Rational(pk), lam);
  }
  return pow(Rational(pk), ell) * (pow(Rational(pk, pk - 1), k) - head);
}

double inner_series_partial(int k, std::uint64_t p, int ell, int terms) {
  if (k < 1 || ell < 0 || p < 2 || terms < 1) throw DomainError("inner series needs K >= 1, p >= 2, l >= 0");
  // t(lambda) = C(K+lambda-1, K-1) p^(l-lambda); t(l+1)/t(l) = (K+l)/((l+1) p).
  double t = static_cast<double>(binomial(static_cast<std::uint64_t>(k + ell - 1), static_cast<std::uint64_t>(k - 1)));
  CompensatedSum s;
  const auto pd = static_cast<double>(p);
  for (int i = 0; i < terms; ++i) {
    s.add(t);
    const int lam = ell + i;
    t *= static_cast<double>(k + lam) / (static_cast<double>(lam + 1) * pd);
  }
  return s.value();
}

DkCoefficient dk_coefficient(std::uint64_t q, int k) {
  if (q == 0 || k < 1) throw DomainError("d_K coefficient needs q >= 1 and K >= 1");
  DkCoefficient r;
  r.q = q;
  r.k = k;
  Rational local(1);
  for (const auto& [p, e] : factor(q).factors) {
    const auto pk = static_cast<std::int64_t>(p);
    local *= pow(Rational(pk - 1, pk), k) * inner_series_closed_form(k, p, e);
  }
  std::int64_t fact = 1;
  for (int i = 2; i <= k; ++i) fact *= i;
  const Rational sign(k % 2 == 0 ? 1 : -1);
  r.rational = sign / (Rational(fact) * Rational(static_cast<std::int64_t>(q)) * local);
  const double lg = std::log(static_cast<double>(q));
  double lk = 1.0;
  for (int i = 0; i < k; ++i) lk *= lg;
  r.value = r.rational.to_double() * lk;
  return r;
}

RamanujanExpansion<double> dk_expansion(int divisor_k, std::uint64_t q_cut) {
  if (divisor_k < 2) throw DomainError("d_K expansion needs K >= 2");
  RamanujanExpansion<double> e;
  e.coefficients.label = "d_" + std::to_string(divisor_k);
  e.coefficients.finite = false;
  e.coefficients.entries = Table<double>(q_cut);
  for (std::uint64_t q = 1; q <= q_cut; ++q) e.coefficients.entries[q] = dk_coefficient(q, divisor_k - 1).value;
  e.provenance = Provenance::dk_lucht;
  return e;
}

#define RLAB_INSTANTIATE(T)                                                                                    \
  template struct CoefficientSeq<T>;                                                                           \
  template struct ZeroCloudElement<T>;                                                                         \
  template T evaluate_partial<T>(const RamanujanExpansion<T>&, std::uint64_t, std::uint64_t);                  \
  template RamanujanExpansion<T> wintner_delange_expansion<T>(const Table<T>&, std::uint64_t);                 \
  template Reconstruction<T> wintner_delange_reconstruct<T>(const Table<T>&, std::uint64_t, std::uint64_t);    \
  template std::vector<Reconstruction<T>> wintner_delange_reconstruct<T>(                                      \
      const Table<T>&, const std::vector<std::uint64_t>&, std::uint64_t);                                      \
  template LuchtCheck<T> lucht_evaluate<T>(const CoefficientSeq<T>&, std::uint64_t, std::uint64_t);            \
  template StandardFre<T> standard_fre<T>(const Table<T>&, std::uint64_t);

RLAB_INSTANTIATE(Rational)
RLAB_INSTANTIATE(double)

#undef RLAB_INSTANTIATE

}  // namespace rlab
