#include "rlab/finite_re.hpp"

#include <cmath>

#include "rlab/arith.hpp"
#include "rlab/errors.hpp"
#include "rlab/ramanujan_sum.hpp"

namespace rlab {

namespace {

std::uint64_t last_nonzero(const Table<Rational>& t) {
  for (std::uint64_t i = t.size(); i >= 1; --i) {
    if (!t[i].is_zero()) return i;
  }
  return 0;
}

bool same_normalized(const Table<Rational>& a, const Table<Rational>& b) {
  const std::uint64_t n = last_nonzero(a);
  if (n != last_nonzero(b)) return false;
  for (std::uint64_t i = 1; i <= n; ++i) {
    if (!(a[i] == b[i])) return false;
  }
  return true;
}

}  // namespace

nlohmann::json rational_table_json(const Table<Rational>& t) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& v : t.values()) out.push_back(v.str());
  return out;
}

Table<Rational> rational_table_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw SchemaError("expected an array of rationals");
  std::vector<Rational> out;
  for (const auto& v : j) {
    if (v.is_string()) out.push_back(Rational::parse(v.get<std::string>()));
    else if (v.is_number_integer()) out.emplace_back(v.get<std::int64_t>());
    else throw SchemaError("rational entries must be \"p/q\" strings or integers");
  }
  return Table<Rational>(std::move(out));
}

TruncatedDivisorSum::TruncatedDivisorSum(Table<Rational> fp) : range(fp.size()), fprime(std::move(fp)) {}

Rational TruncatedDivisorSum::evaluate(std::uint64_t n) const {
  if (n == 0) throw DomainError("t.d.s. evaluated at n = 0");
  Rational s(0);
  for (std::uint64_t d : divisors(n)) {
    if (d > range) break;
    if (!fprime[d].is_zero()) s += fprime[d];
  }
  return s;
}

std::uint64_t TruncatedDivisorSum::normalized_range() const { return last_nonzero(fprime); }

Table<Rational> TruncatedDivisorSum::tabulate(std::uint64_t n_max) const {
  Table<Rational> out(n_max);
  for (std::uint64_t d = 1; d <= std::min<std::uint64_t>(range, n_max); ++d) {
    if (fprime[d].is_zero()) continue;
    for (std::uint64_t m = d; m <= n_max; m += d) out[m] += fprime[d];
  }
  return out;
}

nlohmann::json TruncatedDivisorSum::to_json() const {
  return {{"range", range}, {"fprime", rational_table_json(fprime)}};
}

TruncatedDivisorSum TruncatedDivisorSum::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("fprime")) throw SchemaError("t.d.s. needs 'fprime'");
  Table<Rational> fp = rational_table_from_json(j.at("fprime"));
  if (j.contains("range")) {
    const auto q = j.at("range").get<std::uint64_t>();
    if (q < fp.size()) throw SchemaError("t.d.s. 'range' shorter than 'fprime'");
    fp.mutable_values().resize(q, Rational(0));
  }
  return TruncatedDivisorSum(std::move(fp));
}

bool operator==(const TruncatedDivisorSum& a, const TruncatedDivisorSum& b) {
  return same_normalized(a.fprime, b.fprime);
}

FiniteExpansion::FiniteExpansion(Table<Rational> fh) : range(fh.size()), fhat(std::move(fh)) {}

Rational FiniteExpansion::evaluate(std::uint64_t n) const {
  if (n == 0) throw DomainError("expansion evaluated at n = 0");
  Rational s(0);
  for (std::uint64_t q = 1; q <= range; ++q) {
    if (fhat[q].is_zero()) continue;
    const std::int64_t c = csum(q, static_cast<std::int64_t>(n));
    if (c != 0) s += fhat[q] * Rational(c);
  }
  return s;
}

std::uint64_t FiniteExpansion::normalized_range() const { return last_nonzero(fhat); }

Table<Rational> FiniteExpansion::tabulate(std::uint64_t n_max) const {
  mpz_class den = 1;
  for (const auto& v : fhat.values()) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), v.denominator().get_mpz_t());
  std::vector<mpz_class> scaled;
  scaled.reserve(range);
  for (const auto& v : fhat.values()) scaled.push_back(v.numerator() * (den / v.denominator()));
  std::vector<mpz_class> acc(n_max, 0);
  std::vector<std::int64_t> period;
  for (std::uint64_t q = 1; q <= range; ++q) {
    if (scaled[q - 1] == 0) continue;
    const RamanujanSum c(q);
    period.resize(q);
    for (std::uint64_t r = 0; r < q; ++r) period[r] = c(static_cast<std::int64_t>(r));
    for (std::uint64_t n = 1; n <= n_max; ++n) {
      const std::int64_t v = period[n % q];
      if (v > 0) acc[n - 1] += scaled[q - 1] * static_cast<unsigned long>(v);
      else if (v < 0) acc[n - 1] -= scaled[q - 1] * static_cast<unsigned long>(-v);
    }
  }
  Table<Rational> out(n_max);
  for (std::uint64_t n = 1; n <= n_max; ++n) out[n] = Rational(mpq_class(acc[n - 1], den));
  return out;
}

nlohmann::json FiniteExpansion::to_json() const {
  return {{"range", range}, {"fhat", rational_table_json(fhat)}};
}

FiniteExpansion FiniteExpansion::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("fhat")) throw SchemaError("finite expansion needs 'fhat'");
  Table<Rational> fh = rational_table_from_json(j.at("fhat"));
  if (j.contains("range")) {
    const auto q = j.at("range").get<std::uint64_t>();
    if (q < fh.size()) throw SchemaError("expansion 'range' shorter than 'fhat'");
    fh.mutable_values().resize(q, Rational(0));
  }
  return FiniteExpansion(std::move(fh));
}

bool operator==(const FiniteExpansion& a, const FiniteExpansion& b) { return same_normalized(a.fhat, b.fhat); }

FiniteExpansion tds_to_fre(const TruncatedDivisorSum& t) {
  if (t.range == 0) return FiniteExpansion{};
  return FiniteExpansion(wintner_table(t.fprime, t.range));
}

TruncatedDivisorSum fre_to_tds(const FiniteExpansion& e) {
  const std::uint64_t q_cut = e.range;
  if (q_cut == 0) return TruncatedDivisorSum{};
  const auto mu_t = Sieve(q_cut).mu_table();
  Table<Rational> fp(q_cut);
  for (std::uint64_t d = 1; d <= q_cut; ++d) {
    Rational s(0);
    for (std::uint64_t k = 1; k * d <= q_cut; ++k) {
      if (mu_t[k] == 0 || e.fhat[d * k].is_zero()) continue;
      if (mu_t[k] > 0) s += e.fhat[d * k];
      else s -= e.fhat[d * k];
    }
    fp[d] = s * Rational(static_cast<std::int64_t>(d));
  }
  return TruncatedDivisorSum(std::move(fp));
}

TruncatedDivisorSum truncate(const Table<Rational>& fprime, std::uint64_t q_cut) {
  return TruncatedDivisorSum(fprime.prefix(q_cut));
}

HighCoefficientReport high_coefficient_check(const Table<Rational>& fprime, std::uint64_t q_cut) {
  if (q_cut == 0) throw DomainError("property H needs Q >= 1");
  const FiniteExpansion e = tds_to_fre(truncate(fprime, q_cut));
  HighCoefficientReport r;
  r.q_cut = q_cut;
  for (std::uint64_t q = q_cut / 2 + 1; q <= q_cut; ++q) {
    ++r.checked;
    if (!(e.fhat[q] == fprime[q] / Rational(static_cast<std::int64_t>(q)))) r.violations.push_back(q);
  }
  return r;
}

std::string to_string(LowVerdict v) {
  switch (v) {
    case LowVerdict::consistent:
      return "consistent";
    case LowVerdict::inconsistent:
      return "inconsistent";
    case LowVerdict::no_hint:
      return "no-hint";
  }
  return "?";
}

LowCoefficientReport low_coefficient_report(const Table<double>& fprime, std::uint64_t q_cut, std::uint64_t q0,
                                            std::optional<DecayHint> hint, bool support_in_table) {
  if (q0 == 0 || q0 > q_cut) throw DomainError("property L needs 1 <= Q0 <= Q");
  if (fprime.size() < q_cut) {
    throw DomainError("F' available to " + std::to_string(fprime.size()) + ", need Q = " + std::to_string(q_cut));
  }
  LowCoefficientReport r;
  r.q_cut = q_cut;
  r.q0 = q0;
  r.deep_cut = fprime.size();
  const bool bounded = support_in_table || hint.has_value();
  bool all_within = true;
  for (std::uint64_t q = 1; q <= q0; ++q) {
    LowCoefficientRow row;
    row.q = q;
    row.truncated = wintner_coefficient(fprime, q, q_cut).partial;
    row.wintner = wintner_coefficient(fprime, q, r.deep_cut).partial;
    const double diff = std::fabs(row.truncated - row.wintner);
    const double scale = std::fabs(row.wintner);
    row.relative_difference = scale > 0.0 ? diff / scale : diff;
    if (bounded) {
      if (support_in_table) {
        CompensatedSum tail;
        for (std::uint64_t d = (q_cut / q + 1) * q; d <= r.deep_cut; d += q) {
          tail.add(std::fabs(fprime[d]) / static_cast<double>(d));
        }
        row.tail_bound = tail.value();
      } else {
        // |truncated - Win| <= tail(Q) and |deep - Win| <= tail(deep).
        row.tail_bound = wintner_tail_bound(q, q_cut, *hint) + wintner_tail_bound(q, r.deep_cut, *hint);
      }
      row.relative_bound = scale > 0.0 ? row.tail_bound / scale : row.tail_bound;
      const double slack = 1e-12 * std::max(1.0, scale);
      all_within = all_within && diff <= row.tail_bound + slack;
    }
    r.rows.push_back(row);
  }
  if (bounded) r.verdict = all_within ? LowVerdict::consistent : LowVerdict::inconsistent;
  return r;
}

}  // namespace rlab
