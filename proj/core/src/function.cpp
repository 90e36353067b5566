#include "rlab/function.hpp"

#include <cmath>
#include <utility>

#include "rlab/arith.hpp"
#include "rlab/dirichlet.hpp"
#include "rlab/errors.hpp"

namespace rlab {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

struct NameEntry {
  BuiltinName name;
  const char* text;
};

constexpr NameEntry kNames[] = {
    {BuiltinName::one, "one"},
    {BuiltinName::id, "id"},
    {BuiltinName::mu, "mu"},
    {BuiltinName::phi, "phi"},
    {BuiltinName::liouville, "lambda"},
    {BuiltinName::von_mangoldt, "vonMangoldt"},
    {BuiltinName::divisor_k, "d_K"},
    {BuiltinName::square_indicator, "indicator-squares"},
};

BuiltinName parse_name(const std::string& s) {
  for (const auto& e : kNames) {
    if (s == e.text) return e.name;
  }
  throw SchemaError("unknown builtin function '" + s + "'");
}

bool is_square(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r * r == n;
}

std::int64_t builtin_integer(BuiltinName name, int k, std::uint64_t n) {
  switch (name) {
    case BuiltinName::one:
      return 1;
    case BuiltinName::id:
      return static_cast<std::int64_t>(n);
    case BuiltinName::mu:
      return mu(n);
    case BuiltinName::phi:
      return static_cast<std::int64_t>(phi(n));
    case BuiltinName::liouville:
      return liouville(n);
    case BuiltinName::divisor_k:
      return static_cast<std::int64_t>(divisor_k(n, k));
    case BuiltinName::square_indicator:
      return is_square(n) ? 1 : 0;
    case BuiltinName::von_mangoldt:
      break;
  }
  throw PreconditionError("vonMangoldt has no exact values");
}

const char* tail_text(TableTail t) { return t == TableTail::zero ? "zero" : "error"; }

TableTail parse_tail(const nlohmann::json& j) {
  if (!j.contains("after")) return TableTail::error;
  const auto s = j.at("after").get<std::string>();
  if (s == "zero") return TableTail::zero;
  if (s == "error") return TableTail::error;
  throw SchemaError("table 'after' must be \"zero\" or \"error\", got '" + s + "'");
}

}  // namespace

std::string to_string(BuiltinName name) {
  for (const auto& e : kNames) {
    if (e.name == name) return e.text;
  }
  return "?";
}

ArithmeticFunction ArithmeticFunction::builtin(BuiltinName name, int k) {
  if (name == BuiltinName::divisor_k) {
    if (k < 1) throw DomainError("d_K requires K >= 1");
  } else {
    k = 0;
  }
  return ArithmeticFunction(Builtin{name, k});
}

ArithmeticFunction ArithmeticFunction::table(std::vector<Rational> values, TableTail tail) {
  return ArithmeticFunction(ExactTable{std::move(values), tail});
}

ArithmeticFunction ArithmeticFunction::real_table(std::vector<double> values, TableTail tail) {
  return ArithmeticFunction(RealTable{std::move(values), tail});
}

ArithmeticFunction ArithmeticFunction::tds(std::uint64_t range, ArithmeticFunction fprime) {
  if (range == 0) throw DomainError("t.d.s. range must be >= 1");
  if (auto b = fprime.domain_bound(); b && *b < range) {
    throw DomainError("t.d.s. F' defined only to " + std::to_string(*b) + ", range is " +
                      std::to_string(range));
  }
  return ArithmeticFunction(Tds{range, std::make_shared<const ArithmeticFunction>(std::move(fprime))});
}

ArithmeticFunction ArithmeticFunction::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind")) throw SchemaError("function spec needs a 'kind'");
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "builtin") {
    const BuiltinName name = parse_name(j.at("name").get<std::string>());
    int k = 0;
    if (name == BuiltinName::divisor_k) {
      if (!j.contains("K")) throw SchemaError("d_K needs an integer 'K'");
      k = j.at("K").get<int>();
    }
    return builtin(name, k);
  }
  if (kind == "table") {
    const auto& vals = j.at("values");
    if (!vals.is_array()) throw SchemaError("table 'values' must be an array");
    bool real = false;
    for (const auto& v : vals) {
      if (v.is_number_float()) real = true;
      else if (!v.is_string() && !v.is_number_integer()) throw SchemaError("table entries must be strings or numbers");
    }
    const TableTail tail = parse_tail(j);
    if (real) {
      std::vector<double> out;
      for (const auto& v : vals) {
        out.push_back(v.is_string() ? Rational::parse(v.get<std::string>()).to_double() : v.get<double>());
      }
      return real_table(std::move(out), tail);
    }
    std::vector<Rational> out;
    for (const auto& v : vals) {
      out.push_back(v.is_string() ? Rational::parse(v.get<std::string>()) : Rational(v.get<std::int64_t>()));
    }
    return table(std::move(out), tail);
  }
  if (kind == "tds") {
    const auto range = j.at("range").get<std::uint64_t>();
    return tds(range, from_json(j.at("fprime")));
  }
  throw SchemaError("unknown function kind '" + kind + "'");
}

nlohmann::json ArithmeticFunction::to_json() const {
  return std::visit(
      Overloaded{
          [](const Builtin& b) {
            nlohmann::json j{{"kind", "builtin"}, {"name", to_string(b.name)}};
            if (b.name == BuiltinName::divisor_k) j["K"] = b.k;
            return j;
          },
          [](const ExactTable& t) {
            nlohmann::json vals = nlohmann::json::array();
            for (const auto& v : t.values) vals.push_back(v.str());
            return nlohmann::json{{"kind", "table"}, {"values", vals}, {"after", tail_text(t.tail)}};
          },
          [](const RealTable& t) {
            return nlohmann::json{{"kind", "table"}, {"values", t.values}, {"after", tail_text(t.tail)}};
          },
          [](const Tds& t) {
            return nlohmann::json{{"kind", "tds"}, {"range", t.range}, {"fprime", t.fprime->to_json()}};
          },
      },
      kind_);
}

bool ArithmeticFunction::exact() const {
  return std::visit(Overloaded{
                        [](const Builtin& b) { return b.name != BuiltinName::von_mangoldt; },
                        [](const ExactTable&) { return true; },
                        [](const RealTable&) { return false; },
                        [](const Tds& t) { return t.fprime->exact(); },
                    },
                    kind_);
}

std::optional<std::uint64_t> ArithmeticFunction::domain_bound() const {
  return std::visit(Overloaded{
                        [](const Builtin&) -> std::optional<std::uint64_t> { return std::nullopt; },
                        [](const ExactTable& t) -> std::optional<std::uint64_t> {
                          if (t.tail == TableTail::zero) return std::nullopt;
                          return t.values.size();
                        },
                        [](const RealTable& t) -> std::optional<std::uint64_t> {
                          if (t.tail == TableTail::zero) return std::nullopt;
                          return t.values.size();
                        },
                        [](const Tds&) -> std::optional<std::uint64_t> { return std::nullopt; },
                    },
                    kind_);
}

bool ArithmeticFunction::essentially_bounded() const {
  return std::visit(Overloaded{
                        [](const Builtin& b) {
                          return b.name != BuiltinName::id && b.name != BuiltinName::phi;
                        },
                        [](const ExactTable& t) { return t.tail == TableTail::zero; },
                        [](const RealTable& t) { return t.tail == TableTail::zero; },
                        [](const Tds&) { return false; },
                    },
                    kind_);
}

std::string ArithmeticFunction::describe() const {
  return std::visit(
      Overloaded{
          [](const Builtin& b) {
            return b.name == BuiltinName::divisor_k ? "d_" + std::to_string(b.k) : to_string(b.name);
          },
          [](const ExactTable& t) { return "table[" + std::to_string(t.values.size()) + "]"; },
          [](const RealTable& t) { return "real-table[" + std::to_string(t.values.size()) + "]"; },
          [](const Tds& t) { return "tds(Q=" + std::to_string(t.range) + ", " + t.fprime->describe() + ")"; },
      },
      kind_);
}

void ArithmeticFunction::check_domain(std::uint64_t n) const {
  if (n == 0) throw DomainError("arithmetic functions are defined on n >= 1");
  if (auto b = domain_bound(); b && n > *b) {
    throw DomainError(describe() + " evaluated at n = " + std::to_string(n) + " past its bound " +
                      std::to_string(*b));
  }
}

Rational ArithmeticFunction::exact_value(std::uint64_t n) const {
  check_domain(n);
  return std::visit(Overloaded{
                        [n](const Builtin& b) { return Rational(builtin_integer(b.name, b.k, n)); },
                        [n](const ExactTable& t) {
                          return n <= t.values.size() ? t.values[n - 1] : Rational(0);
                        },
                        [](const RealTable&) -> Rational {
                          throw PreconditionError("real-valued table has no exact values");
                        },
                        [n](const Tds& t) {
                          Rational s(0);
                          for (std::uint64_t d : divisors(n)) {
                            if (d > t.range) break;
                            s += t.fprime->exact_value(d);
                          }
                          return s;
                        },
                    },
                    kind_);
}

double ArithmeticFunction::real_value(std::uint64_t n) const {
  check_domain(n);
  return std::visit(Overloaded{
                        [n](const Builtin& b) {
                          if (b.name == BuiltinName::von_mangoldt) return von_mangoldt(n);
                          return static_cast<double>(builtin_integer(b.name, b.k, n));
                        },
                        [n](const ExactTable& t) {
                          return n <= t.values.size() ? t.values[n - 1].to_double() : 0.0;
                        },
                        [n](const RealTable& t) { return n <= t.values.size() ? t.values[n - 1] : 0.0; },
                        [n](const Tds& t) {
                          CompensatedSum s;
                          for (std::uint64_t d : divisors(n)) {
                            if (d > t.range) break;
                            s.add(t.fprime->real_value(d));
                          }
                          return s.value();
                        },
                    },
                    kind_);
}

template <Scalar T>
Table<T> ArithmeticFunction::tabulate(std::uint64_t n_max) const {
  if constexpr (std::same_as<T, Rational>) {
    if (!exact()) throw PreconditionError(describe() + " is not exact-valued");
  }
  if (auto b = domain_bound(); b && n_max > *b) {
    throw DomainError(describe() + " tabulated to " + std::to_string(n_max) + " past its bound " +
                      std::to_string(*b) + " (missing index " + std::to_string(*b + 1) + ")");
  }
  Table<T> out(n_max);
  if (n_max == 0) return out;

  if (const auto* b = std::get_if<Builtin>(&kind_)) {
    auto fill = [&](auto&& value_of) {
      for (std::uint64_t n = 1; n <= n_max; ++n) out[n] = value_of(n);
    };
    switch (b->name) {
      case BuiltinName::one:
        fill([](std::uint64_t) { return from_integer<T>(1); });
        break;
      case BuiltinName::id:
        fill([](std::uint64_t n) { return from_integer<T>(static_cast<std::int64_t>(n)); });
        break;
      case BuiltinName::square_indicator:
        for (std::uint64_t r = 1; r * r <= n_max; ++r) out[r * r] = from_integer<T>(1);
        break;
      case BuiltinName::mu: {
        const auto t = Sieve(n_max).mu_table();
        fill([&](std::uint64_t n) { return from_integer<T>(t[n]); });
        break;
      }
      case BuiltinName::phi: {
        const auto t = Sieve(n_max).phi_table();
        fill([&](std::uint64_t n) { return from_integer<T>(static_cast<std::int64_t>(t[n])); });
        break;
      }
      case BuiltinName::liouville: {
        const auto t = Sieve(n_max).liouville_table();
        fill([&](std::uint64_t n) { return from_integer<T>(t[n]); });
        break;
      }
      case BuiltinName::divisor_k: {
        const auto t = Sieve(n_max).divisor_k_table(b->k);
        fill([&](std::uint64_t n) { return from_integer<T>(static_cast<std::int64_t>(t[n])); });
        break;
      }
      case BuiltinName::von_mangoldt: {
        if constexpr (std::same_as<T, double>) {
          const Sieve s(n_max);
          for (std::uint64_t n = 2; n <= n_max; ++n) {
            const std::uint64_t p = s.smallest_prime_factor(n);
            std::uint64_t m = n;
            while (m % p == 0) m /= p;
            if (m == 1) out[n] = std::log(static_cast<double>(p));
          }
        }
        break;
      }
    }
    return out;
  }
  if (const auto* t = std::get_if<Tds>(&kind_)) {
    const std::uint64_t top = std::min(t->range, n_max);
    const Table<T> fp = t->fprime->tabulate<T>(top);
    for (std::uint64_t d = 1; d <= top; ++d) {
      if (is_zero(fp[d])) continue;
      for (std::uint64_t m = d; m <= n_max; m += d) out[m] += fp[d];
    }
    return out;
  }
  for (std::uint64_t n = 1; n <= n_max; ++n) out[n] = value<T>(n);
  return out;
}

template Table<Rational> ArithmeticFunction::tabulate<Rational>(std::uint64_t) const;
template Table<double> ArithmeticFunction::tabulate<double>(std::uint64_t) const;

ArithmeticFunction dirichlet_convolve(const ArithmeticFunction& f, const ArithmeticFunction& g,
                                      std::uint64_t bound) {
  if (f.exact() && g.exact()) {
    return ArithmeticFunction::from_table(
        dirichlet_convolve(f.tabulate<Rational>(bound), g.tabulate<Rational>(bound)));
  }
  return ArithmeticFunction::from_table(
      dirichlet_convolve(f.tabulate<double>(bound), g.tabulate<double>(bound)));
}

}  // namespace rlab
