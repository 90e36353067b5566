#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "rlab/arith.hpp"
#include "rlab/dirichlet.hpp"
#include "rlab/errors.hpp"
#include "rlab/expansions.hpp"
#include "rlab/finite_re.hpp"
#include "rlab/function.hpp"
#include "rlab/lab.hpp"
#include "rlab/ramanujan_sum.hpp"
#include "rlab/shift_re.hpp"
#include "rlab/transforms.hpp"

using namespace rlab;
using nlohmann::json;

namespace {

struct Globals {
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "csv";
  double tol = 1e-3;
  std::uint64_t cap_x = ResourceCaps{}.max_x;
  std::uint64_t cap_d = ResourceCaps{}.max_d;
};

Globals g;
int status = 0;

constexpr int exit_fail = 1;
constexpr int exit_usage = 2;

std::uint64_t cap_x(std::uint64_t x) {
  if (x > g.cap_x) throw ResourceError("x = " + std::to_string(x) + " exceeds --cap-x " + std::to_string(g.cap_x));
  return x;
}

std::uint64_t cap_d(std::uint64_t d) {
  if (d > g.cap_d) throw ResourceError("D = " + std::to_string(d) + " exceeds --cap-d " + std::to_string(g.cap_d));
  return d;
}

std::vector<std::uint64_t> parse_grid(const std::string& text, const std::string& flag);

// Lets integer flags take 1e5 as well as 100000.
const CLI::Validator scientific(
    [](std::string& text) -> std::string {
      if (text.find_first_of("eE") == std::string::npos) return {};
      char* end = nullptr;
      const double v = std::strtod(text.c_str(), &end);
      if (end == text.c_str() || *end != '\0' || v < 0 || v != std::floor(v) || v > 1e18) {
        return "expected a non-negative integer, got " + text;
      }
      text = std::to_string(static_cast<std::uint64_t>(v));
      return {};
    },
    "", "scientific");

std::vector<std::uint64_t> cap_grid(const std::string& text, const std::string& flag) {
  auto grid = parse_grid(text, flag);
  cap_x(grid.back());
  return grid;
}

json read_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot read " + path);
  try {
    return json::parse(f);
  } catch (const json::exception& e) {
    throw SchemaError(path + ": " + e.what());
  }
}

// Accepts inline JSON, a path to a JSON file, or a builtin name ("mu", "d_3").
ArithmeticFunction parse_function(const std::string& spec) {
  json j;
  if (!spec.empty() && spec.front() == '{') {
    try {
      j = json::parse(spec);
    } catch (const json::exception& e) {
      throw SchemaError(std::string("function spec: ") + e.what());
    }
  } else if (std::filesystem::exists(spec)) {
    j = read_json(spec);
  } else if (spec.rfind("d_", 0) == 0 && spec.size() > 2 && spec != "d_K") {
    j = {{"kind", "builtin"}, {"name", "d_K"}, {"K", std::stoi(spec.substr(2))}};
  } else {
    j = {{"kind", "builtin"}, {"name", spec}};
  }
  try {
    return ArithmeticFunction::from_json(j);
  } catch (const json::exception& e) {
    throw SchemaError(std::string("function spec: ") + e.what());
  } catch (const DomainError& e) {
    throw SchemaError(std::string("function spec: ") + e.what());
  }
}

void output(const ResultTable& t) {
  const OutputFormat f = parse_output_format(g.format);
  if (g.out.empty()) {
    emit(t, f, std::cout);
  } else {
    std::cout << emit(t, f, g.out) << '\n';
  }
}

void record(bool ok) {
  if (!ok) status = exit_fail;
}

Column icol(std::string n) { return {std::move(n), ColumnType::integer}; }
Column qcol(std::string n) { return {std::move(n), ColumnType::rational}; }
Column rcol(std::string n) { return {std::move(n), ColumnType::real}; }
Column tcol(std::string n) { return {std::move(n), ColumnType::text}; }
Cell ic(std::uint64_t v) { return static_cast<std::int64_t>(v); }
Cell bc(bool b) { return std::string(b ? "pass" : "fail"); }

std::vector<double> split_numbers(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw SchemaError(flag + ": '" + item + "' is not a number");
    }
  }
  return out;
}

// "1e4,1e5,1e6" -> {10000, 100000, 1000000}
std::vector<std::uint64_t> parse_grid(const std::string& text, const std::string& flag) {
  std::vector<std::uint64_t> grid;
  for (double v : split_numbers(text, flag)) {
    if (v < 1 || v != std::floor(v) || v > 1e18) throw SchemaError(flag + ": grid points must be positive integers");
    grid.push_back(static_cast<std::uint64_t>(v));
  }
  if (grid.empty()) throw SchemaError(flag + ": empty grid");
  try {
    validate_grid(grid);
  } catch (const DomainError& e) {
    throw SchemaError(flag + ": " + e.what());
  }
  return grid;
}

std::optional<DecayHint> parse_decay(const std::string& text) {
  if (text.empty()) return std::nullopt;
  const auto v = split_numbers(text, "--decay");
  if (v.size() != 2) throw SchemaError("--decay takes C,s");
  return DecayHint{v[0], v[1]};
}

// ---------------------------------------------------------------- commands

struct Options {
  // csum
  std::uint64_t q = 1;
  std::int64_t n = 1;
  std::uint64_t qmax = 6;
  std::uint64_t nmax = 6;
  // function-based commands
  std::string function = "one";
  std::string gfunction = "one";
  std::uint64_t bound = 100;
  std::uint64_t cut = 1000;
  std::string form;
  std::string grid = "1e3,1e4,1e5";
  std::string decay;
  std::string condition = "WA";
  // conjecture1
  std::string family = "free";
  std::uint64_t q_cut = 2;
  std::uint64_t d_cut = 8;
  std::size_t trials = 20;
  // expansions / fre
  std::string coefficients;
  std::string input;
  std::uint64_t q0 = 10;
  // shift
  std::uint64_t big_n = 10;
  std::uint64_t amax = 30;
  std::uint64_t lmax = 12;
  std::uint64_t a_cut = 5;
  std::uint64_t a = 0;
  std::string lgrid = "1e3,1e4";
  // experiments
  std::string config;
  std::string name;
};

void cmd_csum(const Options& o) {
  const auto c = csum(o.q, o.n), d = csum_divisor_form(o.q, o.n);
  const double t = csum_trig_form(o.q, o.n);
  ResultTable tab{"csum", {icol("q"), icol("n"), icol("closed"), icol("divisor"), rcol("trig")}, {}};
  if (o.form == "closed") tab = {"csum", {icol("q"), icol("n"), icol("c_q(n)")}, {{ic(o.q), Cell(o.n), Cell(c)}}};
  else if (o.form == "divisor") tab = {"csum", {icol("q"), icol("n"), icol("c_q(n)")}, {{ic(o.q), Cell(o.n), Cell(d)}}};
  else if (o.form == "trig") tab = {"csum", {icol("q"), icol("n"), rcol("c_q(n)")}, {{ic(o.q), Cell(o.n), t}}};
  else tab.add_row({ic(o.q), Cell(o.n), Cell(c), Cell(d), t});
  output(tab);
  record(c == d && std::fabs(t - static_cast<double>(c)) < 1e-6);
}

void cmd_csum_table(const Options& o) {
  cap_d(o.qmax);
  cap_x(o.nmax);
  const RamanujanSumTable table(o.qmax, o.nmax);
  ResultTable tab{"csum_table", {icol("q"), icol("n"), icol("c_q(n)")}, {}};
  for (std::uint64_t q = 1; q <= o.qmax; ++q) {
    for (std::uint64_t n = 0; n <= o.nmax; ++n) tab.add_row({ic(q), ic(n), Cell(table.at(q, n))});
  }
  output(tab);
}

void cmd_transform(const Options& o) {
  const ArithmeticFunction f = parse_function(o.function);
  cap_d(o.bound);
  ResultTable tab{"transform", {icol("d"), qcol("F"), qcol("F'")}, {}};
  if (f.exact()) {
    const auto e = eratosthenes<Rational>(f, o.bound);
    const auto v = f.tabulate<Rational>(o.bound);
    for (std::uint64_t d = 1; d <= o.bound; ++d) tab.add_row({ic(d), v[d], e.values[d]});
  } else {
    tab = {"transform", {icol("d"), rcol("F"), rcol("F'")}, {}};
    const auto e = eratosthenes<double>(f, o.bound);
    const auto v = f.tabulate<double>(o.bound);
    for (std::uint64_t d = 1; d <= o.bound; ++d) tab.add_row({ic(d), v[d], e.values[d]});
  }
  output(tab);
}

void cmd_wintner(const Options& o) {
  const ArithmeticFunction f = parse_function(o.function);
  cap_d(o.cut);
  const auto hint = parse_decay(o.decay);
  const auto fp = f.tabulate<double>(o.cut);
  const auto w = wintner_coefficient(fp, o.q, o.cut, hint);
  ResultTable tab{"wintner", {icol("q"), icol("cut"), rcol("partial"), rcol("tail_bound")}, {}};
  tab.add_row({ic(o.q), ic(o.cut), w.partial, w.tail_bound.value_or(std::nan(""))});
  output(tab);
}

void cmd_carmichael(const Options& o) {
  const ArithmeticFunction f = parse_function(o.function);
  const auto grid = cap_grid(o.grid, "--grid");
  const auto e = carmichael_estimate(f, o.q, grid, LimitPolicy{g.tol, 2.0, std::nullopt});
  ResultTable tab{"carmichael", {icol("q"), icol("x"), rcol("estimate"), tcol("verdict")}, {}};
  for (std::size_t i = 0; i < e.grid.size(); ++i) {
    tab.add_row({ic(o.q), ic(e.grid[i]), e.estimates[i], to_string(e.verdict)});
  }
  output(tab);
}

void cmd_check(const Options& o) {
  const ArithmeticFunction f = parse_function(o.function);
  const Condition c = parse_condition(o.condition);
  cap_d(o.cut);
  Table<double> seq = f.tabulate<double>(o.cut);
  if (c == Condition::wintner || c == Condition::delange || c == Condition::slow_decay) seq = mobius_transform(seq);
  const auto r = condition_check(c, seq, o.cut);
  ResultTable tab{"check", {tcol("condition"), icol("x"), rcol("value"), tcol("verdict")}, {}};
  for (std::size_t i = 0; i < r.trend_points.size(); ++i) {
    tab.add_row({to_string(c), ic(r.trend_points[i]), r.trend[i], to_string(r.verdict)});
  }
  if (r.trend_points.empty() || r.trend_points.back() != r.cut) {
    tab.add_row({to_string(c), ic(r.cut), r.partial, to_string(r.verdict)});
  }
  output(tab);
}

std::string join(const Table<Rational>& t) {
  std::string s;
  for (std::uint64_t i = 1; i <= t.size(); ++i) s += (i > 1 ? " " : "") + t[i].str();
  return s;
}

void cmd_conjecture1(const Options& o) {
  cap_d(o.d_cut);
  const auto family = parse_conjecture1_family(o.family);
  const auto r = conjecture1_search(family, o.q_cut, o.d_cut, o.trials, g.seed);
  ResultTable tab{"conjecture1", {tcol("family"), icol("Q"), icol("D"), icol("unknowns"), icol("rank"),
                                  icol("nullity"), qcol("win1"), tcol("fprime"), tcol("verified")}, {}};
  tab.add_row({to_string(family), ic(o.q_cut), ic(o.d_cut), ic(r.unknowns), ic(r.rank), ic(r.nullspace.size()),
               Rational(0), std::string(), std::string(r.fault ? "fault" : "")});
  for (const auto& c : r.counterexamples) {
    tab.add_row({to_string(family), ic(o.q_cut), ic(o.d_cut), ic(r.unknowns), ic(r.rank), ic(r.nullspace.size()),
                 c.win1, join(c.fprime), bc(verify_conjecture1_candidate(c.fprime, o.q_cut))});
  }
  output(tab);
  record(!r.fault);
}

// "dK:K" or a coefficient JSON file / inline object.
RamanujanExpansion<double> parse_expansion(const std::string& spec, std::uint64_t cut) {
  if (spec.rfind("dK:", 0) == 0) return dk_expansion(std::stoi(spec.substr(3)), cut);
  if (spec == "builtin:zero-ram") return ZeroCloudElement<double>{1.0, 0.0}.truncated(cut);
  if (spec == "builtin:zero-har") return ZeroCloudElement<double>{0.0, 1.0}.truncated(cut);
  const json j = !spec.empty() && spec.front() == '{' ? json::parse(spec) : read_json(spec);
  const auto seq = coefficient_seq_from_json(j);
  RamanujanExpansion<double> e;
  e.coefficients.label = seq.label;
  e.coefficients.finite = seq.finite;
  e.coefficients.entries = to_double(seq.entries);
  return e;
}

void cmd_expand_eval(const Options& o) {
  cap_d(o.cut);
  const auto e = parse_expansion(o.coefficients, o.cut);
  const std::uint64_t cut = e.coefficients.finite ? std::min(o.cut, e.coefficients.support()) : o.cut;
  ResultTable tab{"expand_eval", {icol("n"), icol("cut"), rcol("partial")}, {}};
  tab.add_row({Cell(o.n), ic(cut), evaluate_partial(e, static_cast<std::uint64_t>(o.n), cut)});
  output(tab);
}

void cmd_expand_wd(const Options& o) {
  cap_d(o.cut);
  const ArithmeticFunction f = parse_function(o.function);
  const auto fp = eratosthenes<double>(f, std::max<std::uint64_t>(o.cut, o.nmax)).values;
  std::vector<std::uint64_t> ns;
  if (o.n > 0) ns.push_back(static_cast<std::uint64_t>(o.n));
  else for (std::uint64_t i = 1; i <= o.nmax; ++i) ns.push_back(i);
  ResultTable tab{"expand_wd", {icol("n"), rcol("reconstruction"), rcol("F"), rcol("error")}, {}};
  for (const auto& r : wintner_delange_reconstruct(fp, ns, o.cut)) tab.add_row({ic(r.n), r.value, r.target, r.error});
  output(tab);
}

void cmd_expand_sfre(const Options& o) {
  const ArithmeticFunction f = parse_function(o.function);
  const auto n = static_cast<std::uint64_t>(o.n);
  cap_d(n);
  const auto r = standard_fre(f.tabulate<Rational>(n), n);
  ResultTable tab{"expand_sfre", {icol("l"), qcol("coefficient")}, {}};
  for (std::uint64_t l = 1; l <= n; ++l) tab.add_row({ic(l), r.coefficients[l]});
  output(tab);
  std::cerr << "F(" << n << ") = " << r.value.str() << ", reconstruction " << r.reconstruction.str() << '\n';
  record(r.exact);
}

json load(const std::string& spec) {
  if (!spec.empty() && spec.front() == '{') {
    try {
      return json::parse(spec);
    } catch (const json::exception& e) {
      throw SchemaError(e.what());
    }
  }
  return read_json(spec);
}

void print_json(const json& j) {
  if (g.out.empty()) {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::filesystem::create_directories(g.out);
  const auto path = (std::filesystem::path(g.out) / "result.json").string();
  std::ofstream f(path);
  if (!f) throw IoError("cannot write " + path);
  f << j.dump(2) << '\n';
  std::cout << path << '\n';
}

void cmd_fre_to_fre(const Options& o) { print_json(tds_to_fre(TruncatedDivisorSum::from_json(load(o.input))).to_json()); }
void cmd_fre_to_tds(const Options& o) { print_json(fre_to_tds(FiniteExpansion::from_json(load(o.input))).to_json()); }

void cmd_fre_high(const Options& o) {
  cap_d(o.bound);
  const auto fp = eratosthenes<Rational>(parse_function(o.function), o.bound).values;
  const auto r = high_coefficient_check(fp, o.bound);
  ResultTable tab{"fre_high", {icol("Q"), icol("checked"), icol("violations")}, {}};
  tab.add_row({ic(r.q_cut), ic(r.checked), ic(r.violations.size())});
  output(tab);
  record(r.holds());
}

void cmd_fre_low(const Options& o) {
  const ArithmeticFunction f = parse_function(o.function);
  const auto hint = parse_decay(o.decay);
  cap_d(o.cut);
  const std::uint64_t len = hint ? std::max(o.cut, 10 * o.bound) : o.bound;
  cap_d(len);
  const auto fp = eratosthenes<double>(f, len).values;
  const auto r = low_coefficient_report(fp, o.bound, o.q0, hint);
  ResultTable tab{"fre_low", {icol("q"), rcol("truncated"), rcol("wintner"), rcol("tail_bound"),
                              rcol("relative_difference"), tcol("verdict")}, {}};
  for (const auto& row : r.rows) {
    tab.add_row({ic(row.q), row.truncated, row.wintner, row.tail_bound, row.relative_difference, to_string(r.verdict)});
  }
  output(tab);
  record(r.verdict != LowVerdict::inconsistent);
}

CutCorrelation<Rational> correlation(const Options& o, std::uint64_t amax) {
  cap_x(o.big_n + amax);
  return cut_correlation<Rational>(parse_function(o.function), parse_function(o.gfunction), o.big_n, amax);
}

void cmd_shift_corr(const Options& o) {
  const auto c = correlation(o, o.amax);
  ResultTable tab{"shift_corr", {icol("a"), qcol("C"), qcol("C'")}, {}};
  for (std::uint64_t a = 1; a <= o.amax; ++a) tab.add_row({ic(a), c.base.values[a], c.base.transform[a]});
  output(tab);
}

void cmd_shift_qrc(const Options& o) {
  const auto c = correlation(o, std::max(o.amax, o.bound));
  const auto r = qrc(c, o.bound);
  ResultTable tab{"shift_qrc", {icol("q"), qcol("coefficient")}, {}};
  for (std::uint64_t q = 1; q <= r.entries.size(); ++q) tab.add_row({ic(q), r.entries[q]});
  output(tab);
}

void cmd_shift_check12(const Options& o) {
  const auto c = correlation(o, std::max({o.amax, o.big_n, o.a}));
  ResultTable tab{"shift_check12", {icol("a"), qcol("lhs"), qcol("main"), qcol("tail"), tcol("outcome")}, {}};
  bool ok = true;
  for (std::uint64_t a = o.a ? o.a : 1; a <= (o.a ? o.a : o.amax); ++a) {
    const auto r = identity12_check(c, a);
    ok = ok && r.equal;
    tab.add_row({ic(a), r.lhs, r.main, r.tail, bc(r.equal)});
  }
  output(tab);
  record(ok);
}

void cmd_shift_cc(const Options& o) {
  const auto grid = cap_grid(o.grid, "--grid");
  const auto c = correlation(o, grid.back());
  const auto coeffs = cc_coefficients(c, o.lmax);
  ResultTable tab{"shift_cc", {icol("l"), qcol("cc"), rcol("estimate"), tcol("verdict")}, {}};
  for (std::uint64_t l = 1; l <= o.lmax; ++l) {
    const auto e = carmichael_vs_cc(c, l, grid, g.tol * static_cast<double>(o.big_n));
    tab.add_row({ic(l), coeffs[l], e.value(), to_string(e.verdict)});
  }
  output(tab);
}

void cmd_shift_reef(const Options& o) {
  const auto lgrid = cap_grid(o.lgrid, "--lgrid");
  const auto c = correlation(o, std::max({o.amax, o.big_n, o.a, lgrid.back()}));
  ResultTable tab{"shift_reef", {icol("a"), qcol("lhs"), qcol("reef_rhs"), qcol("deviation"), qcol("tail"),
                                 qcol("corrected_deviation"), rcol("weak_reef_residual"), tcol("reef_exact")}, {}};
  bool ok = true;
  for (std::uint64_t a = o.a ? o.a : 1; a <= (o.a ? o.a : o.amax); ++a) {
    const auto r = reef_check(c, a);
    const auto w = weak_reef_check(c, a, {lgrid.back()});
    ok = ok && r.corrected_deviation == r.tail && w.exact_residual.is_zero();
    tab.add_row({ic(a), r.lhs, r.reef_rhs, r.deviation, r.tail, r.corrected_deviation, w.residuals[0],
                 bc(r.reef_exact)});
  }
  output(tab);
  record(ok);
}

void cmd_shift_avg(const Options& o) {
  const auto lgrid = cap_grid(o.lgrid, "--lgrid");
  const auto c = correlation(o, std::max(o.amax, lgrid.back()));
  const auto r = short_average(c, o.a_cut, lgrid);
  ResultTable tab{"shift_avg", {icol("q"), qcol("coefficient"), icol("csum_sum"), qcol("contribution")}, {}};
  for (const auto& t : r.terms) tab.add_row({ic(t.q), t.coefficient, Cell(t.csum_sum), t.contribution});
  output(tab);
  std::cerr << "lhs " << r.lhs.str() << ", rhs " << r.rhs.str() << '\n';
  record(r.equal);
}

void cmd_experiment_list() {
  ResultTable tab{"experiments", {tcol("name"), tcol("summary"), tcol("knobs")}, {}};
  for (const auto& e : experiment_catalog()) tab.add_row({e.name, e.summary, e.defaults.dump()});
  output(tab);
}

void cmd_experiment_run(const Options& o, bool seed_given, bool out_given, bool format_given, bool caps_given) {
  ExperimentConfig cfg;
  if (!o.config.empty()) {
    cfg = ExperimentConfig::from_json(read_json(o.config));
  } else if (!o.name.empty()) {
    cfg.name = o.name;
  } else {
    throw SchemaError("experiment run needs --config or --name");
  }
  if (seed_given) cfg.seed = g.seed;
  if (out_given) cfg.output_dir = g.out;
  if (format_given) cfg.format = parse_output_format(g.format);
  if (caps_given) cfg.caps = {g.cap_x, g.cap_d};
  const RunRecord r = run_experiment(cfg);
  std::cout << r.to_json().dump(2) << '\n';
  record(r.all_pass());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ramanujan expansion laboratory"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;

  auto* seed = app.add_option("--seed", g.seed, "seed for randomized inputs");
  auto* out = app.add_option("--out", g.out, "output directory (stdout when absent)");
  auto* format = app.add_option("--format", g.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--tol", g.tol, "tolerance for limit verdicts");
  auto* capx = app.add_option("--cap-x", g.cap_x, "hard cap on x")->transform(scientific);
  auto* capd = app.add_option("--cap-d", g.cap_d, "hard cap on D")->transform(scientific);

  const auto fn = [&](CLI::App* c, const std::string& names = "--f,--function") {
    c->add_option(names, o.function, "registry JSON, JSON file, or builtin name (mu, lambda, d_3, ...)");
  };

  auto* csum_cmd = app.add_subcommand("csum", "c_q(n) in closed, divisor and trig form");
  csum_cmd->add_option("--q", o.q)->check(CLI::PositiveNumber);
  csum_cmd->add_option("--n", o.n);
  csum_cmd->add_option("--form", o.form, "closed, divisor or trig (all three when absent)")
      ->check(CLI::IsMember({"closed", "divisor", "trig"}));
  auto* csum_table = csum_cmd->add_subcommand("table", "c_q(n) for q <= qmax, 0 <= n <= nmax");
  csum_table->add_option("--qmax", o.qmax)->check(CLI::PositiveNumber);
  csum_table->add_option("--nmax", o.nmax)->transform(scientific)->check(CLI::NonNegativeNumber);

  auto* transform_cmd = app.add_subcommand("transform", "Eratosthenes transform F' = F * mu");
  fn(transform_cmd);
  transform_cmd->add_option("--bound,--D", o.bound)->transform(scientific)->check(CLI::PositiveNumber);

  auto* wintner_cmd = app.add_subcommand("wintner", "Wintner partial of F' at a cut");
  fn(wintner_cmd, "--fprime");
  wintner_cmd->add_option("--q", o.q)->check(CLI::PositiveNumber);
  wintner_cmd->add_option("--cut", o.cut)->transform(scientific)->check(CLI::PositiveNumber);
  wintner_cmd->add_option("--decay", o.decay, "C,s with |F'(d)| <= C d^-s");

  auto* carmichael_cmd = app.add_subcommand("carmichael", "Carmichael estimate on an x-grid");
  fn(carmichael_cmd);
  carmichael_cmd->add_option("--q", o.q)->check(CLI::PositiveNumber);
  carmichael_cmd->add_option("--grid", o.grid, "increasing x values, e.g. 1e4,1e5,1e6");

  auto* check_cmd = app.add_subcommand("check", "at-cut report for WA, DH, DD7, SD or DI");
  fn(check_cmd);
  check_cmd->add_option("--cond,--condition", o.condition)->check(CLI::IsMember({"WA", "DH", "DD7", "SD", "DI"}));
  check_cmd->add_option("--cut", o.cut)->transform(scientific)->check(CLI::PositiveNumber);

  auto* conj_cmd = app.add_subcommand("conjecture1", "search for vanishing high Wintner partials");
  conj_cmd->add_option("--family", o.family)->check(CLI::IsMember({"free", "cm", "nonnegative"}));
  conj_cmd->add_option("--Q", o.q_cut)->transform(scientific)->check(CLI::PositiveNumber);
  conj_cmd->add_option("--D", o.d_cut)->transform(scientific)->check(CLI::PositiveNumber);
  conj_cmd->add_option("--trials", o.trials);

  auto* expand_cmd = app.add_subcommand("expand", "Ramanujan expansions");
  expand_cmd->require_subcommand(1);
  auto* eval_cmd = expand_cmd->add_subcommand("eval", "partial sum of an expansion at n");
  eval_cmd->add_option("--coeffs,--coefficients", o.coefficients,
                       "coefficient JSON, builtin:zero-ram, builtin:zero-har or dK:K")
      ->required();
  eval_cmd->add_option("--n", o.n)->check(CLI::PositiveNumber);
  eval_cmd->add_option("--cut", o.cut)->transform(scientific)->check(CLI::PositiveNumber);
  auto* wd_cmd = expand_cmd->add_subcommand("wd", "Wintner-Delange reconstruction at n (or n <= nmax)");
  fn(wd_cmd);
  wd_cmd->add_option("--n", o.n)->check(CLI::PositiveNumber);
  wd_cmd->add_option("--nmax", o.nmax)->transform(scientific)->check(CLI::PositiveNumber);
  wd_cmd->add_option("--cut", o.cut)->transform(scientific)->check(CLI::PositiveNumber);
  auto* sfre_cmd = expand_cmd->add_subcommand("sfre", "standard finite expansion at n");
  fn(sfre_cmd);
  sfre_cmd->add_option("--n", o.n)->check(CLI::PositiveNumber);

  auto* fre_cmd = app.add_subcommand("fre", "finite expansions and truncated divisor sums");
  fre_cmd->require_subcommand(1);
  auto* to_fre = fre_cmd->add_subcommand("to-fre", "t.d.s. JSON -> finite expansion JSON");
  to_fre->add_option("--tds", o.input, "file or inline JSON")->required();
  auto* to_tds = fre_cmd->add_subcommand("to-tds", "finite expansion JSON -> t.d.s. JSON");
  to_tds->add_option("--fre", o.input, "file or inline JSON")->required();
  auto* high_cmd = fre_cmd->add_subcommand("high", "high coefficients of the Q-truncation of F");
  fn(high_cmd);
  high_cmd->add_option("--Q", o.bound)->transform(scientific)->check(CLI::PositiveNumber);
  auto* low_cmd = fre_cmd->add_subcommand("low", "low coefficients against Wintner partials");
  fn(low_cmd);
  low_cmd->add_option("--Q", o.bound)->transform(scientific)->check(CLI::PositiveNumber);
  low_cmd->add_option("--Q0", o.q0)->transform(scientific)->check(CLI::PositiveNumber);
  low_cmd->add_option("--decay", o.decay, "C,s with |F'(d)| <= C d^-s");

  auto* shift_cmd = app.add_subcommand("shift", "cut correlations in the shift a");
  shift_cmd->require_subcommand(1);
  shift_cmd->fallthrough();
  shift_cmd->add_option("--f", o.function, "f: registry JSON, file or builtin");
  shift_cmd->add_option("--g", o.gfunction, "g: registry JSON, file or builtin");
  shift_cmd->add_option("--N", o.big_n)->check(CLI::PositiveNumber);
  shift_cmd->add_option("--amax", o.amax)->transform(scientific)->check(CLI::PositiveNumber);
  auto* corr_cmd = shift_cmd->add_subcommand("corr", "C(N, a) and its transform");
  auto* qrc_cmd = shift_cmd->add_subcommand("qrc", "Q-truncated shift coefficients");
  qrc_cmd->add_option("--Q", o.bound)->transform(scientific)->check(CLI::PositiveNumber);
  auto* check12_cmd = shift_cmd->add_subcommand("check12", "correlation divisor identity at a (all a <= amax by default)");
  check12_cmd->add_option("--a", o.a)->check(CLI::PositiveNumber);
  auto* cc_cmd = shift_cmd->add_subcommand("cc", "(CC) coefficients against Carmichael estimates");
  cc_cmd->add_option("--lmax", o.lmax)->check(CLI::PositiveNumber);
  cc_cmd->add_option("--grid", o.grid);
  auto* reef_cmd = shift_cmd->add_subcommand("reef", "Reef and Weak Reef at a (all a <= amax by default)");
  reef_cmd->add_option("--a", o.a)->check(CLI::PositiveNumber);
  reef_cmd->add_option("--lgrid", o.lgrid);
  auto* avg_cmd = shift_cmd->add_subcommand("avg", "short average over a <= A");
  avg_cmd->add_option("--A", o.a_cut)->check(CLI::PositiveNumber);
  avg_cmd->add_option("--lgrid", o.lgrid);

  auto* exp_cmd = app.add_subcommand("experiment", "canned experiments");
  exp_cmd->require_subcommand(1);
  auto* run_cmd = exp_cmd->add_subcommand("run", "run one experiment");
  run_cmd->add_option("--config", o.config, "config JSON file");
  run_cmd->add_option("--name", o.name, "experiment name with default knobs");
  auto* list_cmd = exp_cmd->add_subcommand("list", "list experiments");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : exit_usage;
  }

  try {
    if (csum_table->parsed()) cmd_csum_table(o);
    else if (csum_cmd->parsed()) cmd_csum(o);
    else if (transform_cmd->parsed()) cmd_transform(o);
    else if (wintner_cmd->parsed()) cmd_wintner(o);
    else if (carmichael_cmd->parsed()) cmd_carmichael(o);
    else if (check_cmd->parsed()) cmd_check(o);
    else if (conj_cmd->parsed()) cmd_conjecture1(o);
    else if (eval_cmd->parsed()) cmd_expand_eval(o);
    else if (wd_cmd->parsed()) cmd_expand_wd(o);
    else if (sfre_cmd->parsed()) cmd_expand_sfre(o);
    else if (to_fre->parsed()) cmd_fre_to_fre(o);
    else if (to_tds->parsed()) cmd_fre_to_tds(o);
    else if (high_cmd->parsed()) cmd_fre_high(o);
    else if (low_cmd->parsed()) cmd_fre_low(o);
    else if (corr_cmd->parsed()) cmd_shift_corr(o);
    else if (qrc_cmd->parsed()) cmd_shift_qrc(o);
    else if (check12_cmd->parsed()) cmd_shift_check12(o);
    else if (cc_cmd->parsed()) cmd_shift_cc(o);
    else if (reef_cmd->parsed()) cmd_shift_reef(o);
    else if (avg_cmd->parsed()) cmd_shift_avg(o);
    else if (list_cmd->parsed()) cmd_experiment_list();
    else if (run_cmd->parsed()) {
      cmd_experiment_run(o, seed->count() > 0, out->count() > 0, format->count() > 0,
                         capx->count() > 0 || capd->count() > 0);
    }
  } catch (const SchemaError& e) {
    std::cerr << "schema error: " << e.what() << '\n';
    return exit_usage;
  } catch (const UnknownNameError& e) {
    std::cerr << "unknown name: " << e.what() << '\n';
    return exit_usage;
  } catch (const ResourceError& e) {
    std::cerr << "resource cap: " << e.what() << '\n';
    return exit_usage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "schema error: " << e.what() << '\n';
    return exit_usage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_usage;
  }
  return status;
}
