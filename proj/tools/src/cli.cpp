#include "sigmaeq_cli/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include "sigmaeq/census.hpp"
#include "sigmaeq/char_sums.hpp"
#include "sigmaeq/error.hpp"
#include "sigmaeq/lsd.hpp"
#include "sigmaeq/sieve.hpp"
#include "sigmaeq/variety.hpp"
#include "sigmaeq/version.hpp"

namespace sigmaeq::cli {

namespace {

using json = nlohmann::ordered_json;

constexpr const char* kMemoryCapEnv = "SIGMAEQ_MEMORY_CAP";

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct Outcome {
  json result = json::object();
  Table table;
  std::vector<std::string> notes;  // extra CSV comment lines
  bool check_failed = false;
};

struct Context {
  Parallelism par;
  std::size_t memory_cap = SieveOptions{}.memory_budget_bytes;
};

struct Command {
  std::string name;
  std::string description;
  CLI::App* app = nullptr;
  std::vector<std::string> order;
  std::map<std::string, std::string> values;
  std::function<Outcome(const Command&, const Context&)> body;

  const std::string& get(const std::string& key) const { return values.at(key); }
  bool has(const std::string& key) const { return !values.at(key).empty(); }
  u64 count(const std::string& key) const { return parse_count(get(key)); }
  double real(const std::string& key) const { return parse_real(get(key)); }
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

std::string fmt(u64 v) { return std::to_string(v); }

std::string fmt_bool(bool b) { return b ? "true" : "false"; }

std::string fmt(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void write_csv_row(std::ostream& os, const std::vector<std::string>& row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) os << ',';
    os << csv_field(row[i]);
  }
  os << "\r\n";
}

json complex_json(Complex z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

FactorSieve make_sieve(u64 x, const Context& ctx) {
  SieveOptions opts;
  opts.memory_budget_bytes = ctx.memory_cap;
  opts.parallelism = ctx.par;
  return build_sieve(std::max<u64>(x, 2), opts);
}

CensusFilter filter_from(const Command& c, u64 x, u64 q) {
  const std::string& kind = c.get("filter");
  CensusFilter f;
  const u64 threshold = c.get("threshold") == "q" ? q : c.count("threshold");
  if (kind == "all") {
    f = CensusFilter::all();
  } else if (kind == "coprime-only") {
    f = CensusFilter::coprime_only();
  } else if (kind == "pk-above") {
    f = CensusFilter::pk_above(static_cast<u32>(c.count("k")), threshold);
  } else if (kind == "pk-at-most") {
    f = CensusFilter::pk_at_most(static_cast<u32>(c.count("k")), threshold);
  } else {
    throw UsageError("unknown filter '" + kind + "'");
  }
  if (c.has("y-split"))
    f.p2_at_most = c.get("y-split") == "auto" ? proof_y_threshold(x, c.real("eps"))
                                              : c.real("y-split");
  if (c.has("z-split"))
    f.largest_above = c.get("z-split") == "auto" ? proof_z_threshold(x) : c.real("z-split");
  f.validate();
  return f;
}

DirichletCharacter pick_character(const Command& c, const Modulus& m) {
  if (c.has("conductor")) {
    const u64 d = c.count("conductor");
    if (d == 0 || m.q() % d != 0) throw UsageError("--conductor must divide q");
    for (const auto& chi : enumerate_characters(m))
      if (chi.conductor() == d) return chi;
    throw UsageError("no character mod " + fmt(m.q()) + " has conductor " + fmt(d));
  }
  const u64 idx = c.count("chi");
  if (idx >= m.phi()) throw UsageError("--chi must be below phi(q)");
  return character_at(m, idx);
}

// Subcommand bodies.

Outcome do_census(const Command& c, const Context& ctx) {
  const u64 x = c.count("x");
  const Modulus m(c.count("q"));
  const auto filter = filter_from(c, x, m.q());
  const auto sieve = make_sieve(x, ctx);
  const auto report = census(x, m, filter, sieve, ctx.par);

  Outcome o;
  json counts = json::object();
  o.table.header = {"class", "count", "relative"};
  for (std::size_t i = 0; i < report.classes.size(); ++i) {
    counts[fmt(report.classes[i])] = report.counts[i];
    const double rel = report.mean > 0 ? static_cast<double>(report.counts[i]) / report.mean : 0.0;
    o.table.rows.push_back({fmt(report.classes[i]), fmt(report.counts[i]), fmt(rel)});
  }
  o.result["x"] = x;
  o.result["q"] = m.q();
  o.result["filter"] = filter.describe();
  o.result["counts"] = counts;
  o.result["total"] = report.total_coprime;
  o.result["total_filtered"] = report.total_filtered;
  o.result["mean"] = report.mean;
  o.result["discrepancy"] =
      report.total_coprime > 0 ? json(report.max_rel_deviation) : json(nullptr);
  o.result["alpha"] = fmt(report.alpha);
  o.result["alpha_tilde"] = fmt(report.alpha_tilde);
  o.notes.push_back("total " + fmt(report.total_coprime) + ", discrepancy " +
                    (report.total_coprime > 0 ? fmt(report.max_rel_deviation) : "undefined"));
  return o;
}

Outcome do_twisted_sum(const Command& c, const Context& ctx) {
  const u64 x = c.count("x");
  const Modulus m(c.count("q"));
  const auto chi = pick_character(c, m);
  const auto filter = filter_from(c, x, m.q());
  const auto sieve = make_sieve(x, ctx);
  const auto sum = twisted_partial_sum(x, chi, filter, sieve, ctx.par);
  const Complex v = sum.value();
  const double normalized =
      x > 1 ? std::abs(v) * std::log(static_cast<double>(x)) / static_cast<double>(x) : 0.0;

  Outcome o;
  o.result["x"] = x;
  o.result["q"] = m.q();
  o.result["character"] = chi.index();
  o.result["conductor"] = chi.conductor();
  o.result["order"] = chi.order();
  o.result["filter"] = filter.describe();
  o.result["sum"] = complex_json(v);
  o.result["abs"] = std::abs(v);
  o.result["terms"] = sum.term_count();
  o.result["abs_log_x_over_x"] = normalized;
  o.table.header = {"character", "conductor", "re", "im", "abs", "abs_log_x_over_x"};
  o.table.rows.push_back({fmt(chi.index()), fmt(chi.conductor()), fmt(v.real()), fmt(v.imag()),
                          fmt(std::abs(v)), fmt(normalized)});
  return o;
}

Outcome do_rho_table(const Command& c, const Context&) {
  const Modulus m(c.count("q"));
  Outcome o;
  o.table.header = {"character", "conductor", "order", "brute_re", "brute_im",
                    "closed_re", "closed_im", "abs_diff"};
  json rows = json::array();
  double worst = 0;
  for (const auto& chi : enumerate_characters(m)) {
    const auto brute = rho_brute(chi);
    std::optional<Complex> closed;
    if (m.is_odd()) closed = rho_closed_form(chi).value;
    const double diff = closed ? std::abs(*closed - brute.value) : 0.0;
    worst = std::max(worst, diff);
    o.table.rows.push_back({fmt(chi.index()), fmt(chi.conductor()), fmt(chi.order()),
                            fmt(brute.value.real()), fmt(brute.value.imag()),
                            closed ? fmt(closed->real()) : "", closed ? fmt(closed->imag()) : "",
                            closed ? fmt(diff) : ""});
    json row{{"character", chi.index()}, {"conductor", chi.conductor()},
             {"brute", complex_json(brute.value)}};
    row["closed_form"] = closed ? complex_json(*closed) : json(nullptr);
    rows.push_back(row);
  }
  o.result["q"] = m.q();
  o.result["alpha"] = fmt(m.alpha());
  o.result["outside_intended_range"] = !m.is_odd();
  o.result["max_abs_diff"] = worst;
  if (m.is_odd()) {
    const double power = rho_power_sum(m, 2);
    o.result["sum_abs_sq_nonprincipal"] = power;
    if (power > boost::rational_cast<double>(m.alpha()) + 1e-9) o.check_failed = true;
  }
  o.result["rows"] = rows;
  if (worst > 1e-9) o.check_failed = true;
  return o;
}

Outcome do_eta_table(const Command& c, const Context&) {
  const Modulus m(c.count("q"));
  const double quarter = boost::rational_cast<double>(m.alpha_tilde()) / 4.0;
  const u64 g6 = gcd(m.q(), 6);
  const bool bounds_apply = g6 == 1 || g6 == 2;
  Outcome o;
  o.table.header = {"character", "conductor", "order", "brute_re", "brute_im", "factored_re",
                    "factored_im", "abs_diff", "exceptional", "bound_ok"};
  json rows = json::array();
  double worst = 0;
  bool bounds_ok = true;
  for (const auto& chi : enumerate_characters(m)) {
    const auto brute = eta_brute(chi);
    const auto fact = eta_factored(chi);
    const double diff = std::abs(brute.value - fact.value);
    worst = std::max(worst, diff);
    const bool exceptional = is_exceptional_conductor(chi.conductor());
    bool ok = true;
    if (bounds_apply && !chi.is_principal()) {
      ok = brute.value.real() <= quarter + 1e-9;
      if (!exceptional) ok = ok && std::abs(brute.value) <= quarter + 1e-9;
    }
    bounds_ok = bounds_ok && ok;
    o.table.rows.push_back({fmt(chi.index()), fmt(chi.conductor()), fmt(chi.order()),
                            fmt(brute.value.real()), fmt(brute.value.imag()),
                            fmt(fact.value.real()), fmt(fact.value.imag()), fmt(diff),
                            fmt_bool(exceptional), bounds_apply ? fmt_bool(ok) : ""});
    rows.push_back(json{{"character", chi.index()},
                        {"conductor", chi.conductor()},
                        {"brute", complex_json(brute.value)},
                        {"factored", complex_json(fact.value)},
                        {"exceptional", exceptional}});
  }
  o.result["q"] = m.q();
  o.result["alpha_tilde"] = fmt(m.alpha_tilde());
  o.result["max_abs_diff"] = worst;
  o.result["bounds_checked"] = bounds_apply;
  o.result["bounds_hold"] = bounds_ok;
  o.result["rows"] = rows;
  o.check_failed = worst > 1e-9 || !bounds_ok;
  return o;
}

Outcome do_verify_s_set(const Command& c, const Context& ctx) {
  std::optional<Modulus> restrict_to;
  if (c.has("q")) restrict_to = Modulus(c.count("q"));
  const auto report = verify_s_set(restrict_to, ctx.par);
  Outcome o;
  o.table.header = {"modulus", "primitive_characters", "normalizer", "max_real_sum",
                    "normalized_max", "attains_quarter"};
  json rows = json::array();
  for (const auto& e : report.entries) {
    o.table.rows.push_back({fmt(e.modulus), fmt(e.primitive_characters), fmt(e.normalizer),
                            fmt(e.max_real_sum), fmt(e.normalized_max),
                            fmt_bool(e.attains_quarter)});
    rows.push_back(json{{"modulus", e.modulus},
                        {"primitive_characters", e.primitive_characters},
                        {"normalizer", e.normalizer},
                        {"max_real_sum", e.max_real_sum},
                        {"normalized_max", e.normalized_max},
                        {"attains_quarter", e.attains_quarter}});
  }
  const std::string global =
      report.global_max_is_exact_quarter ? std::string("1/4") : fmt(report.global_max);
  std::string attaining;
  for (u64 a : report.attaining) attaining += (attaining.empty() ? "" : " ") + fmt(a);
  o.result["global_max"] = global;
  o.result["global_max_is_exact_quarter"] = report.global_max_is_exact_quarter;
  o.result["bound_holds"] = report.bound_holds;
  o.result["attaining"] = report.attaining;
  o.result["entries"] = rows;
  o.notes.push_back("global max " + global + ", attained at {" + attaining + "}");
  o.check_failed = !report.bound_holds;
  return o;
}

Outcome do_weil_check(const Command& c, const Context& ctx) {
  const auto r = weil_clz_check(c.count("prime"), static_cast<u32>(c.count("exponent")), ctx.par);
  Outcome o;
  o.result["prime"] = r.prime;
  o.result["exponent"] = r.exponent;
  o.result["characters_checked"] = r.characters_checked;
  o.result["bound"] = r.bound;
  o.result["max_abs_sum"] = r.max_abs_sum;
  o.result["max_ratio"] = r.max_ratio;
  o.result["worst_character"] = r.worst_character_index;
  o.result["holds"] = r.holds;
  o.table.header = {"prime", "exponent", "characters_checked", "bound", "max_abs_sum",
                    "max_ratio", "worst_character", "holds"};
  o.table.rows.push_back({fmt(r.prime), fmt(u64{r.exponent}), fmt(r.characters_checked),
                          fmt(r.bound), fmt(r.max_abs_sum), fmt(r.max_ratio),
                          fmt(r.worst_character_index), fmt_bool(r.holds)});
  o.check_failed = !r.holds;
  return o;
}

Outcome do_lsd_scan(const Command& c, const Context& ctx) {
  const Complex beta{c.real("beta"), c.real("beta-im")};
  const double y = c.real("Y");
  const auto grid = parse_count_list(c.get("x-grid"));
  if (grid.empty()) throw UsageError("--x-grid is empty");
  const auto sieve = make_sieve(*std::max_element(grid.begin(), grid.end()), ctx);
  const auto rows = convergence_scan(beta, grid, y, sieve, ctx.par);
  Outcome o;
  bool below = false;
  o.table.header = {"X",       "Y",       "beta_re", "beta_im",  "exact_re",
                    "exact_im", "main_re", "main_im", "abs_ratio"};
  json jr = json::array();
  for (const auto& r : rows) {
    o.table.rows.push_back({fmt(r.x), fmt(y), fmt(beta.real()), fmt(beta.imag()),
                            fmt(r.exact.real()), fmt(r.exact.imag()), fmt(r.main_term.real()),
                            fmt(r.main_term.imag()), r.ratio ? fmt(std::abs(*r.ratio)) : ""});
    json row{{"x", r.x}, {"exact", complex_json(r.exact)}, {"main_term", complex_json(r.main_term)}};
    row["ratio"] = r.ratio ? complex_json(*r.ratio) : json(nullptr);
    row["below_size_threshold"] = r.below_size_threshold;
    jr.push_back(row);
    if (r.below_size_threshold) below = true;
  }
  if (below) o.notes.push_back("some X or Y below e^{11/2}; ratios outside the proven range");
  o.result["beta"] = complex_json(beta);
  o.result["Y"] = y;
  o.result["rows"] = jr;
  return o;
}

Outcome do_g_one(const Command& c, const Context& ctx) {
  const Complex beta{c.real("beta"), c.real("beta-im")};
  const double y = c.real("Y");
  const u64 p_max = c.count("p-max");
  const auto sieve = make_sieve(p_max, ctx);
  const auto r = g_one_euler_product(y, beta, p_max, sieve);
  Outcome o;
  o.result["beta"] = complex_json(beta);
  o.result["Y"] = y;
  o.result["p_max"] = p_max;
  o.result["value"] = complex_json(r.value);
  o.result["log_tail_bound"] = r.log_tail_bound;
  o.result["relative_tail_bound"] = r.relative_tail_bound;
  o.table.header = {"p_max", "re", "im", "log_tail_bound", "relative_tail_bound"};
  o.table.rows.push_back({fmt(p_max), fmt(r.value.real()), fmt(r.value.imag()),
                          fmt(r.log_tail_bound), fmt(r.relative_tail_bound)});
  return o;
}

Outcome do_v_count(const Command& c, const Context&) {
  const Modulus m(c.count("q"));
  const auto arity = static_cast<unsigned>(c.count("arity"));
  Outcome o;
  o.table.header = {"w", "count"};
  json counts = json::object();
  if (c.has("w")) {
    const auto r = v_count(m, c.count("w"), arity);
    counts[fmt(r.w)] = r.count;
    o.table.rows.push_back({fmt(r.w), fmt(r.count)});
  } else {
    const auto table = v_count_table(m, arity);
    u64 total = 0;
    for (u64 w = 0; w < m.q(); ++w) {
      if (!m.is_unit(w)) continue;
      counts[fmt(w)] = table[w];
      total += table[w];
      o.table.rows.push_back({fmt(w), fmt(table[w])});
    }
    // Targets partition the tuples of units v with v^2+v+1 also a unit.
    u64 good = 0;
    for (u64 v : m.units()) good += m.is_unit(v * v % m.q() + v + 1);
    u64 expected = 1;
    for (unsigned j = 0; j < arity; ++j) expected *= good;
    o.result["total"] = total;
    o.result["expected_total"] = expected;
    o.check_failed = total != expected;
  }
  o.result["q"] = m.q();
  o.result["arity"] = arity;
  o.result["counts"] = counts;
  return o;
}

std::vector<u64> primes_from(const Command& c, u64 floor_prime) {
  if (c.has("prime")) return {c.count("prime")};
  if (!c.has("max-prime")) throw UsageError("give --prime or --max-prime");
  std::vector<u64> out;
  for (u32 p : simple_primes(static_cast<u32>(c.count("max-prime"))))
    if (p >= floor_prime) out.push_back(p);
  return out;
}

Outcome do_lift_count(const Command& c, const Context& ctx) {
  Outcome o;
  o.table.header = {"prime", "target", "count", "s1", "ratio", "window_lo", "window_hi", "in_window"};
  json rows = json::array();
  for (u64 l : primes_from(c, 5)) {
    const auto r = lift_count_mod_ell_squared(l, ctx.par);
    const double l2 = static_cast<double>(l * l);
    const double ratio = static_cast<double>(r.count) / l2;
    const double half = kLiftWindowConstant / std::sqrt(static_cast<double>(l));
    const bool ok = ratio >= 2 - half && ratio <= 2 + half && r.count >= l * l;
    o.check_failed = o.check_failed || !ok;
    o.table.rows.push_back({fmt(l), fmt(r.target), fmt(r.count), fmt(r.s1), fmt(ratio),
                            fmt(2 - half), fmt(2 + half), fmt_bool(ok)});
    rows.push_back(json{{"prime", l}, {"target", r.target}, {"count", r.count}, {"s1", r.s1},
                        {"ratio", ratio}, {"in_window", ok}});
  }
  o.result["rows"] = rows;
  return o;
}

Outcome do_curve_count(const Command& c, const Context&) {
  const std::string& name = c.get("curve");
  CurveKind kind;
  if (name == "G" || name == "g") {
    kind = CurveKind::g;
  } else if (name == "H" || name == "h") {
    kind = CurveKind::h;
  } else {
    throw UsageError("--curve must be G or H");
  }
  const u64 w = c.count("w");
  Outcome o;
  o.table.header = {"prime", "count", "normalized_error", "bound_ok", "below_five"};
  json rows = json::array();
  double worst = 0;
  for (u64 l : primes_from(c, 2)) {
    const auto r = curve_point_count(l, kind, w);
    const double sl = std::sqrt(static_cast<double>(l));
    const double dev = std::abs(static_cast<double>(r.count) - static_cast<double>(l));
    const bool ok = dev <= kCurveSqrtConstant * sl + kCurveOffset;
    if (!r.below_five) {
      worst = std::max(worst, dev / sl);
      o.check_failed = o.check_failed || !ok;
    }
    o.table.rows.push_back({fmt(l), fmt(r.count), fmt(dev / sl), fmt_bool(ok), fmt_bool(r.below_five)});
    rows.push_back(json{{"prime", l}, {"count", r.count}, {"bound_ok", ok}, {"below_five", r.below_five}});
  }
  o.result["curve"] = curve_name(kind);
  if (kind == CurveKind::h) o.result["w"] = w;
  o.result["max_normalized_error"] = worst;
  o.result["rows"] = rows;
  return o;
}

Outcome witness_outcome(const WitnessReport& r) {
  Outcome o;
  o.result["q"] = r.q;
  o.result["Y"] = r.y;
  o.result["x"] = r.x;
  o.result["witness_class"] = r.witness_class;
  o.result["witness_count"] = r.witness_count;
  o.result["mean_count"] = r.mean_count;
  o.result["ratio"] = r.ratio ? json(*r.ratio) : json(nullptr);
  o.result["crt_count"] = r.crt_count;
  o.result["direct_count"] = r.direct_count;
  o.result["admissible_classes"] = r.admissible_classes;
  o.result["in_asymptotic_range"] = r.in_asymptotic_range;
  o.table.header = {"q", "Y", "x", "witness_class", "witness_count", "mean_count", "ratio",
                    "crt_count", "direct_count", "in_asymptotic_range"};
  o.table.rows.push_back({fmt(r.q), fmt(r.y), fmt(r.x), fmt(r.witness_class), fmt(r.witness_count),
                          fmt(r.mean_count), r.ratio ? fmt(*r.ratio) : "", fmt(r.crt_count),
                          fmt(r.direct_count), fmt_bool(r.in_asymptotic_range)});
  o.check_failed = r.crt_count != r.direct_count;
  return o;
}

Outcome do_witness_even(const Command& c, const Context& ctx) {
  const u64 x = c.count("x");
  const auto sieve = make_sieve(x, ctx);
  return witness_outcome(overrep_witness_even(c.real("Y"), x, sieve, ctx.par));
}

Outcome do_witness_sqfree(const Command& c, const Context& ctx) {
  const u64 x = c.count("x");
  const auto sieve = make_sieve(x, ctx);
  return witness_outcome(overrep_witness_sqfree(c.real("Y"), x, sieve, ctx.par));
}

Outcome do_prime_recip(const Command& c, const Context& ctx) {
  std::vector<i64> coeffs;
  {
    std::stringstream ss(c.get("poly"));
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        std::size_t used = 0;
        coeffs.push_back(std::stoll(item, &used));
        if (used != item.size()) throw UsageError("bad coefficient '" + item + "'");
      } catch (const std::logic_error&) {
        throw UsageError("bad coefficient '" + item + "'");
      }
    }
  }
  const PolynomialSpec f(coeffs);
  const Modulus m(c.count("q"));
  const u64 x = c.count("x");
  const auto sieve = make_sieve(x, ctx);
  const double sum = prime_reciprocal_sum(f, m, x, sieve, ctx.par);
  const double loglog = x > 2 ? std::log(std::log(static_cast<double>(x))) : 0.0;
  const Rational a = alpha_F(f, m);
  Outcome o;
  o.result["poly"] = coeffs;
  o.result["q"] = m.q();
  o.result["x"] = x;
  o.result["sum"] = sum;
  o.result["log_log_x"] = loglog;
  o.result["ratio"] = loglog > 0 ? json(sum / loglog) : json(nullptr);
  o.result["alpha_F"] = fmt(a);
  o.table.header = {"x", "sum", "log_log_x", "ratio", "alpha_F"};
  o.table.rows.push_back({fmt(x), fmt(sum), fmt(loglog), loglog > 0 ? fmt(sum / loglog) : "", fmt(a)});
  return o;
}

// Registration.

void option(Command& c, const std::string& name, const std::string& fallback, const std::string& help) {
  c.order.push_back(name);
  c.values[name] = fallback;
  auto* opt = c.app->add_option("--" + name, c.values[name], help);
  if (!fallback.empty()) opt->default_str(fallback);
}

void filter_options(Command& c) {
  option(c, "filter", "all", "all | coprime-only | pk-above | pk-at-most");
  option(c, "k", "1", "k for the P_k filters");
  option(c, "threshold", "q", "threshold for the P_k filters (integer or 'q')");
  option(c, "y-split", "", "keep n with P_2(n) <= y (real or 'auto')");
  option(c, "eps", "0.5", "epsilon for --y-split auto");
  option(c, "z-split", "", "keep n with P(n) > z (real or 'auto')");
}

void emit(const Command& c, const Outcome& o, const std::string& format, std::ostream& os) {
  if (format == "json") {
    json config = json::object();
    for (const auto& key : c.order) config[key] = c.values.at(key);
    json doc;
    doc["tool"] = "sigmaeq";
    doc["version"] = kVersion;
    doc["command"] = c.name;
    doc["description"] = c.description;
    doc["config"] = config;
    doc["result"] = o.result;
    os << doc.dump(2) << "\n";
    return;
  }
  os << "# " << c.description << "\r\n";
  for (const auto& n : o.notes) os << "# " << n << "\r\n";
  write_csv_row(os, o.table.header);
  for (const auto& row : o.table.rows) write_csv_row(os, row);
}

}  // namespace

std::uint64_t parse_count(const std::string& text) {
  if (text.empty()) throw UsageError("expected an integer, got an empty value");
  const bool plain = text.find_first_not_of("0123456789") == std::string::npos;
  if (plain) {
    try {
      return std::stoull(text);
    } catch (const std::out_of_range&) {
      throw UsageError("integer '" + text + "' out of range");
    }
  }
  char* end = nullptr;
  const long double v = std::strtold(text.c_str(), &end);
  if (end != text.c_str() + text.size() || !(v >= 0) || v > 1.8e19L || v != std::floor(v))
    throw UsageError("expected a non-negative integer, got '" + text + "'");
  return static_cast<std::uint64_t>(v);
}

double parse_real(const std::string& text) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || !std::isfinite(v))
    throw UsageError("expected a real number, got '" + text + "'");
  return v;
}

std::vector<std::uint64_t> parse_count_list(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_count(item));
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Experiments on sigma(n) modulo q, character averages and congruence counts",
               "sigmaeq"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(kVersion));

  std::string format = "json";
  std::string output;
  std::string workers;
  std::string memory_cap;
  app.add_option("--format", format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_option("--output", output, "write the report here instead of stdout");
  app.add_option("--workers", workers, "worker threads (default: hardware concurrency)");
  app.add_option("--memory-cap", memory_cap,
                 std::string("sieve memory cap in bytes (env ") + kMemoryCapEnv + ")");

  std::vector<std::unique_ptr<Command>> commands;
  auto add = [&](const std::string& name, const std::string& description, auto body) -> Command& {
    auto c = std::make_unique<Command>();
    c->name = name;
    c->description = description;
    c->app = app.add_subcommand(name, description);
    c->body = body;
    commands.push_back(std::move(c));
    return *commands.back();
  };

  {
    auto& c = add("census", "class counts of sigma(n) mod q over n <= x", do_census);
    option(c, "x", "1e6", "upper limit");
    option(c, "q", "5", "modulus");
    filter_options(c);
  }
  {
    auto& c = add("twisted-sum", "sum of chi(sigma(n)) over n <= x", do_twisted_sum);
    option(c, "x", "1e6", "upper limit");
    option(c, "q", "5", "modulus");
    option(c, "chi", "1", "character index (principal = 0)");
    option(c, "conductor", "", "pick the first character with this conductor instead");
    filter_options(c);
  }
  {
    auto& c = add("rho-table", "averages of chi(v + 1) over units, brute force vs closed form",
                  do_rho_table);
    option(c, "q", "15", "modulus");
  }
  {
    auto& c = add("eta-table", "averages of chi(v^2 + v + 1) over units, brute force vs factored",
                  do_eta_table);
    option(c, "q", "35", "modulus");
  }
  {
    auto& c = add("verify-s-set", "normalized maxima of Re sum psi(v^2 + v + 1) over the exceptional conductors",
                  do_verify_s_set);
    option(c, "q", "", "only conductors dividing q");
  }
  {
    auto& c = add("weil-check", "complete sums of chi(v^2 + v + 1) mod l^e against l^{e/2}",
                  do_weil_check);
    option(c, "prime", "5", "prime l >= 5");
    option(c, "exponent", "2", "exponent e");
  }
  {
    auto& c = add("lsd-scan", "rough sums of beta^Omega(n) against the LSD main term", do_lsd_scan);
    option(c, "beta", "1", "real part of beta");
    option(c, "beta-im", "0", "imaginary part of beta");
    option(c, "Y", "10", "roughness bound");
    option(c, "x-grid", "1e5,1e6,1e7", "comma-separated X values");
  }
  {
    auto& c = add("g-one", "truncated Euler product for G(1)", do_g_one);
    option(c, "beta", "1", "real part of beta");
    option(c, "beta-im", "0", "imaginary part of beta");
    option(c, "Y", "10", "roughness bound");
    option(c, "p-max", "1e7", "truncation point");
  }
  {
    auto& c = add("v-count", "solutions of prod (v_j^2 + v_j + 1) = w over units mod q", do_v_count);
    option(c, "q", "5", "modulus");
    option(c, "w", "", "target unit (all units when omitted)");
    option(c, "arity", "2", "2 or 3");
  }
  {
    auto& c = add("lift-count", "pairs mod l^2 with (v1^2+v1+1)(v2^2+v2+1) = 9/16", do_lift_count);
    option(c, "prime", "", "single prime l >= 5");
    option(c, "max-prime", "", "every prime 5 <= l <= this");
  }
  {
    auto& c = add("curve-count", "points over F_l of (X^2+3)(Y^2+3) = 9 or (X^2+X+1)(Y^2+Y+1) = w",
                  do_curve_count);
    option(c, "curve", "G", "G or H");
    option(c, "w", "1", "target for H");
    option(c, "prime", "", "single prime");
    option(c, "max-prime", "", "every prime 5 <= l <= this");
  }
  {
    auto& c = add("witness-even", "over-represented class of sigma(P1^2 P2^2) mod 2 prod l^2",
                  do_witness_even);
    option(c, "Y", "5", "primes 5 <= l <= Y build q");
    option(c, "x", "1e6", "upper limit");
  }
  {
    auto& c = add("witness-sqfree", "over-represented class 3 of sigma(P^2) mod 2 prod l",
                  do_witness_sqfree);
    option(c, "Y", "5", "primes 5 <= l <= Y build q");
    option(c, "x", "1e6", "upper limit");
  }
  {
    auto& c = add("prime-recip", "sum of 1/p over p <= x with F(p) coprime to q", do_prime_recip);
    option(c, "poly", "1,1,1", "coefficients of F, lowest degree first");
    option(c, "q", "7", "modulus");
    option(c, "x", "1e7", "upper limit");
  }

  std::ostringstream help_out;
  std::ostringstream help_err;
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, help_out, help_err);
    out << help_out.str();
    err << help_err.str();
    return code == 0 ? kOk : kUsage;
  }

  const Command* chosen = nullptr;
  for (const auto& c : commands)
    if (c->app->parsed()) chosen = c.get();

  try {
    Context ctx;
    ctx.par = workers.empty() ? Parallelism::hardware()
                              : Parallelism{static_cast<unsigned>(std::max<u64>(1, parse_count(workers)))};
    if (const char* env = std::getenv(kMemoryCapEnv); env && *env)
      ctx.memory_cap = parse_count(env);
    if (!memory_cap.empty()) ctx.memory_cap = parse_count(memory_cap);

    const Outcome outcome = chosen->body(*chosen, ctx);
    if (output.empty()) {
      emit(*chosen, outcome, format, out);
    } else {
      std::ofstream file(output, std::ios::binary);
      if (!file) throw UsageError("cannot open " + output + " for writing");
      emit(*chosen, outcome, format, file);
    }
    if (outcome.check_failed) {
      err << chosen->name << ": check failed\n";
      return kCheckFailed;
    }
    return kOk;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const ResourceError& e) {
    err << "resource limit: " << e.what() << "\n";
    return kResource;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace sigmaeq::cli
