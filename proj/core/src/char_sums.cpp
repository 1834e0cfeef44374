#include "sigmaeq/char_sums.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sigmaeq/error.hpp"

namespace sigmaeq {

namespace {

double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

bool is_squarefree(const Factorization& f) {
  return std::all_of(f.begin(), f.end(), [](const PrimePower& pp) { return pp.exponent == 1; });
}

u64 quadratic_mod(u64 v, u64 m) { return (mul_mod(v, v, m) + v + 1) % m; }

// sum over v in [0, m) with include(v) of chi(g(v) mod q), exactly.
template <class Include, class Arg>
RootOfUnitySum brute_sum(const DirichletCharacter& chi, u64 m, Include include, Arg arg) {
  const auto table = chi.exponent_table();
  const u64 q = chi.modulus().q();
  RootOfUnitySum sum(chi.modulus().exponent());
  for (u64 v = 0; v < m; ++v) {
    if (!include(v)) continue;
    const i64 k = table[arg(v) % q];
    if (k < 0)
      sum.add_zero_terms(1);
    else
      sum.add_exponent(static_cast<u64>(k));
  }
  return sum;
}

// Fraction of units v mod l with v^2 + v + 1 also a unit.
Rational good_unit_density(u64 prime) {
  u64 good = 0;
  for (u64 v = 1; v < prime; ++v)
    if (quadratic_mod(v, prime) != 0) ++good;
  return Rational(static_cast<i64>(good), static_cast<i64>(prime - 1));
}

}  // namespace

PolynomialSpec::PolynomialSpec(std::vector<i64> coefficients) : coeffs_(std::move(coefficients)) {
  while (coeffs_.size() > 1 && coeffs_.back() == 0) coeffs_.pop_back();
  if (coeffs_.size() < 2) throw DomainError("PolynomialSpec: F must be nonconstant");
}

u64 PolynomialSpec::eval_mod(u64 t, u64 q) const {
  if (q == 1) return 0;
  const u64 tr = t % q;
  u64 acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
    acc = (mul_mod(acc, tr, q) + reduce_signed(*it, q)) % q;
  return acc;
}

CharAverage rho_brute(const DirichletCharacter& chi) {
  const auto& m = chi.modulus();
  const u64 q = m.q();
  const auto sum = brute_sum(
      chi, q, [&](u64 v) { return gcd(v, q) == 1; }, [](u64 v) { return v + 1; });
  CharAverage out;
  out.value = sum.value() / static_cast<double>(m.phi());
  out.method = AverageMethod::brute;
  out.term_count = m.phi();
  out.outside_intended_range = !m.is_odd();
  return out;
}

CharAverage rho_closed_form(const DirichletCharacter& chi) {
  const auto& m = chi.modulus();
  if (!m.is_odd())
    throw UnsupportedModulusError("rho_closed_form: the closed form holds for odd q only (q=" +
                                  std::to_string(m.q()) + ")");
  CharAverage out;
  out.method = AverageMethod::closed_form;
  out.term_count = m.phi();
  const auto f = factorize_trial(chi.conductor());
  if (!is_squarefree(f)) {
    out.value = 0.0;
    return out;
  }
  double value = to_double(m.alpha());
  for (const auto& pp : f) value /= static_cast<double>(pp.prime - 2);
  if (f.distinct() % 2 == 1) value = -value;
  out.value = value;
  return out;
}

std::complex<double> s_chi_ell(const DirichletCharacter& chi_l) {
  const auto& m = chi_l.modulus();
  if (m.factorization().distinct() != 1 || m.factorization().parts()[0].prime == 2)
    throw UnsupportedModulusError("s_chi_ell: modulus must be a power of an odd prime (got " +
                                  std::to_string(m.q()) + ")");
  const u64 l = m.factorization().parts()[0].prime;
  return brute_sum(
             chi_l, m.q(), [&](u64 v) { return v % l != 0; }, [](u64 v) { return v + 1; })
      .value();
}

i64 s_chi_ell_closed_form(const DirichletCharacter& chi_l) {
  const auto& m = chi_l.modulus();
  if (m.factorization().distinct() != 1 || m.factorization().parts()[0].prime == 2)
    throw UnsupportedModulusError("s_chi_ell_closed_form: modulus must be a power of an odd prime");
  const auto [l, e] = m.factorization().parts()[0];
  const u64 f = chi_l.conductor();
  if (f != 1 && f != l) return 0;
  i64 scale = 1;
  for (u32 i = 1; i < e; ++i) scale *= static_cast<i64>(l);
  const i64 inner = (f == 1 ? static_cast<i64>(l) - 1 : 0) - 1;
  return scale * inner;
}

CharAverage eta_brute(const DirichletCharacter& chi) {
  const auto& m = chi.modulus();
  const u64 q = m.q();
  const auto sum = brute_sum(
      chi, q, [&](u64 v) { return gcd(v, q) == 1; },
      [&](u64 v) { return quadratic_mod(v, q); });
  CharAverage out;
  out.value = sum.value() / static_cast<double>(m.phi());
  out.method = AverageMethod::brute;
  out.term_count = m.phi();
  return out;
}

std::complex<double> eta_local_factor(const DirichletCharacter& chi, std::size_t component) {
  const auto& comp = chi.modulus().components()[component];
  const u64 f = chi.local_conductor(component);
  if (f == 1) {
    const Rational d = good_unit_density(comp.prime);
    return to_double(d);
  }
  // v -> v^2 + v + 1 permutes the units mod 2^e, so any nontrivial 2-part
  // averages to zero.
  if (comp.prime == 2) return 0.0;

  const auto local = chi.local_component(component);
  const auto table = local.exponent_table();
  RootOfUnitySum sum(local.modulus().exponent());
  // chi_l is induced from conductor f, so its value on a unit depends only
  // on the residue mod f.
  for (u64 v = 0; v < f; ++v) {
    const i64 k = table[quadratic_mod(v, f) % comp.modulus];
    if (k < 0)
      sum.add_zero_terms(1);
    else
      sum.add_exponent(static_cast<u64>(k));
  }
  const double phi_f = static_cast<double>(f / comp.prime * (comp.prime - 1));
  const double correction = (f == comp.prime) ? 1.0 : 0.0;
  return (sum.value() - correction) / phi_f;
}

CharAverage eta_factored(const DirichletCharacter& chi) {
  std::complex<double> value = 1.0;
  const std::size_t comps = chi.modulus().components().size();
  for (std::size_t c = 0; c < comps; ++c) {
    value *= eta_local_factor(chi, c);
    if (value == std::complex<double>(0.0, 0.0)) break;
  }
  CharAverage out;
  out.value = value;
  out.method = AverageMethod::factored;
  out.term_count = chi.modulus().phi();
  return out;
}

WeilCheckReport weil_clz_check(u64 prime, u32 exponent, Parallelism par) {
  if (prime < 5 || !is_prime_trial(prime))
    throw DomainError("weil_clz_check: l must be a prime >= 5 (got " + std::to_string(prime) + ")");
  if (exponent == 0) throw DomainError("weil_clz_check: e must be >= 1");
  u64 modulus = 1;
  for (u32 i = 0; i < exponent; ++i) {
    if (modulus > kDefaultMaxModulus / prime)
      throw ResourceError("weil_clz_check: l^e exceeds the modulus cap " +
                          std::to_string(kDefaultMaxModulus));
    modulus *= prime;
  }
  const Modulus m(modulus);
  const auto& comp = m.components()[0];
  const u64 phi = comp.phi;

  // Histogram of discrete logs of v^2 + v + 1 over all v mod l^e; each
  // character sum is then a weighted sum over that histogram.
  std::vector<i64> log_counts(phi, 0);
  for (u64 v = 0; v < modulus; ++v) {
    const u32 idx = comp.index_of[quadratic_mod(v, modulus)];
    if (idx != PrimePowerComponent::kNonUnit) ++log_counts[idx];
  }

  WeilCheckReport report;
  report.prime = prime;
  report.exponent = exponent;
  report.bound = std::pow(static_cast<double>(prime), exponent / 2.0);

  struct Partial {
    u64 checked = 0;
    double max_abs = 0;
    u64 argmax = 0;
  };
  constexpr u64 kChunk = 256;
  const std::size_t chunks = static_cast<std::size_t>((phi + kChunk - 1) / kChunk);
  std::vector<Partial> partial(chunks);
  parallel_chunks(chunks, par, [&](std::size_t c) {
    Partial p;
    for (u64 a = c * kChunk; a < std::min(phi, (c + 1) * kChunk); ++a) {
      const DirichletCharacter chi(m, {a});
      if (!chi.is_primitive()) continue;
      RootOfUnitySum sum(phi);
      for (u64 j = 0; j < phi; ++j)
        if (log_counts[j] != 0) sum.add_exponent(mul_mod(a, j, phi), log_counts[j]);
      const double mag = std::abs(sum.value());
      ++p.checked;
      if (mag > p.max_abs) {
        p.max_abs = mag;
        p.argmax = a;
      }
    }
    partial[c] = p;
  });
  for (const auto& p : partial) {
    report.characters_checked += p.checked;
    if (p.max_abs > report.max_abs_sum) {
      report.max_abs_sum = p.max_abs;
      report.worst_character_index = p.argmax;
    }
  }
  report.max_ratio = report.max_abs_sum / report.bound;
  report.holds = report.max_abs_sum <= report.bound + 1e-9 * (1.0 + static_cast<double>(modulus));
  return report;
}

bool is_exceptional_conductor(u64 f) {
  return std::find(kExceptionalConductors.begin(), kExceptionalConductors.end(), f) !=
         kExceptionalConductors.end();
}

u64 exceptional_normalizer(u64 q) {
  u64 n = 1;
  for (const auto& [p, e] : factorize_trial(q)) {
    if (p % 3 == 1) n *= p - 3;
    else if (p % 3 == 2 && p != 2) n *= p - 1;
  }
  return n;
}

SSetReport verify_s_set(std::optional<Modulus> restrict_to, Parallelism par) {
  std::vector<u64> moduli;
  for (u64 Q : kExceptionalConductors)
    if (!restrict_to || restrict_to->q() % Q == 0) moduli.push_back(Q);

  std::vector<SSetEntry> entries(moduli.size());
  parallel_chunks(moduli.size(), par, [&](std::size_t i) {
    const Modulus m(moduli[i]);
    SSetEntry e;
    e.modulus = m.q();
    e.normalizer = exceptional_normalizer(m.q());
    bool first = true;
    bool exact_hit = false;
    for (u64 idx = 0; idx < m.phi(); ++idx) {
      const auto psi = character_at(m, idx);
      if (!psi.is_primitive()) continue;
      ++e.primitive_characters;
      const u64 q = m.q();
      const auto sum = brute_sum(
          psi, q, [&](u64 v) { return gcd(v, q) == 1; }, [&](u64 v) { return quadratic_mod(v, q); });
      const double re = sum.value().real();
      if (first || re > e.max_real_sum) {
        e.max_real_sum = re;
        e.argmax_character = idx;
        first = false;
      }
      // Equality with 1/4 is accepted only when 4 Re(sum) rounds to an
      // integer equal to the normalizer.
      const double scaled = 4.0 * re;
      const double rounded = std::round(scaled);
      if (std::abs(scaled - rounded) < 1e-9 &&
          static_cast<i64>(rounded) == static_cast<i64>(e.normalizer))
        exact_hit = true;
    }
    e.normalized_max = e.max_real_sum / static_cast<double>(e.normalizer);
    e.attains_quarter = exact_hit && std::abs(e.normalized_max - 0.25) <= 1e-9;
    entries[i] = e;
  });

  SSetReport report;
  report.entries = std::move(entries);
  bool any = false;
  for (const auto& e : report.entries) {
    if (!any || e.normalized_max > report.global_max) report.global_max = e.normalized_max;
    any = true;
    if (e.normalized_max > 0.25 + 1e-9) report.bound_holds = false;
    if (e.attains_quarter) report.attaining.push_back(e.modulus);
  }
  std::sort(report.attaining.begin(), report.attaining.end());
  report.global_max_is_exact_quarter = report.bound_holds && !report.attaining.empty();
  if (report.global_max_is_exact_quarter) report.global_max = 0.25;
  return report;
}

Rational alpha_F(const PolynomialSpec& f, const Modulus& m) {
  Rational result(1);
  for (const auto& [p, e] : m.factorization()) {
    i64 good = 0;
    for (u64 u = 1; u < p; ++u)
      if (f.eval_mod(u, p) != 0) ++good;
    result *= Rational(good, static_cast<i64>(p) - 1);
  }
  return result;
}

double rho_power_sum(const Modulus& m, unsigned exponent) {
  if (!m.is_odd())
    throw UnsupportedModulusError("rho_power_sum: q must be odd (q=" + std::to_string(m.q()) + ")");
  double total = 0;
  for (u64 i = 1; i < m.phi(); ++i)
    total += std::pow(std::abs(rho_closed_form(character_at(m, i)).value), exponent);
  return total;
}

double eta_power_sum(const Modulus& m, unsigned exponent) {
  if (m.q() % 3 == 0)
    throw UnsupportedModulusError("eta_power_sum: q must be coprime to 3 (q=" +
                                  std::to_string(m.q()) + ")");
  double total = 0;
  for (u64 i = 1; i < m.phi(); ++i)
    total += std::pow(std::abs(eta_factored(character_at(m, i)).value), exponent);
  return total;
}

}  // namespace sigmaeq
