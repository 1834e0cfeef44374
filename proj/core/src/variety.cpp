#include "sigmaeq/variety.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <string>

#include "sigmaeq/census.hpp"
#include "sigmaeq/error.hpp"

namespace sigmaeq {

namespace {

// Beyond this many histogram products the convolution is refused.
constexpr u64 kConvolutionBudget = u64{40'000'000'000};

u64 checked_mul(u64 a, u64 b, const char* what) {
  u64 out = 0;
  if (__builtin_mul_overflow(a, b, &out)) throw ResourceError(std::string(what) + ": overflow");
  return out;
}

u64 cyclotomic(u64 v, u64 n) { return (mul_mod(v, v, n) + v + 1) % n; }

// h[r] = #{v unit mod l^e : v^2 + v + 1 = r}, kept only for unit r.
std::vector<u64> value_histogram(const PrimePowerComponent& c) {
  std::vector<u64> h(c.modulus, 0);
  for (u64 v = 0; v < c.modulus; ++v) {
    if (c.modulus > 1 && v % c.prime == 0) continue;
    const u64 r = c.modulus == 1 ? 0 : cyclotomic(v, c.modulus);
    if (c.modulus == 1 || r % c.prime != 0) ++h[r];
  }
  return h;
}

std::vector<u64> support_of(const std::vector<u64>& h) {
  std::vector<u64> s;
  for (u64 r = 0; r < h.size(); ++r)
    if (h[r] != 0) s.push_back(r);
  return s;
}

// Multiplicative convolution (a * b)[w] = sum_{rs = w} a[r] b[s] over the
// supports of a and b.
std::vector<u64> convolve(const std::vector<u64>& a, const std::vector<u64>& b, u64 n) {
  const auto sa = support_of(a);
  const auto sb = support_of(b);
  if (static_cast<double>(sa.size()) * static_cast<double>(sb.size()) >
      static_cast<double>(kConvolutionBudget))
    throw ResourceError("v_count: local convolution mod " + std::to_string(n) + " too large");
  std::vector<u64> out(n, 0);
  for (u64 r : sa)
    for (u64 s : sb) out[n == 1 ? 0 : mul_mod(r, s, n)] += a[r] * b[s];
  return out;
}

std::vector<u64> local_table(const PrimePowerComponent& c, unsigned arity) {
  const auto h = value_histogram(c);
  auto table = h;
  for (unsigned j = 1; j < arity; ++j) table = convolve(table, h, c.modulus);
  return table;
}

u64 local_count(const PrimePowerComponent& c, u64 w, unsigned arity) {
  const u64 n = c.modulus;
  const auto h = value_histogram(c);
  const auto& base = arity == 3 ? convolve(h, h, n) : h;
  u64 total = 0;
  for (u64 r = 0; r < n; ++r) {
    if (base[r] == 0) continue;
    const u64 inv = n == 1 ? 0 : *inverse_mod(r, n);
    total += base[r] * h[n == 1 ? 0 : mul_mod(w % n, inv, n)];
  }
  return total;
}

void check_arity(unsigned arity) {
  if (arity != 2 && arity != 3) throw DomainError("v_count: arity must be 2 or 3");
}

// Solutions of x = a_i mod n_i for pairwise coprime n_i.
u64 crt_pair(u64 a, u64 m, u64 b, u64 n) {
  if (m == 1) return b % n;
  if (n == 1) return a;
  const u64 inv = *inverse_mod(m % n, n);
  const u64 diff = (b + n - a % n) % n;
  return a + m * mul_mod(diff, inv, n);
}

u64 saturating_pow(u64 base, unsigned e) {
  u64 out = 1;
  for (unsigned i = 0; i < e; ++i)
    if (__builtin_mul_overflow(out, base, &out)) return ~u64{0};
  return out;
}

std::vector<u64> primes_in(double y) {
  std::vector<u64> out;
  if (y < 5) return out;
  for (u32 p : simple_primes(static_cast<u32>(std::floor(y))))
    if (p >= 5) out.push_back(p);
  return out;
}

u64 isqrt(u64 x) {
  u64 r = static_cast<u64>(std::sqrt(static_cast<double>(x)));
  while (r * r > x) --r;
  while ((r + 1) * (r + 1) <= x) ++r;
  return r;
}

// Primes in [lo, hi] bucketed by residue mod q: sorted (residue, prime) pairs.
struct ResidueBuckets {
  std::vector<std::pair<u64, u64>> entries;

  u64 count(u64 residue, u64 lo, u64 hi) const {
    if (lo > hi) return 0;
    const auto first = std::lower_bound(entries.begin(), entries.end(), std::pair{residue, lo});
    const auto last = std::upper_bound(entries.begin(), entries.end(), std::pair{residue, hi});
    return first < last ? static_cast<u64>(last - first) : 0;
  }
};

ResidueBuckets bucket(const std::vector<u32>& primes, u64 q) {
  ResidueBuckets b;
  b.entries.reserve(primes.size());
  for (u64 p : primes) b.entries.emplace_back(p % q, p);
  std::sort(b.entries.begin(), b.entries.end());
  return b;
}

void fill_census_side(WitnessReport& r, const Modulus& m, const CensusFilter& f,
                      const FactorSieve& sieve, Parallelism par) {
  const auto report = census(r.x, m, f, sieve, par);
  r.witness_count = report.count_of(r.witness_class);
  r.mean_count = report.mean;
  if (report.mean > 0) r.ratio = static_cast<double>(r.witness_count) / report.mean;
}

}  // namespace

SolutionCount v_count(const Modulus& m, u64 w, unsigned arity) {
  check_arity(arity);
  const u64 q = m.q();
  if (gcd(w % q, q) != 1)
    throw DomainError("v_count: w=" + std::to_string(w) + " is not a unit mod " + std::to_string(q));
  SolutionCount out{q, w % q, arity, 1};
  for (const auto& c : m.components())
    out.count = checked_mul(out.count, local_count(c, w, arity), "v_count");
  return out;
}

std::vector<u64> v_count_table(const Modulus& m, unsigned arity) {
  check_arity(arity);
  const u64 q = m.q();
  std::vector<u64> out(q, 1);
  for (const auto& c : m.components()) {
    const auto local = local_table(c, arity);
    for (u64 w = 0; w < q; ++w) out[w] = checked_mul(out[w], local[w % c.modulus], "v_count_table");
  }
  for (u64 w = 0; w < q; ++w)
    if (gcd(w, q) != 1) out[w] = 0;
  return out;
}

std::vector<u64> cyclotomic_preimages(u64 t, u64 q) {
  if (q == 0) throw DomainError("cyclotomic_preimages: q must be positive");
  std::vector<u64> acc{0};
  u64 acc_mod = 1;
  for (const auto& pp : factorize_trial(q)) {
    const u64 n = saturating_pow(pp.prime, pp.exponent);
    std::vector<u64> local;
    for (u64 v = 0; v < n; ++v)
      if (cyclotomic(v, n) == t % n) local.push_back(v);
    std::vector<u64> next;
    next.reserve(acc.size() * local.size());
    for (u64 a : acc)
      for (u64 b : local) next.push_back(crt_pair(a, acc_mod, b, n));
    acc = std::move(next);
    acc_mod *= n;
  }
  std::sort(acc.begin(), acc.end());
  return acc;
}

LiftCount lift_count_mod_ell_squared(u64 prime, Parallelism par) {
  if (prime < 5 || !is_prime_trial(prime))
    throw DomainError("lift_count_mod_ell_squared: l must be a prime >= 5");
  const u64 n = prime * prime;
  LiftCount out;
  out.prime = prime;
  out.target = mul_mod(9, *inverse_mod(16, n), n);
  const u64 half = mul_mod(prime - 1, *inverse_mod(2, prime), prime);  // -1/2 mod l

  std::vector<u64> units;
  std::vector<u64> values;
  for (u64 v = 1; v < n; ++v) {
    if (v % prime == 0) continue;
    units.push_back(v);
    values.push_back(cyclotomic(v, n));
  }
  constexpr std::size_t kRows = 64;
  const std::size_t chunks = (units.size() + kRows - 1) / kRows;
  std::vector<u64> counts(chunks, 0);
  std::vector<u64> s1(chunks, 0);
  parallel_chunks(chunks, par, [&](std::size_t c) {
    const std::size_t lo = c * kRows;
    const std::size_t hi = std::min(units.size(), lo + kRows);
    for (std::size_t i = lo; i < hi; ++i) {
      const u64 a = values[i];
      const bool first_special = units[i] % prime == half;
      for (std::size_t j = 0; j < units.size(); ++j) {
        if (a * values[j] % n != out.target) continue;
        ++counts[c];
        if (first_special && units[j] % prime == half) ++s1[c];
      }
    }
  });
  for (std::size_t c = 0; c < chunks; ++c) {
    out.count += counts[c];
    out.s1 += s1[c];
  }
  return out;
}

CurveCount curve_point_count(u64 prime, CurveKind kind, u64 w) {
  if (!is_prime_trial(prime)) throw DomainError("curve_point_count: l must be prime");
  const u64 l = prime;
  // Both curves are A(X) A(Y) = t for a one-variable A.
  std::vector<u64> hist(l, 0);
  for (u64 x = 0; x < l; ++x) {
    const u64 a = kind == CurveKind::g ? (mul_mod(x, x, l) + 3) % l : cyclotomic(x, l);
    ++hist[a];
  }
  const u64 t = kind == CurveKind::g ? 9 % l : w % l;
  u64 count = 0;
  if (t == 0) {
    // A(X) = 0 or A(Y) = 0.
    count = 2 * hist[0] * l - hist[0] * hist[0];
  } else {
    for (u64 a = 1; a < l; ++a)
      if (hist[a] != 0) count += hist[a] * hist[mul_mod(t, *inverse_mod(a, l), l)];
  }
  CurveCount out;
  out.prime = l;
  out.kind = kind;
  out.w = kind == CurveKind::h ? w : 0;
  out.count = count;
  out.below_five = l < 5;
  return out;
}

CurveScan curve_scan(u64 bound, CurveKind kind, u64 w, Parallelism par) {
  CurveScan scan;
  scan.kind = kind;
  scan.w = kind == CurveKind::h ? w : 0;
  std::vector<u64> primes;
  if (bound >= 5)
    for (u32 p : simple_primes(static_cast<u32>(bound)))
      if (p >= 5) primes.push_back(p);
  scan.counts.resize(primes.size());
  parallel_chunks(primes.size(), par,
                  [&](std::size_t i) { scan.counts[i] = curve_point_count(primes[i], kind, w); });
  scan.primes_checked = primes.size();
  for (const auto& c : scan.counts) {
    const double l = static_cast<double>(c.prime);
    const double err = std::abs(static_cast<double>(c.count) - l) / std::sqrt(l);
    if (err > scan.max_normalized_error) {
      scan.max_normalized_error = err;
      scan.worst_prime = c.prime;
    }
  }
  return scan;
}

std::string curve_name(CurveKind kind) { return kind == CurveKind::g ? "G" : "H"; }

u64 witness_even_modulus(double y) {
  u64 q = 2;
  for (u64 l : primes_in(y)) {
    if (__builtin_mul_overflow(q, l * l, &q))
      throw DomainError("witness_even_modulus: q overflows 64 bits for Y=" + std::to_string(y));
  }
  return q;
}

u64 witness_sqfree_modulus(double y) {
  u64 q = 2;
  for (u64 l : primes_in(y)) {
    if (__builtin_mul_overflow(q, l, &q))
      throw DomainError("witness_sqfree_modulus: q overflows 64 bits for Y=" + std::to_string(y));
  }
  return q;
}

u64 witness_even_target(u64 q) {
  u64 acc = 1;  // odd
  u64 acc_mod = 2;
  for (const auto& pp : factorize_trial(q)) {
    if (pp.prime == 2) continue;
    const u64 n = saturating_pow(pp.prime, pp.exponent);
    const u64 local = mul_mod(9 % n, *inverse_mod(16 % n, n), n);
    acc = crt_pair(acc, acc_mod, local, n);
    acc_mod *= n;
  }
  return acc % q;
}

WitnessReport overrep_witness_even(double y, u64 x, const FactorSieve& sieve, Parallelism par) {
  const u64 q = witness_even_modulus(y);
  if (x > sieve.limit()) throw OutOfRangeError("overrep_witness_even: x exceeds the sieve");
  WitnessReport r;
  r.q = q;
  r.y = y;
  r.x = x;
  r.witness_class = witness_even_target(q);
  r.in_asymptotic_range = saturating_pow(q, 10) < x;

  const u64 root = isqrt(x);
  const auto primes = sieve.primes_up_to(std::max<u64>(root, 2));
  std::vector<u64> small;  // x^{1/10} < P_2 <= x^{1/6}
  std::vector<u32> large;  // x^{1/6} < P_1 <= x^{1/2}
  for (u64 p : primes) {
    if (saturating_pow(p, 10) > x && saturating_pow(p, 6) <= x) small.push_back(p);
    if (saturating_pow(p, 6) > x) large.push_back(static_cast<u32>(p));
  }
  const u64 large_lo = large.empty() ? 1 : large.front();
  const auto buckets = bucket(large, q);

  // For each P_2 the admissible P_1 classes are the roots of
  // v^2 + v + 1 = w_q / sigma(P_2^2) mod q.
  std::vector<u64> crt(small.size(), 0);
  std::vector<u64> direct(small.size(), 0);
  std::vector<u64> classes(small.size(), 0);
  parallel_chunks(small.size(), par, [&](std::size_t i) {
    const u64 p2 = small[i];
    const u64 hi = root / p2;  // P_1 P_2 <= x^{1/2}
    const u64 s2 = cyclotomic(p2 % q, q);
    const auto inv = inverse_mod(s2, q);
    if (!inv) return;
    const u64 t = mul_mod(r.witness_class, *inv, q);
    for (u64 v : cyclotomic_preimages(t, q)) {
      ++classes[i];
      crt[i] += buckets.count(v, large_lo, hi);
    }
    for (u64 p1 : large) {
      if (p1 > hi) break;
      if (mul_mod(cyclotomic(p1 % q, q), s2, q) == r.witness_class) ++direct[i];
    }
  });
  for (std::size_t i = 0; i < small.size(); ++i) {
    r.crt_count += crt[i];
    r.direct_count += direct[i];
    r.admissible_classes += classes[i];
  }
  fill_census_side(r, Modulus(q), CensusFilter::pk_above(4, q), sieve, par);
  return r;
}

WitnessReport overrep_witness_sqfree(double y, u64 x, const FactorSieve& sieve, Parallelism par) {
  const u64 q = witness_sqfree_modulus(y);
  if (x > sieve.limit()) throw OutOfRangeError("overrep_witness_sqfree: x exceeds the sieve");
  WitnessReport r;
  r.q = q;
  r.y = y;
  r.x = x;
  r.witness_class = 3 % q;
  r.in_asymptotic_range = saturating_pow(q, 4) < x;

  const u64 root = isqrt(x);
  std::vector<u32> range;  // x^{1/4} < P <= x^{1/2}
  for (u32 p : sieve.primes_up_to(std::max<u64>(root, 2)))
    if (saturating_pow(p, 4) > x) range.push_back(p);

  // P = 1 or -2 mod each odd l | q, P odd: assembled by CRT.
  std::vector<u64> admissible{1};
  u64 acc_mod = 2;
  for (u64 l : primes_in(y)) {
    std::vector<u64> next;
    for (u64 a : admissible)
      for (u64 b : {u64{1}, l - 2}) next.push_back(crt_pair(a, acc_mod, b, l));
    admissible = std::move(next);
    acc_mod *= l;
  }
  std::sort(admissible.begin(), admissible.end());
  r.admissible_classes = admissible.size();

  if (!range.empty()) {
    const auto buckets = bucket(range, q);
    for (u64 v : admissible) r.crt_count += buckets.count(v, range.front(), range.back());
  }
  for (u64 p : range)
    if (cyclotomic(p % q, q) == r.witness_class) ++r.direct_count;

  fill_census_side(r, Modulus(q), CensusFilter::pk_above(2, q), sieve, par);
  return r;
}

}  // namespace sigmaeq
