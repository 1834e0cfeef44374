#include "sigmaeq/census.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <string>

#include "sigmaeq/error.hpp"

namespace sigmaeq {

namespace {

constexpr u64 kBlock = u64{1} << 16;

struct BlockHits {
  u64 filtered = 0;
  std::vector<u64> residues;  // sigma(n) mod q for the coprime hits
  std::vector<u64> members;   // the n themselves, when requested
};

void check_range(u64 x, const FactorSieve& sieve, const char* what) {
  if (x > sieve.limit())
    throw OutOfRangeError(std::string(what) + ": x=" + std::to_string(x) +
                          " exceeds sieve limit " + std::to_string(sieve.limit()));
}

// Streams 1..x in fixed blocks. merge(hits) is called once per block under a
// lock; callers only perform commutative integer updates in it.
template <class Merge>
void scan_sigma(u64 x, u64 q, const CensusFilter& f, const FactorSieve& sieve, Parallelism par,
                bool keep_members, Merge&& merge) {
  f.validate();
  const std::size_t blocks = static_cast<std::size_t>((x + kBlock - 1) / kBlock);
  std::mutex lock;
  parallel_chunks(blocks, par, [&](std::size_t b) {
    BlockHits hits;
    const u64 lo = b * kBlock + 1;
    const u64 hi = std::min(x, (b + 1) * kBlock);
    for (u64 n = lo; n <= hi; ++n) {
      const Factorization fac = sieve.factorize_unchecked(n);
      if (!f.accepts(fac, q)) continue;
      ++hits.filtered;
      const u64 s = sigma_mod(fac, q);
      if (gcd(s, q) != 1) continue;
      hits.residues.push_back(s);
      if (keep_members) hits.members.push_back(n);
    }
    std::lock_guard guard(lock);
    merge(hits);
  });
}

}  // namespace

void CensusFilter::validate() const {
  if ((kind == Kind::pk_above || kind == Kind::pk_at_most) && k == 0)
    throw DomainError("CensusFilter: k must be >= 1 for a P_k threshold");
}

bool CensusFilter::accepts(const Factorization& n, u64 q) const {
  switch (kind) {
    case Kind::all:
      break;
    case Kind::coprime_only:
      for (const auto& pp : n)
        if (q % pp.prime == 0) return false;
      break;
    case Kind::pk_above:
      if (kth_largest_prime_factor(n, k) <= threshold) return false;
      break;
    case Kind::pk_at_most:
      if (kth_largest_prime_factor(n, k) > threshold) return false;
      break;
  }
  if (p2_at_most && static_cast<double>(kth_largest_prime_factor(n, 2)) > *p2_at_most)
    return false;
  if (largest_above && static_cast<double>(largest_prime_factor(n)) <= *largest_above)
    return false;
  return true;
}

std::string CensusFilter::describe() const {
  std::string out;
  switch (kind) {
    case Kind::all:
      out = "all";
      break;
    case Kind::coprime_only:
      out = "coprime-only";
      break;
    case Kind::pk_above:
      out = "P" + std::to_string(k) + ">" + std::to_string(threshold);
      break;
    case Kind::pk_at_most:
      out = "P" + std::to_string(k) + "<=" + std::to_string(threshold);
      break;
  }
  if (p2_at_most) out += ",P2<=" + std::to_string(*p2_at_most);
  if (largest_above) out += ",P1>" + std::to_string(*largest_above);
  return out;
}

double proof_y_threshold(u64 x, double eps) {
  if (x < 2) throw DomainError("proof_y_threshold: x must be >= 2");
  return std::exp(std::pow(std::log(static_cast<double>(x)), eps / 2.0));
}

double proof_z_threshold(u64 x) {
  const double log_x = std::log(static_cast<double>(x));
  if (log_x <= 1.0) throw DomainError("proof_z_threshold: x must exceed e");
  return std::exp(log_x / std::log(log_x));
}

u64 CensusReport::count_of(u64 a) const {
  const u64 r = q == 0 ? a : a % q;
  const auto it = std::lower_bound(classes.begin(), classes.end(), r);
  if (it == classes.end() || *it != r) return 0;
  return counts[static_cast<std::size_t>(it - classes.begin())];
}

CensusReport census(u64 x, const Modulus& m, const CensusFilter& f, const FactorSieve& sieve,
                    Parallelism par) {
  check_range(x, sieve, "census");
  const u64 q = m.q();
  CensusReport report;
  report.x = x;
  report.q = q;
  report.filter = f;
  report.classes = m.units();
  report.alpha = m.alpha();
  report.alpha_tilde = m.alpha_tilde();

  std::vector<u64> by_residue(q, 0);
  scan_sigma(x, q, f, sieve, par, false, [&](const BlockHits& hits) {
    report.total_filtered += hits.filtered;
    for (u64 r : hits.residues) ++by_residue[r];
  });

  report.counts.reserve(report.classes.size());
  for (u64 a : report.classes) {
    report.counts.push_back(by_residue[a]);
    report.total_coprime += by_residue[a];
  }
  report.mean = static_cast<double>(report.total_coprime) / static_cast<double>(m.phi());
  if (report.total_coprime > 0) report.max_rel_deviation = discrepancy(report);
  return report;
}

std::vector<u64> census_members(u64 x, const Modulus& m, const CensusFilter& f,
                                const FactorSieve& sieve, Parallelism par) {
  check_range(x, sieve, "census_members");
  std::vector<u64> out;
  scan_sigma(x, m.q(), f, sieve, par, true, [&](const BlockHits& hits) {
    out.insert(out.end(), hits.members.begin(), hits.members.end());
  });
  std::sort(out.begin(), out.end());
  return out;
}

RootOfUnitySum twisted_partial_sum(u64 x, const DirichletCharacter& chi, const CensusFilter& f,
                                   const FactorSieve& sieve, Parallelism par) {
  check_range(x, sieve, "twisted_partial_sum");
  const Modulus& m = chi.modulus();
  const auto table = chi.exponent_table();
  RootOfUnitySum sum(m.exponent());
  scan_sigma(x, m.q(), f, sieve, par, false, [&](const BlockHits& hits) {
    for (u64 r : hits.residues) sum.add_exponent(static_cast<u64>(table[r]));
    sum.add_zero_terms(hits.filtered - hits.residues.size());
  });
  return sum;
}

double prime_reciprocal_sum(const PolynomialSpec& f, const Modulus& m, u64 x,
                            const FactorSieve& sieve, Parallelism par) {
  check_range(x, sieve, "prime_reciprocal_sum");
  if (x < 2) return 0.0;
  const auto primes = sieve.primes_up_to(x);
  const u64 q = m.q();
  const std::size_t blocks = (primes.size() + kBlock - 1) / kBlock;
  std::vector<double> partial(blocks, 0.0);
  parallel_chunks(blocks, par, [&](std::size_t b) {
    const std::size_t lo = b * kBlock;
    const std::size_t hi = std::min(primes.size(), lo + kBlock);
    double acc = 0.0;
    // Largest primes first within a block keeps the small terms from being
    // swamped.
    for (std::size_t i = hi; i-- > lo;) {
      const u64 p = primes[i];
      if (gcd(f.eval_mod(p, q), q) == 1) acc += 1.0 / static_cast<double>(p);
    }
    partial[b] = acc;
  });
  double total = 0.0;
  for (std::size_t b = blocks; b-- > 0;) total += partial[b];
  return total;
}

double discrepancy(const CensusReport& report) {
  if (report.total_coprime == 0)
    throw DomainError("discrepancy: undefined, no n with sigma(n) coprime to q");
  const double phi = static_cast<double>(report.classes.size());
  const double total = static_cast<double>(report.total_coprime);
  double worst = 0.0;
  for (u64 c : report.counts)
    worst = std::max(worst, std::abs(static_cast<double>(c) * phi / total - 1.0));
  return worst;
}

RoughEstimate rough_count_estimate(u64 x, const Modulus& m, Parity which) {
  if (x < 2) throw DomainError("rough_count_estimate: x must be >= 2");
  const u64 q = m.q();
  const double log_x = std::log(static_cast<double>(x));
  RoughEstimate out;
  if (which == Parity::odd) {
    if (q % 2 == 0) throw UnsupportedModulusError("rough_count_estimate: odd shape needs odd q");
    out.exponent = boost::rational_cast<double>(m.alpha());
    out.value = static_cast<double>(x) / std::pow(log_x, 1.0 - out.exponent);
  } else {
    if (q % 2 != 0) throw UnsupportedModulusError("rough_count_estimate: even shape needs even q");
    if (q % 3 == 0)
      throw UnsupportedModulusError("rough_count_estimate: sigma(n) is almost never coprime to q "
                                    "when 6 | q");
    out.exponent = boost::rational_cast<double>(m.alpha_tilde());
    out.value = std::sqrt(static_cast<double>(x)) / std::pow(log_x, 1.0 - out.exponent);
  }
  return out;
}

}  // namespace sigmaeq
