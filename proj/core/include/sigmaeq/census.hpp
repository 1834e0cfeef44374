#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "sigmaeq/char_sums.hpp"
#include "sigmaeq/character.hpp"
#include "sigmaeq/parallel.hpp"
#include "sigmaeq/root_of_unity.hpp"
#include "sigmaeq/sieve.hpp"
#include "sigmaeq/unit_group.hpp"

namespace sigmaeq {

// Which n <= x enter a census.
struct CensusFilter {
  enum class Kind {
    all,
    coprime_only,  // gcd(n, q) = 1
    pk_above,      // P_k(n) > threshold
    pk_at_most,    // P_k(n) <= threshold
  };

  Kind kind = Kind::all;
  u32 k = 0;
  u64 threshold = 0;

  // Optional proof-internal splits, applied on top of kind; off by default.
  std::optional<double> p2_at_most;     // keep n with P_2(n) <= y
  std::optional<double> largest_above;  // keep n with P(n) > z

  static CensusFilter all() { return {}; }
  static CensusFilter coprime_only() { return {Kind::coprime_only, 0, 0, {}, {}}; }
  static CensusFilter pk_above(u32 k, u64 threshold) {
    return {Kind::pk_above, k, threshold, {}, {}};
  }
  static CensusFilter pk_at_most(u32 k, u64 threshold) {
    return {Kind::pk_at_most, k, threshold, {}, {}};
  }

  // DomainError when a pk kind has k = 0.
  void validate() const;
  bool accepts(const Factorization& n, u64 q) const;
  std::string describe() const;
};

// y = exp((log x)^{eps/2}).
double proof_y_threshold(u64 x, double eps);
// z = x^{1 / log log x}; needs x > e.
double proof_z_threshold(u64 x);

struct CensusReport {
  u64 x = 0;
  u64 q = 1;
  CensusFilter filter;
  std::vector<u64> classes;  // units mod q, ascending
  std::vector<u64> counts;   // counts[i] for classes[i]
  u64 total_filtered = 0;    // n <= x passing the filter
  u64 total_coprime = 0;     // of those, gcd(sigma(n), q) = 1
  double mean = 0;           // total_coprime / phi(q)
  double max_rel_deviation = 0;
  Rational alpha{1};
  Rational alpha_tilde{1};

  // Count for residue a (0 for non-units).
  u64 count_of(u64 a) const;
};

// #{n <= x filtered : sigma(n) = a mod q} for every unit a. The range is
// streamed in fixed blocks; nothing per n is kept. OutOfRangeError when x
// exceeds the sieve.
CensusReport census(u64 x, const Modulus& m, const CensusFilter& f, const FactorSieve& sieve,
                    Parallelism par = Parallelism::hardware());

// The filtered n <= x with gcd(sigma(n), q) = 1, ascending.
std::vector<u64> census_members(u64 x, const Modulus& m, const CensusFilter& f,
                                const FactorSieve& sieve,
                                Parallelism par = Parallelism::hardware());

// sum over filtered n <= x of chi(sigma(n)), accumulated exactly.
RootOfUnitySum twisted_partial_sum(u64 x, const DirichletCharacter& chi, const CensusFilter& f,
                                   const FactorSieve& sieve,
                                   Parallelism par = Parallelism::hardware());

// sum_{p <= x, gcd(F(p), q) = 1} 1/p.
double prime_reciprocal_sum(const PolynomialSpec& f, const Modulus& m, u64 x,
                            const FactorSieve& sieve, Parallelism par = Parallelism::hardware());

// max_a |count(a) phi(q) / total - 1|. DomainError when total_coprime is 0.
double discrepancy(const CensusReport& report);

enum class Parity { odd, even };

struct RoughEstimate {
  double value = 0;
  double exponent = 0;  // alpha(q) or alpha~(q) used
  // The exp(O(.)) correction of the true asymptotic is not included.
  bool correction_omitted = true;
};

// x / (log x)^{1 - alpha(q)} for odd q, x^{1/2} / (log x)^{1 - alpha~(q)} for
// even q. UnsupportedModulusError when the parity of q does not match, or q
// is even and divisible by 3. DomainError for x < 2.
RoughEstimate rough_count_estimate(u64 x, const Modulus& m, Parity which);

}  // namespace sigmaeq
