#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sigmaeq/parallel.hpp"
#include "sigmaeq/sieve.hpp"
#include "sigmaeq/unit_group.hpp"

namespace sigmaeq {

// Empirical constants standing in for implied O-constants, calibrated once by
// oracle scans (l <= 2000 for curves, l <= 100 for lifts, squarefree q <= 500).
// Observed maxima: |N - l|/sqrt(l) 2.14 (H, w = 1); |lift/l^2 - 2| sqrt(l) 2.50;
// per-prime (V~_l(w) - l + 1)/sqrt(l) 2.23.
inline constexpr double kLiftWindowConstant = 6.0;    // lift / l^2 in [2 -+ c/sqrt(l)]
inline constexpr double kCurveSqrtConstant = 6.0;     // |N - l| <= c sqrt(l) + d
inline constexpr double kCurveOffset = 10.0;
inline constexpr double kSquarefreeLocalConstant = 6.0;  // V~_q(w) <= prod (l - 1 + c sqrt(l))

// #{(v_1..v_arity) in U_q^arity : prod (v_j^2 + v_j + 1) = w mod q}.
struct SolutionCount {
  u64 q = 1;
  u64 w = 0;
  unsigned arity = 2;
  u64 count = 0;
};

// Exact count by CRT: per l^e || q the value distribution of v^2 + v + 1
// over units is convolved multiplicatively, local counts are multiplied.
// DomainError when gcd(w, q) > 1 or arity is not 2 or 3; ResourceError if the
// count overflows 64 bits.
SolutionCount v_count(const Modulus& m, u64 w, unsigned arity);

// The full table w -> count over all w mod q (0 at non-units).
std::vector<u64> v_count_table(const Modulus& m, unsigned arity);

// v mod q with v^2 + v + 1 = t mod q, ascending; v need not be a unit.
std::vector<u64> cyclotomic_preimages(u64 t, u64 q);

struct LiftCount {
  u64 prime = 0;
  u64 target = 0;  // 9 * 16^{-1} mod l^2
  u64 count = 0;
  // Pairs with v_1 = v_2 = -1/2 mod l, the block where both 4a_i - 3 vanish.
  u64 s1 = 0;
};

// #{(v_1, v_2) in U_{l^2}^2 : (v_1^2+v_1+1)(v_2^2+v_2+1) = 9 * 16^{-1}} by
// direct enumeration of all pairs. DomainError unless l >= 5 is prime.
LiftCount lift_count_mod_ell_squared(u64 prime, Parallelism par = Parallelism::hardware());

enum class CurveKind {
  g,  // (X^2 + 3)(Y^2 + 3) - 9
  h,  // (X^2 + X + 1)(Y^2 + Y + 1) - w
};

struct CurveCount {
  u64 prime = 0;
  CurveKind kind = CurveKind::g;
  u64 w = 0;  // H only
  u64 count = 0;
  bool below_five = false;  // l < 5: outside the irreducibility-backed range
};

// Points of the curve over F_l. DomainError when l is not prime.
CurveCount curve_point_count(u64 prime, CurveKind kind, u64 w = 1);

struct CurveScan {
  CurveKind kind = CurveKind::g;
  u64 w = 0;
  u64 primes_checked = 0;
  double max_normalized_error = 0;  // max |N - l| / sqrt(l)
  u64 worst_prime = 0;
  std::vector<CurveCount> counts;
};

// curve_point_count for every prime 5 <= l <= bound.
CurveScan curve_scan(u64 bound, CurveKind kind, u64 w = 1,
                     Parallelism par = Parallelism::hardware());

std::string curve_name(CurveKind kind);

struct WitnessReport {
  u64 q = 0;
  double y = 0;
  u64 x = 0;
  u64 witness_class = 0;
  u64 admissible_classes = 0;  // residue classes the construction allows
  u64 crt_count = 0;           // count via residue classes and CRT
  u64 direct_count = 0;        // count via plain enumeration of primes
  // Under the census filter (P_4(n) > q, resp. P_2(n) > q).
  u64 witness_count = 0;
  double mean_count = 0;
  std::optional<double> ratio;  // witness_count / mean_count
  // x^{1/10} > q (even), x^{1/4} > q (squarefree): the construction is in range.
  bool in_asymptotic_range = false;
};

// q = 2 prod_{5 <= l <= Y} l^2, w_q = 9 * 16^{-1} mod each l^2 and odd. Counts
// n = P_1^2 P_2^2 <= x with x^{1/10} < P_2 <= x^{1/6} < P_1 and
// sigma(n) = w_q mod q. DomainError when q overflows; the sieve must reach x.
WitnessReport overrep_witness_even(double y, u64 x, const FactorSieve& sieve,
                                   Parallelism par = Parallelism::hardware());

// q = 2 prod_{5 <= l <= Y} l. Counts primes x^{1/4} < P <= x^{1/2} with
// sigma(P^2) = 3 mod q, i.e. P = 1 or -2 mod every odd l | q.
WitnessReport overrep_witness_sqfree(double y, u64 x, const FactorSieve& sieve,
                                     Parallelism par = Parallelism::hardware());

// The witness moduli on their own (DomainError on overflow).
u64 witness_even_modulus(double y);
u64 witness_sqfree_modulus(double y);
u64 witness_even_target(u64 q);

}  // namespace sigmaeq
