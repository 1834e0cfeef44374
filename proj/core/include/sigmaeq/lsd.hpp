#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "sigmaeq/parallel.hpp"
#include "sigmaeq/sieve.hpp"

namespace sigmaeq {

using Complex = std::complex<double>;

inline constexpr double kEulerGamma = 0.57721566490153286061;

// Parameters of the rough twisted sum  sum_{n <= X, P^-(n) > Y} beta^Omega(n).
struct TwistedSumParams {
  u64 x = 1;
  double y = 2;
  std::optional<double> z;  // smoothness cut, diagnostics only
  Complex beta{1.0, 0.0};

  // Throws DomainError unless |beta| <= 1, X >= 1, Y >= 2.
  void validate() const;

  // X, Y (and Z when set) all >= e^{11/2}.
  bool above_size_threshold() const;
  // Y <= Z^{1 / (18 log log Z)^2}; nullopt without Z.
  std::optional<bool> y_below_z_threshold() const;
};

// Gamma(s) by the Lanczos approximation (g = 7, nine terms) for Re s >= 1/2
// and the reflection formula below. nullopt at the poles s = 0, -1, -2, ...
std::optional<Complex> complex_gamma(Complex s);

// 1/Gamma(s); zero at the poles.
Complex reciprocal_gamma(Complex s);

// Sum_{n <= X, P^-(n) > Y} beta^Omega(n); n = 1 contributes 1. Evaluated from
// the exact histogram of Omega over the rough n, so the result does not
// depend on the worker count.
Complex exact_twisted_sum(const TwistedSumParams& p, const FactorSieve& sieve,
                          Parallelism par = Parallelism::hardware());

// #{n <= X : P^-(n) > Y, Omega(n) = j} for every j.
std::vector<u64> rough_omega_histogram(u64 x, double y, const FactorSieve& sieve,
                                       Parallelism par = Parallelism::hardware());

struct MainTerm {
  Complex value;
  bool below_size_threshold = false;  // X or Y under e^{11/2}
};

// X / (log X)^{1 - beta} * e^{-gamma beta} / (Gamma(beta) (log Y)^beta).
// Principal branch with positive real bases; beta at a Gamma pole gives 0.
// DomainError for X <= 1.
MainTerm lsd_main_term(const TwistedSumParams& p);

// The same expression for real X > 1 and Y > 1 (no size flag).
Complex lsd_main_term_at(double x, double y, Complex beta);

struct EulerProductResult {
  Complex value;
  u64 truncation = 0;
  // |log(true) - log(partial)| <= log_tail_bound; relative bound below.
  double log_tail_bound = 0;
  double relative_tail_bound = 0;
};

// prod_{p <= Y} (1 - 1/p)^beta * prod_{Y < p <= P_max} (1 - 1/p)^beta (1 - beta/p)^{-1}.
// Each omitted factor has log of size <= 2|beta|/p^2, so the tail is bounded
// by 2|beta| / P_max in log. DomainError when P_max < Y.
EulerProductResult g_one_euler_product(double y, Complex beta, u64 p_max,
                                       const FactorSieve& sieve);

struct ConvergenceRow {
  u64 x = 0;
  Complex exact;
  Complex main_term;
  std::optional<Complex> ratio;  // undefined when the main term vanishes
  bool below_size_threshold = false;
};

std::vector<ConvergenceRow> convergence_scan(Complex beta, const std::vector<u64>& x_grid,
                                             double y, const FactorSieve& sieve,
                                             Parallelism par = Parallelism::hardware());

}  // namespace sigmaeq
