#include "sigmaeq/lsd.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "sigmaeq/error.hpp"

namespace sigmaeq {

namespace {

// Lanczos coefficients for g = 7, n = 9 (Godfrey); relative error near 1e-15
// on the right half plane.
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,   676.5203681218851,     -1259.1392167224028,
    771.32342877765313,    -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,  9.9843695780195716e-6, 1.5056327351493116e-7};

bool is_gamma_pole(Complex s) {
  if (s.imag() != 0.0 || s.real() > 0.0) return false;
  return s.real() == std::floor(s.real());
}

Complex lanczos_gamma(Complex s) {
  // Gamma(s) = sqrt(2 pi) t^{s - 1/2} e^{-t} A(s - 1), t = s - 1 + g + 1/2.
  const Complex z = s - 1.0;
  Complex a = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) a += kLanczos[i] / (z + static_cast<double>(i));
  const Complex t = z + kLanczosG + 0.5;
  return std::sqrt(2.0 * std::numbers::pi) * std::exp((z + 0.5) * std::log(t) - t) * a;
}

constexpr u64 kChunk = u64{1} << 16;

}  // namespace

void TwistedSumParams::validate() const {
  if (x < 1) throw DomainError("TwistedSumParams: X must be >= 1");
  if (!(y >= 2)) throw DomainError("TwistedSumParams: Y must be >= 2");
  if (std::abs(beta) > 1.0 + 1e-12)
    throw DomainError("TwistedSumParams: |beta| must be <= 1");
}

bool TwistedSumParams::above_size_threshold() const {
  const double floor_value = std::exp(5.5);
  return static_cast<double>(x) >= floor_value && y >= floor_value &&
         (!z || *z >= floor_value);
}

std::optional<bool> TwistedSumParams::y_below_z_threshold() const {
  if (!z || *z <= std::exp(1.0)) return std::nullopt;
  const double loglog = std::log(std::log(*z));
  const double denom = 18.0 * loglog;
  return std::log(y) <= std::log(*z) / (denom * denom);
}

std::optional<Complex> complex_gamma(Complex s) {
  if (is_gamma_pole(s)) return std::nullopt;
  if (s.real() < 0.5) {
    // Reflection: Gamma(s) Gamma(1 - s) = pi / sin(pi s).
    const Complex sin_term = std::sin(std::numbers::pi * s);
    return std::numbers::pi / (sin_term * lanczos_gamma(1.0 - s));
  }
  return lanczos_gamma(s);
}

Complex reciprocal_gamma(Complex s) {
  const auto g = complex_gamma(s);
  if (!g) return {0.0, 0.0};
  return 1.0 / *g;
}

std::vector<u64> rough_omega_histogram(u64 x, double y, const FactorSieve& sieve,
                                       Parallelism par) {
  if (x > sieve.limit())
    throw OutOfRangeError("rough_omega_histogram: X=" + std::to_string(x) +
                          " exceeds sieve limit " + std::to_string(sieve.limit()));
  constexpr std::size_t kMaxOmega = 64;
  const std::size_t chunks = static_cast<std::size_t>((x + kChunk - 1) / kChunk);
  std::vector<std::array<u64, kMaxOmega>> partial(chunks);
  parallel_chunks(chunks, par, [&](std::size_t c) {
    std::array<u64, kMaxOmega> hist{};
    const u64 lo = c * kChunk + 1;
    const u64 hi = std::min(x, (c + 1) * kChunk);
    for (u64 n = lo; n <= hi; ++n) {
      if (n == 1) {
        ++hist[0];
        continue;
      }
      if (static_cast<double>(sieve.smallest_prime_factor(n)) <= y) continue;
      ++hist[sieve.factorize_unchecked(n).total()];
    }
    partial[c] = hist;
  });
  std::vector<u64> total(kMaxOmega, 0);
  for (const auto& h : partial)
    for (std::size_t j = 0; j < kMaxOmega; ++j) total[j] += h[j];
  while (total.size() > 1 && total.back() == 0) total.pop_back();
  return total;
}

Complex exact_twisted_sum(const TwistedSumParams& p, const FactorSieve& sieve, Parallelism par) {
  p.validate();
  const auto hist = rough_omega_histogram(p.x, p.y, sieve, par);
  Complex total{0.0, 0.0};
  Complex power{1.0, 0.0};
  for (u64 count : hist) {
    total += static_cast<double>(count) * power;
    power *= p.beta;
  }
  return total;
}

Complex lsd_main_term_at(double x, double y, Complex beta) {
  if (!(x > 1.0)) throw DomainError("lsd_main_term: X must exceed 1");
  if (!(y > 1.0)) throw DomainError("lsd_main_term: Y must exceed 1");
  const double log_x = std::log(x);
  const double log_y = std::log(y);
  // (log X)^{beta - 1} and (log Y)^{-beta} with positive real bases.
  const Complex growth = std::exp((beta - 1.0) * std::log(log_x));
  const Complex damping = std::exp(-beta * std::log(log_y));
  const Complex euler = std::exp(-kEulerGamma * beta);
  return x * growth * euler * reciprocal_gamma(beta) * damping;
}

MainTerm lsd_main_term(const TwistedSumParams& p) {
  p.validate();
  if (p.x <= 1) throw DomainError("lsd_main_term: X must exceed 1");
  MainTerm out;
  out.value = lsd_main_term_at(static_cast<double>(p.x), p.y, p.beta);
  out.below_size_threshold = !p.above_size_threshold();
  return out;
}

EulerProductResult g_one_euler_product(double y, Complex beta, u64 p_max,
                                       const FactorSieve& sieve) {
  if (static_cast<double>(p_max) < y)
    throw DomainError("g_one_euler_product: P_max must be >= Y");
  if (std::abs(beta) > 1.0 + 1e-12)
    throw DomainError("g_one_euler_product: |beta| must be <= 1");
  const auto primes = sieve.primes_up_to(p_max);
  // Accumulate the log; each factor is exp(beta log(1 - 1/p)) and, above Y,
  // exp(-log(1 - beta/p)) on the principal branch (|beta/p| <= 1/2).
  Complex log_sum{0.0, 0.0};
  for (u32 prime : primes) {
    const double inv = 1.0 / static_cast<double>(prime);
    log_sum += beta * std::log1p(-inv);
    if (static_cast<double>(prime) > y) log_sum -= std::log(1.0 - beta * inv);
  }
  EulerProductResult out;
  out.value = std::exp(log_sum);
  out.truncation = p_max;
  out.log_tail_bound = 2.0 * std::abs(beta) / static_cast<double>(p_max);
  out.relative_tail_bound = std::expm1(out.log_tail_bound);
  return out;
}

std::vector<ConvergenceRow> convergence_scan(Complex beta, const std::vector<u64>& x_grid,
                                             double y, const FactorSieve& sieve,
                                             Parallelism par) {
  std::vector<ConvergenceRow> rows;
  rows.reserve(x_grid.size());
  for (u64 x : x_grid) {
    TwistedSumParams params;
    params.x = x;
    params.y = y;
    params.beta = beta;
    ConvergenceRow row;
    row.x = x;
    row.exact = exact_twisted_sum(params, sieve, par);
    const auto main = lsd_main_term(params);
    row.main_term = main.value;
    row.below_size_threshold = main.below_size_threshold;
    if (std::abs(main.value) > 0.0) row.ratio = row.exact / main.value;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace sigmaeq
