#include "sigmaeq/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sigmaeq/error.hpp"

namespace sigmaeq {

std::vector<u32> simple_primes(u32 bound) {
  std::vector<u32> primes;
  if (bound < 2) return primes;
  std::vector<bool> composite(static_cast<std::size_t>(bound) + 1, false);
  for (u64 i = 2; i <= bound; ++i) {
    if (composite[i]) continue;
    primes.push_back(static_cast<u32>(i));
    for (u64 j = i * i; j <= bound; j += i) composite[j] = true;
  }
  return primes;
}

FactorSieve build_sieve(u64 x, const SieveOptions& options) {
  if (x < 2) throw DomainError("build_sieve: x must be at least 2");
  const std::size_t needed = (static_cast<std::size_t>(x) + 1) * sizeof(u32);
  if (x > FactorSieve::kMaxLimit || needed > options.memory_budget_bytes) {
    throw ResourceError("build_sieve: x=" + std::to_string(x) + " needs " +
                        std::to_string(needed) +
                        " bytes, exceeding the memory budget of " +
                        std::to_string(options.memory_budget_bytes) + " bytes");
  }

  FactorSieve sieve;
  sieve.limit_ = x;
  sieve.spf_.assign(static_cast<std::size_t>(x) + 1, 0);

  const auto root = static_cast<u32>(std::sqrt(static_cast<double>(x))) + 1;
  const auto base = simple_primes(root);
  const u64 seg = std::max<std::size_t>(options.segment_length, 64);
  const std::size_t segments = static_cast<std::size_t>((x + 1 + seg - 1) / seg);

  // Segments write disjoint ranges of spf_; base primes are visited in
  // increasing order so the first writer of an entry is its smallest factor.
  parallel_chunks(segments, options.parallelism, [&](std::size_t s) {
    const u64 lo = std::max<u64>(2, s * seg);
    const u64 hi = std::min<u64>(x, (s + 1) * seg - 1);
    if (lo > hi) return;
    u32* spf = sieve.spf_.data();
    for (u32 p : base) {
      const u64 pp = static_cast<u64>(p) * p;
      if (pp > hi) break;
      u64 start = std::max(pp, (lo + p - 1) / p * p);
      for (u64 j = start; j <= hi; j += p)
        if (spf[j] == 0) spf[j] = p;
    }
    for (u64 n = lo; n <= hi; ++n)
      if (spf[n] == 0) spf[n] = static_cast<u32>(n);
  });
  return sieve;
}

u32 FactorSieve::smallest_prime_factor(u64 n) const {
  if (n < 2 || n > limit_)
    throw OutOfRangeError("smallest_prime_factor: n=" + std::to_string(n) +
                          " outside [2, " + std::to_string(limit_) + "]");
  return spf_[n];
}

bool FactorSieve::is_prime(u64 n) const {
  return n >= 2 && n <= limit_ && spf_[n] == n;
}

Factorization FactorSieve::factorize(u64 n) const {
  if (n == 0 || n > limit_)
    throw OutOfRangeError("factorize: n=" + std::to_string(n) +
                          " outside [1, " + std::to_string(limit_) + "]");
  return factorize_unchecked(n);
}

Factorization FactorSieve::factorize_unchecked(u64 n) const {
  Factorization f;
  while (n > 1) {
    const u32 p = spf_[n];
    u32 e = 0;
    do {
      n /= p;
      ++e;
    } while (n % p == 0);
    f.push(p, e);
  }
  return f;
}

std::vector<u32> FactorSieve::primes_up_to(u64 bound) const {
  if (bound > limit_)
    throw OutOfRangeError("primes_up_to: bound " + std::to_string(bound) +
                          " exceeds sieve limit " + std::to_string(limit_));
  std::vector<u32> primes;
  for (u64 n = 2; n <= bound; ++n)
    if (spf_[n] == n) primes.push_back(static_cast<u32>(n));
  return primes;
}

u64 psi_smooth_count(u64 x, double z, const FactorSieve& sieve,
                     Parallelism par) {
  if (x == 0) throw DomainError("psi_smooth_count: x must be >= 1");
  if (z < 2) throw DomainError("psi_smooth_count: z must be >= 2");
  if (x > sieve.limit())
    throw OutOfRangeError("psi_smooth_count: x=" + std::to_string(x) +
                          " exceeds sieve limit " +
                          std::to_string(sieve.limit()));
  constexpr u64 kChunk = u64{1} << 16;
  const std::size_t chunks = static_cast<std::size_t>((x + kChunk - 1) / kChunk);
  std::vector<u64> partial(chunks, 0);
  parallel_chunks(chunks, par, [&](std::size_t c) {
    const u64 lo = c * kChunk + 1;
    const u64 hi = std::min(x, (c + 1) * kChunk);
    u64 count = 0;
    for (u64 n = lo; n <= hi; ++n) {
      // P(n) <= z iff the cofactor left after removing primes <= z is 1;
      // walking spf upward stops at the first prime above z.
      u64 m = n;
      while (m > 1 && sieve.smallest_prime_factor(m) <= z) m /= sieve.smallest_prime_factor(m);
      if (m == 1) ++count;
    }
    partial[c] = count;
  });
  u64 total = 0;
  for (u64 c : partial) total += c;
  return total;
}

}  // namespace sigmaeq
