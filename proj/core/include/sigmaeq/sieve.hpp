#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "sigmaeq/arith.hpp"
#include "sigmaeq/parallel.hpp"

namespace sigmaeq {

struct SieveOptions {
  std::size_t segment_length = std::size_t{1} << 20;
  // Upper bound on the bytes the smallest-prime-factor table may occupy.
  std::size_t memory_budget_bytes = std::size_t{2} << 30;
  Parallelism parallelism = Parallelism::hardware();
};

// Smallest-prime-factor table for 2..limit, built segment by segment.
// Immutable after construction; all queries are safe to share across threads.
class FactorSieve {
 public:
  static constexpr u64 kMaxLimit = 0xFFFFFFFFull;

  u64 limit() const { return limit_; }

  // spf(n) for 2 <= n <= limit.
  u32 smallest_prime_factor(u64 n) const;
  bool is_prime(u64 n) const;

  // Throws OutOfRangeError when n > limit. n = 1 gives the empty product.
  Factorization factorize(u64 n) const;

  // Same as factorize without the range check; for hot loops over [1, limit].
  Factorization factorize_unchecked(u64 n) const;

  // Primes p <= bound (bound <= limit), ascending.
  std::vector<u32> primes_up_to(u64 bound) const;

  std::size_t memory_bytes() const { return spf_.size() * sizeof(u32); }

 private:
  friend FactorSieve build_sieve(u64, const SieveOptions&);
  u64 limit_ = 1;
  std::vector<u32> spf_;  // index n, entries for n < 2 unused
};

// Throws DomainError for x < 2 and ResourceError when the table would exceed
// options.memory_budget_bytes (or x exceeds FactorSieve::kMaxLimit).
FactorSieve build_sieve(u64 x, const SieveOptions& options = {});

// Plain Eratosthenes for small bounds (base primes, test oracles, moduli).
std::vector<u32> simple_primes(u32 bound);

// Psi(x, z) = #{n <= x : P(n) <= z}; n = 1 counts.
u64 psi_smooth_count(u64 x, double z, const FactorSieve& sieve,
                     Parallelism par = Parallelism::hardware());

}  // namespace sigmaeq
