#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

namespace sigmaeq {

using u64 = std::uint64_t;
using u32 = std::uint32_t;
using i64 = std::int64_t;

__extension__ typedef unsigned __int128 u128;

inline u64 mul_mod(u64 a, u64 b, u64 m) {
  return static_cast<u64>(static_cast<u128>(a) * b % m);
}

u64 pow_mod(u64 base, u64 exp, u64 m);
u64 gcd(u64 a, u64 b);
u64 lcm(u64 a, u64 b);

// Inverse of a modulo m, or nullopt when gcd(a, m) != 1.
std::optional<u64> inverse_mod(u64 a, u64 m);

// Reduces a signed value into [0, m).
inline u64 reduce_signed(i64 v, u64 m) {
  const i64 r = v % static_cast<i64>(m);
  return static_cast<u64>(r < 0 ? r + static_cast<i64>(m) : r);
}

struct PrimePower {
  u64 prime = 0;
  u32 exponent = 0;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

// Canonical factorization, primes ascending. Stored inline: every n < 2^64
// has at most 15 distinct prime factors.
class Factorization {
 public:
  static constexpr std::size_t kCapacity = 15;

  Factorization() = default;
  Factorization(std::initializer_list<PrimePower> parts);

  // Appends a prime power; primes must arrive in increasing order.
  void push(u64 prime, u32 exponent);

  std::span<const PrimePower> parts() const { return {parts_.data(), size_}; }
  std::size_t distinct() const { return size_; }  // omega
  u32 total() const;                              // Omega
  bool empty() const { return size_ == 0; }
  u64 value() const;  // product; wraps silently above 2^64

  auto begin() const { return parts_.begin(); }
  auto end() const { return parts_.begin() + static_cast<std::ptrdiff_t>(size_); }

  friend bool operator==(const Factorization& a, const Factorization& b);

 private:
  std::array<PrimePower, kCapacity> parts_{};
  std::size_t size_ = 0;
};

// Trial division; intended for moduli and other small inputs.
Factorization factorize_trial(u64 n);

bool is_prime_trial(u64 n);

u64 euler_phi(const Factorization& f);

// sigma(n) mod q from the factorization, factor by factor. Each
// 1 + p + ... + p^e is accumulated in Horner form, so no inverse of p - 1
// is ever needed.
u64 sigma_mod(const Factorization& n, u64 q);

// 1 + p + ... + p^e (mod q).
u64 geometric_sum_mod(u64 p, u32 e, u64 q);

// P_k(n): k-th largest prime factor counted with multiplicity, 1 when
// Omega(n) < k. k >= 1.
u64 kth_largest_prime_factor(const Factorization& n, u32 k);

inline u64 largest_prime_factor(const Factorization& n) {
  return n.empty() ? 1 : n.parts().back().prime;
}
inline u64 smallest_prime_factor(const Factorization& n) {
  return n.empty() ? 1 : n.parts().front().prime;
}

// n = 2^k m^2 with m odd, when the odd part of n is a perfect square.
struct TwoAdicSquareForm {
  u32 k = 0;
  u64 m = 1;
  bool valid = false;
};

TwoAdicSquareForm two_adic_square_form(const Factorization& n);

}  // namespace sigmaeq
