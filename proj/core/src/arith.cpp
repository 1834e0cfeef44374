#include "sigmaeq/arith.hpp"

#include <cassert>
#include <numeric>

#include "sigmaeq/error.hpp"

namespace sigmaeq {

u64 pow_mod(u64 base, u64 exp, u64 m) {
  if (m == 1) return 0;
  u64 result = 1;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

u64 gcd(u64 a, u64 b) { return std::gcd(a, b); }

u64 lcm(u64 a, u64 b) { return a / gcd(a, b) * b; }

std::optional<u64> inverse_mod(u64 a, u64 m) {
  if (m == 1) return 0;
  i64 old_r = static_cast<i64>(a % m), r = static_cast<i64>(m);
  i64 old_s = 1, s = 0;
  while (r != 0) {
    const i64 quot = old_r / r;
    old_r -= quot * r;
    std::swap(old_r, r);
    old_s -= quot * s;
    std::swap(old_s, s);
  }
  if (old_r != 1) return std::nullopt;
  return reduce_signed(old_s, m);
}

Factorization::Factorization(std::initializer_list<PrimePower> parts) {
  for (const auto& pp : parts) push(pp.prime, pp.exponent);
}

void Factorization::push(u64 prime, u32 exponent) {
  assert(size_ < kCapacity);
  assert(size_ == 0 || parts_[size_ - 1].prime < prime);
  parts_[size_++] = PrimePower{prime, exponent};
}

u32 Factorization::total() const {
  u32 t = 0;
  for (const auto& pp : parts()) t += pp.exponent;
  return t;
}

u64 Factorization::value() const {
  u64 v = 1;
  for (const auto& pp : parts())
    for (u32 i = 0; i < pp.exponent; ++i) v *= pp.prime;
  return v;
}

bool operator==(const Factorization& a, const Factorization& b) {
  if (a.size_ != b.size_) return false;
  for (std::size_t i = 0; i < a.size_; ++i)
    if (!(a.parts_[i] == b.parts_[i])) return false;
  return true;
}

Factorization factorize_trial(u64 n) {
  if (n == 0) throw DomainError("factorize_trial: n must be positive");
  Factorization f;
  for (u64 p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p != 0) continue;
    u32 e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    f.push(p, e);
  }
  if (n > 1) f.push(n, 1);
  return f;
}

bool is_prime_trial(u64 n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (u64 d = 3; d * d <= n; d += 2)
    if (n % d == 0) return false;
  return true;
}

u64 euler_phi(const Factorization& f) {
  u64 phi = 1;
  for (const auto& [p, e] : f) {
    phi *= p - 1;
    for (u32 i = 1; i < e; ++i) phi *= p;
  }
  return phi;
}

u64 geometric_sum_mod(u64 p, u32 e, u64 q) {
  if (q == 1) return 0;
  const u64 pr = p % q;
  u64 s = 1;
  for (u32 i = 0; i < e; ++i) {
    s = mul_mod(s, pr, q) + 1;
    if (s >= q) s -= q;
  }
  return s;
}

u64 sigma_mod(const Factorization& n, u64 q) {
  if (q == 0) throw DomainError("sigma_mod: modulus must be positive");
  if (q == 1) return 0;
  u64 s = 1;
  for (const auto& [p, e] : n) s = mul_mod(s, geometric_sum_mod(p, e, q), q);
  return s;
}

u64 kth_largest_prime_factor(const Factorization& n, u32 k) {
  if (k == 0) throw DomainError("kth_largest_prime_factor: k must be >= 1");
  const auto parts = n.parts();
  for (auto it = parts.rbegin(); it != parts.rend(); ++it) {
    if (k <= it->exponent) return it->prime;
    k -= it->exponent;
  }
  return 1;
}

TwoAdicSquareForm two_adic_square_form(const Factorization& n) {
  TwoAdicSquareForm form;
  form.valid = true;
  for (const auto& [p, e] : n) {
    if (p == 2) {
      form.k = e;
      continue;
    }
    if (e % 2 != 0) return TwoAdicSquareForm{0, 0, false};
    for (u32 i = 0; i < e / 2; ++i) form.m *= p;
  }
  return form;
}

}  // namespace sigmaeq
