#include "sigmaeq/character.hpp"

#include <string>

#include "sigmaeq/error.hpp"

namespace sigmaeq {

namespace {

u64 ipow(u64 base, u32 e) {
  u64 r = 1;
  for (u32 i = 0; i < e; ++i) r *= base;
  return r;
}

// Smallest f with ord | phi(l^f), phi(l^0) = 1.
u32 odd_local_conductor_exponent(u64 prime, u64 order) {
  if (order == 1) return 0;
  u64 phi = prime - 1;
  u32 f = 1;
  while (phi % order != 0) {
    phi *= prime;
    ++f;
  }
  return f;
}

}  // namespace

DirichletCharacter::DirichletCharacter(Modulus modulus, std::vector<u64> exponents)
    : modulus_(std::move(modulus)), exponents_(std::move(exponents)) {
  if (exponents_.size() != modulus_.generator_count())
    throw DomainError("DirichletCharacter: expected " +
                      std::to_string(modulus_.generator_count()) + " exponents, got " +
                      std::to_string(exponents_.size()));
  const u64 n = modulus_.exponent();
  scaled_.resize(exponents_.size());
  for (std::size_t j = 0; j < exponents_.size(); ++j) {
    const u64 o = modulus_.generator_order(j);
    exponents_[j] %= o;
    scaled_[j] = exponents_[j] * (n / o) % n;
    order_ = lcm(order_, o / gcd(exponents_[j], o));
  }
  conductor_ = 1;
  for (std::size_t c = 0; c < modulus_.components().size(); ++c)
    conductor_ *= local_conductor(c);
}

DirichletCharacter DirichletCharacter::principal(const Modulus& modulus) {
  return DirichletCharacter(modulus, std::vector<u64>(modulus.generator_count(), 0));
}

u64 DirichletCharacter::local_conductor(std::size_t component) const {
  const auto& comp = modulus_.components()[component];
  const std::size_t first = modulus_.first_generator_of(component);
  if (comp.prime != 2) {
    const u64 o = comp.orders[0];
    const u64 local_order = o / gcd(exponents_[first], o);
    return ipow(comp.prime, odd_local_conductor_exponent(comp.prime, local_order));
  }
  if (comp.exponent == 1) return 1;
  const u64 sign = exponents_[first];
  if (comp.exponent == 2) return sign != 0 ? 4 : 1;
  const u64 ord5 = comp.orders[1];
  const u64 b = exponents_[first + 1];
  if (b != 0) {
    u64 t = ord5 / gcd(b, ord5);  // 2^t, t >= 1
    return 4 * t;
  }
  return sign != 0 ? 4 : 1;
}

RootOfUnityValue DirichletCharacter::operator()(u64 v) const {
  const u64 n = modulus_.exponent();
  const auto comps = modulus_.components();
  u64 k = 0;
  for (std::size_t c = 0; c < comps.size(); ++c) {
    const auto& comp = comps[c];
    const u32 idx = comp.index_of[v % comp.modulus];
    if (idx == PrimePowerComponent::kNonUnit) return RootOfUnityValue::zero_value(n);
    const std::size_t first = modulus_.first_generator_of(c);
    for (std::size_t j = 0; j < comp.orders.size(); ++j) {
      k += mul_mod(comp.digit(idx, j), scaled_[first + j], n);
      if (k >= n) k -= n;
    }
  }
  return {k, n, false};
}

std::vector<i64> DirichletCharacter::exponent_table() const {
  const u64 q = modulus_.q();
  const u64 n = modulus_.exponent();
  const auto comps = modulus_.components();
  // Per-component tables first, then combine residue by residue.
  std::vector<std::vector<i64>> local(comps.size());
  for (std::size_t c = 0; c < comps.size(); ++c) {
    const auto& comp = comps[c];
    const std::size_t first = modulus_.first_generator_of(c);
    local[c].assign(comp.modulus, -1);
    for (u64 r = 0; r < comp.modulus; ++r) {
      const u32 idx = comp.index_of[r];
      if (idx == PrimePowerComponent::kNonUnit) continue;
      u64 k = 0;
      for (std::size_t j = 0; j < comp.orders.size(); ++j)
        k = (k + mul_mod(comp.digit(idx, j), scaled_[first + j], n)) % n;
      local[c][r] = static_cast<i64>(k);
    }
  }
  std::vector<i64> table(q, 0);
  for (u64 v = 0; v < q; ++v) {
    i64 k = 0;
    for (std::size_t c = 0; c < comps.size(); ++c) {
      const i64 part = local[c][v % comps[c].modulus];
      if (part < 0) {
        k = -1;
        break;
      }
      k = (k + part) % static_cast<i64>(n);
    }
    table[v] = k;
  }
  return table;
}

DirichletCharacter DirichletCharacter::local_component(std::size_t component) const {
  const auto& comp = modulus_.components()[component];
  Modulus local(comp.modulus);
  const std::size_t first = modulus_.first_generator_of(component);
  std::vector<u64> exps(exponents_.begin() + static_cast<std::ptrdiff_t>(first),
                        exponents_.begin() + static_cast<std::ptrdiff_t>(first + comp.orders.size()));
  return DirichletCharacter(std::move(local), std::move(exps));
}

u64 DirichletCharacter::index() const {
  u64 idx = 0;
  for (std::size_t j = exponents_.size(); j-- > 0;)
    idx = idx * modulus_.generator_order(j) + exponents_[j];
  return idx;
}

DirichletCharacter character_at(const Modulus& modulus, u64 index) {
  if (index >= modulus.phi())
    throw DomainError("character_at: index " + std::to_string(index) + " >= phi(q) = " +
                      std::to_string(modulus.phi()));
  std::vector<u64> exps(modulus.generator_count());
  for (std::size_t j = 0; j < exps.size(); ++j) {
    exps[j] = index % modulus.generator_order(j);
    index /= modulus.generator_order(j);
  }
  return DirichletCharacter(modulus, std::move(exps));
}

std::vector<DirichletCharacter> enumerate_characters(const Modulus& modulus) {
  std::vector<DirichletCharacter> out;
  out.reserve(modulus.phi());
  for (u64 i = 0; i < modulus.phi(); ++i) out.push_back(character_at(modulus, i));
  return out;
}

u64 primitive_character_count(u64 prime, u32 f) {
  if (f == 0) return 1;
  const u64 phi_f = ipow(prime, f - 1) * (prime - 1);
  const u64 phi_prev = f == 1 ? 1 : ipow(prime, f - 2) * (prime - 1);
  return phi_f - phi_prev;
}

u64 character_with_conductor_count(const Modulus& modulus, u64 d) {
  if (d == 0 || modulus.q() % d != 0)
    throw DomainError("character_with_conductor_count: " + std::to_string(d) +
                      " does not divide " + std::to_string(modulus.q()));
  u64 count = 1;
  for (const auto& [p, e] : modulus.factorization()) {
    u32 f = 0;
    u64 rest = d;
    while (rest % p == 0) {
      rest /= p;
      ++f;
    }
    count *= primitive_character_count(p, f);
  }
  return count;
}

}  // namespace sigmaeq
