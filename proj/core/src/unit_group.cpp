#include "sigmaeq/unit_group.hpp"

#include <string>

#include "sigmaeq/error.hpp"

namespace sigmaeq {

u64 least_primitive_root(u64 prime) {
  if (prime == 2) return 1;
  const auto phi_factors = factorize_trial(prime - 1);
  for (u64 g = 2; g < prime; ++g) {
    bool ok = true;
    for (const auto& [r, e] : phi_factors) {
      if (pow_mod(g, (prime - 1) / r, prime) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
  throw DomainError("least_primitive_root: " + std::to_string(prime) + " is not prime");
}

u64 PrimePowerComponent::digit(u32 idx, std::size_t j) const {
  u64 rest = idx;
  for (std::size_t i = 0; i < j; ++i) rest /= orders[i];
  return rest % orders[j];
}

PrimePowerComponent build_prime_power_component(u64 prime, u32 exponent) {
  PrimePowerComponent c;
  c.prime = prime;
  c.exponent = exponent;
  c.modulus = 1;
  for (u32 i = 0; i < exponent; ++i) c.modulus *= prime;
  c.phi = c.modulus / prime * (prime - 1);
  c.index_of.assign(c.modulus, PrimePowerComponent::kNonUnit);

  if (prime == 2) {
    if (exponent == 1) {
      c.index_of[1] = 0;
    } else if (exponent == 2) {
      c.generators = {3};
      c.orders = {2};
      c.index_of[1] = 0;
      c.index_of[3] = 1;
    } else {
      const u64 ord5 = c.modulus / 4;
      c.generators = {c.modulus - 1, 5};
      c.orders = {2, ord5};
      u64 x = 1;
      for (u64 b = 0; b < ord5; ++b) {
        c.index_of[x] = static_cast<u32>(2 * b);
        c.index_of[c.modulus - x] = static_cast<u32>(2 * b + 1);
        x = x * 5 % c.modulus;
      }
    }
    return c;
  }

  u64 g = least_primitive_root(prime);
  if (exponent >= 2 && pow_mod(g, prime - 1, prime * prime) == 1) g += prime;
  c.generators = {g % c.modulus};
  c.orders = {c.phi};
  u64 x = 1;
  for (u64 i = 0; i < c.phi; ++i) {
    c.index_of[x] = static_cast<u32>(i);
    x = mul_mod(x, g, c.modulus);
  }
  return c;
}

Modulus::Modulus(u64 q, u64 max_modulus) {
  if (q == 0) throw DomainError("Modulus: q must be >= 1");
  if (q > max_modulus)
    throw ResourceError("Modulus: q=" + std::to_string(q) + " exceeds the modulus cap " +
                        std::to_string(max_modulus));
  auto impl = std::make_shared<Impl>();
  impl->q = q;
  impl->factorization = factorize_trial(q);
  impl->phi = euler_phi(impl->factorization);
  for (const auto& [p, e] : impl->factorization) {
    const auto l = static_cast<i64>(p);
    impl->alpha *= Rational(l - 2, l - 1);
    if (p % 3 == 1) impl->alpha_tilde *= Rational(l - 3, l - 1);

    impl->component_first_generator.push_back(impl->generator_orders.size());
    auto comp = build_prime_power_component(p, e);
    for (u64 o : comp.orders) {
      impl->generator_component.push_back(impl->components.size());
      impl->generator_orders.push_back(o);
      impl->exponent = lcm(impl->exponent, o);
    }
    impl->components.push_back(std::move(comp));
  }
  impl_ = std::move(impl);
}

bool Modulus::unit_log(u64 v, std::span<u64> out) const {
  const auto& comps = impl_->components;
  for (std::size_t c = 0; c < comps.size(); ++c) {
    const auto& comp = comps[c];
    const u32 idx = comp.index_of[v % comp.modulus];
    if (idx == PrimePowerComponent::kNonUnit) return false;
    const std::size_t first = impl_->component_first_generator[c];
    for (std::size_t j = 0; j < comp.orders.size(); ++j) out[first + j] = comp.digit(idx, j);
  }
  return true;
}

std::vector<u64> Modulus::units() const {
  std::vector<u64> out;
  out.reserve(phi());
  for (u64 v = 0; v < q(); ++v)
    if (gcd(v, q()) == 1) out.push_back(v);
  return out;
}

}  // namespace sigmaeq
