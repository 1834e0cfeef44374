#pragma once

#include <boost/rational.hpp>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "sigmaeq/arith.hpp"
#include "sigmaeq/root_of_unity.hpp"

namespace sigmaeq {

using Rational = boost::rational<i64>;

// Moduli above this are rejected: discrete-log tables take O(q) memory.
inline constexpr u64 kDefaultMaxModulus = 10'000'000;

// U_{l^e} with fixed generators and a discrete-log table.
//   odd l:           one primitive root g (least primitive root mod l,
//                    bumped to g + l when it fails mod l^2)
//   2:               trivial group
//   4:               -1 (order 2)
//   2^e, e >= 3:     -1 (order 2), 5 (order 2^{e-2})
struct PrimePowerComponent {
  u64 prime = 0;
  u32 exponent = 0;
  u64 modulus = 1;
  u64 phi = 1;
  std::vector<u64> generators;
  std::vector<u64> orders;
  // Mixed-radix index of each residue's exponent vector (generator 0 fastest);
  // kNonUnit for residues sharing a factor with l.
  std::vector<u32> index_of;

  static constexpr u32 kNonUnit = 0xFFFFFFFFu;

  // Exponent of generator j in the discrete log of a unit with index idx.
  u64 digit(u32 idx, std::size_t j) const;
};

// q with its factorization, phi, alpha, alpha~ and the unit-group basis.
// A cheap handle over immutable shared state.
class Modulus {
 public:
  explicit Modulus(u64 q, u64 max_modulus = kDefaultMaxModulus);

  u64 q() const { return impl_->q; }
  const Factorization& factorization() const { return impl_->factorization; }
  u64 phi() const { return impl_->phi; }

  // prod_{l | q} (1 - 1/(l - 1)); 0 for even q.
  Rational alpha() const { return impl_->alpha; }
  // prod_{l | q, l = 1 (3)} (1 - 2/(l - 1)).
  Rational alpha_tilde() const { return impl_->alpha_tilde; }

  std::span<const PrimePowerComponent> components() const { return impl_->components; }

  // Flattened generator list across components, in component order.
  std::size_t generator_count() const { return impl_->generator_orders.size(); }
  u64 generator_order(std::size_t j) const { return impl_->generator_orders[j]; }
  std::size_t component_of_generator(std::size_t j) const { return impl_->generator_component[j]; }
  // N: lcm of generator orders, the exponent of U_q.
  u64 exponent() const { return impl_->exponent; }

  bool is_unit(u64 v) const { return gcd(v % q(), q()) == 1; }

  // Discrete logs of v against every generator; false when v is not a unit.
  bool unit_log(u64 v, std::span<u64> out) const;

  // Units 0 <= v < q ascending (for q = 1 this is {0}).
  std::vector<u64> units() const;

  bool is_odd() const { return q() % 2 == 1; }

  friend bool operator==(const Modulus& a, const Modulus& b) { return a.q() == b.q(); }

 private:
  struct Impl {
    u64 q = 1;
    Factorization factorization;
    u64 phi = 1;
    Rational alpha{1};
    Rational alpha_tilde{1};
    std::vector<PrimePowerComponent> components;
    std::vector<u64> generator_orders;
    std::vector<std::size_t> generator_component;
    std::vector<std::size_t> component_first_generator;
    u64 exponent = 1;
  };
  std::shared_ptr<const Impl> impl_;

  friend class DirichletCharacter;
  std::size_t first_generator_of(std::size_t component) const {
    return impl_->component_first_generator[component];
  }
};

inline Modulus build_modulus(u64 q) { return Modulus(q); }

PrimePowerComponent build_prime_power_component(u64 prime, u32 exponent);

// Least primitive root modulo an odd prime.
u64 least_primitive_root(u64 prime);

}  // namespace sigmaeq
