#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "sigmaeq/unit_group.hpp"

namespace sigmaeq {

// A Dirichlet character mod q, stored as one exponent per generator of U_q:
// chi(g_j) = e^{2 pi i a_j / ord(g_j)}.
class DirichletCharacter {
 public:
  // Exponents are reduced modulo the generator orders.
  DirichletCharacter(Modulus modulus, std::vector<u64> exponents);

  static DirichletCharacter principal(const Modulus& modulus);

  const Modulus& modulus() const { return modulus_; }
  const std::vector<u64>& exponents() const { return exponents_; }

  u64 order() const { return order_; }
  u64 conductor() const { return conductor_; }
  bool is_principal() const { return order_ == 1; }
  bool is_primitive() const { return conductor_ == modulus_.q(); }

  RootOfUnityValue operator()(u64 v) const;
  RootOfUnityValue evaluate_signed(i64 v) const {
    return (*this)(reduce_signed(v, modulus_.q()));
  }
  std::complex<double> value(u64 v) const { return (*this)(v).to_complex(); }

  // k with chi(v) = e^{2 pi i k / N} for every residue v mod q, -1 at non-units.
  std::vector<i64> exponent_table() const;

  // The l^e-part chi_l as a character mod l^e (same generator choice).
  DirichletCharacter local_component(std::size_t component) const;

  // Conductor of the component's local character, a power of its prime.
  u64 local_conductor(std::size_t component) const;

  // Position in enumerate_characters order.
  u64 index() const;

  friend bool operator==(const DirichletCharacter& a, const DirichletCharacter& b) {
    return a.modulus_ == b.modulus_ && a.exponents_ == b.exponents_;
  }

 private:
  Modulus modulus_;
  std::vector<u64> exponents_;
  std::vector<u64> scaled_;  // a_j * N / ord(g_j)
  u64 order_ = 1;
  u64 conductor_ = 1;
};

// All phi(q) characters, principal first, in mixed-radix exponent order
// (generator 0 fastest).
std::vector<DirichletCharacter> enumerate_characters(const Modulus& modulus);

DirichletCharacter character_at(const Modulus& modulus, u64 index);

inline u64 conductor(const DirichletCharacter& chi) { return chi.conductor(); }

inline RootOfUnityValue evaluate(const DirichletCharacter& chi, u64 v) { return chi(v); }

// Number of characters mod q whose conductor is exactly d. DomainError when
// d does not divide q.
u64 character_with_conductor_count(const Modulus& modulus, u64 d);

// Number of primitive characters mod l^f.
u64 primitive_character_count(u64 prime, u32 f);

}  // namespace sigmaeq
