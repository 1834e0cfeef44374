#include <doctest.h>

#include <cmath>
#include <complex>

#include "sigmaeq/char_sums.hpp"
#include "sigmaeq/error.hpp"

using namespace sigmaeq;
using C = std::complex<double>;

namespace {

double to_d(const Rational& r) { return boost::rational_cast<double>(r); }

DirichletCharacter first_with_conductor(const Modulus& m, u64 f) {
  for (const auto& chi : enumerate_characters(m))
    if (chi.conductor() == f) return chi;
  FAIL("no character with the requested conductor");
  return DirichletCharacter::principal(m);
}

}  // namespace

TEST_CASE("rho examples") {
  for (u64 q : {1u, 3u, 15u, 45u, 77u}) {
    const Modulus m(q);
    const auto p = DirichletCharacter::principal(m);
    CHECK(std::abs(rho_brute(p).value - to_d(m.alpha())) < 1e-12);
    CHECK(std::abs(rho_closed_form(p).value - to_d(m.alpha())) < 1e-12);
  }
  const auto nine = first_with_conductor(Modulus(9), 9);
  CHECK(std::abs(rho_brute(nine).value) < 1e-12);
  CHECK(std::abs(rho_closed_form(nine).value) < 1e-12);
  const Modulus m15(15);
  const auto prim = first_with_conductor(m15, 15);
  CHECK(std::abs(std::abs(rho_brute(prim).value) - 1.0 / 8.0) < 1e-12);
  const auto three = first_with_conductor(m15, 3);
  CHECK(std::abs(rho_closed_form(three).value - C(-3.0 / 8.0, 0)) < 1e-12);
  CHECK(std::abs(rho_brute(three).value - C(-3.0 / 8.0, 0)) < 1e-12);
  CHECK_THROWS_AS(rho_closed_form(DirichletCharacter::principal(Modulus(10))),
                  UnsupportedModulusError);
  CHECK(rho_brute(DirichletCharacter::principal(Modulus(10))).outside_intended_range);
}

TEST_CASE("S_{chi,l}") {
  const Modulus m5(5);
  CHECK(std::abs(s_chi_ell(DirichletCharacter::principal(m5)) - 3.0) < 1e-12);
  const auto prim5 = first_with_conductor(m5, 5);
  CHECK(std::abs(s_chi_ell(prim5) + 1.0) < 1e-12);
  CHECK(s_chi_ell_closed_form(prim5) == -1);
  const auto prim25 = first_with_conductor(Modulus(25), 25);
  CHECK(std::abs(s_chi_ell(prim25)) < 1e-9);
  CHECK(s_chi_ell_closed_form(prim25) == 0);
  for (u64 q : {3u, 9u, 27u, 5u, 25u, 125u, 7u, 49u, 343u, 11u, 121u}) {
    for (const auto& chi : enumerate_characters(Modulus(q)))
      REQUIRE(std::abs(s_chi_ell(chi) - static_cast<double>(s_chi_ell_closed_form(chi))) < 1e-9);
  }
}

TEST_CASE("eta examples") {
  const Modulus m5(5);
  for (const auto& chi : enumerate_characters(m5)) {
    if (std::abs(chi.value(2) - C(0, 1)) > 1e-12) continue;
    CHECK(std::abs(eta_brute(chi).value - C(0.25, -0.25)) < 1e-12);
    CHECK(std::abs(eta_brute(chi).value.real() - to_d(m5.alpha_tilde()) / 4) < 1e-12);
  }
  for (u64 q : {5u, 7u, 13u, 35u, 91u, 10u}) {
    const Modulus m(q);
    const auto p = DirichletCharacter::principal(m);
    CHECK(std::abs(eta_brute(p).value - to_d(m.alpha_tilde())) < 1e-12);
    CHECK(std::abs(eta_factored(p).value - to_d(m.alpha_tilde())) < 1e-12);
  }
  // A character whose 2-part has conductor divisible by 4.
  for (u64 q : {4u, 8u, 20u, 56u}) {
    for (const auto& chi : enumerate_characters(Modulus(q))) {
      if (chi.local_conductor(0) % 4 != 0) continue;
      CHECK(std::abs(eta_brute(chi).value) < 1e-12);
      CHECK(std::abs(eta_factored(chi).value) < 1e-12);
    }
  }
}

TEST_CASE("property: eta factorization equals brute force") {
  for (u64 q = 1; q <= 300; ++q) {
    const u64 g = gcd(q, 6);
    if (g != 1 && g != 2) continue;
    for (const auto& chi : enumerate_characters(Modulus(q)))
      REQUIRE(std::abs(eta_factored(chi).value - eta_brute(chi).value) <= 1e-9);
  }
  // With 3 | q the trivial 3-component contributes the density 1/2.
  for (u64 q : {3u, 9u, 21u, 63u}) {
    for (const auto& chi : enumerate_characters(Modulus(q)))
      REQUIRE(std::abs(eta_factored(chi).value - eta_brute(chi).value) <= 1e-9);
  }
}

TEST_CASE("property: rho closed form equals brute force for odd q <= 200") {
  for (u64 q = 1; q <= 200; q += 2) {
    const Modulus m(q);
    for (const auto& chi : enumerate_characters(m))
      REQUIRE(std::abs(rho_closed_form(chi).value - rho_brute(chi).value) <= 1e-9);
    REQUIRE(rho_power_sum(m) <= to_d(m.alpha()) + 1e-9);
  }
}

TEST_CASE("averages stay in the unit disk") {
  for (u64 q = 1; q <= 120; ++q) {
    for (const auto& chi : enumerate_characters(Modulus(q))) {
      REQUIRE(std::abs(rho_brute(chi).value) <= 1 + 1e-9);
      REQUIRE(std::abs(eta_brute(chi).value) <= 1 + 1e-9);
    }
  }
}

TEST_CASE("Weil-type bound for complete sums") {
  const auto r52 = weil_clz_check(5, 2, Parallelism{2});
  CHECK(r52.characters_checked == 16);
  CHECK(r52.holds);
  CHECK(r52.max_abs_sum <= 5 + 1e-9);
  const auto r72 = weil_clz_check(7, 2);
  CHECK(r72.holds);
  CHECK(r72.max_ratio <= 1 + 1e-9);
  CHECK(weil_clz_check(5, 3).holds);
  CHECK_THROWS_AS(weil_clz_check(3, 2), DomainError);
  CHECK_THROWS_AS(weil_clz_check(9, 2), DomainError);
  CHECK_THROWS_AS(weil_clz_check(4001, 2), ResourceError);
}

TEST_CASE("exceptional conductor set") {
  CHECK(kExceptionalConductors.size() == 18);
  CHECK(is_exceptional_conductor(385));
  CHECK_FALSE(is_exceptional_conductor(29));
  CHECK(exceptional_normalizer(5) == 4);
  CHECK(exceptional_normalizer(7) == 4);
  CHECK(exceptional_normalizer(35) == 16);
  CHECK(exceptional_normalizer(455) == 160);

  const auto report = verify_s_set();
  CHECK(report.entries.size() == 18);
  CHECK(report.global_max_is_exact_quarter);
  CHECK(report.global_max == 0.25);
  CHECK(report.bound_holds);
  CHECK(report.attaining == std::vector<u64>{5, 7, 13, 35});
  for (const auto& e : report.entries) {
    if (e.modulus != 11) continue;
    CHECK(e.primitive_characters == 9);
    CHECK(e.normalized_max < 0.25);
  }
  const auto restricted = verify_s_set(Modulus(70));
  CHECK(restricted.entries.size() == 3);  // 5, 7, 35
  CHECK(restricted.attaining == std::vector<u64>{5, 7, 35});
}

TEST_CASE("alpha_F") {
  CHECK(alpha_F(PolynomialSpec::shift_one(), Modulus(3)) == Rational(1, 2));
  CHECK(alpha_F(PolynomialSpec::cyclotomic_three(), Modulus(7)) == Rational(2, 3));
  CHECK(alpha_F(PolynomialSpec({5, 0, 2}), Modulus(1)) == Rational(1));
  CHECK_THROWS_AS(PolynomialSpec({4}), DomainError);
  for (u64 q : {5u, 13u, 35u, 77u, 91u}) {  // 3 !| q: alpha~ keeps its product formula at 3
    CHECK(alpha_F(PolynomialSpec::shift_one(), Modulus(q)) == Modulus(q).alpha());
    CHECK(alpha_F(PolynomialSpec::cyclotomic_three(), Modulus(q)) == Modulus(q).alpha_tilde());
  }
  // Direct count for a polynomial with repeated roots.
  const PolynomialSpec f({1, 2, 1});  // (T + 1)^2
  const Modulus m(45);
  u64 good = 0;
  for (u64 u = 0; u < 45; ++u)
    if (gcd(u * f.eval_mod(u, 45) % 45, 45) == 1) ++good;
  CHECK(alpha_F(f, m) == Rational(static_cast<i64>(good), static_cast<i64>(m.phi())));
}

TEST_CASE("power sums") {
  CHECK(rho_power_sum(Modulus(15)) <= 3.0 / 8.0 + 1e-12);
  CHECK(std::abs(rho_power_sum(Modulus(3)) - 0.25) < 1e-12);
  const double e5 = eta_power_sum(Modulus(5));
  CHECK(std::isfinite(e5));
  CHECK(e5 > 0);
  double brute = 0;
  for (const auto& chi : enumerate_characters(Modulus(5)))
    if (!chi.is_principal()) brute += std::pow(std::abs(eta_brute(chi).value), 3);
  CHECK(std::abs(e5 - brute) < 1e-12);
}
