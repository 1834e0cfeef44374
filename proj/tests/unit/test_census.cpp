#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

#include "oracles.hpp"
#include "sigmaeq/census.hpp"
#include "sigmaeq/error.hpp"

using namespace sigmaeq;

namespace {

const FactorSieve& sieve() {
  static const FactorSieve s = build_sieve(1000000);
  return s;
}

// Class counts of sigma(n) mod q from divisor sums, with an optional P_k cut.
std::vector<u64> brute_counts(u64 x, u64 q, u32 k = 0, u64 t = 0) {
  std::vector<u64> out(q, 0);
  for (u64 n = 1; n <= x; ++n) {
    if (k > 0) {
      auto ps = oracle::prime_multiset(n);
      const u64 pk = ps.size() >= k ? ps[ps.size() - k] : 1;
      if (pk <= t) continue;
    }
    const u64 s = oracle::sigma_by_divisors(n) % q;
    if (std::gcd(s, q) == 1) ++out[s];
  }
  return out;
}

}  // namespace

TEST_CASE("census partition and brute-force agreement") {
  for (u64 q : {1u, 2u, 5u, 12u, 15u, 28u}) {
    const Modulus m(q);
    const auto r = census(20000, m, CensusFilter::all(), sieve());
    const auto brute = brute_counts(20000, q);
    REQUIRE(r.classes == m.units());
    u64 sum = 0;
    for (std::size_t i = 0; i < r.classes.size(); ++i) {
      REQUIRE(r.counts[i] == brute[r.classes[i]]);
      sum += r.counts[i];
    }
    CHECK(sum == r.total_coprime);
    CHECK(r.total_filtered == 20000);
  }
  const auto r100 = census(100, Modulus(5), CensusFilter::all(), sieve());
  u64 expected = 0;
  for (u64 n = 1; n <= 100; ++n)
    if (oracle::sigma_by_divisors(n) % 5 != 0) ++expected;
  CHECK(r100.total_coprime == expected);
}

TEST_CASE("census at 1e6 mod 5 and mod 2") {
  // Counts frozen from an independent divisor-sum sieve.
  const auto r = census(1000000, Modulus(5), CensusFilter::all(), sieve());
  CHECK(r.counts == std::vector<u64>{141933, 152229, 144905, 152414});
  for (u64 c : r.counts) CHECK(std::abs(static_cast<double>(c) / r.mean - 1) < 0.10);
  CHECK(r.alpha == Rational(3, 4));
  const auto even = census(1000000, Modulus(2), CensusFilter::all(), sieve());
  CHECK(even.total_coprime == oracle::two_adic_square_count(1000000));
  CHECK(discrepancy(even) == 0.0);
}

TEST_CASE("P_k filters") {
  const Modulus m(7);
  const auto above = census(30000, m, CensusFilter::pk_above(2, 7), sieve());
  const auto brute = brute_counts(30000, 7, 2, 7);
  for (std::size_t i = 0; i < above.classes.size(); ++i)
    REQUIRE(above.counts[i] == brute[above.classes[i]]);
  const auto at_most = census(30000, m, CensusFilter::pk_at_most(2, 7), sieve());
  const auto all = census(30000, m, CensusFilter::all(), sieve());
  for (std::size_t i = 0; i < all.classes.size(); ++i)
    REQUIRE(above.counts[i] + at_most.counts[i] == all.counts[i]);
  CHECK_THROWS_AS(census(10, m, CensusFilter::pk_above(0, 7), sieve()), DomainError);
}

TEST_CASE("property: nested P_k filters, classwise") {
  for (u64 q : {5u, 10u, 11u, 26u}) {
    const Modulus m(q);
    const auto all = census(200000, m, CensusFilter::all(), sieve());
    const auto p4 = census(200000, m, CensusFilter::pk_above(4, q), sieve());
    const auto p6 = census(200000, m, CensusFilter::pk_above(6, q), sieve());
    for (std::size_t i = 0; i < all.counts.size(); ++i) {
      REQUIRE(p6.counts[i] <= p4.counts[i]);
      REQUIRE(p4.counts[i] <= all.counts[i]);
    }
  }
}

TEST_CASE("coprime-only and proof splits") {
  const Modulus m(15);
  const auto r = census(5000, m, CensusFilter::coprime_only(), sieve());
  u64 expected = 0;
  for (u64 n = 1; n <= 5000; ++n)
    if (std::gcd(n, u64{15}) == 1) ++expected;
  CHECK(r.total_filtered == expected);

  auto split = CensusFilter::all();
  split.p2_at_most = 10.0;
  split.largest_above = 50.0;
  const auto s = census(20000, m, split, sieve());
  u64 brute = 0;
  for (u64 n = 1; n <= 20000; ++n) {
    const auto ps = oracle::prime_multiset(n);
    const u64 p1 = ps.empty() ? 1 : ps.back();
    const u64 p2 = ps.size() >= 2 ? ps[ps.size() - 2] : 1;
    if (p2 <= 10 && p1 > 50) ++brute;
  }
  CHECK(s.total_filtered == brute);
  CHECK(proof_z_threshold(1000000) > 1);
  CHECK(proof_y_threshold(1000000, 0.5) > 1);
  CHECK(split.describe() == "all,P2<=10.000000,P1>50.000000");
}

TEST_CASE("twisted sums") {
  const Modulus m(15);
  const auto r = census(100000, m, CensusFilter::all(), sieve());
  const auto principal = twisted_partial_sum(100000, DirichletCharacter::principal(m),
                                             CensusFilter::all(), sieve());
  CHECK(principal.value() == std::complex<double>(static_cast<double>(r.total_coprime), 0));
  CHECK(principal.term_count() == 100000);
  for (const auto& chi : enumerate_characters(m)) {
    const auto one = twisted_partial_sum(1, chi, CensusFilter::all(), sieve());
    CHECK(std::abs(one.value() - 1.0) < 1e-12);
  }
  for (const auto& chi : enumerate_characters(m)) {
    if (chi.conductor() != 3) continue;
    const auto s = twisted_partial_sum(1000000, chi, CensusFilter::all(), sieve());
    const double diag = std::abs(s.value()) * std::log(1e6) / 1e6;
    CHECK(diag <= 10);
  }
}

TEST_CASE("property: orthogonality rebuilds class counts") {
  for (u64 q : {5u, 8u, 15u, 21u, 40u}) {
    const Modulus m(q);
    const u64 x = 30000;
    const auto r = census(x, m, CensusFilter::all(), sieve());
    std::vector<std::complex<double>> sums;
    const auto chars = enumerate_characters(m);
    for (const auto& chi : chars) sums.push_back(twisted_partial_sum(x, chi, CensusFilter::all(), sieve()).value());
    for (std::size_t i = 0; i < r.classes.size(); ++i) {
      std::complex<double> rebuilt = 0;
      for (std::size_t j = 0; j < chars.size(); ++j) rebuilt += std::conj(chars[j].value(r.classes[i])) * sums[j];
      rebuilt /= static_cast<double>(m.phi());
      REQUIRE(std::abs(rebuilt - static_cast<double>(r.counts[i])) <= 1e-6 * x);
    }
  }
}

TEST_CASE("prime reciprocal sums") {
  CHECK(std::abs(prime_reciprocal_sum(PolynomialSpec::shift_one(), Modulus(1), 100, sieve()) -
                 1.8028172010488709399) < 1e-12);
  // p = 3 gives F(3) = 4, coprime to 3: included.
  const double s3 = prime_reciprocal_sum(PolynomialSpec::shift_one(), Modulus(3), 100, sieve());
  double brute = 0;
  for (u32 p : sieve().primes_up_to(100))
    if ((p + 1) % 3 != 0) brute += 1.0 / p;
  CHECK(std::abs(s3 - brute) < 1e-12);
  CHECK(prime_reciprocal_sum(PolynomialSpec::shift_one(), Modulus(3), 1, sieve()) == 0.0);
}

TEST_CASE("discrepancy") {
  CensusReport flat;
  flat.q = 5;
  flat.classes = {1, 2, 3, 4};
  flat.counts = {10, 10, 10, 10};
  flat.total_coprime = 40;
  CHECK(discrepancy(flat) == 0.0);
  flat.counts = {0, 0, 0, 0};
  flat.total_coprime = 0;
  CHECK_THROWS_AS(discrepancy(flat), DomainError);
  const auto r5 = census(100000, Modulus(5), CensusFilter::all(), sieve());
  const auto r6 = census(1000000, Modulus(5), CensusFilter::all(), sieve());
  CHECK(discrepancy(r6) <= discrepancy(r5) + 0.02);
}

TEST_CASE("rough count estimates") {
  CHECK(rough_count_estimate(1000, Modulus(1), Parity::odd).value == doctest::Approx(1000.0));
  const auto odd = rough_count_estimate(1000000, Modulus(5), Parity::odd);
  CHECK(odd.exponent == 0.75);
  CHECK(odd.value == doctest::Approx(1e6 / std::pow(std::log(1e6), 0.25)).epsilon(1e-12));
  CHECK(odd.correction_omitted);
  const auto even = rough_count_estimate(1000000, Modulus(10), Parity::even);
  CHECK(even.exponent == 1.0);
  CHECK(even.value == doctest::Approx(1000.0).epsilon(1e-12));
  CHECK_THROWS_AS(rough_count_estimate(1000, Modulus(6), Parity::even), UnsupportedModulusError);
  CHECK_THROWS_AS(rough_count_estimate(1000, Modulus(10), Parity::odd), UnsupportedModulusError);
  CHECK_THROWS_AS(rough_count_estimate(1000, Modulus(5), Parity::even), UnsupportedModulusError);
}

TEST_CASE("members and range errors") {
  const auto members = census_members(1000, Modulus(10), CensusFilter::all(), sieve());
  for (u64 n : members) CHECK(two_adic_square_form(sieve().factorize(n)).valid);
  CHECK(std::is_sorted(members.begin(), members.end()));
  CHECK_THROWS_AS(census(2000000, Modulus(5), CensusFilter::all(), sieve()), OutOfRangeError);
  CHECK_THROWS_AS(twisted_partial_sum(2000000, DirichletCharacter::principal(Modulus(5)),
                                      CensusFilter::all(), sieve()),
                  OutOfRangeError);
}
