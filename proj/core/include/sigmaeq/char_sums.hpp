#pragma once

#include <array>
#include <complex>
#include <optional>
#include <vector>

#include "sigmaeq/character.hpp"
#include "sigmaeq/parallel.hpp"

namespace sigmaeq {

enum class AverageMethod { brute, closed_form, factored };

// A character average (rho_chi or eta_chi) with how it was obtained.
struct CharAverage {
  std::complex<double> value;
  AverageMethod method = AverageMethod::brute;
  u64 term_count = 0;
  // Set when the modulus lies outside the range the average is meant for
  // (rho for even q); the value is still the literal definition.
  bool outside_intended_range = false;
};

// F(T) with integer coefficients, lowest degree first.
class PolynomialSpec {
 public:
  explicit PolynomialSpec(std::vector<i64> coefficients);

  static PolynomialSpec shift_one() { return PolynomialSpec({1, 1}); }         // T + 1
  static PolynomialSpec cyclotomic_three() { return PolynomialSpec({1, 1, 1}); }  // T^2 + T + 1

  const std::vector<i64>& coefficients() const { return coeffs_; }
  std::size_t degree() const { return coeffs_.size() - 1; }
  u64 eval_mod(u64 t, u64 q) const;

 private:
  std::vector<i64> coeffs_;
};

// rho_chi = (1/phi(q)) sum_{v unit} chi(v + 1), by direct summation.
CharAverage rho_brute(const DirichletCharacter& chi);

// rho_chi = [f squarefree] (-1)^omega(f) alpha(q) / prod_{l | f}(l - 2),
// f the conductor. UnsupportedModulusError for even q.
CharAverage rho_closed_form(const DirichletCharacter& chi);

// S_{chi,l} = sum_{v mod l^e, l !| v} chi_l(v + 1) for chi_l mod l^e, l odd.
std::complex<double> s_chi_ell(const DirichletCharacter& chi_l);
// [cond(chi_l) | l] l^{e-1} ([chi_l trivial](l - 1) - 1).
i64 s_chi_ell_closed_form(const DirichletCharacter& chi_l);

// eta_chi = (1/phi(q)) sum_{v unit} chi(v^2 + v + 1), by direct summation.
CharAverage eta_brute(const DirichletCharacter& chi);

// eta_chi as a product of local averages over l^e || q, each evaluated at the
// local conductor l^f: (1/phi(l^f)) (sum_{v mod l^f} chi_l(v^2+v+1) - [f = 1]);
// trivial components contribute alpha~(l) (density of good units mod l), and
// a nontrivial 2-part forces 0.
CharAverage eta_factored(const DirichletCharacter& chi);

// Local factor eta_{chi,l} for one component, by the conductor reduction.
std::complex<double> eta_local_factor(const DirichletCharacter& chi, std::size_t component);

// Complete sum over all v mod l^e of chi(v^2 + v + 1) against the bound
// l^{e/2}, for every primitive chi mod l^e.
struct WeilCheckReport {
  u64 prime = 0;
  u32 exponent = 0;
  u64 characters_checked = 0;
  double bound = 0;        // l^{e/2}
  double max_abs_sum = 0;
  double max_ratio = 0;    // max |sum| / l^{e/2}
  u64 worst_character_index = 0;
  bool holds = true;
};

// DomainError unless l >= 5 is prime and e >= 1; ResourceError when l^e
// exceeds the modulus cap.
WeilCheckReport weil_clz_check(u64 prime, u32 exponent,
                               Parallelism par = Parallelism::hardware());

// The exceptional conductor set: seven primes, two triple products and
// nine double products.
inline constexpr std::array<u64, 18> kExceptionalConductors = {
    5, 7, 11, 13, 17, 19, 23, 385, 455, 91, 133, 55, 85, 35, 65, 95, 77, 119};

bool is_exceptional_conductor(u64 f);

// prod_{l | Q, l = 1 (3)} (l - 3) * prod_{l | Q, l = 2 (3)} (l - 1).
u64 exceptional_normalizer(u64 q);

struct SSetEntry {
  u64 modulus = 0;
  u64 primitive_characters = 0;
  u64 normalizer = 0;
  double max_real_sum = 0;       // max over primitive psi of Re sum
  double normalized_max = 0;     // max_real_sum / normalizer
  u64 argmax_character = 0;      // index of a maximizing psi
  bool attains_quarter = false;  // exactly 1/4, confirmed by integer rounding
};

struct SSetReport {
  std::vector<SSetEntry> entries;  // in kExceptionalConductors order
  double global_max = 0;
  bool global_max_is_exact_quarter = false;
  bool bound_holds = true;          // every normalized max <= 1/4 + 1e-9
  std::vector<u64> attaining;       // ascending
};

// Recomputes, for every Q in the exceptional set, the maximum over primitive
// psi mod Q of Re(sum_{v unit mod Q} psi(v^2+v+1)) divided by the normalizer.
// With a modulus, only the Q dividing it are examined.
SSetReport verify_s_set(std::optional<Modulus> restrict_to = std::nullopt,
                        Parallelism par = Parallelism::hardware());

// alpha_F(q) = #{u mod q : gcd(u F(u), q) = 1} / phi(q), exactly, from the
// per-prime counts mod l.
Rational alpha_F(const PolynomialSpec& f, const Modulus& m);

// sum over nonprincipal chi of |rho_chi|^2 (q odd; closed form per chi).
double rho_power_sum(const Modulus& m, unsigned exponent = 2);
// sum over nonprincipal chi of |eta_chi|^3 (gcd(q, 3) = 1; factored form).
double eta_power_sum(const Modulus& m, unsigned exponent = 3);

}  // namespace sigmaeq
