#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "sigmaeq/arith.hpp"

namespace sigmaeq {

// e^{2 pi i k / N}, or 0 when the character argument is not a unit.
struct RootOfUnityValue {
  u64 k = 0;
  u64 order = 1;  // N
  bool zero = false;

  static RootOfUnityValue zero_value(u64 order) { return {0, order, true}; }

  std::complex<double> to_complex() const;

  // Both operands must share the same N.
  RootOfUnityValue operator*(const RootOfUnityValue& other) const;
  RootOfUnityValue conj() const;

  friend bool operator==(const RootOfUnityValue&, const RootOfUnityValue&) = default;
};

// Exact accumulator for sums of N-th roots of unity: a histogram of the
// exponents seen. Merging is integer addition, so a parallel sum is
// bit-identical to the serial one.
class RootOfUnitySum {
 public:
  explicit RootOfUnitySum(u64 order = 1) : counts_(order, 0) {}

  void add(const RootOfUnityValue& v) {
    ++terms_;
    if (!v.zero) ++counts_[v.k];
  }
  void add_exponent(u64 k, i64 multiplicity = 1) {
    terms_ += static_cast<u64>(multiplicity);
    counts_[k] += multiplicity;
  }
  void add_zero_terms(u64 n) { terms_ += n; }
  void merge(const RootOfUnitySum& other);

  u64 order() const { return counts_.size(); }
  u64 term_count() const { return terms_; }
  const std::vector<i64>& histogram() const { return counts_; }

  std::complex<double> value() const;

  // Absolute tolerance for comparing value() against an exact quantity.
  double tolerance() const { return 1e-9 * (1.0 + static_cast<double>(terms_)); }

 private:
  std::vector<i64> counts_;
  u64 terms_ = 0;
};

// cos/sin of 2 pi k / N with the argument reduced to the first octant.
std::complex<double> root_of_unity(u64 k, u64 order);

}  // namespace sigmaeq
