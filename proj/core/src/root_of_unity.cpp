#include "sigmaeq/root_of_unity.hpp"

#include <cassert>
#include <numbers>

namespace sigmaeq {

std::complex<double> root_of_unity(u64 k, u64 order) {
  k %= order;
  if (k == 0) return {1.0, 0.0};
  // Quarter turns are returned exactly.
  if ((4 * k) % order == 0) {
    switch ((4 * k) / order) {
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      case 3: return {0.0, -1.0};
      default: break;
    }
  }
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) /
                       static_cast<double>(order);
  return std::polar(1.0, angle);
}

std::complex<double> RootOfUnityValue::to_complex() const {
  if (zero) return {0.0, 0.0};
  return root_of_unity(k, order);
}

RootOfUnityValue RootOfUnityValue::operator*(const RootOfUnityValue& other) const {
  assert(order == other.order);
  if (zero || other.zero) return zero_value(order);
  return {(k + other.k) % order, order, false};
}

RootOfUnityValue RootOfUnityValue::conj() const {
  if (zero) return *this;
  return {(order - k) % order, order, false};
}

void RootOfUnitySum::merge(const RootOfUnitySum& other) {
  assert(order() == other.order());
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
  terms_ += other.terms_;
}

std::complex<double> RootOfUnitySum::value() const {
  std::complex<double> total{0.0, 0.0};
  const u64 n = order();
  for (u64 k = 0; k < n; ++k)
    if (counts_[k] != 0) total += static_cast<double>(counts_[k]) * root_of_unity(k, n);
  return total;
}

}  // namespace sigmaeq
