#pragma once

#include <complex>
#include <cstddef>
#include <numbers>
#include <span>

namespace fkdet {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Pairwise (cascade) summation in the order given; used wherever a result
/// must be reproducible independent of how values were produced.
template <class T>
T pairwise_sum(std::span<const T> values) {
  constexpr std::size_t kBlock = 8;
  if (values.size() <= kBlock) {
    T s{};
    for (const auto& v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

}  // namespace fkdet
