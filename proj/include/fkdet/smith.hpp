#pragma once

// Elementary divisors of square integer matrices.

#include "fkdet/arith.hpp"

#include <algorithm>
#include <vector>

namespace fkdet {

using IntMatrix = std::vector<std::vector<BigInt>>;

namespace detail {

/// Ascending with zeros last.
inline std::vector<BigInt> sorted_divisors(std::vector<BigInt> d) {
  std::sort(d.begin(), d.end(), [](const BigInt& x, const BigInt& y) {
    if (x == 0 || y == 0) return x != 0 && y == 0;
    return x < y;
  });
  return d;
}

}  // namespace detail

/// Smith normal form diagonal d_1 | d_2 | ... | d_n (nonnegative). When the
/// absolute determinant is known and nonzero, pass it as `det_abs`: the
/// elimination then runs modulo it (the column lattice contains det * Z^n), so
/// entries stay bounded.
inline std::vector<BigInt> elementary_divisors(IntMatrix a, const BigInt& det_abs = 0) {
  const std::size_t n = a.size();
  for (const auto& row : a)
    if (row.size() != n) throw PreconditionError("elementary_divisors: matrix not square");
  const BigInt& D = det_abs;
  const BigInt half = D / 2;
  auto reduce = [&](BigInt& x) {
    if (D == 0) return;
    x %= D;
    if (x > half) x -= D;
    else if (x < -half) x += D;
  };
  for (auto& row : a)
    for (auto& x : row) reduce(x);

  std::vector<BigInt> out;
  for (std::size_t t = 0; t < n; ++t) {
    for (;;) {
      std::size_t pi = n, pj = n;
      BigInt best = 0;
      for (std::size_t i = t; i < n; ++i)
        for (std::size_t j = t; j < n; ++j)
          if (a[i][j] != 0 && (pi == n || abs_value(a[i][j]) < best)) {
            best = abs_value(a[i][j]);
            pi = i;
            pj = j;
          }
      if (pi == n) {
        // The rest of the matrix vanishes (modulo D).
        for (std::size_t r = t; r < n; ++r) out.push_back(D);
        return detail::sorted_divisors(std::move(out));
      }
      std::swap(a[t], a[pi]);
      for (auto& row : a) std::swap(row[t], row[pj]);

      bool clean = true;
      const BigInt pivot = a[t][t];
      for (std::size_t i = t + 1; i < n; ++i) {
        if (a[i][t] == 0) continue;
        const BigInt q = a[i][t] / pivot;
        for (std::size_t j = t; j < n; ++j) {
          a[i][j] -= q * a[t][j];
          reduce(a[i][j]);
        }
        if (a[i][t] != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (a[t][j] == 0) continue;
        const BigInt q = a[t][j] / pivot;
        for (std::size_t i = t; i < n; ++i) {
          a[i][j] -= q * a[i][t];
          reduce(a[i][j]);
        }
        if (a[t][j] != 0) clean = false;
      }
      if (!clean) continue;

      std::size_t bad = n;
      for (std::size_t i = t + 1; i < n && bad == n; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (a[i][j] % pivot != 0) {
            bad = i;
            break;
          }
      if (bad == n) break;
      for (std::size_t j = t; j < n; ++j) {
        a[t][j] += a[bad][j];
        reduce(a[t][j]);
      }
    }
    out.push_back(D == 0 ? abs_value(a[t][t]) : gcd_big(a[t][t], D));
  }
  return detail::sorted_divisors(std::move(out));
}

}  // namespace fkdet
