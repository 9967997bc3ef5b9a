#pragma once

// Periodic-point counts |Fix_{Gamma_n}(X_f)| = |det l(f^(n))| as exact
// integers, and the periodic entropy sequence built from them.

#include "fkdet/convergence.hpp"
#include "fkdet/groupring.hpp"
#include "fkdet/smith.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <string>
#include <vector>

namespace fkdet {

struct FixCountConfig {
  std::uint64_t volume_cap = 4096;
};

/// N = det l(f^(n)) for the box n (sign retained). The number of points of
/// X_f fixed by n_1 Z x ... x n_d Z is |N| when N != 0 and infinite otherwise.
struct FixCountRecord {
  std::vector<std::uint64_t> box;
  BigInt value;
  bool is_zero = false;
  std::uint64_t index = 0;  // (Gamma : Gamma_n) = box volume
  std::size_t primes_used = 0;
};

namespace detail {

/// Word-size primes p = 1 (mod L), descending from 2^62.
class CongruentPrimes {
 public:
  explicit CongruentPrimes(std::uint64_t L) : L_(L), k_(((1ULL << 62) - 1) / L) {}
  std::uint64_t next() {
    for (; k_ > 0; --k_) {
      const std::uint64_t p = k_ * L_ + 1;
      if (is_prime_u64(p)) {
        --k_;
        return p;
      }
    }
    throw Error("ran out of primes congruent to 1 mod L");
  }

 private:
  std::uint64_t L_;
  std::uint64_t k_;
};

/// An element of exact order L in F_p^x (requires L | p - 1).
inline std::uint64_t element_of_order(std::uint64_t L, std::uint64_t p) {
  if (L == 1) return 1;
  const auto qs = prime_factors_u64(L);
  for (std::uint64_t a = 2; a < p; ++a) {
    const std::uint64_t w = powmod(a, (p - 1) / L, p);
    bool ok = true;
    for (auto q : qs) ok = ok && powmod(w, L / q, p) != 1;
    if (ok) return w;
  }
  throw Error("no element of the requested order");
}

/// det l(F) mod p. Over F_p with p = 1 (mod exponent of G) the group algebra
/// F_p[G] is diagonalized by the characters of G, so the determinant is the
/// product of F(chi) over all characters chi.
inline std::uint64_t det_mod_p(const IntLaurentPoly& F, std::span<const std::uint64_t> box,
                               std::uint64_t L, std::uint64_t p) {
  const std::size_t d = box.size();
  const std::uint64_t w = element_of_order(L, p);
  // powers[i][j] = zeta_i^j with zeta_i = w^(L / n_i) of order n_i.
  std::vector<std::vector<std::uint64_t>> powers(d);
  for (std::size_t i = 0; i < d; ++i) {
    const std::uint64_t zeta = powmod(w, L / box[i], p);
    powers[i].resize(box[i]);
    std::uint64_t acc = 1;
    for (std::uint64_t j = 0; j < box[i]; ++j) {
      powers[i][j] = acc;
      acc = mulmod(acc, zeta, p);
    }
  }
  std::vector<std::vector<std::uint64_t>> exps;
  std::vector<std::uint64_t> coeffs;
  const BigInt bp = p;
  for (const auto& [m, c] : F.terms()) {
    std::vector<std::uint64_t> e(d);
    for (std::size_t i = 0; i < d; ++i) e[i] = static_cast<std::uint64_t>(m[i]);
    exps.push_back(std::move(e));
    coeffs.push_back(mod_floor(c, bp).convert_to<std::uint64_t>());
  }
  std::uint64_t det = 1;
  std::vector<std::uint64_t> k(d, 0);
  bool more = true;
  while (more) {
    std::uint64_t value = 0;
    for (std::size_t t = 0; t < coeffs.size(); ++t) {
      std::uint64_t term = coeffs[t];
      for (std::size_t i = 0; i < d; ++i)
        term = mulmod(term, powers[i][(exps[t][i] * k[i]) % box[i]], p);
      value += term;
      if (value >= p) value -= p;
    }
    det = mulmod(det, value, p);
    if (det == 0) return 0;
    more = false;
    for (std::size_t i = d; i-- > 0;) {
      if (++k[i] < box[i]) {
        more = true;
        break;
      }
      k[i] = 0;
    }
  }
  return det;
}

}  // namespace detail

/// Exact det l(f^(n)) by modular determinants combined with the Chinese
/// remainder theorem. The prime budget comes from Hadamard's bound: every row
/// of l(f^(n)) is a permutation of the coefficients of f^(n), so
/// |det| <= ||f^(n)||_2^vol, and primes are added until their product M
/// satisfies M^2 > 4 ||f^(n)||_2^(2 vol).
inline FixCountRecord fix_count(const IntLaurentPoly& f, std::span<const std::uint64_t> box,
                                const FixCountConfig& cfg = {}) {
  FixCountRecord out;
  out.box.assign(box.begin(), box.end());
  out.index = box_volume(box);
  if (out.index > cfg.volume_cap)
    throw CapExceeded("box volume " + std::to_string(out.index) + " exceeds cap " +
                      std::to_string(cfg.volume_cap));
  const IntLaurentPoly F = reduce_mod_box(f, box);
  if (F.is_zero()) {
    out.value = 0;
    out.is_zero = true;
    return out;
  }
  std::uint64_t L = 1;
  for (auto n : box) L = std::lcm(L, n);

  const BigInt target = 4 * pow_big(F.sum_of_squares(), out.index);
  detail::CongruentPrimes primes(L);
  BigInt residue = 0, modulus = 1;
  while (modulus * modulus <= target) {
    const std::uint64_t p = primes.next();
    const std::uint64_t r = detail::det_mod_p(F, box, L, p);
    // Garner step: residue += modulus * ((r - residue) / modulus mod p).
    const BigInt bp = p;
    const std::uint64_t cur = mod_floor(residue, bp).convert_to<std::uint64_t>();
    const std::uint64_t diff = (r + p - cur) % p;
    const std::uint64_t inv =
        powmod(mod_floor(modulus, bp).convert_to<std::uint64_t>(), p - 2, p);
    residue += modulus * BigInt(mulmod(diff, inv, p));
    modulus *= p;
    ++out.primes_used;
  }
  if (residue > modulus / 2) residue -= modulus;
  out.value = std::move(residue);
  out.is_zero = out.value == 0;
  return out;
}

/// Matrix of multiplication by f^(n) on Z[Z/n_1 x ... x Z/n_d] in the basis of
/// group elements (row-major box order): column h holds f^(n) * h.
inline IntMatrix multiplication_matrix(const IntLaurentPoly& f,
                                       std::span<const std::uint64_t> box) {
  const IntLaurentPoly F = reduce_mod_box(f, box);
  const std::uint64_t vol = box_volume(box);
  const std::size_t d = box.size();
  IntMatrix m(vol, std::vector<BigInt>(vol, BigInt(0)));
  auto flat = [&](std::span<const std::uint64_t> k) {
    std::uint64_t idx = 0;
    for (std::size_t i = 0; i < d; ++i) idx = idx * box[i] + k[i];
    return idx;
  };
  std::vector<std::uint64_t> h(d, 0), g(d);
  for (std::uint64_t col = 0; col < vol; ++col) {
    for (const auto& [mono, c] : F.terms()) {
      for (std::size_t i = 0; i < d; ++i)
        g[i] = (static_cast<std::uint64_t>(mono[i]) + h[i]) % box[i];
      m[flat(g)][col] += c;
    }
    for (std::size_t i = d; i-- > 0;) {
      if (++h[i] < box[i]) break;
      h[i] = 0;
    }
  }
  return m;
}

struct FixStructureConfig {
  std::uint64_t volume_cap = 256;
};

/// Elementary divisors of l(f^(n)); Fix_{Gamma_n}(X_f) is isomorphic to the
/// dual of the sum of Z/d_i, so a zero divisor certifies an infinite fixed set.
inline std::vector<BigInt> fix_structure(const IntLaurentPoly& f,
                                         std::span<const std::uint64_t> box,
                                         const FixStructureConfig& cfg = {}) {
  const std::uint64_t vol = box_volume(box);
  if (vol > cfg.volume_cap)
    throw CapExceeded("box volume " + std::to_string(vol) + " exceeds structure cap " +
                      std::to_string(cfg.volume_cap));
  const auto det = fix_count(f, box, FixCountConfig{std::max<std::uint64_t>(vol, 1)});
  return elementary_divisors(multiplication_matrix(f, box), abs_value(det.value));
}

// ---- periodic entropy --------------------------------------------------------

struct PeriodicConfig {
  double tolerance = 1e-6;
  FixCountConfig fix;
};

struct PeriodicReport {
  RealReport table;
  std::vector<FixCountRecord> counts;  // in entry order, zero counts included
};

/// Entries ((Gamma : Gamma_n), log|N_n| / (Gamma : Gamma_n)) along box_list,
/// sorted by index. Zero counts are skipped and flagged.
inline PeriodicReport h_per(const IntLaurentPoly& f,
                            const std::vector<std::vector<std::uint64_t>>& box_list,
                            const PeriodicConfig& cfg = {}) {
  PeriodicReport out;
  std::vector<std::vector<std::uint64_t>> boxes = box_list;
  std::stable_sort(boxes.begin(), boxes.end(), [](const auto& a, const auto& b) {
    return box_volume(a) < box_volume(b);
  });
  for (const auto& box : boxes) {
    auto rec = fix_count(f, box, cfg.fix);
    if (rec.is_zero) {
      std::string name;
      for (auto n : box) name += (name.empty() ? "" : "x") + std::to_string(n);
      out.table.flags.push_back("Skipped: fix_count is zero for box " + name);
    } else {
      out.table.entries.push_back(
          {rec.index, log_abs(rec.value) / static_cast<double>(rec.index)});
    }
    out.counts.push_back(std::move(rec));
  }
  auto& e = out.table.entries;
  for (std::size_t i = 1; i < e.size(); ++i)
    out.table.differences.push_back(std::abs(e[i].value - e[i - 1].value));
  if (!e.empty()) out.table.limit_estimate = e.back().value;
  const auto& dd = out.table.differences;
  if (!dd.empty()) out.table.final_diagnostic = dd.back();
  const bool skipped = e.size() != boxes.size();
  if (!skipped && dd.size() >= 2 && dd[dd.size() - 1] <= cfg.tolerance &&
      dd[dd.size() - 2] <= cfg.tolerance)
    out.table.verdict = ConvergenceVerdict::Converged;
  return out;
}

}  // namespace fkdet
