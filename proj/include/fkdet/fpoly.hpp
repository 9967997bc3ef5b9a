#pragma once

// Dense polynomials over F_p with word-size p (ascending coefficients).

#include "fkdet/arith.hpp"

#include <algorithm>
#include <vector>

namespace fkdet::fp {

using Poly = std::vector<std::uint64_t>;

inline void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline std::uint64_t inv(std::uint64_t a, std::uint64_t p) { return powmod(a, p - 2, p); }

inline Poly sub(const Poly& a, const Poly& b, std::uint64_t p) {
  Poly r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] = (r[i] + p - b[i] % p) % p;
  trim(r);
  return r;
}

inline Poly mul(const Poly& a, const Poly& b, std::uint64_t p) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + mulmod(a[i], b[j], p)) % p;
  trim(r);
  return r;
}

/// Remainder of a by a nonzero b.
inline Poly rem(Poly a, const Poly& b, std::uint64_t p) {
  trim(a);
  const std::uint64_t lead_inv = inv(b.back(), p);
  while (a.size() >= b.size()) {
    const std::uint64_t q = mulmod(a.back(), lead_inv, p);
    const std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i)
      a[i + shift] = (a[i + shift] + p - mulmod(q, b[i], p)) % p;
    trim(a);
  }
  return a;
}

inline Poly monic(Poly a, std::uint64_t p) {
  trim(a);
  if (a.empty()) return a;
  const std::uint64_t c = inv(a.back(), p);
  for (auto& x : a) x = mulmod(x, c, p);
  return a;
}

inline Poly gcd(Poly a, Poly b, std::uint64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = rem(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return monic(std::move(a), p);
}

/// base^e mod (modulus, p).
inline Poly powmod(Poly base, BigInt e, const Poly& modulus, std::uint64_t p) {
  Poly r = rem(Poly{1}, modulus, p);
  base = rem(std::move(base), modulus, p);
  while (e > 0) {
    if ((e & 1) != 0) r = rem(mul(r, base, p), modulus, p);
    e >>= 1;
    if (e > 0) base = rem(mul(base, base, p), modulus, p);
  }
  return r;
}

/// Ben-Or: g of degree k is irreducible iff gcd(g, x^(p^i) - x) = 1 for i <= k/2.
inline bool is_irreducible(const Poly& g, std::uint64_t p) {
  const std::size_t k = g.size() - 1;
  if (k == 1) return true;
  if (g[0] == 0) return false;
  const Poly x{0, 1};
  Poly power = x;
  for (std::size_t i = 1; i <= k / 2; ++i) {
    power = powmod(power, BigInt(p), g, p);
    if (gcd(g, sub(power, x, p), p).size() != 1) return false;
  }
  return true;
}

/// Least monic irreducible of degree k, ordering candidates by the integer
/// whose base-p digits are the lower coefficients.
inline Poly least_irreducible(std::size_t k, std::uint64_t p) {
  Poly g(k + 1, 0);
  g[k] = 1;
  for (;;) {
    if (is_irreducible(g, p)) return g;
    std::size_t i = 0;
    while (i < k && ++g[i] == p) g[i++] = 0;
    if (i == k) throw Error("no irreducible polynomial found");
  }
}

namespace detail {

inline void split_roots(const Poly& h, std::uint64_t p, std::vector<std::uint64_t>& out) {
  if (h.size() <= 1) return;
  if (h.size() == 2) {
    out.push_back((p - mulmod(h[0], inv(h[1], p), p)) % p);
    return;
  }
  const BigInt half = BigInt((p - 1) / 2);
  for (std::uint64_t a = 0; a < p; ++a) {
    const Poly t = sub(powmod(Poly{a, 1}, half, h, p), Poly{1}, p);
    const Poly s = gcd(h, t, p);
    if (s.size() > 1 && s.size() < h.size()) {
      split_roots(s, p, out);
      Poly q = h;
      // h / s by repeated remainder-free division.
      Poly quot(h.size() - s.size() + 1, 0);
      for (std::size_t k = quot.size(); k-- > 0;) {
        quot[k] = q[k + s.size() - 1];
        for (std::size_t i = 0; i < s.size(); ++i)
          q[k + i] = (q[k + i] + p - mulmod(quot[k], s[i], p)) % p;
      }
      split_roots(monic(std::move(quot), p), p, out);
      return;
    }
  }
  throw Error("root splitting failed");
}

}  // namespace detail

/// Distinct roots in F_p, ascending.
inline std::vector<std::uint64_t> distinct_roots(const Poly& g, std::uint64_t p) {
  std::vector<std::uint64_t> out;
  Poly h = monic(g, p);
  if (h.size() <= 1) return out;
  if (p == 2) {
    for (std::uint64_t a : {0ULL, 1ULL}) {
      std::uint64_t acc = 0;
      for (std::size_t i = h.size(); i-- > 0;) acc = (mulmod(acc, a, p) + h[i]) % p;
      if (acc == 0) out.push_back(a);
    }
    return out;
  }
  const Poly x{0, 1};
  h = gcd(h, sub(powmod(x, BigInt(p), h, p), x, p), p);
  detail::split_roots(h, p, out);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace fkdet::fp
