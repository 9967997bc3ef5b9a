#pragma once

// Roots of one-variable polynomials: exact square-free decomposition over Z,
// Aberth-Ehrlich simultaneous iteration in double precision, and Newton
// polishing in extended precision.

#include "fkdet/groupring.hpp"
#include "fkdet/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <span>
#include <vector>

namespace fkdet {

// ---- dense integer polynomials (ascending coefficients) -------------------

namespace ipoly {

using Poly = std::vector<BigInt>;

inline void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline Poly derivative(const Poly& a) {
  Poly d;
  for (std::size_t i = 1; i < a.size(); ++i) d.push_back(a[i] * static_cast<long long>(i));
  trim(d);
  return d;
}

inline BigInt content(const Poly& a) {
  BigInt g = 0;
  for (const auto& c : a) g = gcd_big(g, c);
  return g;
}

/// Primitive part with positive leading coefficient.
inline Poly primitive_part(Poly a) {
  trim(a);
  if (a.empty()) return a;
  BigInt g = content(a);
  if (a.back() < 0) g = -g;
  for (auto& c : a) c /= g;
  return a;
}

inline Poly sub(const Poly& a, const Poly& b) {
  Poly r(std::max(a.size(), b.size()), BigInt(0));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  trim(r);
  return r;
}

/// Remainder of lc(b)^k * a by b (a pseudo-remainder).
inline Poly pseudo_remainder(Poly a, const Poly& b) {
  trim(a);
  const std::size_t db = b.size() - 1;
  while (!a.empty() && a.size() - 1 >= db) {
    const BigInt lead = a.back();
    const std::size_t shift = a.size() - 1 - db;
    for (auto& c : a) c *= b.back();
    for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] -= lead * b[i];
    trim(a);
  }
  return a;
}

/// Primitive gcd over Z[x] (primitive pseudo-remainder sequence).
inline Poly gcd(Poly a, Poly b) {
  a = primitive_part(std::move(a));
  b = primitive_part(std::move(b));
  if (a.size() < b.size()) std::swap(a, b);
  while (!b.empty()) {
    Poly r = primitive_part(pseudo_remainder(a, b));
    a = std::move(b);
    b = std::move(r);
  }
  return primitive_part(std::move(a));
}

/// a / b when b divides a in Z[x].
inline Poly divide_exact(Poly a, const Poly& b) {
  trim(a);
  if (a.size() < b.size()) {
    if (a.empty()) return a;
    throw Error("divide_exact: divisor has higher degree");
  }
  Poly q(a.size() - b.size() + 1, BigInt(0));
  for (std::size_t k = q.size(); k-- > 0;) {
    const BigInt& top = a[k + b.size() - 1];
    BigInt r;
    boost::multiprecision::divide_qr(top, b.back(), q[k], r);
    if (r != 0) throw Error("divide_exact: inexact division");
    for (std::size_t i = 0; i < b.size(); ++i) a[k + i] -= q[k] * b[i];
  }
  trim(a);
  if (!a.empty()) throw Error("divide_exact: nonzero remainder");
  trim(q);
  return q;
}

/// Yun's square-free decomposition: returns (factor, multiplicity) pairs with
/// primitive, pairwise coprime, square-free factors of positive degree.
inline std::vector<std::pair<Poly, int>> squarefree_decomposition(const Poly& f) {
  std::vector<std::pair<Poly, int>> out;
  Poly a = primitive_part(f);
  if (a.size() <= 1) return out;
  Poly b = derivative(a);
  Poly c = gcd(a, b);
  Poly w = divide_exact(a, c);
  Poly y = divide_exact(b, c);
  Poly z = sub(y, derivative(w));
  int i = 1;
  while (w.size() > 1) {
    Poly g = z.empty() ? w : gcd(w, z);
    if (g.size() > 1) out.emplace_back(g, i);
    w = divide_exact(w, g);
    y = z.empty() ? Poly{} : divide_exact(z, g);
    z = sub(y, derivative(w));
    ++i;
  }
  return out;
}

}  // namespace ipoly

// ---- floating-point root finding ---------------------------------------------

struct AberthOptions {
  int max_iterations = 2000;
  double step_tolerance = 4.0 * std::numeric_limits<double>::epsilon();
};

template <class T>
std::pair<std::complex<T>, std::complex<T>> horner_with_derivative(
    std::span<const std::complex<T>> c, std::complex<T> z) {
  std::complex<T> p = c.back(), dp = 0;
  for (std::size_t i = c.size() - 1; i-- > 0;) {
    dp = dp * z + p;
    p = p * z + c[i];
  }
  return {p, dp};
}

/// All roots of c_0 + c_1 z + ... + c_m z^m (c_m != 0), by Aberth-Ehrlich
/// iteration started on the Cauchy-bound circle.
inline std::vector<std::complex<double>> aberth_roots(
    std::span<const std::complex<double>> c, const AberthOptions& opt = {}) {
  using C = std::complex<double>;
  if (c.empty() || c.back() == C(0)) throw PreconditionError("leading coefficient is zero");
  const std::size_t m = c.size() - 1;
  std::vector<C> z(m);
  if (m == 0) return z;
  if (m == 1) {
    z[0] = -c[0] / c[1];
    return z;
  }
  double bound = 0;
  for (std::size_t i = 0; i < m; ++i) bound = std::max(bound, std::abs(c[i] / c[m]));
  bound += 1.0;
  for (std::size_t k = 0; k < m; ++k)
    z[k] = std::polar(bound, kTwoPi * static_cast<double>(k) / static_cast<double>(m) + 0.4);

  std::vector<bool> done(m, false);
  for (int it = 0; it < opt.max_iterations; ++it) {
    bool all_done = true;
    for (std::size_t k = 0; k < m; ++k) {
      if (done[k]) continue;
      auto [p, dp] = horner_with_derivative<double>(c, z[k]);
      if (p == C(0)) {
        done[k] = true;
        continue;
      }
      const C ratio = p / dp;
      C sum = 0;
      for (std::size_t j = 0; j < m; ++j)
        if (j != k) sum += 1.0 / (z[k] - z[j]);
      C step = ratio / (1.0 - ratio * sum);
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) step = ratio;
      z[k] -= step;
      if (std::abs(step) <= opt.step_tolerance * std::max(1.0, std::abs(z[k])))
        done[k] = true;
      else
        all_done = false;
    }
    if (all_done) break;
  }
  return z;
}

/// Newton steps in extended precision on a polynomial with simple roots.
inline std::complex<double> polish_root(std::span<const std::complex<long double>> c,
                                        std::complex<double> z0, int steps = 8) {
  std::complex<long double> z(z0.real(), z0.imag());
  for (int i = 0; i < steps; ++i) {
    auto [p, dp] = horner_with_derivative<long double>(c, z);
    if (dp == std::complex<long double>(0)) break;
    const auto step = p / dp;
    z -= step;
    if (std::abs(step) <= 4 * std::numeric_limits<long double>::epsilon() * std::abs(z))
      break;
  }
  return {static_cast<double>(z.real()), static_cast<double>(z.imag())};
}

// ---- root lists of integer polynomials ------------------------------------

struct Root {
  std::complex<double> value;
  int multiplicity = 1;
  double residual = 0.0;  // |f(a)| / (||f||_1 max(1,|a|)^deg)
};

/// Roots of f = a_m z^m + ... + a_r z^r after factoring out z^r.
struct RootList {
  std::vector<Root> roots;
  BigInt leading;    // a_m
  BigInt trailing;   // a_r
  std::int64_t low_exponent = 0;
  std::size_t degree_span = 0;  // m - r
  double max_residual = 0.0;

  std::size_t count_with_multiplicity() const {
    std::size_t n = 0;
    for (const auto& r : roots) n += static_cast<std::size_t>(r.multiplicity);
    return n;
  }
};

struct RootConfig {
  double residual_tolerance = 1e-10;
  double near_circle = 1e-6;  // triggers extended-precision polishing
  AberthOptions aberth;
};

inline RootList roots_d1(const IntLaurentPoly& f, const RootConfig& cfg = {}) {
  const DensePoly dense = to_dense(f);
  RootList out;
  out.leading = dense.leading();
  out.trailing = dense.trailing();
  out.low_exponent = dense.low_exponent;
  out.degree_span = dense.degree();
  if (out.degree_span == 0) return out;

  const long double norm1 = static_cast<long double>(to_double(f.one_norm()));
  std::vector<std::complex<long double>> full;
  for (const auto& c : dense.coeffs) full.emplace_back(c.convert_to<long double>(), 0.0L);

  for (const auto& [factor, mult] : ipoly::squarefree_decomposition(dense.coeffs)) {
    // Scale by the leading coefficient so huge integer factors stay in range.
    const long double lead = factor.back().convert_to<long double>();
    std::vector<std::complex<double>> cd;
    std::vector<std::complex<long double>> cl;
    for (const auto& c : factor) {
      const long double v = c.convert_to<long double>() / lead;
      cd.emplace_back(static_cast<double>(v), 0.0);
      cl.emplace_back(v, 0.0L);
    }
    auto zs = aberth_roots(cd, cfg.aberth);
    bool near = false;
    for (const auto& z : zs) near = near || std::abs(std::abs(z) - 1.0) <= cfg.near_circle;
    for (auto& z : zs) {
      if (near) z = polish_root(cl, z);
      Root r;
      r.value = z;
      r.multiplicity = mult;
      const std::complex<long double> zl(z.real(), z.imag());
      const long double scale =
          norm1 * std::pow(std::max(1.0L, std::abs(zl)),
                           static_cast<long double>(out.degree_span));
      r.residual = static_cast<double>(
          std::abs(horner_with_derivative<long double>(full, zl).first) / scale);
      out.max_residual = std::max(out.max_residual, r.residual);
      out.roots.push_back(r);
    }
  }
  if (out.count_with_multiplicity() != out.degree_span)
    throw Error("roots_d1: root count does not match degree");
  if (!(out.max_residual <= cfg.residual_tolerance))
    throw NonConvergence("roots_d1: residual above tolerance", out.max_residual);
  return out;
}

}  // namespace fkdet
