#pragma once

// Unramified extensions Q_q of Q_p (q = p^k) in the power basis of a lifted
// irreducible modulus, with elements known modulo p^M.

#include "fkdet/fpoly.hpp"
#include "fkdet/padic.hpp"

#include <memory>
#include <numeric>

namespace fkdet {

inline constexpr std::size_t kDefaultDegreeCap = 8;

struct UnramifiedField {
  std::uint64_t p = 2;
  std::size_t k = 1;
  std::int64_t precision = kDefaultPadicPrecision;  // coefficients are kept mod p^M
  std::vector<BigInt> modulus;                       // monic, k + 1 coefficients
  fp::Poly residue_modulus;
  std::vector<BigInt> traces;                        // Tr(theta^i), i < k, mod p^M
  BigInt pM;

  BigInt order() const { return pow_big(BigInt(p), k); }
};

using FieldPtr = std::shared_ptr<const UnramifiedField>;

class UnramifiedElement;
FieldPtr make_unramified_field(std::uint64_t p, std::size_t k, std::int64_t precision);

class UnramifiedElement {
 public:
  UnramifiedElement(FieldPtr field, std::vector<BigInt> coeffs, std::int64_t precision)
      : field_(std::move(field)), coeffs_(std::move(coeffs)), precision_(precision) {
    coeffs_.resize(field_->k, BigInt(0));
    const BigInt m = prime_power(field_->p, precision_);
    for (auto& c : coeffs_) c = mod_floor(c, m);
  }

  static UnramifiedElement of_integer(const FieldPtr& f, const BigInt& n) {
    return UnramifiedElement(f, {n}, f->precision);
  }

  /// Embeds an integral scalar of Q_p.
  static UnramifiedElement of_scalar(const FieldPtr& f, const PadicScalar& x) {
    if (x.is_zero()) return UnramifiedElement(f, {0}, std::min(f->precision, x.absolute_precision()));
    if (x.valuation() < 0) throw Unsupported("non-integral scalar in an unramified extension");
    return UnramifiedElement(f, {prime_power(f->p, x.valuation()) * x.unit()},
                             std::min(f->precision, x.absolute_precision()));
  }

  const FieldPtr& field() const { return field_; }
  std::size_t degree() const { return field_->k; }
  std::uint64_t prime() const { return field_->p; }
  std::int64_t precision() const { return precision_; }
  const std::vector<BigInt>& coeffs() const { return coeffs_; }

  PadicScalar coefficient(std::size_t i) const {
    return PadicScalar::normalize(field_->p, 0, coeffs_.at(i), precision_);
  }

  bool is_zero() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](const BigInt& c) { return c == 0; });
  }

  /// min over coefficients; the power basis is an integral basis.
  std::int64_t valuation() const {
    std::int64_t v = precision_;
    for (const auto& c : coeffs_)
      if (c != 0) v = std::min(v, fkdet::valuation(c, field_->p));
    return v;
  }

  UnramifiedElement with_precision(std::int64_t m) const {
    return UnramifiedElement(field_, coeffs_, std::min(m, precision_));
  }

  friend UnramifiedElement operator+(const UnramifiedElement& a, const UnramifiedElement& b) {
    a.check_field(b);
    std::vector<BigInt> c(a.coeffs_);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] += b.coeffs_[i];
    return UnramifiedElement(a.field_, std::move(c), std::min(a.precision_, b.precision_));
  }

  friend UnramifiedElement operator-(const UnramifiedElement& a, const UnramifiedElement& b) {
    a.check_field(b);
    std::vector<BigInt> c(a.coeffs_);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] -= b.coeffs_[i];
    return UnramifiedElement(a.field_, std::move(c), std::min(a.precision_, b.precision_));
  }

  friend UnramifiedElement operator*(const UnramifiedElement& a, const UnramifiedElement& b) {
    a.check_field(b);
    const std::int64_t prec = std::min(a.precision_, b.precision_);
    return UnramifiedElement(a.field_, multiply(*a.field_, a.coeffs_, b.coeffs_,
                                                prime_power(a.field_->p, prec)),
                             prec);
  }

  UnramifiedElement scaled(const BigInt& c) const {
    std::vector<BigInt> r(coeffs_);
    for (auto& x : r) x *= c;
    return UnramifiedElement(field_, std::move(r), precision_);
  }

  UnramifiedElement pow(BigInt e) const {
    UnramifiedElement r = of_integer(field_, 1).with_precision(precision_);
    UnramifiedElement b = *this;
    while (e > 0) {
      if ((e & 1) != 0) r = r * b;
      e >>= 1;
      if (e > 0) b = b * b;
    }
    return r;
  }

  /// Trace to Q_p.
  PadicScalar trace() const {
    BigInt s = 0;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) s += coeffs_[i] * field_->traces[i];
    return PadicScalar::normalize(field_->p, 0, s, precision_);
  }

  /// Coefficient-wise agreement modulo p^digits.
  bool agrees_mod(const UnramifiedElement& b, std::int64_t digits) const {
    if (digits > std::min(precision_, b.precision_)) return false;
    const BigInt m = prime_power(field_->p, digits);
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
      if (mod_floor(coeffs_[i] - b.coeffs_[i], m) != 0) return false;
    return true;
  }

  /// Product of coefficient vectors reduced by the modulus, mod m.
  static std::vector<BigInt> multiply(const UnramifiedField& f, const std::vector<BigInt>& a,
                                      const std::vector<BigInt>& b, const BigInt& m) {
    const std::size_t k = f.k;
    std::vector<BigInt> r(2 * k - 1, BigInt(0));
    for (std::size_t i = 0; i < k; ++i) {
      if (a[i] == 0) continue;
      for (std::size_t j = 0; j < k; ++j) r[i + j] += a[i] * b[j];
    }
    for (std::size_t t = r.size(); t-- > k;) {
      if (r[t] == 0) continue;
      const BigInt c = r[t] % m;
      for (std::size_t i = 0; i < k; ++i) r[t - k + i] -= c * f.modulus[i];
    }
    r.resize(k);
    for (auto& x : r) x = mod_floor(x, m);
    return r;
  }

 private:
  void check_field(const UnramifiedElement& b) const {
    if (field_->p != b.field_->p || field_->k != b.field_->k ||
        field_->modulus != b.field_->modulus)
      throw PreconditionError("elements of different unramified fields");
  }

  FieldPtr field_;
  std::vector<BigInt> coeffs_;
  std::int64_t precision_;
};

inline FieldPtr make_unramified_field(std::uint64_t p, std::size_t k, std::int64_t precision) {
  require_prime(p);
  if (k == 0) throw PreconditionError("extension degree must be positive");
  if (precision < 1) throw PreconditionError("precision must be positive");
  auto f = std::make_shared<UnramifiedField>();
  f->p = p;
  f->k = k;
  f->precision = precision;
  f->pM = prime_power(p, precision);
  f->residue_modulus = fp::least_irreducible(k, p);
  for (auto c : f->residue_modulus) f->modulus.emplace_back(c);
  // Tr(theta^i) = sum_j [theta^j] (theta^i * theta^j).
  std::vector<std::vector<BigInt>> powers;
  std::vector<BigInt> cur(k, BigInt(0));
  cur[0] = 1;
  std::vector<BigInt> theta(k, BigInt(0));
  if (k > 1) theta[1] = 1;
  else theta[0] = mod_floor(-f->modulus[0], f->pM);
  for (std::size_t i = 0; i < 2 * k - 1; ++i) {
    powers.push_back(cur);
    cur = UnramifiedElement::multiply(*f, cur, theta, f->pM);
  }
  f->traces.assign(k, BigInt(0));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) f->traces[i] += powers[i + j][j];
  for (auto& t : f->traces) t = mod_floor(t, f->pM);
  return f;
}

/// Iwasawa logarithm on Q_q: strips p^v, raises to q - 1, series, divides by
/// q - 1. Absolute precision drops by v.
inline UnramifiedElement ext_iwasawa_log(const UnramifiedElement& x) {
  if (x.is_zero()) throw PreconditionError("ext_iwasawa_log of zero");
  const auto& F = x.field();
  const std::uint64_t p = F->p;
  const std::int64_t v = x.valuation();
  const std::int64_t N = x.precision() - v;
  if (N <= 0) throw PreconditionError("ext_iwasawa_log: no significant digits");
  const BigInt pv = prime_power(p, v);
  std::vector<BigInt> u(x.coeffs());
  for (auto& c : u) c /= pv;
  const UnramifiedElement unit(F, std::move(u), N);
  const BigInt q = F->order();
  UnramifiedElement t = unit.pow(q - 1) - UnramifiedElement::of_integer(F, 1);
  const std::int64_t vt = t.is_zero() ? N : t.valuation();
  if (vt >= N) return UnramifiedElement(F, {0}, N);

  auto floor_log = [p](std::uint64_t nu) {
    std::int64_t e = 0;
    while (nu >= p) {
      nu /= p;
      ++e;
    }
    return e;
  };
  std::uint64_t last = 1;
  while (static_cast<std::int64_t>(last) * vt - floor_log(last) < N) ++last;
  const std::int64_t E = floor_log(last);
  const BigInt wide = prime_power(p, N + E), narrow = prime_power(p, N);
  std::vector<BigInt> power(F->k, BigInt(0)), sum(F->k, BigInt(0));
  power[0] = 1;
  for (std::uint64_t nu = 1; nu < last; ++nu) {
    power = UnramifiedElement::multiply(*F, power, t.coeffs(), wide);
    std::uint64_t m = nu;
    std::int64_t e = 0;
    while (m % p == 0) {
      m /= p;
      ++e;
    }
    BigInt c = inverse_mod(BigInt(m), narrow);
    if (nu % 2 == 0) c = -c;
    const BigInt pe = prime_power(p, e);
    for (std::size_t i = 0; i < F->k; ++i) sum[i] += power[i] / pe * c;
  }
  const BigInt scale = inverse_mod(mod_floor(q - 1, narrow), narrow);
  for (auto& s : sum) s = mod_floor(s * scale, narrow);
  return UnramifiedElement(F, std::move(sum), N);
}

struct RootsOfUnity {
  std::size_t k = 1;
  FieldPtr field;
  std::vector<UnramifiedElement> roots;  // roots[j] = zeta^j for a fixed primitive zeta
};

/// All n-th roots of unity (gcd(n, p) = 1) in Q_{p^k}, k the order of p mod n.
inline RootsOfUnity unramified_roots_of_unity(std::uint64_t n, std::uint64_t p,
                                              std::int64_t precision = kDefaultPadicPrecision,
                                              std::size_t degree_cap = kDefaultDegreeCap) {
  require_prime(p);
  if (n == 0 || gcd_u64(n, p) != 1) throw PreconditionError("n must be positive and prime to p");
  const std::size_t k = static_cast<std::size_t>(multiplicative_order(p % n, n));
  if (k > degree_cap)
    throw CapExceeded("extension degree " + std::to_string(k) + " for n = " + std::to_string(n) +
                      " exceeds the cap " + std::to_string(degree_cap));
  RootsOfUnity out;
  out.k = k;
  out.field = make_unramified_field(p, k, precision);
  const auto& F = out.field;
  const auto primes = prime_factors_u64(n);
  const BigInt cofactor = (F->order() - 1) / n;

  // Element of exact order n in F_q^x, then Newton on W^n = 1.
  fp::Poly h;
  {
    fp::Poly g(k, 0);
    bool found = false;
    for (;;) {
      std::size_t i = 0;
      while (i < k && ++g[i] == p) g[i++] = 0;
      if (i == k) break;
      fp::Poly cand = fp::powmod(g, cofactor, F->residue_modulus, p);
      if (cand.empty()) continue;
      bool exact = true;
      for (auto l : primes)
        if (fp::powmod(cand, BigInt(n / l), F->residue_modulus, p) == fp::Poly{1}) exact = false;
      if (exact) {
        h = std::move(cand);
        found = true;
        break;
      }
    }
    if (!found && n == 1) h = {1};
    else if (!found) throw Error("no element of the requested order");
  }
  std::vector<BigInt> hc(h.begin(), h.end());
  UnramifiedElement w(F, std::move(hc), precision);
  const UnramifiedElement one = UnramifiedElement::of_integer(F, 1);
  const BigInt inv_n = inverse_mod(BigInt(n), F->pM);
  for (int it = 0; it < 128; ++it) {
    const UnramifiedElement e = w.pow(n) - one;
    if (e.is_zero()) break;
    w = w - (w * e).scaled(inv_n);
  }
  if (!(w.pow(n) - one).is_zero()) throw NonConvergence("root of unity lift", 0.0);
  out.roots.reserve(n);
  UnramifiedElement cur = one;
  for (std::uint64_t j = 0; j < n; ++j) {
    out.roots.push_back(cur);
    cur = cur * w;
  }
  return out;
}

}  // namespace fkdet
