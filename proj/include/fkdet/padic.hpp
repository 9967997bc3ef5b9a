#pragma once

// Capped-precision p-adic numbers, the Iwasawa logarithm, Teichmuller lifts,
// Newton polygons and Hensel lifting.

#include "fkdet/groupring.hpp"

#include <boost/rational.hpp>

#include <algorithm>
#include <limits>
#include <string>
#include <vector>

namespace fkdet {

inline constexpr std::int64_t kDefaultPadicPrecision = 32;

class NonSimpleRoot : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

inline void require_prime(std::uint64_t p) {
  if (!is_prime_u64(p)) throw PreconditionError(std::to_string(p) + " is not prime");
}

inline BigInt prime_power(std::uint64_t p, std::int64_t e) {
  return pow_big(BigInt(p), static_cast<std::uint64_t>(std::max<std::int64_t>(e, 0)));
}

/// x = p^v * u with u a unit known modulo p^N (N is the relative precision).
/// Zero carries an absolute precision instead: it is known to be 0 mod p^N.
class PadicScalar {
 public:
  PadicScalar() = default;

  static PadicScalar zero(std::uint64_t p, std::int64_t absolute_precision) {
    PadicScalar z;
    z.p_ = p;
    z.zero_ = true;
    z.precision_ = absolute_precision;
    return z;
  }

  /// p^v * s where s is known modulo p^digits (s need not be a unit).
  static PadicScalar normalize(std::uint64_t p, std::int64_t v, BigInt s, std::int64_t digits) {
    if (digits <= 0) return zero(p, v + digits);
    const BigInt m = prime_power(p, digits);
    s = mod_floor(s, m);
    if (s == 0) return zero(p, v + digits);
    const std::int64_t e = fkdet::valuation(s, p);
    PadicScalar x;
    x.p_ = p;
    x.zero_ = false;
    x.v_ = v + e;
    x.precision_ = digits - e;
    x.unit_ = s / prime_power(p, e);
    return x;
  }

  std::uint64_t prime() const { return p_; }
  bool is_zero() const { return zero_; }
  /// Exact valuation; numeric_limits max for zero.
  std::int64_t valuation() const {
    return zero_ ? std::numeric_limits<std::int64_t>::max() : v_;
  }
  const BigInt& unit() const { return unit_; }
  /// Relative precision of a nonzero value, absolute precision of zero.
  std::int64_t precision() const { return precision_; }
  std::int64_t absolute_precision() const { return zero_ ? precision_ : v_ + precision_; }

  /// Lowers the absolute precision to at most `digits`.
  PadicScalar with_absolute_precision(std::int64_t digits) const {
    if (digits >= absolute_precision()) return *this;
    if (zero_) return zero(p_, digits);
    return normalize(p_, v_, unit_, digits - v_);
  }

  /// Unit digits base p, least significant first.
  std::vector<std::uint64_t> unit_digits() const {
    std::vector<std::uint64_t> out;
    BigInt u = unit_;
    const BigInt bp = p_;
    for (std::int64_t i = 0; i < precision_ && !zero_; ++i) {
      out.push_back(static_cast<std::uint64_t>(u % bp));
      u /= bp;
    }
    return out;
  }

  /// Canonical representative p^v * u with 0 <= u < p^N, as text.
  std::string decimal() const {
    if (zero_) return "0";
    if (v_ >= 0) return (prime_power(p_, v_) * unit_).str();
    return unit_.str() + "/" + prime_power(p_, -v_).str();
  }

  PadicScalar operator-() const {
    if (zero_) return *this;
    return normalize(p_, v_, -unit_, precision_);
  }

  friend PadicScalar operator+(const PadicScalar& a, const PadicScalar& b) {
    a.check_prime(b);
    const std::int64_t abs = std::min(a.absolute_precision(), b.absolute_precision());
    if (a.zero_ && b.zero_) return zero(a.p_, abs);
    std::int64_t vm = std::numeric_limits<std::int64_t>::max();
    if (!a.zero_) vm = std::min(vm, a.v_);
    if (!b.zero_) vm = std::min(vm, b.v_);
    if (vm >= abs) return zero(a.p_, abs);
    BigInt s = 0;
    if (!a.zero_) s += a.unit_ * prime_power(a.p_, a.v_ - vm);
    if (!b.zero_) s += b.unit_ * prime_power(a.p_, b.v_ - vm);
    return normalize(a.p_, vm, std::move(s), abs - vm);
  }

  friend PadicScalar operator-(const PadicScalar& a, const PadicScalar& b) { return a + (-b); }

  friend PadicScalar operator*(const PadicScalar& a, const PadicScalar& b) {
    a.check_prime(b);
    if (a.zero_ || b.zero_) {
      std::int64_t abs = 0;
      if (a.zero_ && b.zero_) abs = a.precision_ + b.precision_;
      else if (a.zero_) abs = a.precision_ + b.v_;
      else abs = b.precision_ + a.v_;
      return zero(a.p_, abs);
    }
    return normalize(a.p_, a.v_ + b.v_, a.unit_ * b.unit_,
                     std::min(a.precision_, b.precision_));
  }

  friend PadicScalar operator/(const PadicScalar& a, const PadicScalar& b) {
    a.check_prime(b);
    if (b.zero_) throw PreconditionError("p-adic division by zero");
    if (a.zero_) return zero(a.p_, a.precision_ - b.v_);
    const std::int64_t n = std::min(a.precision_, b.precision_);
    const BigInt m = prime_power(a.p_, n);
    return normalize(a.p_, a.v_ - b.v_, a.unit_ * inverse_mod(b.unit_, m), n);
  }

 private:
  void check_prime(const PadicScalar& b) const {
    if (p_ != b.p_) throw PreconditionError("p-adic operands have different primes");
  }

  std::uint64_t p_ = 2;
  bool zero_ = true;
  std::int64_t v_ = 0;
  BigInt unit_ = 0;
  std::int64_t precision_ = 0;
};

/// Guaranteed lower bound for v_p(a - b).
inline std::int64_t difference_valuation(const PadicScalar& a, const PadicScalar& b) {
  const PadicScalar d = a - b;
  return d.is_zero() ? d.absolute_precision() : d.valuation();
}

inline bool agrees_mod(const PadicScalar& a, const PadicScalar& b, std::int64_t digits) {
  return difference_valuation(a, b) >= digits;
}

inline PadicScalar padic_of_rational(const BigInt& num, const BigInt& den, std::uint64_t p,
                                     std::int64_t N = kDefaultPadicPrecision) {
  require_prime(p);
  if (N < 1) throw PreconditionError("precision must be positive");
  if (den == 0) throw PreconditionError("zero denominator");
  if (num == 0) return PadicScalar::zero(p, N);
  const std::int64_t a = valuation(num, p), b = valuation(den, p);
  const BigInt m = prime_power(p, N);
  const BigInt u = (num / prime_power(p, a)) * inverse_mod(den / prime_power(p, b), m);
  return PadicScalar::normalize(p, a - b, u, N);
}

inline PadicScalar padic_of_integer(const BigInt& n, std::uint64_t p,
                                    std::int64_t N = kDefaultPadicPrecision) {
  return padic_of_rational(n, 1, p, N);
}

/// Iwasawa logarithm (log_p p = 0). The result is known to absolute
/// precision equal to the relative precision of x.
inline PadicScalar iwasawa_log(const PadicScalar& x) {
  if (x.is_zero()) throw PreconditionError("iwasawa_log of zero");
  const std::uint64_t p = x.prime();
  const std::int64_t N = x.precision();
  const BigInt narrow = prime_power(p, N);
  const BigInt y = boost::multiprecision::powm(x.unit(), BigInt(p - 1), narrow);
  BigInt t = mod_floor(y - 1, narrow);
  if (t == 0) return PadicScalar::zero(p, N);
  const std::int64_t vt = valuation(t, p);

  std::uint64_t last = 1;
  auto floor_log = [p](std::uint64_t nu) {
    std::int64_t e = 0;
    while (nu >= p) {
      nu /= p;
      ++e;
    }
    return e;
  };
  while (static_cast<std::int64_t>(last) * vt - floor_log(last) < N) ++last;
  const std::int64_t E = floor_log(last);
  const BigInt wide = prime_power(p, N + E);
  BigInt power = 1, sum = 0;
  for (std::uint64_t nu = 1; nu < last; ++nu) {
    power = power * t % wide;
    std::uint64_t m = nu;
    std::int64_t e = 0;
    while (m % p == 0) {
      m /= p;
      ++e;
    }
    const BigInt term = power / prime_power(p, e) * inverse_mod(BigInt(m), narrow);
    if (nu % 2 == 1) sum += term;
    else sum -= term;
  }
  sum = mod_floor(sum * inverse_mod(BigInt(p - 1), narrow), narrow);
  return PadicScalar::normalize(p, 0, sum, N);
}

/// The (p-1)-th root of unity congruent to a mod p.
inline PadicScalar teichmuller(const BigInt& a, std::uint64_t p,
                               std::int64_t N = kDefaultPadicPrecision) {
  require_prime(p);
  if (mod_floor(a, BigInt(p)) == 0) throw PreconditionError("teichmuller of a residue 0 mod p");
  const BigInt m = prime_power(p, N);
  BigInt x = mod_floor(a, m);
  for (std::int64_t i = 0; i < N; ++i) x = boost::multiprecision::powm(x, BigInt(p), m);
  return PadicScalar::normalize(p, 0, x, N);
}

// ---- Newton polygons -----------------------------------------------------------

using Rational = boost::rational<std::int64_t>;

struct NewtonSegment {
  Rational slope;        // valuation of each root on the segment
  std::int64_t length;   // number of roots
  std::int64_t begin;    // hull vertex exponents, relative to the lowest term
  std::int64_t end;
};

/// Segments ordered by increasing root valuation.
struct NewtonPolygon {
  std::vector<NewtonSegment> segments;
};

inline NewtonPolygon newton_polygon(const IntLaurentPoly& f, std::uint64_t p) {
  require_prime(p);
  const DensePoly d = to_dense(f);
  std::vector<std::pair<std::int64_t, std::int64_t>> pts;
  for (std::size_t i = 0; i < d.coeffs.size(); ++i)
    if (d.coeffs[i] != 0)
      pts.emplace_back(static_cast<std::int64_t>(i), fkdet::valuation(d.coeffs[i], p));
  // Lower convex hull, left to right.
  std::vector<std::pair<std::int64_t, std::int64_t>> hull;
  for (const auto& q : pts) {
    while (hull.size() >= 2) {
      const auto& a = hull[hull.size() - 2];
      const auto& b = hull.back();
      // Drop b when it is on or above the segment a-q.
      const __int128 lhs = static_cast<__int128>(b.second - a.second) * (q.first - a.first);
      const __int128 rhs = static_cast<__int128>(q.second - a.second) * (b.first - a.first);
      if (lhs >= rhs) hull.pop_back();
      else break;
    }
    hull.push_back(q);
  }
  NewtonPolygon poly;
  for (std::size_t i = hull.size(); i-- > 1;) {
    const auto& a = hull[i - 1];
    const auto& b = hull[i];
    poly.segments.push_back({Rational(a.second - b.second, b.first - a.first),
                             b.first - a.first, a.first, b.first});
  }
  return poly;
}

// ---- Hensel lifting ------------------------------------------------------------

namespace detail {

inline BigInt horner_mod(const std::vector<BigInt>& c, const BigInt& x, const BigInt& m) {
  BigInt acc = 0;
  for (std::size_t i = c.size(); i-- > 0;) acc = (acc * x + c[i]) % m;
  return mod_floor(acc, m);
}

inline std::vector<BigInt> derivative(const std::vector<BigInt>& c) {
  std::vector<BigInt> d;
  for (std::size_t i = 1; i < c.size(); ++i) d.push_back(c[i] * static_cast<long long>(i));
  return d;
}

}  // namespace detail

/// The root congruent to `seed` mod p of f (written without its z^r factor),
/// to relative precision N.
inline PadicScalar hensel_root(const IntLaurentPoly& f, std::uint64_t p, const BigInt& seed,
                               std::int64_t N = kDefaultPadicPrecision) {
  require_prime(p);
  const DensePoly d = to_dense(f);
  const auto& c = d.coeffs;
  const auto dc = detail::derivative(c);
  const BigInt bp = p;
  if (detail::horner_mod(c, seed, bp) != 0)
    throw PreconditionError("seed is not a root modulo p");
  if (detail::horner_mod(dc, seed, bp) == 0)
    throw NonSimpleRoot("derivative vanishes modulo p at the seed");
  std::int64_t target = N;
  if (mod_floor(seed, bp) == 0) {
    if (c.front() == 0) return PadicScalar::zero(p, N);
    target += fkdet::valuation(c.front(), p);
  }
  BigInt x = mod_floor(seed, bp);
  std::int64_t prec = 1;
  while (prec < target) {
    prec = std::min(2 * prec, target);
    const BigInt m = prime_power(p, prec);
    x = mod_floor(x - detail::horner_mod(c, x, m) * inverse_mod(detail::horner_mod(dc, x, m), m), m);
  }
  return PadicScalar::normalize(p, 0, x, target);
}

}  // namespace fkdet
