#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fkdet {

using BigInt = boost::multiprecision::cpp_int;

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An input violates an operation's precondition (wrong dimension, zero
/// polynomial, hypothesis of a theorem not satisfied, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class CapExceeded : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class Unsupported : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// An iterative method stopped before meeting its tolerance.
class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, double best_residual)
      : Error(what), best_residual_(best_residual) {}
  double best_residual() const noexcept { return best_residual_; }

 private:
  double best_residual_;
};

inline BigInt abs_value(const BigInt& x) { return x < 0 ? BigInt(-x) : x; }

/// Natural log of |x| for x != 0, valid far beyond the double range.
inline double log_abs(const BigInt& x) {
  BigInt a = abs_value(x);
  if (a == 0) throw PreconditionError("log_abs of zero");
  const unsigned bits = boost::multiprecision::msb(a);
  if (bits < 900) return std::log(a.convert_to<double>());
  const unsigned shift = bits - 62;
  BigInt top = a >> shift;
  return std::log(top.convert_to<double>()) +
         static_cast<double>(shift) * std::log(2.0);
}

inline double to_double(const BigInt& x) { return x.convert_to<double>(); }

inline BigInt pow_big(BigInt base, std::uint64_t e) {
  BigInt r = 1;
  while (e) {
    if (e & 1U) r *= base;
    e >>= 1U;
    if (e) base *= base;
  }
  return r;
}

/// p-adic valuation of a nonzero integer.
inline std::int64_t valuation(const BigInt& x, std::uint64_t p) {
  if (x == 0) throw PreconditionError("valuation of zero");
  BigInt q = abs_value(x), r;
  std::int64_t v = 0;
  const BigInt bp = p;
  for (;;) {
    BigInt quot;
    boost::multiprecision::divide_qr(q, bp, quot, r);
    if (r != 0) return v;
    q = std::move(quot);
    ++v;
  }
}

/// Representative of x mod m in [0, m).
inline BigInt mod_floor(const BigInt& x, const BigInt& m) {
  BigInt r = x % m;
  if (r < 0) r += m;
  return r;
}

/// Inverse of a modulo m; throws when gcd(a, m) != 1.
inline BigInt inverse_mod(const BigInt& a, const BigInt& m) {
  BigInt r0 = m, r1 = mod_floor(a, m);
  BigInt s0 = 0, s1 = 1;
  while (r1 != 0) {
    BigInt q = r0 / r1;
    BigInt r2 = r0 - q * r1;
    r0 = std::move(r1);
    r1 = std::move(r2);
    BigInt s2 = s0 - q * s1;
    s0 = std::move(s1);
    s1 = std::move(s2);
  }
  if (r0 != 1) throw PreconditionError("value is not invertible modulo m");
  return mod_floor(s0, m);
}

inline BigInt gcd_big(const BigInt& a, const BigInt& b) {
  return boost::multiprecision::gcd(abs_value(a), abs_value(b));
}

// ---- word-size modular arithmetic ------------------------------------------

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1U) r = mulmod(r, b, m);
    b = mulmod(b, b, m);
    e >>= 1U;
  }
  return r;
}

/// Deterministic Miller-Rabin for 64-bit integers.
inline bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL,
                          23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % q == 0) return n == q;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1U) == 0) {
    d >>= 1U;
    ++s;
  }
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL,
                          23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

/// Distinct prime factors of n by trial division (n fits in a word).
inline std::vector<std::uint64_t> prime_factors_u64(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t q = 2; q * q <= n; ++q) {
    if (n % q == 0) {
      out.push_back(q);
      while (n % q == 0) n /= q;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

inline std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) {
  while (b) {
    a %= b;
    std::swap(a, b);
  }
  return a;
}

/// Multiplicative order of a modulo n (gcd(a, n) = 1, n >= 1).
inline std::uint64_t multiplicative_order(std::uint64_t a, std::uint64_t n) {
  if (n == 1) return 1;
  if (gcd_u64(a % n, n) != 1) throw PreconditionError("order of a non-unit");
  std::uint64_t k = 1, x = a % n;
  while (x != 1) {
    x = mulmod(x, a, n);
    ++k;
  }
  return k;
}

}  // namespace fkdet
