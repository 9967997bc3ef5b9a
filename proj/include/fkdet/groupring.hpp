#pragma once

// Integral group ring Z[Z^d] as sparse Laurent polynomials.

#include "fkdet/arith.hpp"

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace fkdet {

/// Exponent vector of a group element of Z^d.
struct Monomial {
  std::vector<std::int64_t> exponents;

  Monomial() = default;
  explicit Monomial(std::vector<std::int64_t> e) : exponents(std::move(e)) {}
  Monomial(std::initializer_list<std::int64_t> e) : exponents(e) {}

  static Monomial identity(std::size_t dim) {
    return Monomial(std::vector<std::int64_t>(dim, 0));
  }

  std::size_t dim() const { return exponents.size(); }
  std::int64_t operator[](std::size_t i) const { return exponents[i]; }
  bool is_identity() const {
    for (auto e : exponents)
      if (e != 0) return false;
    return true;
  }
  std::int64_t l1_norm() const {
    std::int64_t s = 0;
    for (auto e : exponents) s += e < 0 ? -e : e;
    return s;
  }

  friend Monomial operator+(const Monomial& a, const Monomial& b) {
    Monomial r = a;
    for (std::size_t i = 0; i < r.exponents.size(); ++i)
      r.exponents[i] += b.exponents[i];
    return r;
  }

  auto operator<=>(const Monomial&) const = default;
  bool operator==(const Monomial&) const = default;
};

/// Element of Z[Z^d]: finite map from monomials to nonzero integers, kept in
/// lexicographic order of exponent vectors so equality is structural.
class IntLaurentPoly {
 public:
  using TermMap = std::map<Monomial, BigInt>;

  explicit IntLaurentPoly(std::size_t dim = 1) : dim_(dim) {
    if (dim == 0) throw PreconditionError("dimension must be positive");
  }

  static IntLaurentPoly constant(std::size_t dim, const BigInt& c) {
    IntLaurentPoly f(dim);
    f.add_term(Monomial::identity(dim), c);
    return f;
  }

  static IntLaurentPoly monomial(const Monomial& m, const BigInt& c = 1) {
    IntLaurentPoly f(m.dim());
    f.add_term(m, c);
    return f;
  }

  std::size_t dim() const { return dim_; }
  const TermMap& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  /// Adds c * m, dropping the term if the coefficient cancels.
  void add_term(const Monomial& m, const BigInt& c) {
    if (m.dim() != dim_)
      throw DimensionMismatch("monomial length differs from polynomial dim");
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  BigInt coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? BigInt(0) : it->second;
  }

  /// Sum of |a_g|.
  BigInt one_norm() const {
    BigInt s = 0;
    for (const auto& [m, c] : terms_) s += abs_value(c);
    return s;
  }

  /// Sum of a_g^2.
  BigInt sum_of_squares() const {
    BigInt s = 0;
    for (const auto& [m, c] : terms_) s += c * c;
    return s;
  }

  /// Sum of a_g (the augmentation).
  BigInt coefficient_sum() const {
    BigInt s = 0;
    for (const auto& [m, c] : terms_) s += c;
    return s;
  }

  IntLaurentPoly operator-() const {
    IntLaurentPoly r(dim_);
    for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
    return r;
  }

  IntLaurentPoly& operator+=(const IntLaurentPoly& g) {
    check_dim(g);
    for (const auto& [m, c] : g.terms_) add_term(m, c);
    return *this;
  }
  IntLaurentPoly& operator-=(const IntLaurentPoly& g) {
    check_dim(g);
    for (const auto& [m, c] : g.terms_) add_term(m, -c);
    return *this;
  }

  friend IntLaurentPoly operator+(IntLaurentPoly f, const IntLaurentPoly& g) {
    return f += g;
  }
  friend IntLaurentPoly operator-(IntLaurentPoly f, const IntLaurentPoly& g) {
    return f -= g;
  }

  bool operator==(const IntLaurentPoly& g) const {
    return dim_ == g.dim_ && terms_ == g.terms_;
  }

  void check_dim(const IntLaurentPoly& g) const {
    if (g.dim_ != dim_) throw DimensionMismatch("polynomial dimensions differ");
  }

 private:
  std::size_t dim_;
  TermMap terms_;
};

/// Exact product in Z[Z^d].
inline IntLaurentPoly multiply(const IntLaurentPoly& f, const IntLaurentPoly& g) {
  f.check_dim(g);
  IntLaurentPoly r(f.dim());
  for (const auto& [mf, cf] : f.terms())
    for (const auto& [mg, cg] : g.terms()) r.add_term(mf + mg, cf * cg);
  return r;
}

inline IntLaurentPoly operator*(const IntLaurentPoly& f, const IntLaurentPoly& g) {
  return multiply(f, g);
}

inline IntLaurentPoly scale(const IntLaurentPoly& f, const BigInt& c) {
  IntLaurentPoly r(f.dim());
  for (const auto& [m, a] : f.terms()) r.add_term(m, a * c);
  return r;
}

/// Multiplies by the monomial z^shift.
inline IntLaurentPoly shift(const IntLaurentPoly& f, const Monomial& by) {
  if (by.dim() != f.dim()) throw DimensionMismatch("shift has wrong length");
  IntLaurentPoly r(f.dim());
  for (const auto& [m, a] : f.terms()) r.add_term(m + by, a);
  return r;
}

inline std::uint64_t box_volume(std::span<const std::uint64_t> box) {
  std::uint64_t v = 1;
  for (auto n : box) {
    if (n == 0) throw PreconditionError("box entries must be positive");
    v *= n;
  }
  return v;
}

/// Image f^(n) of f in Z[Z/n_1 x ... x Z/n_d]: exponents reduced into
/// {0, ..., n_i - 1} with coefficients of colliding monomials summed.
inline IntLaurentPoly reduce_mod_box(const IntLaurentPoly& f,
                                     std::span<const std::uint64_t> box) {
  if (box.size() != f.dim()) throw DimensionMismatch("box length differs from dim");
  box_volume(box);
  IntLaurentPoly r(f.dim());
  for (const auto& [m, c] : f.terms()) {
    Monomial red = m;
    for (std::size_t i = 0; i < box.size(); ++i) {
      const auto n = static_cast<std::int64_t>(box[i]);
      red.exponents[i] = ((m[i] % n) + n) % n;
    }
    r.add_term(red, c);
  }
  return r;
}

/// Writes f = p^k g with g not divisible by p.
inline std::pair<std::int64_t, IntLaurentPoly> strip_p_content(
    const IntLaurentPoly& f, std::uint64_t p) {
  if (f.is_zero()) throw PreconditionError("p-content of the zero polynomial");
  std::int64_t k = -1;
  for (const auto& [m, c] : f.terms()) {
    auto v = valuation(c, p);
    if (k < 0 || v < k) k = v;
  }
  const BigInt pk = pow_big(BigInt(p), static_cast<std::uint64_t>(k));
  IntLaurentPoly g(f.dim());
  for (const auto& [m, c] : f.terms()) g.add_term(m, c / pk);
  return {k, std::move(g)};
}

/// Image of an element of Z[Z^d] in F_p[Z^d].
class ModPLaurentPoly {
 public:
  ModPLaurentPoly(std::size_t dim, std::uint64_t p) : dim_(dim), p_(p) {}

  std::size_t dim() const { return dim_; }
  std::uint64_t prime() const { return p_; }
  const std::map<Monomial, std::uint64_t>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// Units of F_p[Z^d] are exactly the nonzero monomials.
  bool is_monomial() const { return terms_.size() == 1; }

  void set(const Monomial& m, std::uint64_t residue) {
    residue %= p_;
    if (residue == 0)
      terms_.erase(m);
    else
      terms_[m] = residue;
  }

  bool operator==(const ModPLaurentPoly&) const = default;

 private:
  std::size_t dim_;
  std::uint64_t p_;
  std::map<Monomial, std::uint64_t> terms_;
};

inline ModPLaurentPoly reduce_mod_p(const IntLaurentPoly& f, std::uint64_t p) {
  ModPLaurentPoly r(f.dim(), p);
  const BigInt bp = p;
  for (const auto& [m, c] : f.terms())
    r.set(m, mod_floor(c, bp).convert_to<std::uint64_t>());
  return r;
}

// ---- one-variable views ------------------------------------------------------

/// Dense form of a one-variable Laurent polynomial f = z^r * (c_0 + ... + c_k z^k)
/// with c_0, c_k nonzero.
struct DensePoly {
  std::int64_t low_exponent = 0;   // r
  std::vector<BigInt> coeffs;      // ascending, c_0 .. c_k

  std::size_t degree() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }
  const BigInt& leading() const { return coeffs.back(); }
  const BigInt& trailing() const { return coeffs.front(); }
};

inline DensePoly to_dense(const IntLaurentPoly& f) {
  if (f.dim() != 1) throw DimensionMismatch("expected a one-variable polynomial");
  if (f.is_zero()) throw PreconditionError("zero polynomial");
  DensePoly d;
  d.low_exponent = f.terms().begin()->first[0];
  const std::int64_t high = f.terms().rbegin()->first[0];
  d.coeffs.assign(static_cast<std::size_t>(high - d.low_exponent + 1), BigInt(0));
  for (const auto& [m, c] : f.terms())
    d.coeffs[static_cast<std::size_t>(m[0] - d.low_exponent)] = c;
  return d;
}

inline IntLaurentPoly from_dense(std::span<const BigInt> coeffs,
                                 std::int64_t low_exponent = 0) {
  IntLaurentPoly f(1);
  for (std::size_t i = 0; i < coeffs.size(); ++i)
    f.add_term(Monomial{low_exponent + static_cast<std::int64_t>(i)}, coeffs[i]);
  return f;
}

// ---- rendering ---------------------------------------------------------------

/// Default variable names: x, y, z for d <= 3, otherwise z1 ... zd.
inline std::vector<std::string> default_variable_names(std::size_t dim) {
  if (dim <= 3) {
    static const char* names[] = {"x", "y", "z"};
    return {names, names + dim};
  }
  std::vector<std::string> out;
  for (std::size_t i = 1; i <= dim; ++i) out.push_back("z" + std::to_string(i));
  return out;
}

/// Canonical text form; terms printed in decreasing lexicographic order.
inline std::string render(const IntLaurentPoly& f,
                          const std::vector<std::string>& names) {
  if (names.size() != f.dim()) throw DimensionMismatch("wrong number of names");
  if (f.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (auto it = f.terms().rbegin(); it != f.terms().rend(); ++it) {
    const auto& [m, c] = *it;
    const bool negative = c < 0;
    const BigInt mag = abs_value(c);
    if (first)
      out += negative ? "-" : "";
    else
      out += negative ? " - " : " + ";
    first = false;
    std::string body;
    const bool unit_coeff = mag == 1 && !m.is_identity();
    if (!unit_coeff) body = mag.str();
    for (std::size_t i = 0; i < m.dim(); ++i) {
      if (m[i] == 0) continue;
      if (!body.empty()) body += "*";
      body += names[i];
      if (m[i] != 1) body += "^" + std::to_string(m[i]);
    }
    out += body;
  }
  return out;
}

inline std::string render(const IntLaurentPoly& f) {
  return render(f, default_variable_names(f.dim()));
}

}  // namespace fkdet
