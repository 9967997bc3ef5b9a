#pragma once

// p-adic expansiveness, p-adic Mahler measure (closed form and Snirelman
// integral), p-adic periodic entropy and the rational-root m_{p,sigma}.

#include "fkdet/convergence.hpp"
#include "fkdet/periodic.hpp"
#include "fkdet/roots.hpp"
#include "fkdet/unramified.hpp"

#include <cmath>
#include <optional>

namespace fkdet {

using PadicReport = ConvergenceReport<PadicScalar, std::int64_t>;

class NotPadicallyExpansive : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class NonRationalFactor : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// A root or the leading coefficient breaks the admissibility conditions
/// |a|_p = 1, |alpha|_p = 1, |alpha|_inf != 1.
class AdmissibilityViolated : public PreconditionError {
 public:
  AdmissibilityViolated(std::string condition, std::string root)
      : PreconditionError(condition + " fails for " + root),
        condition_(std::move(condition)),
        root_(std::move(root)) {}
  const std::string& condition() const noexcept { return condition_; }
  const std::string& root() const noexcept { return root_; }

 private:
  std::string condition_;
  std::string root_;
};

// ---- expansiveness -------------------------------------------------------------

enum class PadicStatus { PadicallyExpansive, NotPadicallyExpansive };

inline const char* to_string(PadicStatus s) {
  return s == PadicStatus::PadicallyExpansive ? "PadicallyExpansive" : "NotPadicallyExpansive";
}

struct PadicVerdict {
  PadicStatus status = PadicStatus::NotPadicallyExpansive;
  std::int64_t p_power = 0;
  ModPLaurentPoly reduction{1, 2};
  std::string reason;  // "monomial" or "non-monomial"

  bool expansive() const { return status == PadicStatus::PadicallyExpansive; }
};

/// Exact: f is a unit of c_0(Z^d) iff its p-stripped reduction mod p is a
/// monomial.
inline PadicVerdict padic_expansive_check(const IntLaurentPoly& f, std::uint64_t p) {
  require_prime(p);
  if (f.is_zero()) throw PreconditionError("zero polynomial");
  auto [k, g] = strip_p_content(f, p);
  PadicVerdict v;
  v.p_power = k;
  v.reduction = reduce_mod_p(g, p);
  const bool mono = v.reduction.is_monomial();
  v.status = mono ? PadicStatus::PadicallyExpansive : PadicStatus::NotPadicallyExpansive;
  v.reason = mono ? "monomial" : "non-monomial";
  return v;
}

inline void require_padically_expansive(const IntLaurentPoly& f, std::uint64_t p) {
  if (!padic_expansive_check(f, p).expansive())
    throw NotPadicallyExpansive("reduction mod " + std::to_string(p) + " of " + render(f) +
                                " is not a monomial");
}

namespace detail {

inline void finish_padic_report(PadicReport& r, std::int64_t target) {
  auto& e = r.entries;
  r.differences.clear();
  for (std::size_t i = 1; i < e.size(); ++i)
    r.differences.push_back(difference_valuation(e[i].value, e[i - 1].value));
  if (!e.empty()) r.limit_estimate = e.back().value;
  if (!r.differences.empty()) r.final_diagnostic = r.differences.back();
  r.verdict = r.final_diagnostic && *r.final_diagnostic >= target
                  ? ConvergenceVerdict::Converged
                  : ConvergenceVerdict::Inconclusive;
}

/// Digits of a sequence's limit estimate that the diagnostics support.
inline std::int64_t trusted_digits(const PadicReport& r) {
  if (!r.limit_estimate) return 0;
  std::int64_t t = r.limit_estimate->absolute_precision();
  if (r.final_diagnostic) t = std::min(t, *r.final_diagnostic);
  else t = 0;
  return t;
}

}  // namespace detail

// ---- Snirelman integral --------------------------------------------------------

struct SnirelmanConfig {
  std::int64_t precision = kDefaultPadicPrecision;  // reported digits
  std::int64_t guard = 8;
  std::size_t degree_cap = kDefaultDegreeCap;
  std::int64_t target = 4;
};

/// n <= 50 prime to p whose extension degree is within the cap; in three or
/// more variables n^d is also kept below 2500.
inline std::vector<std::uint64_t> default_snirelman_n_list(std::uint64_t p, std::size_t dim,
                                                           std::size_t degree_cap =
                                                               kDefaultDegreeCap) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t n = 1; n <= 50; ++n) {
    if (gcd_u64(n, p) != 1) continue;
    if (multiplicative_order(p % n, n) > degree_cap) continue;
    if (dim >= 3 && std::pow(static_cast<double>(n), static_cast<double>(dim)) >= 2500.0) continue;
    out.push_back(n);
  }
  return out;
}

/// One entry n^{-d} sum_{zeta in mu_n^d} log_p f(zeta), summed orbit by orbit
/// under zeta -> zeta^p.
inline PadicScalar snirelman_entry(const IntLaurentPoly& f, std::uint64_t p, std::uint64_t n,
                                   const SnirelmanConfig& cfg = {}) {
  const std::size_t d = f.dim();
  const std::int64_t M = cfg.precision + cfg.guard;
  const auto rou = unramified_roots_of_unity(n, p, M, cfg.degree_cap);
  const auto& F = rou.field;
  const BigInt bn = n;
  std::vector<std::pair<std::vector<std::uint64_t>, BigInt>> terms;
  for (const auto& [m, c] : f.terms()) {
    std::vector<std::uint64_t> e(d);
    for (std::size_t i = 0; i < d; ++i)
      e[i] = mod_floor(BigInt(m[i]), bn).convert_to<std::uint64_t>();
    terms.emplace_back(std::move(e), c);
  }
  auto value_at = [&](const std::vector<std::uint64_t>& j) {
    std::vector<BigInt> acc(F->k, BigInt(0));
    for (const auto& [e, c] : terms) {
      std::uint64_t idx = 0;
      for (std::size_t i = 0; i < d; ++i) idx = (idx + mulmod(e[i], j[i], n)) % n;
      const auto& z = rou.roots[idx].coeffs();
      for (std::size_t i = 0; i < F->k; ++i) acc[i] += c * z[i];
    }
    return UnramifiedElement(F, std::move(acc), M);
  };

  std::uint64_t total = 1;
  for (std::size_t i = 0; i < d; ++i) total *= n;
  std::vector<bool> seen(total, false);
  auto flat = [&](const std::vector<std::uint64_t>& j) {
    std::uint64_t r = 0;
    for (auto x : j) r = r * n + x;
    return r;
  };
  PadicScalar sum = PadicScalar::zero(p, M);
  std::vector<std::uint64_t> j(d, 0);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    {
      std::uint64_t r = idx;
      for (std::size_t i = d; i-- > 0;) {
        j[i] = r % n;
        r /= n;
      }
    }
    if (seen[idx]) continue;
    std::vector<std::vector<std::uint64_t>> orbit;
    std::vector<std::uint64_t> cur = j;
    do {
      seen[flat(cur)] = true;
      orbit.push_back(cur);
      for (auto& x : cur) x = mulmod(x, p % n, n);
    } while (cur != j);

    const UnramifiedElement val = value_at(j);
    if (val.is_zero()) throw PreconditionError("f vanishes at a root of unity to working precision");
    if (orbit.size() == F->k) {
      sum = sum + ext_iwasawa_log(val).trace();
      continue;
    }
    UnramifiedElement acc = ext_iwasawa_log(val);
    for (std::size_t o = 1; o < orbit.size(); ++o) {
      const UnramifiedElement v = value_at(orbit[o]);
      if (v.is_zero()) throw PreconditionError("f vanishes at a root of unity to working precision");
      acc = acc + ext_iwasawa_log(v);
    }
    const BigInt pm = prime_power(p, acc.precision());
    for (std::size_t i = 1; i < F->k; ++i)
      if (mod_floor(acc.coeffs()[i], pm) != 0)
        throw Error("Frobenius orbit sum does not lie in Q_p");
    sum = sum + acc.coefficient(0);
  }
  const PadicScalar avg = sum / padic_of_integer(BigInt(total), p, M);
  return avg.with_absolute_precision(cfg.precision);
}

inline PadicReport snirelman_integral(const IntLaurentPoly& f, std::uint64_t p,
                                      std::vector<std::uint64_t> n_list,
                                      const SnirelmanConfig& cfg = {}) {
  require_padically_expansive(f, p);
  std::sort(n_list.begin(), n_list.end());
  n_list.erase(std::unique(n_list.begin(), n_list.end()), n_list.end());
  PadicReport r;
  for (auto n : n_list) {
    if (n == 0 || gcd_u64(n, p) != 1)
      throw PreconditionError("n = " + std::to_string(n) + " is not prime to p");
    try {
      r.entries.push_back({n, snirelman_entry(f, p, n, cfg)});
    } catch (const CapExceeded& e) {
      r.flags.push_back(std::string("Skipped: ") + e.what());
    }
  }
  detail::finish_padic_report(r, cfg.target);
  return r;
}

// ---- closed form in one variable ----------------------------------------------------

struct MpClosedForm {
  PadicScalar trailing_form;  // log_p a_r - sum_{v(alpha) > 0} log_p alpha
  PadicScalar leading_form;   // log_p a_m + sum_{v(alpha) < 0} log_p alpha
  std::vector<PadicScalar> roots;  // all roots, ordered by valuation
};

/// Roots of nonzero valuation via z = p^s w along integer-slope segments and
/// Hensel lifting of the residual unit roots.
inline MpClosedForm mp_closed_form_detail(const IntLaurentPoly& f, std::uint64_t p,
                                          std::int64_t N = kDefaultPadicPrecision) {
  require_padically_expansive(f, p);
  const DensePoly d = to_dense(f);
  const auto poly = newton_polygon(f, p);
  std::vector<std::int64_t> v(d.coeffs.size(), std::numeric_limits<std::int64_t>::max());
  for (std::size_t i = 0; i < d.coeffs.size(); ++i)
    if (d.coeffs[i] != 0) v[i] = fkdet::valuation(d.coeffs[i], p);

  MpClosedForm out;
  PadicScalar pos = PadicScalar::zero(p, N), neg = PadicScalar::zero(p, N);
  for (const auto& seg : poly.segments) {
    if (seg.slope.denominator() != 1)
      throw Unsupported("ramified roots (Newton slope " + std::to_string(seg.slope.numerator()) +
                        "/" + std::to_string(seg.slope.denominator()) + ")");
    const std::int64_t s = seg.slope.numerator();
    if (s == 0) throw Error("unit root on an expansive polynomial");
    const std::int64_t c = v[seg.begin] + s * seg.begin;
    // G(w) = p^{-c} f(p^s w), integral with unit residual part on [begin, end].
    std::vector<BigInt> G(d.coeffs.size(), BigInt(0));
    fp::Poly residual;
    for (std::size_t i = 0; i < d.coeffs.size(); ++i) {
      if (d.coeffs[i] == 0) continue;
      const std::int64_t e = v[i] + s * static_cast<std::int64_t>(i) - c;
      G[i] = d.coeffs[i] / prime_power(p, v[i]) * prime_power(p, e);
    }
    for (std::int64_t i = seg.begin; i <= seg.end; ++i)
      residual.push_back(mod_floor(G[static_cast<std::size_t>(i)], BigInt(p)).convert_to<std::uint64_t>());
    const auto units = fp::distinct_roots(residual, p);
    std::size_t nonzero = 0;
    for (auto r : units) nonzero += r != 0;
    if (nonzero != static_cast<std::size_t>(seg.length))
      throw Unsupported("residual roots are not simple and rational over F_p");
    const IntLaurentPoly g = from_dense(G);
    for (auto r : units) {
      if (r == 0) continue;
      const PadicScalar w = hensel_root(g, p, BigInt(r), N);
      out.roots.push_back(PadicScalar::normalize(p, s, w.unit(), w.precision()));
      const PadicScalar lw = iwasawa_log(w);
      if (s > 0) pos = pos + lw;
      else neg = neg + lw;
    }
  }
  std::stable_sort(out.roots.begin(), out.roots.end(),
                   [](const auto& a, const auto& b) { return a.valuation() < b.valuation(); });
  out.trailing_form = iwasawa_log(padic_of_integer(d.trailing(), p, N)) - pos;
  out.leading_form = iwasawa_log(padic_of_integer(d.leading(), p, N)) + neg;
  const std::int64_t common =
      std::min(out.trailing_form.absolute_precision(), out.leading_form.absolute_precision());
  if (difference_valuation(out.trailing_form, out.leading_form) < common)
    throw Error("closed forms disagree");
  return out;
}

inline PadicScalar mp_closed_form(const IntLaurentPoly& f, std::uint64_t p,
                                  std::int64_t N = kDefaultPadicPrecision) {
  return mp_closed_form_detail(f, p, N).trailing_form;
}

// ---- p-adic periodic entropy ---------------------------------------------------

struct PadicPeriodicConfig {
  std::int64_t precision = kDefaultPadicPrecision;
  std::int64_t target = 4;
  FixCountConfig fix;
};

/// Cubes of side 2, 4, ... within the fix_count volume cap (at most five).
inline std::vector<std::vector<std::uint64_t>> default_padic_boxes(std::size_t dim,
                                                                   std::uint64_t volume_cap =
                                                                       4096) {
  std::vector<std::vector<std::uint64_t>> out;
  for (std::uint64_t n = 2; out.size() < 5; n *= 2) {
    double vol = std::pow(static_cast<double>(n), static_cast<double>(dim));
    if (vol > static_cast<double>(volume_cap)) break;
    out.emplace_back(dim, n);
  }
  return out;
}

struct PadicPeriodicReport {
  PadicReport table;
  std::vector<FixCountRecord> counts;
};

/// Entries ((Gamma : Gamma_n), log_p|N_n| / (Gamma : Gamma_n)). Refuses
/// inputs that are not p-adically expansive.
inline PadicPeriodicReport h_p_per(const IntLaurentPoly& f, std::uint64_t p,
                                   std::vector<std::vector<std::uint64_t>> boxes,
                                   const PadicPeriodicConfig& cfg = {}) {
  require_padically_expansive(f, p);
  std::stable_sort(boxes.begin(), boxes.end(),
                   [](const auto& a, const auto& b) { return box_volume(a) < box_volume(b); });
  PadicPeriodicReport out;
  for (const auto& box : boxes) {
    auto rec = fix_count(f, box, cfg.fix);
    if (rec.is_zero) {
      out.table.flags.push_back("Inconsistent: zero fix_count for a p-adically expansive input");
    } else {
      const PadicScalar lg = iwasawa_log(padic_of_integer(abs_value(rec.value), p, cfg.precision));
      out.table.entries.push_back(
          {rec.index, lg / padic_of_integer(BigInt(rec.index), p, cfg.precision)});
    }
    out.counts.push_back(std::move(rec));
  }
  detail::finish_padic_report(out.table, cfg.target);
  return out;
}

// ---- bundle ------------------------------------------------------------------------

struct PadicDetConfig {
  std::int64_t precision = kDefaultPadicPrecision;
  std::int64_t target = 4;
  std::optional<std::vector<std::uint64_t>> n_list;
  std::optional<std::vector<std::vector<std::uint64_t>>> boxes;
  std::size_t degree_cap = kDefaultDegreeCap;
  FixCountConfig fix;
};

struct PadicDetReport {
  PadicVerdict verdict;
  std::optional<PadicScalar> closed_form;
  std::string closed_form_status;
  std::optional<PadicReport> snirelman;
  std::optional<PadicPeriodicReport> periodic;
  /// The pairing value equals log_p det by definition; reported from the
  /// closed form when available, otherwise from the Snirelman estimate.
  std::optional<PadicScalar> pairing_value;
  std::int64_t common_precision = 0;
  bool routes_agree = true;
  std::vector<std::string> flags;
};

inline PadicDetReport log_p_det(const IntLaurentPoly& f, std::uint64_t p,
                                const PadicDetConfig& cfg = {}) {
  PadicDetReport out;
  out.verdict = padic_expansive_check(f, p);
  if (!out.verdict.expansive()) {
    out.closed_form_status = "not applicable";
    out.flags.push_back("Unverified: not p-adically expansive, identity columns omitted");
    out.routes_agree = false;
    return out;
  }
  std::vector<std::pair<std::string, std::pair<PadicScalar, std::int64_t>>> routes;
  if (f.dim() == 1) {
    try {
      out.closed_form = mp_closed_form(f, p, cfg.precision);
      out.closed_form_status = "ok";
      routes.push_back({"closed form", {*out.closed_form, out.closed_form->absolute_precision()}});
    } catch (const Unsupported& e) {
      out.closed_form_status = std::string("unsupported: ") + e.what();
    }
  } else {
    out.closed_form_status = "not applicable: more than one variable";
  }
  SnirelmanConfig sc;
  sc.precision = cfg.precision;
  sc.target = cfg.target;
  sc.degree_cap = cfg.degree_cap;
  out.snirelman = snirelman_integral(
      f, p, cfg.n_list ? *cfg.n_list : default_snirelman_n_list(p, f.dim(), cfg.degree_cap), sc);
  if (out.snirelman->limit_estimate)
    routes.push_back({"snirelman", {*out.snirelman->limit_estimate,
                                    detail::trusted_digits(*out.snirelman)}});
  PadicPeriodicConfig pc;
  pc.precision = cfg.precision;
  pc.target = cfg.target;
  pc.fix = cfg.fix;
  out.periodic = h_p_per(f, p, cfg.boxes ? *cfg.boxes : default_padic_boxes(f.dim(), cfg.fix.volume_cap), pc);
  if (out.periodic->table.limit_estimate)
    routes.push_back({"periodic", {*out.periodic->table.limit_estimate,
                                   detail::trusted_digits(out.periodic->table)}});

  if (out.closed_form) out.pairing_value = out.closed_form;
  else if (out.snirelman->limit_estimate) out.pairing_value = out.snirelman->limit_estimate;

  if (out.snirelman->verdict != ConvergenceVerdict::Converged)
    out.flags.push_back("Inconclusive: snirelman sequence");
  if (out.periodic->table.verdict != ConvergenceVerdict::Converged)
    out.flags.push_back("Inconclusive: periodic sequence");
  if (routes.empty()) return out;
  out.common_precision = routes.front().second.second;
  for (const auto& r : routes) out.common_precision = std::min(out.common_precision, r.second.second);
  for (std::size_t i = 0; i < routes.size(); ++i)
    for (std::size_t j = i + 1; j < routes.size(); ++j) {
      const auto dv = difference_valuation(routes[i].second.first, routes[j].second.first);
      if (dv < out.common_precision) {
        out.routes_agree = false;
        out.flags.push_back("Disagreement: " + routes[i].first + " vs " + routes[j].first +
                            " (valuation " + std::to_string(dv) + ")");
      }
    }
  return out;
}

// ---- rational roots and m_{p,sigma} ----------------------------------------------

struct RationalRoot {
  BigInt num;
  BigInt den;  // positive, coprime to num
  int multiplicity = 1;
};

/// Complete factorization into rational linear factors, or NonRationalFactor.
inline std::vector<RationalRoot> rational_roots(const IntLaurentPoly& f) {
  const DensePoly d = to_dense(f);
  std::vector<RationalRoot> out;
  if (d.degree() == 0) return out;
  ipoly::Poly rest = d.coeffs;
  const RootList rl = roots_d1(f);
  const long double lead = d.leading().convert_to<long double>();
  for (const auto& r : rl.roots) {
    const long double re = r.value.real();
    if (std::abs(r.value.imag()) > 1e-6 * std::max(1.0, std::abs(r.value))) continue;
    const long double scaled = std::round(re * lead);
    if (!(std::abs(scaled) < 9e18L)) continue;
    BigInt num = static_cast<long long>(scaled), den = d.leading();
    const BigInt g = gcd_big(num, den);
    if (g == 0) continue;
    num /= g;
    den /= g;
    if (den < 0) {
      num = -num;
      den = -den;
    }
    bool dup = false;
    for (const auto& q : out) dup = dup || (q.num == num && q.den == den);
    if (dup) continue;
    const ipoly::Poly lin{-num, den};
    int mult = 0;
    for (;;) {
      try {
        rest = ipoly::divide_exact(rest, lin);
        ++mult;
      } catch (const Error&) {
        break;
      }
    }
    if (mult > 0) out.push_back({num, den, mult});
  }
  ipoly::trim(rest);
  if (rest.size() > 1)
    throw NonRationalFactor("factor of degree " + std::to_string(rest.size() - 1) +
                            " without rational roots");
  return out;
}

struct MpSigmaForms {
  PadicScalar trailing_form;  // log_p a_r - sum_{|alpha|_inf < 1} log_p alpha
  PadicScalar leading_form;   // log_p a_m + sum_{|alpha|_inf > 1} log_p alpha
  std::vector<RationalRoot> roots;
};

inline MpSigmaForms mp_sigma_rational_detail(const IntLaurentPoly& f, std::uint64_t p,
                                             std::int64_t N = kDefaultPadicPrecision) {
  require_prime(p);
  const DensePoly d = to_dense(f);
  const BigInt bp = p;
  if (d.leading() % bp == 0)
    throw AdmissibilityViolated("|a|_p = 1", "leading coefficient " + d.leading().str());
  MpSigmaForms out;
  out.roots = rational_roots(f);
  PadicScalar inside = PadicScalar::zero(p, N), outside = PadicScalar::zero(p, N);
  for (const auto& r : out.roots) {
    const std::string text = r.num.str() + (r.den == 1 ? "" : "/" + r.den.str());
    if (r.num == 0 || r.num % bp == 0 || r.den % bp == 0)
      throw AdmissibilityViolated("|alpha|_p = 1", text);
    if (abs_value(r.num) == r.den) throw AdmissibilityViolated("|alpha|_inf != 1", text);
    const PadicScalar lg = iwasawa_log(padic_of_rational(r.num, r.den, p, N));
    for (int m = 0; m < r.multiplicity; ++m) {
      if (abs_value(r.num) < r.den) inside = inside + lg;
      else outside = outside + lg;
    }
  }
  out.trailing_form = iwasawa_log(padic_of_integer(d.trailing(), p, N)) - inside;
  out.leading_form = iwasawa_log(padic_of_integer(d.leading(), p, N)) + outside;
  const std::int64_t common =
      std::min(out.trailing_form.absolute_precision(), out.leading_form.absolute_precision());
  if (difference_valuation(out.trailing_form, out.leading_form) < common)
    throw Error("m_p,sigma forms disagree");
  return out;
}

inline PadicScalar mp_sigma_rational(const IntLaurentPoly& f, std::uint64_t p,
                                     std::int64_t N = kDefaultPadicPrecision) {
  return mp_sigma_rational_detail(f, p, N).trailing_form;
}

}  // namespace fkdet
