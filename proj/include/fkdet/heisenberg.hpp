#pragma once

// log det of f = 1 - a(y, z) x over the discrete Heisenberg group, computed
// as an outer average over z of the positive part of the inner Mahler
// measure in y, and its abelianized counterpart, the double average of
// log+|a|. Axis 0 of `a` is y (inner), axis 1 is z (outer).

#include "fkdet/archimedean.hpp"
#include "fkdet/roots.hpp"

#include <optional>

namespace fkdet {

class IdenticallyZeroSlice : public PreconditionError {
 public:
  IdenticallyZeroSlice(double angle)
      : PreconditionError("slice vanishes identically at outer angle " + std::to_string(angle)),
        angle_(angle) {}
  double angle() const noexcept { return angle_; }

 private:
  double angle_;
};

struct HeisenbergConfig {
  std::uint64_t outer_n = 256;
  double outer_offset = 0.0;
  std::uint64_t inner_n = 256;          // abelianized value only
  std::optional<double> inner_offset;   // default: half of each grid's step
  double truncation = 1e-12;            // relative to the slice one-norm
  double clamp = 1e-12;
  double root_residual = 1e-8;
};

struct HeisenbergValue {
  double value = 0.0;
  double convergence_estimate = 0.0;  // |v(n) - v(n/2)|
  bool degraded = false;
  std::vector<std::string> flags;
};

namespace detail {

inline void require_two_variables(const IntLaurentPoly& a) {
  if (a.dim() != 2) throw DimensionMismatch("a(y, z) must have two variables");
  if (a.is_zero()) throw PreconditionError("a is zero");
}

/// Ascending complex coefficients in y of a(., zeta) after truncation.
inline std::vector<Complex> slice(const IntLaurentPoly& a, double angle, double truncation) {
  const std::int64_t low = a.terms().begin()->first[0];
  const std::int64_t high = a.terms().rbegin()->first[0];
  std::vector<Complex> c(static_cast<std::size_t>(high - low + 1), Complex(0));
  for (const auto& [m, coef] : a.terms())
    c[static_cast<std::size_t>(m[0] - low)] +=
        to_double(coef) * std::polar(1.0, angle * static_cast<double>(m[1]));
  double norm = 0;
  for (const auto& x : c) norm += std::abs(x);
  const double cut = truncation * norm;
  while (!c.empty() && std::abs(c.back()) <= cut) c.pop_back();
  std::size_t lo = 0;
  while (lo < c.size() && std::abs(c[lo]) <= cut) ++lo;
  c.erase(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(lo));
  return c;
}

struct SliceMeasure {
  double value;
  bool ok;
};

/// Jensen on one slice: log|lead| + sum over roots outside the circle.
inline SliceMeasure slice_mahler(const std::vector<Complex>& c, double residual_tol) {
  double m = std::log(std::abs(c.back()));
  if (c.size() == 1) return {m, true};
  std::vector<Complex> monic(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) monic[i] = c[i] / c.back();
  bool ok = true;
  for (const auto& r : aberth_roots(monic)) {
    if (!std::isfinite(r.real()) || !std::isfinite(r.imag())) {
      ok = false;
      continue;
    }
    const double scale = std::pow(std::max(1.0, std::abs(r)), static_cast<double>(c.size() - 1));
    double norm = 0;
    for (const auto& x : monic) norm += std::abs(x);
    if (std::abs(horner_with_derivative<double>(monic, r).first) > residual_tol * norm * scale)
      ok = false;
    if (std::abs(r) > 1.0) m += std::log(std::abs(r));
  }
  return {m, ok};
}

inline HeisenbergValue heis_at(const IntLaurentPoly& a, std::uint64_t n, double offset,
                               const HeisenbergConfig& cfg) {
  HeisenbergValue out;
  std::vector<double> parts(n);
  for (std::uint64_t k = 0; k < n; ++k) {
    const double angle = kTwoPi * static_cast<double>(k) / static_cast<double>(n) + offset;
    const auto c = slice(a, angle, cfg.truncation);
    if (c.empty()) throw IdenticallyZeroSlice(angle);
    const auto s = slice_mahler(c, cfg.root_residual);
    if (!s.ok) {
      out.degraded = true;
      out.flags.push_back("Degraded: root finding at outer angle " + std::to_string(angle));
    }
    double inner = s.value;
    if (std::abs(inner) <= cfg.clamp) inner = 0.0;
    parts[k] = std::max(inner, 0.0);
  }
  out.value = pairwise_sum<double>(parts) / static_cast<double>(n);
  return out;
}

inline HeisenbergValue abel_at(const IntLaurentPoly& a, const TorusGridConfig& grid) {
  HeisenbergValue out;
  const auto values = evaluate_grid(a, grid);
  const double threshold = kGridZeroThreshold * to_double(a.one_norm());
  std::vector<double> parts(values.size());
  std::size_t near_zero = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = std::abs(values[i]);
    if (v <= threshold) ++near_zero;
    parts[i] = v <= threshold ? 0.0 : std::max(std::log(v), 0.0);
  }
  if (near_zero > 0)
    out.flags.push_back("NearZero: " + std::to_string(near_zero) + " grid nodes with |a| ~ 0");
  out.value = pairwise_sum<double>(parts) / static_cast<double>(values.size());
  return out;
}

inline TorusGridConfig abel_grid(const HeisenbergConfig& cfg, std::uint64_t scale_down) {
  const std::uint64_t ni = std::max<std::uint64_t>(cfg.inner_n / scale_down, 1);
  const std::uint64_t no = std::max<std::uint64_t>(cfg.outer_n / scale_down, 1);
  const double off_i = cfg.inner_offset ? *cfg.inner_offset : kTwoPi / (2.0 * static_cast<double>(ni));
  return {{ni, no}, {off_i, cfg.outer_offset}};
}

}  // namespace detail

inline HeisenbergValue heis_logdet(const IntLaurentPoly& a, const HeisenbergConfig& cfg = {}) {
  detail::require_two_variables(a);
  TorusGridConfig{{1, cfg.outer_n}, {0.0, cfg.outer_offset}}.validate(2);
  auto out = detail::heis_at(a, cfg.outer_n, cfg.outer_offset, cfg);
  if (cfg.outer_n >= 2) {
    const auto half = detail::heis_at(a, cfg.outer_n / 2, cfg.outer_offset, cfg);
    out.convergence_estimate = std::abs(out.value - half.value);
  }
  return out;
}

inline HeisenbergValue abelianized_logdet(const IntLaurentPoly& a, const HeisenbergConfig& cfg = {}) {
  detail::require_two_variables(a);
  auto out = detail::abel_at(a, detail::abel_grid(cfg, 1));
  if (cfg.inner_n >= 2 && cfg.outer_n >= 2) {
    const auto half = detail::abel_at(a, detail::abel_grid(cfg, 2));
    out.convergence_estimate = std::abs(out.value - half.value);
  }
  return out;
}

struct HeisenbergComparison {
  HeisenbergValue heisenberg;
  HeisenbergValue abelianized;
  double difference = 0.0;  // abelianized - heisenberg
  bool inequality_holds = true;
  double tolerance = 1e-6;
};

/// Both values on the same outer grid and the inequality heis <= abelianized.
inline HeisenbergComparison compare_heisenberg(const IntLaurentPoly& a,
                                               const HeisenbergConfig& cfg = {},
                                               double tolerance = 1e-6) {
  HeisenbergComparison out;
  out.heisenberg = heis_logdet(a, cfg);
  out.abelianized = abelianized_logdet(a, cfg);
  out.difference = out.abelianized.value - out.heisenberg.value;
  out.tolerance = tolerance;
  out.inequality_holds = out.heisenberg.value <= out.abelianized.value + tolerance;
  return out;
}

}  // namespace fkdet
