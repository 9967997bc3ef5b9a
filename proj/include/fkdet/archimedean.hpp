#pragma once

// Real Mahler measures, Fuglede-Kadison determinants of Z^d and its finite
// quotients, and certified nonvanishing of f^ on the torus T^d.

#include "fkdet/convergence.hpp"
#include "fkdet/groupring.hpp"
#include "fkdet/numeric.hpp"
#include "fkdet/roots.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fkdet {

using Complex = std::complex<double>;

/// Roots-of-unity grid mu_{n_1} x ... x mu_{n_d}, optionally rotated by a
/// per-axis angle in [0, 2 pi / n_i).
struct TorusGridConfig {
  std::vector<std::uint64_t> nodes;
  std::vector<double> offsets;

  static TorusGridConfig uniform(std::size_t dim, std::uint64_t n, double offset = 0.0) {
    return {std::vector<std::uint64_t>(dim, n), std::vector<double>(dim, offset)};
  }

  static TorusGridConfig box(std::span<const std::uint64_t> box) {
    return {std::vector<std::uint64_t>(box.begin(), box.end()),
            std::vector<double>(box.size(), 0.0)};
  }

  std::uint64_t volume() const { return box_volume(nodes); }

  void validate(std::size_t dim) const {
    if (nodes.size() != dim || offsets.size() != dim)
      throw DimensionMismatch("grid dimension differs from polynomial dim");
    for (std::size_t i = 0; i < dim; ++i) {
      if (nodes[i] == 0) throw PreconditionError("grid node count must be positive");
      const double step = kTwoPi / static_cast<double>(nodes[i]);
      if (offsets[i] < 0.0 || offsets[i] >= step)
        throw PreconditionError("grid offset out of range [0, 2pi/n)");
    }
  }

  /// Angle vector of the node with multi-index k.
  std::vector<double> angles(std::span<const std::uint64_t> k) const {
    std::vector<double> a(k.size());
    for (std::size_t i = 0; i < k.size(); ++i)
      a[i] = kTwoPi * static_cast<double>(k[i]) / static_cast<double>(nodes[i]) + offsets[i];
    return a;
  }
};

/// A node of the grid where |f^| is numerically zero.
class GridHitsZero : public PreconditionError {
 public:
  GridHitsZero(std::vector<double> angles, double value)
      : PreconditionError("f^ vanishes (numerically) at a grid node; change n or offset"),
        angles_(std::move(angles)),
        value_(value) {}
  const std::vector<double>& angles() const { return angles_; }
  double value() const { return value_; }

 private:
  std::vector<double> angles_;
  double value_;
};

class ZeroAtCharacter : public PreconditionError {
 public:
  explicit ZeroAtCharacter(std::vector<std::uint64_t> character)
      : PreconditionError("F vanishes at a character of the finite group"),
        character_(std::move(character)) {}
  /// Multi-index k: the character z_i -> exp(2 pi i k_i / n_i).
  const std::vector<std::uint64_t>& character() const { return character_; }

 private:
  std::vector<std::uint64_t> character_;
};

namespace detail {

struct TermTable {
  std::vector<std::vector<std::int64_t>> exponents;
  std::vector<double> coeffs;
};

inline TermTable term_table(const IntLaurentPoly& f) {
  TermTable t;
  for (const auto& [m, c] : f.terms()) {
    t.exponents.push_back(m.exponents);
    t.coeffs.push_back(to_double(c));
  }
  return t;
}

/// Odometer over a box, last axis fastest.
inline bool next_index(std::vector<std::uint64_t>& k, std::span<const std::uint64_t> box) {
  for (std::size_t i = k.size(); i-- > 0;) {
    if (++k[i] < box[i]) return true;
    k[i] = 0;
  }
  return false;
}

inline Complex evaluate_node(const TermTable& t, const TorusGridConfig& grid,
                             std::span<const std::uint64_t> k,
                             std::vector<Complex>& scratch) {
  scratch.resize(t.coeffs.size());
  for (std::size_t j = 0; j < t.coeffs.size(); ++j) {
    double phase = 0.0;
    for (std::size_t i = 0; i < k.size(); ++i) {
      const auto n = static_cast<__int128>(grid.nodes[i]);
      const __int128 e = t.exponents[j][i];
      __int128 r = (e * static_cast<__int128>(k[i])) % n;
      if (r < 0) r += n;
      phase += kTwoPi * static_cast<double>(r) / static_cast<double>(grid.nodes[i]) +
               static_cast<double>(t.exponents[j][i]) * grid.offsets[i];
    }
    scratch[j] = std::polar(t.coeffs[j], phase);
  }
  return pairwise_sum<Complex>(scratch);
}

}  // namespace detail

/// f^(theta) = sum a_g exp(i <g, theta>), summed pairwise in term order.
inline Complex evaluate_on_torus(const IntLaurentPoly& f, std::span<const double> angles) {
  if (angles.size() != f.dim()) throw DimensionMismatch("angle vector has wrong length");
  std::vector<Complex> parts;
  for (const auto& [m, c] : f.terms()) {
    double phase = 0.0;
    for (std::size_t i = 0; i < angles.size(); ++i)
      phase += static_cast<double>(m[i]) * angles[i];
    parts.push_back(std::polar(to_double(c), phase));
  }
  return pairwise_sum<Complex>(parts);
}

/// Values of f^ at every grid node, in canonical (row-major) order.
inline std::vector<Complex> evaluate_grid(const IntLaurentPoly& f, const TorusGridConfig& grid) {
  grid.validate(f.dim());
  const auto table = detail::term_table(f);
  std::vector<Complex> out;
  out.reserve(grid.volume());
  std::vector<std::uint64_t> k(f.dim(), 0);
  std::vector<Complex> scratch;
  do {
    out.push_back(detail::evaluate_node(table, grid, k, scratch));
  } while (detail::next_index(k, grid.nodes));
  return out;
}

inline std::vector<std::uint64_t> unravel(std::uint64_t flat, std::span<const std::uint64_t> box) {
  std::vector<std::uint64_t> k(box.size());
  for (std::size_t i = box.size(); i-- > 0;) {
    k[i] = flat % box[i];
    flat /= box[i];
  }
  return k;
}

// ---- Jensen's formula (d = 1) ----------------------------------------------

struct JensenForms {
  double leading_form;   // log|a_m| + sum_{|a| > 1} log|a|
  double trailing_form;  // log|a_r| - sum_{|a| < 1} log|a|
  std::size_t roots_on_circle = 0;
};

inline constexpr double kTolCircle = 1e-9;

inline JensenForms jensen_forms(const RootList& roots, double tol_circle = kTolCircle) {
  JensenForms out{log_abs(roots.leading), log_abs(roots.trailing), 0};
  std::vector<double> outside, inside;
  for (const auto& r : roots.roots) {
    const double mod = std::abs(r.value);
    if (std::abs(mod - 1.0) <= tol_circle) {
      out.roots_on_circle += static_cast<std::size_t>(r.multiplicity);
      continue;
    }
    const double term = r.multiplicity * std::log(mod);
    (mod > 1.0 ? outside : inside).push_back(term);
  }
  out.leading_form += pairwise_sum<double>(outside);
  out.trailing_form -= pairwise_sum<double>(inside);
  return out;
}

/// m(f^) for d = 1 by Jensen's formula; roots within tol_circle of the unit
/// circle count as modulus exactly 1.
inline double mahler_jensen(const IntLaurentPoly& f, double tol_circle = kTolCircle,
                            const RootConfig& cfg = {}) {
  if (f.is_zero()) throw PreconditionError("Mahler measure of the zero polynomial");
  return jensen_forms(roots_d1(f, cfg), tol_circle).leading_form;
}

// ---- grid sums -------------------------------------------------------------

inline constexpr double kGridZeroThreshold = 1e-14;

/// n^{-d} sum over the grid of log|f^(zeta)|.
inline double mahler_quadrature(const IntLaurentPoly& f, const TorusGridConfig& grid) {
  if (f.is_zero()) throw PreconditionError("Mahler measure of the zero polynomial");
  const auto values = evaluate_grid(f, grid);
  const double threshold = kGridZeroThreshold * to_double(f.one_norm());
  std::vector<double> logs(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double a = std::abs(values[i]);
    if (a < threshold) throw GridHitsZero(grid.angles(unravel(i, grid.nodes)), a);
    logs[i] = std::log(a);
  }
  return pairwise_sum<double>(logs) / static_cast<double>(values.size());
}

/// log det_{N(Z/n_1 x ... x Z/n_d)} F = n^{-d} sum_chi log|F(chi)|.
inline double finite_group_det(const IntLaurentPoly& F, std::span<const std::uint64_t> box) {
  if (F.is_zero()) throw ZeroAtCharacter(std::vector<std::uint64_t>(F.dim(), 0));
  const auto grid = TorusGridConfig::box(box);
  const auto values = evaluate_grid(F, grid);
  const double threshold = kGridZeroThreshold * to_double(F.one_norm());
  std::vector<double> logs(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double a = std::abs(values[i]);
    if (a < threshold) throw ZeroAtCharacter(unravel(i, grid.nodes));
    logs[i] = std::log(a);
  }
  return pairwise_sum<double>(logs) / static_cast<double>(values.size());
}

// ---- expansiveness (Wiener's criterion) -------------------------------------

enum class ExpansivenessStatus { Expansive, LikelyNotExpansive, Undetermined };

inline const char* to_string(ExpansivenessStatus s) {
  switch (s) {
    case ExpansivenessStatus::Expansive: return "Expansive";
    case ExpansivenessStatus::LikelyNotExpansive: return "LikelyNotExpansive";
    case ExpansivenessStatus::Undetermined: return "Undetermined";
  }
  return "?";
}

struct ExpansivenessVerdict {
  ExpansivenessStatus status = ExpansivenessStatus::Undetermined;
  double margin = 0.0;                 // certified lower bound of min |f^| (Expansive)
  std::vector<double> witness_angles;  // smallest |f^| found
  double witness_value = std::numeric_limits<double>::infinity();
  std::uint64_t grid_n = 0;            // per-axis nodes of the last grid used
  double gradient_bound = 0.0;         // L = sum |a_g| ||g||_1
  std::string method;
};

struct WienerConfig {
  std::uint64_t initial_n = 16;
  std::uint64_t max_nodes = 1U << 20;  // refinement doubles n while n^d fits
  double near_zero = 1e-10;            // relative to ||f||_1
  double tol_circle = kTolCircle;
  std::size_t local_starts = 4;
};

namespace detail {

/// Gauss-Newton search for a zero of f^ near `start` (minimum-norm steps
/// with Levenberg damping). Returns the best point and its |f^|.
inline std::pair<std::vector<double>, double> local_zero_search(const IntLaurentPoly& f,
                                                                std::vector<double> theta) {
  const std::size_t d = f.dim();
  auto value_and_jacobian = [&](const std::vector<double>& t, std::vector<Complex>& jac) {
    Complex v = 0;
    jac.assign(d, Complex(0));
    for (const auto& [m, c] : f.terms()) {
      double phase = 0;
      for (std::size_t i = 0; i < d; ++i) phase += static_cast<double>(m[i]) * t[i];
      const Complex e = std::polar(to_double(c), phase);
      v += e;
      for (std::size_t i = 0; i < d; ++i) jac[i] += Complex(0, static_cast<double>(m[i])) * e;
    }
    return v;
  };
  std::vector<Complex> jac;
  Complex val = value_and_jacobian(theta, jac);
  double lambda = 1e-6;
  for (int it = 0; it < 200 && std::abs(val) > 0; ++it) {
    // A = J J^T + lambda I (2x2), J rows = (Re jac, Im jac).
    double a00 = lambda, a01 = 0, a11 = lambda;
    for (const auto& g : jac) {
      a00 += g.real() * g.real();
      a01 += g.real() * g.imag();
      a11 += g.imag() * g.imag();
    }
    const double det = a00 * a11 - a01 * a01;
    if (!(det > 0)) break;
    const double y0 = (a11 * val.real() - a01 * val.imag()) / det;
    const double y1 = (-a01 * val.real() + a00 * val.imag()) / det;
    std::vector<double> trial = theta;
    for (std::size_t i = 0; i < d; ++i) trial[i] -= jac[i].real() * y0 + jac[i].imag() * y1;
    std::vector<Complex> jac_trial;
    const Complex v_trial = value_and_jacobian(trial, jac_trial);
    if (std::abs(v_trial) < std::abs(val)) {
      theta = std::move(trial);
      val = v_trial;
      jac = std::move(jac_trial);
      lambda = std::max(lambda * 0.1, 1e-14);
    } else {
      lambda *= 10.0;
      if (lambda > 1e8) break;
    }
  }
  for (auto& t : theta) {
    t = std::fmod(t, kTwoPi);
    if (t < 0) t += kTwoPi;
  }
  return {theta, std::abs(val)};
}

}  // namespace detail

/// Decides whether f is a unit of L^1(Z^d), i.e. whether f^ has no zero on
/// T^d. Expansive is a certificate: grid minimum minus L * h_mesh is a lower
/// bound for |f^| everywhere. The negative answer is never certified.
inline ExpansivenessVerdict wiener_unit_check(const IntLaurentPoly& f,
                                              const WienerConfig& cfg = {}) {
  if (f.is_zero()) throw PreconditionError("expansiveness of the zero polynomial");
  const std::size_t d = f.dim();
  ExpansivenessVerdict out;
  double L = 0;
  for (const auto& [m, c] : f.terms()) L += std::abs(to_double(c)) * static_cast<double>(m.l1_norm());
  out.gradient_bound = L;
  const double norm1 = to_double(f.one_norm());
  const double threshold = cfg.near_zero * norm1;
  const double slack = 64.0 * std::numeric_limits<double>::epsilon() * norm1 *
                       static_cast<double>(f.size() + d);

  auto consider_witness = [&](std::vector<double> angles, double value) {
    if (value < out.witness_value) {
      out.witness_value = value;
      out.witness_angles = std::move(angles);
    }
  };

  if (d == 1) {
    const auto roots = roots_d1(f);
    for (const auto& r : roots.roots) {
      if (std::abs(std::abs(r.value) - 1.0) <= cfg.tol_circle) {
        double arg = std::arg(r.value);
        if (arg < 0) arg += kTwoPi;
        const std::vector<double> a{arg};
        consider_witness(a, std::abs(evaluate_on_torus(f, a)));
        out.status = ExpansivenessStatus::LikelyNotExpansive;
      }
    }
    if (out.status == ExpansivenessStatus::LikelyNotExpansive) {
      out.method = "roots on the unit circle";
      return out;
    }
  }

  for (std::uint64_t n = cfg.initial_n;; n *= 2) {
    const double vol = std::pow(static_cast<double>(n), static_cast<double>(d));
    if (vol > static_cast<double>(cfg.max_nodes)) break;
    out.grid_n = n;
    const auto grid = TorusGridConfig::uniform(d, n);
    const auto values = evaluate_grid(f, grid);
    std::vector<std::size_t> order(values.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    const std::size_t starts = std::min(cfg.local_starts, order.size());
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(starts),
                      order.end(), [&](std::size_t a, std::size_t b) {
                        const double va = std::abs(values[a]), vb = std::abs(values[b]);
                        return va < vb || (va == vb && a < b);
                      });
    const double grid_min = std::abs(values[order[0]]);
    consider_witness(grid.angles(unravel(order[0], grid.nodes)), grid_min);

    const double h_mesh = std::numbers::pi / static_cast<double>(n);
    const double margin = grid_min - L * h_mesh - slack;
    if (margin > 0) {
      out.status = ExpansivenessStatus::Expansive;
      out.margin = margin;
      out.method = "grid certificate";
      return out;
    }
    if (out.witness_value <= threshold) {
      out.status = ExpansivenessStatus::LikelyNotExpansive;
      out.method = "grid node";
      return out;
    }
    for (std::size_t s = 0; s < starts; ++s) {
      auto [angles, value] =
          detail::local_zero_search(f, grid.angles(unravel(order[s], grid.nodes)));
      consider_witness(std::move(angles), value);
    }
    if (out.witness_value <= threshold) {
      out.status = ExpansivenessStatus::LikelyNotExpansive;
      out.method = "local zero search";
      return out;
    }
  }
  out.status = ExpansivenessStatus::Undetermined;
  out.method = "refinement budget exhausted";
  return out;
}

// ---- finite-quotient limit ---------------------------------------------------

struct FkLimitConfig {
  double tolerance = 1e-6;
  WienerConfig wiener;
};

struct FkLimitReport {
  RealReport table;
  ExpansivenessVerdict verdict;
  bool verified = false;  // f certified to be an L^1 unit
};

/// Table of grid Mahler sums n^{-d} sum log|f^(zeta)| along n_list; the limit
/// estimate is the last value and the diagnostic the largest successive
/// difference among the final three entries.
inline FkLimitReport fk_limit(const IntLaurentPoly& f, std::span<const std::uint64_t> n_list,
                              const FkLimitConfig& cfg = {}) {
  FkLimitReport out;
  out.verdict = wiener_unit_check(f, cfg.wiener);
  out.verified = out.verdict.status == ExpansivenessStatus::Expansive;
  if (!out.verified) out.table.flags.push_back("Unverified: f not certified as an L^1 unit");
  std::vector<std::uint64_t> ns(n_list.begin(), n_list.end());
  std::stable_sort(ns.begin(), ns.end());
  for (auto n : ns) {
    try {
      out.table.entries.push_back({n, mahler_quadrature(f, TorusGridConfig::uniform(f.dim(), n))});
    } catch (const GridHitsZero&) {
      out.table.flags.push_back("Skipped: grid n=" + std::to_string(n) + " hits a zero of f^");
    }
  }
  auto& e = out.table.entries;
  for (std::size_t i = 1; i < e.size(); ++i)
    out.table.differences.push_back(std::abs(e[i].value - e[i - 1].value));
  if (!e.empty()) out.table.limit_estimate = e.back().value;
  if (e.size() >= 3) {
    const auto& dd = out.table.differences;
    const double diag = std::max(dd[dd.size() - 1], dd[dd.size() - 2]);
    out.table.final_diagnostic = diag;
    if (diag <= cfg.tolerance) out.table.verdict = ConvergenceVerdict::Converged;
  } else if (e.size() == 2) {
    out.table.final_diagnostic = out.table.differences.back();
  }
  return out;
}

}  // namespace fkdet
