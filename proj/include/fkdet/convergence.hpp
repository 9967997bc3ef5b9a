#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace fkdet {

enum class ConvergenceVerdict { Converged, Inconclusive };

inline const char* to_string(ConvergenceVerdict v) {
  return v == ConvergenceVerdict::Converged ? "Converged" : "Inconclusive";
}

template <class Value>
struct ConvergenceEntry {
  std::uint64_t index;  // (Gamma : Gamma_n), or n for grid sequences
  Value value;
};

/// A sequence of approximations ordered by index, with the last entry taken
/// as the limit estimate. `Diagnostic` is |difference| for real sequences and
/// a guaranteed valuation of the difference for p-adic ones.
template <class Value, class Diagnostic>
struct ConvergenceReport {
  std::vector<ConvergenceEntry<Value>> entries;
  std::optional<Value> limit_estimate;
  std::vector<Diagnostic> differences;  // size entries - 1
  std::optional<Diagnostic> final_diagnostic;
  ConvergenceVerdict verdict = ConvergenceVerdict::Inconclusive;
  std::vector<std::string> flags;
};

using RealReport = ConvergenceReport<double, double>;

}  // namespace fkdet
