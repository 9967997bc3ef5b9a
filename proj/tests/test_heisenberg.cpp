#include "fkdet/heisenberg.hpp"
#include "fkdet/parse.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace fkdet;

namespace {

IntLaurentPoly A(const char* text) { return parse_poly(text, {"y", "z"}); }

constexpr double kM1xy = 0.3230659472194505;

/// Plain double loop of log+|a| with half-step inner rotation.
double log_plus_oracle(const IntLaurentPoly& a, int n) {
  double s = 0;
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      const double ty = kTwoPi * (j + 0.5) / n, tz = kTwoPi * k / n;
      std::complex<double> v = 0;
      for (const auto& [m, c] : a.terms())
        v += to_double(c) * std::polar(1.0, ty * static_cast<double>(m[0]) + tz * static_cast<double>(m[1]));
      s += std::max(0.0, std::log(std::abs(v)));
    }
  return s / (static_cast<double>(n) * n);
}

}  // namespace

TEST(HeisLogdet, Examples) {
  EXPECT_NEAR(heis_logdet(A("2")).value, std::log(2.0), 1e-12);
  EXPECT_NEAR(heis_logdet(A("2*y")).value, std::log(2.0), 1e-12);
  EXPECT_NEAR(heis_logdet(A("y + z")).value, 0.0, 1e-6);
  EXPECT_NEAR(heis_logdet(A("1")).value, 0.0, 1e-15);
  // inner m(3 + eta) = log 3 for every slice
  EXPECT_NEAR(heis_logdet(A("y + 3*z")).value, std::log(3.0), 1e-10);
}

TEST(HeisLogdet, IdenticallyZeroSlice) {
  EXPECT_THROW(heis_logdet(A("y*z - y")), IdenticallyZeroSlice);
  EXPECT_THROW(heis_logdet(parse_poly("x + y", 3)), DimensionMismatch);
}

TEST(HeisLogdet, IndependentOfYMatchesOneVariableQuadrature) {
  for (const char* text : {"z - 2", "3*z^2 + z - 1", "z^-1 + 4 + z"}) {
    const auto a = A(text);
    HeisenbergConfig cfg;
    cfg.outer_n = 128;
    const double heis = heis_logdet(a, cfg).value;
    const auto values = evaluate_grid(parse_poly(text, {"z"}), TorusGridConfig::uniform(1, 128));
    double s = 0;
    for (const auto& v : values) s += std::max(0.0, std::log(std::abs(v)));
    EXPECT_NEAR(heis, s / 128.0, 1e-9) << text;
  }
}

TEST(HeisLogdet, DoublingStaysWithinReportedEstimate) {
  for (const char* text : {"y + 2*z - 1", "y^2 + z*y + 3", "2*y - z^2 + 1"}) {
    HeisenbergConfig cfg;
    cfg.outer_n = 64;
    const auto base = heis_logdet(A(text), cfg);
    cfg.outer_n = 128;
    const auto fine = heis_logdet(A(text), cfg);
    EXPECT_LE(std::abs(fine.value - base.value), base.convergence_estimate + 1e-12) << text;
  }
}

TEST(AbelianizedLogdet, Examples) {
  EXPECT_NEAR(abelianized_logdet(A("2")).value, std::log(2.0), 1e-12);
  EXPECT_NEAR(abelianized_logdet(A("1")).value, 0.0, 1e-15);
  HeisenbergConfig cfg;
  cfg.inner_n = cfg.outer_n = 128;
  const double v = abelianized_logdet(A("y + z"), cfg).value;
  EXPECT_NEAR(v, log_plus_oracle(A("y + z"), 256), 1e-3);
  EXPECT_NEAR(v, kM1xy, 1e-3);
}

TEST(CompareHeisenberg, Examples) {
  const auto two = compare_heisenberg(A("2"));
  EXPECT_NEAR(two.difference, 0.0, 1e-12);
  const auto yz = compare_heisenberg(A("y + z"));
  EXPECT_NEAR(yz.difference, kM1xy, 1e-3);
  EXPECT_TRUE(yz.inequality_holds);
  const auto ty = compare_heisenberg(A("2*y"));
  EXPECT_NEAR(ty.heisenberg.value, ty.abelianized.value, 1e-12);
}

TEST(CompareHeisenberg, InequalityOnRandomSmallPolynomials) {
  std::mt19937_64 rng(60);
  int checked = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = oracle::random_poly(rng, 2, 2 + trial % 3, -1, 2, 3);
    if (a.is_zero()) continue;
    HeisenbergConfig cfg;
    cfg.outer_n = cfg.inner_n = 128;
    try {
      const auto r = compare_heisenberg(a, cfg);
      EXPECT_TRUE(r.inequality_holds) << render(a, {"y", "z"}) << " " << r.heisenberg.value << " "
                                      << r.abelianized.value;
      ++checked;
    } catch (const IdenticallyZeroSlice&) {
    }
  }
  EXPECT_GE(checked, 15);
}
