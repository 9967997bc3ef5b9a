#include "fkdet/archimedean.hpp"
#include "fkdet/parse.hpp"
#include "fkdet/periodic.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace fkdet;

namespace {

IntLaurentPoly P(const char* text, std::size_t dim = 1) { return parse_poly(text, dim); }

using Box = std::vector<std::uint64_t>;

}  // namespace

TEST(FixCount, ZMinusTwoBoxFour) {
  const Box box{4};
  const auto rec = fix_count(P("z - 2"), box);
  EXPECT_EQ(abs_value(rec.value), 15);
  EXPECT_EQ(rec.index, 4u);
  // brute force: the 4x4 circulant itself
  EXPECT_EQ(rec.value, oracle::bareiss_det(multiplication_matrix(P("z - 2"), box)));
}

TEST(FixCount, RowSumsVanishForZMinusOne) {
  for (std::uint64_t n : {1u, 2u, 5u, 12u}) {
    const Box box{n};
    const auto rec = fix_count(P("z - 1"), box);
    EXPECT_TRUE(rec.is_zero);
    EXPECT_EQ(rec.value, 0);
  }
}

TEST(FixCount, ConstantIsScaledIdentity) {
  const Box box{2, 2};
  EXPECT_EQ(fix_count(P("3", 2), box).value, 81);
}

TEST(FixCount, ZMinusTwoIsTwoPowNMinusOne) {
  for (std::uint64_t n = 1; n <= 64; ++n) {
    const Box box{n};
    const BigInt expected = pow_big(BigInt(2), n) - 1;
    EXPECT_EQ(abs_value(fix_count(P("z - 2"), box).value), expected) << n;
  }
}

TEST(FixCount, CapExceeded) {
  const Box box{100, 100};
  EXPECT_THROW(fix_count(P("3 + x + y", 2), box), CapExceeded);
}

TEST(FixCount, AgreesWithBareissOnSmallBoxes) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t dim = 1 + trial % 3;
    const auto f = oracle::random_poly(rng, dim, 1 + trial % 4, -3, 3, 9);
    Box box(dim);
    std::uint64_t vol = 1;
    for (auto& n : box) {
      n = 1 + rng() % 4;
      vol *= n;
    }
    ASSERT_LE(vol, 64u);
    EXPECT_EQ(fix_count(f, box).value, oracle::bareiss_det(multiplication_matrix(f, box)))
        << render(f);
  }
}

TEST(FixCount, Multiplicativity) {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 50; ++trial) {
    const auto f = oracle::random_poly_d1(rng, 3, 5);
    const auto g = oracle::random_poly_d1(rng, 3, 5);
    const Box box{static_cast<std::uint64_t>(1 + trial % 17)};
    EXPECT_EQ(fix_count(f * g, box).value, fix_count(f, box).value * fix_count(g, box).value);
  }
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = oracle::random_poly(rng, 2, 3, -2, 2, 4);
    const auto g = oracle::random_poly(rng, 2, 3, -2, 2, 4);
    const Box box{3, 4};
    EXPECT_EQ(fix_count(f * g, box).value, fix_count(f, box).value * fix_count(g, box).value);
  }
}

TEST(FixCount, ShiftChangesOnlyTheSign) {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 30; ++trial) {
    const auto f = oracle::random_poly(rng, 2, 3, -2, 2, 6);
    const Box box{3, 5};
    const auto shifted = shift(f, Monomial{trial % 4 - 2, trial % 3});
    EXPECT_EQ(abs_value(fix_count(shifted, box).value), abs_value(fix_count(f, box).value));
  }
}

TEST(FixCount, CirculantIdentityWithFiniteGroupDet) {
  std::mt19937_64 rng(34);
  for (int trial = 0; trial < 30; ++trial) {
    const auto f = oracle::random_poly(rng, 2, 4, -3, 3, 5);
    const Box box{static_cast<std::uint64_t>(2 + trial % 6), 4};
    const auto rec = fix_count(f, box);
    if (rec.is_zero) continue;
    const double vol = static_cast<double>(rec.index);
    const double via_chars = vol * finite_group_det(reduce_mod_box(f, box), box);
    EXPECT_NEAR(via_chars, log_abs(rec.value), 1e-9 * std::max(1.0, std::abs(log_abs(rec.value))));
  }
}

TEST(FixStructure, Examples) {
  const Box b2{2};
  const auto a = fix_structure(P("3"), b2);
  EXPECT_EQ(a, (std::vector<BigInt>{3, 3}));
  const auto b = fix_structure(P("z - 2"), b2);
  EXPECT_EQ(b, (std::vector<BigInt>{1, 3}));
  const auto c = fix_structure(P("z - 1"), b2);
  EXPECT_EQ(c.back(), 0);
  EXPECT_THROW(fix_structure(P("z - 2"), Box{300}), CapExceeded);
}

TEST(FixStructure, ProductMatchesFixCountAndDivisibilityChain) {
  std::mt19937_64 rng(35);
  for (int trial = 0; trial < 40; ++trial) {
    const auto f = oracle::random_poly(rng, 2, 3, -2, 2, 4);
    const Box box{static_cast<std::uint64_t>(1 + trial % 4), static_cast<std::uint64_t>(2 + trial % 3)};
    const auto divisors = fix_structure(f, box);
    const auto rec = fix_count(f, box);
    BigInt prod = 1;
    for (const auto& d : divisors) prod *= d;
    EXPECT_EQ(prod, abs_value(rec.value)) << render(f);
    for (std::size_t i = 1; i < divisors.size(); ++i)
      if (divisors[i - 1] != 0) {
        EXPECT_EQ(divisors[i] % divisors[i - 1], 0);
      }
    // integer SNF without the determinant modulus must agree
    EXPECT_EQ(elementary_divisors(multiplication_matrix(f, box)), divisors);
  }
}

TEST(HPer, ZMinusTwo) {
  const auto r = h_per(P("z - 2"), {{4}, {8}, {16}, {32}});
  ASSERT_EQ(r.table.entries.size(), 4u);
  for (const auto& e : r.table.entries) {
    const double n = static_cast<double>(e.index);
    EXPECT_NEAR(e.value, std::log(2.0) + std::log1p(-std::pow(2.0, -n)) / n, 1e-14);
  }
  for (std::size_t i = 1; i < 4; ++i)
    EXPECT_GT(r.table.entries[i].value, r.table.entries[i - 1].value);
}

TEST(HPer, ConstantConverges) {
  const auto r = h_per(P("3", 2), {{2, 2}, {3, 3}, {4, 5}});
  for (const auto& e : r.table.entries) EXPECT_NEAR(e.value, std::log(3.0), 1e-15);
  EXPECT_EQ(r.table.verdict, ConvergenceVerdict::Converged);
}

TEST(HPer, MatchesQuadratureAtMatchingGrid) {
  const auto f = P("3 + x + y", 2);
  const auto r = h_per(f, {{8, 8}, {16, 16}});
  ASSERT_EQ(r.table.entries.size(), 2u);
  EXPECT_NEAR(r.table.entries[0].value, mahler_quadrature(f, TorusGridConfig::uniform(2, 8)), 1e-12);
  EXPECT_NEAR(r.table.entries[1].value, mahler_quadrature(f, TorusGridConfig::uniform(2, 16)), 1e-12);
}

TEST(HPer, ZeroCountsAreSkippedAndFlagged) {
  const auto r = h_per(P("z - 1"), {{2}, {3}});
  EXPECT_TRUE(r.table.entries.empty());
  EXPECT_EQ(r.table.flags.size(), 2u);
  EXPECT_EQ(r.table.verdict, ConvergenceVerdict::Inconclusive);
}
