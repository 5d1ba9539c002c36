#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

#include "fmlab/dilation_set.hpp"

using namespace fmlab;

namespace {

// Endpoints of the level-L intervals, built by repeated interval subdivision.
std::vector<double> cantor_endpoints_oracle(int base, std::vector<int> kept, int levels) {
  std::vector<std::pair<double, double>> intervals{{1.0, 2.0}};
  for (int l = 0; l < levels; ++l) {
    std::vector<std::pair<double, double>> next;
    for (auto [a, b] : intervals) {
      const double w = (b - a) / base;
      for (int d : kept) next.emplace_back(a + d * w, a + (d + 1) * w);
    }
    intervals = next;
  }
  std::vector<double> out;
  for (auto [a, b] : intervals) {
    out.push_back(a);
    out.push_back(b);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(), [](double x, double y) { return std::abs(x - y) < 1e-12; }),
            out.end());
  return out;
}

void expect_block_invariants(const BlockSet& b) {
  for (std::size_t i = 0; i < b.points.size(); ++i) {
    EXPECT_GE(b.points[i], 1.0);
    EXPECT_LE(b.points[i], 2.0);
    if (i > 0) EXPECT_GT(b.points[i] - b.points[i - 1], 1e-15);
  }
}

}  // namespace

TEST(RescaledBlock, LacunaryGivesBothEndpoints) {
  for (int j : {-5, 0, 3}) {
    auto b = rescaled_block(DilationSet::lacunary(), j);
    ASSERT_EQ(b.points.size(), 2u);
    EXPECT_EQ(b.points[0], 1.0);
    EXPECT_EQ(b.points[1], 2.0);
    EXPECT_TRUE(b.includes_endpoints.first && b.includes_endpoints.second);
    EXPECT_FALSE(b.truncated);
  }
}

TEST(RescaledBlock, HarmonicSequenceStartsWithReciprocals) {
  auto b = rescaled_block(DilationSet::power_sequence(1.0), 0);
  ASSERT_GT(b.points.size(), 100u);
  const auto n = b.points.size();
  EXPECT_DOUBLE_EQ(b.points[n - 1], 2.0);
  EXPECT_DOUBLE_EQ(b.points[n - 2], 1.5);
  EXPECT_NEAR(b.points[n - 3], 4.0 / 3.0, 1e-15);
  EXPECT_TRUE(b.truncated);
  ASSERT_EQ(b.tails.size(), 1u);
  EXPECT_DOUBLE_EQ(b.tails[0].lo, 1.0);
  EXPECT_LT(b.tails[0].hi, b.points.front());
  EXPECT_LT(b.tails[0].max_gap, 1e-9);
  expect_block_invariants(b);
  for (double p : b.points) EXPECT_GT(p, 1.0);
}

TEST(RescaledBlock, PowerSequenceOutsideWindowIsEmpty) {
  auto e = DilationSet::power_sequence(1.0);
  EXPECT_TRUE(rescaled_block(e, -1).empty());
  EXPECT_TRUE(rescaled_block(e, 2).empty());
  auto b = rescaled_block(e, 1);
  ASSERT_EQ(b.points.size(), 1u);
  EXPECT_EQ(b.points[0], 1.0);
}

TEST(RescaledBlock, SequenceWithInteriorAccumulationAndShift) {
  // {3 + 2^-n}: block j = 1 holds 1.5 + 2^-(n+1) accumulating at 1.5.
  auto e = DilationSet::sequence(SequenceRule::geometric(2.0), 3.0);
  auto b = rescaled_block(e, 1);
  ASSERT_FALSE(b.points.empty());
  EXPECT_DOUBLE_EQ(b.points.back(), 1.75);
  ASSERT_EQ(b.tails.size(), 1u);
  EXPECT_DOUBLE_EQ(b.tails[0].lo, 1.5);
  expect_block_invariants(b);
}

TEST(RescaledBlock, TernaryCantorLevelTwoMatchesSubdivision) {
  auto b = rescaled_block(DilationSet::cantor(3, {0, 2}, 2), 0);
  auto oracle = cantor_endpoints_oracle(3, {0, 2}, 2);
  ASSERT_EQ(b.points.size(), oracle.size());
  ASSERT_EQ(b.points.size(), 8u);
  for (std::size_t i = 0; i < oracle.size(); ++i) EXPECT_NEAR(b.points[i], oracle[i], 1e-15);
  EXPECT_NEAR(b.points[1], 1.0 + 1.0 / 9.0, 1e-15);
}

TEST(RescaledBlock, CantorVariantsMatchSubdivision) {
  for (auto [base, kept, levels] : std::vector<std::tuple<int, std::vector<int>, int>>{
           {3, {0, 2}, 7}, {4, {0, 3}, 5}, {5, {0, 2, 4}, 4}, {4, {0, 1}, 4}}) {
    auto b = rescaled_block(DilationSet::cantor(base, kept, levels), 0);
    auto oracle = cantor_endpoints_oracle(base, kept, levels);
    ASSERT_EQ(b.points.size(), oracle.size()) << base << " " << levels;
    for (std::size_t i = 0; i < oracle.size(); ++i) EXPECT_NEAR(b.points[i], oracle[i], 1e-13);
    expect_block_invariants(b);
  }
}

TEST(RescaledBlock, ExplicitPointsRescale) {
  auto b = rescaled_block(DilationSet::points({0.5, 2.0, 3.0, 4.0, 9.0}), 1);
  ASSERT_EQ(b.points.size(), 3u);
  EXPECT_EQ(b.points[0], 1.0);
  EXPECT_EQ(b.points[1], 1.5);
  EXPECT_EQ(b.points[2], 2.0);
  EXPECT_THROW(rescaled_block(DilationSet::points({-1.0}), 0), std::invalid_argument);
}

TEST(RescaledBlock, CapTruncationIsFlagged) {
  auto e = DilationSet::points({1.1, 1.2, 1.3, 1.4});
  e.materialization_cap = 2;
  auto b = rescaled_block(e, 0);
  EXPECT_TRUE(b.truncated);
  EXPECT_EQ(b.points.size(), 2u);

  auto s = DilationSet::power_sequence(1.0);
  s.materialization_cap = 50;
  auto bs = rescaled_block(s, 0);
  EXPECT_TRUE(bs.truncated);
  EXPECT_EQ(bs.points.size(), 50u);
  ASSERT_EQ(bs.tails.size(), 1u);
  EXPECT_GT(bs.tails[0].max_gap, 1e-9);
}

TEST(RescaledBlock, UnionDeduplicatesAndSorts) {
  auto e = DilationSet::set_union({DilationSet::power_sequence(2.0), DilationSet::lacunary(),
                                   DilationSet::points({1.25, 1.25, 2.0})});
  auto b = rescaled_block(e, 0);
  expect_block_invariants(b);
  EXPECT_TRUE(b.includes_endpoints.first);
  EXPECT_TRUE(b.includes_endpoints.second);
  EXPECT_EQ(std::count(b.points.begin(), b.points.end(), 1.25), 1);
  EXPECT_EQ(std::count(b.points.begin(), b.points.end(), 2.0), 1);
}

TEST(RescaledBlock, WithEndpointsAdjoins) {
  auto b = with_endpoints(rescaled_block(DilationSet::points({1.5}), 0));
  ASSERT_EQ(b.points.size(), 3u);
  EXPECT_TRUE(b.includes_endpoints.first && b.includes_endpoints.second);
}

TEST(SequenceRule, CountsMatchBruteForce) {
  for (const auto& rule : {SequenceRule::power(1.0), SequenceRule::power(0.5), SequenceRule::power(2.0),
                           SequenceRule::geometric(2.0), SequenceRule::inverse_log()}) {
    for (double delta : {0.9, 0.3, 0.05, 0.01, 0.0123}) {
      std::int64_t brute = 0;
      for (std::int64_t n = 1; n < 2'000'000; ++n)
        if (rule.term(n) >= delta) ++brute;
      if (rule.kind == SequenceRule::Kind::inverse_log && delta < 0.07) continue;
      EXPECT_EQ(rule.count_at_least(delta), static_cast<double>(brute)) << rule.name() << " " << delta;
    }
  }
}

TEST(SequenceRule, AccurateGaps) {
  auto r = SequenceRule::power(1.0);
  for (std::int64_t n : {1, 10, 1000, 1000000}) {
    const double exact = 1.0 / (static_cast<double>(n) * static_cast<double>(n + 1));
    EXPECT_NEAR(r.gap(n) / exact, 1.0, 1e-13);
  }
  auto c = SequenceRule::custom([](std::int64_t n) { return 1.0 / static_cast<double>(n * n); }, "square");
  EXPECT_EQ(c.count_at_least(0.01), 10.0);
}
