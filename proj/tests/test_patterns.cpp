#include <gtest/gtest.h>

#include "oracles.hpp"
#include "patternlab/patternlab.hpp"

using namespace patternlab;

namespace {

SubsetWord set(int n, std::initializer_list<int> e) { return SubsetWord::from_elements(n, e); }

}  // namespace

TEST(SubsetWord, ParseAndPrint) {
  const auto a = SubsetWord::parse("1,3,4", 5);
  EXPECT_EQ(a.bits(), 0b1101u);
  EXPECT_EQ(a.size(), 3);
  EXPECT_EQ(a.to_string(), "1,3,4");
  EXPECT_EQ(SubsetWord::parse("0x0d", 5), a);
  EXPECT_EQ(SubsetWord::parse("{1, 3,4}", 5), a);
  EXPECT_EQ(SubsetWord(4, 0).to_string(), "{}");
  EXPECT_EQ(SubsetWord::parse("{}", 4).bits(), 0u);
  EXPECT_THROW(SubsetWord::parse("0,1", 4), Error);
  EXPECT_THROW(SubsetWord::parse("5", 4), Error);
  EXPECT_THROW(SubsetWord::parse("0x10", 4), Error);
  EXPECT_THROW(SubsetWord::parse("1,", 4), Error);
}

TEST(SubsetWord, GroundBounds) {
  EXPECT_THROW(SubsetWord(0, 0), Error);
  EXPECT_THROW(SubsetWord(65, 0), Error);
  EXPECT_THROW(SubsetWord(3, 0b1000), Error);
  EXPECT_NO_THROW(SubsetWord(64, ~std::uint64_t{0}));
  EXPECT_EQ(SubsetWord(64, ~std::uint64_t{0}).size(), 64);
}

TEST(Pattern, ParseAndStatistics) {
  const auto p = Pattern::parse("++-+");
  EXPECT_EQ(p.order(), 4);
  EXPECT_EQ(p.s_plus(), 3);
  EXPECT_EQ(p.s_minus(), 1);
  EXPECT_FALSE(p.is_balanced());
  EXPECT_TRUE(Pattern::parse("+-+-").is_balanced());
  EXPECT_EQ(Pattern::parse("+-+-").d(), 2);
  EXPECT_EQ(Pattern::parse("+\xE2\x88\x92\xE2\x88\x92+").to_string(), "+--+");
  EXPECT_THROW(Pattern::parse(""), Error);
  EXPECT_THROW(Pattern::parse("+x"), Error);
}

TEST(Pat, Examples) {
  EXPECT_EQ(pat(set(4, {1, 2}), set(4, {3, 4})).to_string(), "++--");
  EXPECT_EQ(pat(set(4, {1, 3}), set(4, {2, 4})).to_string(), "+-+-");
  EXPECT_EQ(pat(set(4, {2}), set(4, {1, 3, 4})).to_string(), "-+--");
}

TEST(Pat, Errors) {
  try {
    pat(set(4, {1}), set(4, {1}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::EmptyDifference);
  }
  try {
    pat(set(4, {1}), set(5, {2}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::GroundMismatch);
  }
}

TEST(Pat, MatchesOracleExhaustively) {
  for (int n = 1; n <= 6; ++n)
    for (std::uint64_t a = 0; a < (1u << n); ++a)
      for (std::uint64_t b = 0; b < (1u << n); ++b) {
        if (a == b) continue;
        EXPECT_EQ(pat(SubsetWord(n, a), SubsetWord(n, b)).to_string(), oracle::pattern_of(a, b, n));
      }
}

TEST(Pat, Symmetries) {
  const int n = 7;
  const std::uint64_t full = low_mask(n);
  for (std::uint64_t a = 0; a <= full; ++a)
    for (std::uint64_t b = 0; b <= full; ++b) {
      if (a == b) continue;
      const SubsetWord x(n, a);
      const SubsetWord y(n, b);
      const Pattern p = pat(x, y);
      ASSERT_EQ(pat(y, x), negate(p));
      const SubsetWord rx(n, detail::reverse_low_bits(a, n));
      const SubsetWord ry(n, detail::reverse_low_bits(b, n));
      ASSERT_EQ(pat(rx, ry), reverse(p));
      ASSERT_EQ(pat(SubsetWord(n, full & ~a), SubsetWord(n, full & ~b)), pat(y, x));
      ASSERT_EQ(p.order(), std::popcount(a ^ b));
      ASSERT_EQ(p.is_balanced(), std::popcount(a) == std::popcount(b));
    }
}

TEST(PatternAlgebra, NegateReverse) {
  EXPECT_EQ(negate(Pattern::parse("++--")).to_string(), "--++");
  EXPECT_EQ(reverse(Pattern::parse("++--")).to_string(), "--++");
  EXPECT_EQ(reverse(Pattern::parse("+-+-")).to_string(), "-+-+");
  for (int d = 1; d <= 4; ++d)
    for (const auto& p : balanced_patterns(d)) {
      EXPECT_EQ(negate(negate(p)), p);
      EXPECT_EQ(reverse(reverse(p)), p);
    }
}

TEST(PatternAlgebra, IntervalAndAlternating) {
  EXPECT_EQ(interval_pattern(1).to_string(), "+-");
  EXPECT_EQ(interval_pattern(2).to_string(), "++--");
  EXPECT_EQ(interval_pattern(3).to_string(), "+++---");
  EXPECT_EQ(alternating_pattern(1).to_string(), "+-");
  EXPECT_EQ(alternating_pattern(2).to_string(), "+-+-");
  EXPECT_EQ(alternating_pattern(3).to_string(), "+-+-+-");
  EXPECT_EQ(balanced_patterns(3).size(), 20u);
}

TEST(IsPFree, Examples) {
  const Family f = {set(4, {1, 2}), set(4, {3, 4})};
  EXPECT_FALSE(is_p_free(f, Pattern::parse("++--")));
  EXPECT_TRUE(is_p_free(f, Pattern::parse("+-+-")));
  const Family single = {set(4, {2, 3})};
  EXPECT_TRUE(is_p_free(single, Pattern::parse("+-")));
  const Family mixed = {set(4, {1}), set(5, {2})};
  EXPECT_THROW(is_p_free(mixed, Pattern::parse("+-")), Error);
}

TEST(IsPFree, NegationInvariantAndOracle) {
  const int n = 5;
  Rng rng(11, 0);
  for (int trial = 0; trial < 300; ++trial) {
    Family f;
    std::vector<std::uint64_t> raw;
    for (std::uint64_t s = 0; s < 32; ++s)
      if (rng.below(4) == 0) {
        f.emplace_back(n, s);
        raw.push_back(s);
      }
    for (int d = 1; d <= 2; ++d)
      for (const auto& p : balanced_patterns(d)) {
        ASSERT_EQ(is_p_free(f, p), is_p_free(f, negate(p)));
        ASSERT_EQ(is_p_free(f, p), oracle::is_free(raw, n, p.to_string()));
      }
  }
}
