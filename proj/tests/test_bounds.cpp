#include <gtest/gtest.h>

#include <cmath>

#include "patternlab/patternlab.hpp"

using namespace patternlab;

TEST(ClosedForm, Constants) {
  EXPECT_NEAR(std::exp(log_a(1)), 32768.0L, 1e-6L);
  EXPECT_NEAR(c_exponent(1), 0.75L, 1e-15L);
  EXPECT_NEAR(c_exponent(2), 12.0L / 64.0L, 1e-15L);
  const auto small = thm1_bound(10, 1);
  EXPECT_EQ(small.value, 1.0L);
  EXPECT_TRUE(small.clamped);
  const auto big = thm1_bound(1e9L, 1);
  EXPECT_FALSE(big.clamped);
  EXPECT_NEAR(big.value, 32768.0L * std::pow(1e9L, -0.75L), 1e-12L);
  EXPECT_LT(thm1_bound(thm1_threshold(1) * 2, 1).value, 1.0L);
  EXPECT_THROW(thm1_bound(0.5L, 1), Error);
}

TEST(ClosedForm, DecreasingInK) {
  for (int d = 1; d <= 3; ++d) {
    long double prev = 2;
    for (long double k = 1; k < 1e30L; k *= 10) {
      const auto v = thm1_bound(k, d).value;
      EXPECT_LE(v, prev);
      prev = v;
    }
  }
}

TEST(BaseDelta1, Values) {
  EXPECT_EQ(base_delta1(1), Rational(1));
  EXPECT_EQ(base_delta1(7), Rational(1, 7));
  EXPECT_THROW(base_delta1(0), Error);
}

TEST(DifferingEnds, Examples) {
  const long double k = 1e6L;
  const long double floor = lemma22_gamma_floor(k);
  EXPECT_NEAR(floor, 16.0L * std::log(1e6L) / 1000.0L, 1e-15L);
  EXPECT_NEAR(lemma22_bound(k, 0.5L, 0.0L), 0.5L, 1e-15L);
  EXPECT_NEAR(lemma22_bound(k, 0.5L, 0.01L), 0.6L, 1e-15L);
  EXPECT_EQ(lemma22_bound(k, 0.5L, 0.25L), 1.0L);
  EXPECT_EQ(lemma22_inner_k(6400, 0.5L), 25.0L);
  try {
    lemma22_bound(100, 0.1L, 0.0L);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::GammaOutOfRange);
  }
  EXPECT_THROW(lemma22_bound(k, 1.5L, 0.0L), Error);
}

TEST(SameEnds, Terms) {
  const auto t = lemma23_terms(120, 10, 1, 1, 0.01L, 1e-9L);
  EXPECT_NEAR(t.tail, 2.0L * std::exp(-10.0L), 1e-15L);
  EXPECT_NEAR(t.first, 0.04L, 1e-15L);
  EXPECT_NEAR(t.third, 4.0L * 360.0L * 360.0L * 1e-9L, 1e-12L);
  EXPECT_NEAR(lemma23_bound(120, 10, 1, 1, 0.01L, 1e-9L), 0.04L, 1e-15L);
  const auto m = lemma23_terms(10, 120, 1, 1, 1e-9L, 0.01L, true);
  EXPECT_NEAR(m.first, t.first, 1e-15L);
  EXPECT_NEAR(m.third, t.third, 1e-12L);
  // Huge k1 saturates rather than overflowing.
  EXPECT_TRUE(std::isfinite(lemma23_terms(1e300L, 1, 4, 4, 0.1L, 0.1L).third));
  try {
    lemma23_terms(0, 5, 1, 1, 0.1L, 0.1L);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::BadSplit);
  }
}

TEST(Split, Examples) {
  const auto s = split_pattern(Pattern::parse("+--+"));
  EXPECT_EQ(s.d1, 1);
  EXPECT_EQ(s.q1.to_string(), "+-");
  EXPECT_EQ(s.q2.to_string(), "-+");
  const auto f = first_balanced_split(Pattern::parse("++--+-"));
  EXPECT_EQ(f.d1, 2);
  EXPECT_EQ(f.q1.to_string(), "++--");
  EXPECT_EQ(f.q2.to_string(), "+-");
  EXPECT_THROW(split_pattern(Pattern::parse("-+-+")), Error);
  try {
    first_balanced_split(Pattern::parse("++--"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NoSplit);
  }
}

TEST(Split, SameEndSignsAlwaysSplit) {
  for (int d = 2; d <= 6; ++d)
    for (const auto& p : balanced_patterns(d)) {
      if (p.is_plus(0) != p.is_plus(p.order() - 1)) continue;
      const auto s = split_pattern(p);
      ASSERT_GE(s.d1, 1);
      ASSERT_LT(s.d1, d);
      ASSERT_TRUE(s.q1.is_balanced());
      ASSERT_TRUE(s.q2.is_balanced());
      ASSERT_EQ(s.q1.to_string() + s.q2.to_string(), p.to_string());
    }
}

TEST(Recursive, BaseCase) {
  for (long double k : {1.0L, 2.0L, 10.0L, 12345.0L}) {
    const auto r = recursive_delta_bound(k, Pattern::parse("+-"));
    ASSERT_TRUE(r.exact.has_value());
    EXPECT_EQ(*r.exact, Rational(1, static_cast<long long>(k)));
    EXPECT_TRUE(r.valid);
  }
}

TEST(Recursive, NeverAboveClosedForm) {
  const char* patterns[] = {"+-", "++--", "+-+-", "+--+", "+++---", "+-+-+-", "++-+--"};
  for (const char* text : patterns) {
    const auto p = Pattern::parse(text);
    for (long double k = thm1_threshold(p.d()); k <= thm1_threshold(p.d()) * 1e9L; k *= 31.6L) {
      const auto r = recursive_delta_bound(k, p);
      const auto t = thm1_bound(r.k, p.d());
      EXPECT_LE(r.value, t.value * (1 + 1e-9L)) << text << " k=" << static_cast<double>(k);
    }
  }
}

TEST(Recursive, TraceForMixedEnds) {
  const auto r = recursive_delta_bound(1e6L, Pattern::parse("+--+"));
  EXPECT_FALSE(r.trace.empty());
  EXPECT_LE(r.value, 1.0L);
  EXPECT_GE(r.value, 0.0L);
  const auto o = recursive_delta_bound(1e6L, Pattern::parse("+--+"), true);
  EXPECT_LE(o.value, r.value * (1 + 1e-12L));
}

TEST(IntervalBound, Examples) {
  const auto r = thm2_bound(4096, 2);
  EXPECT_NEAR(r.value, 80.0L * 4 / 4096, 1e-15L);
  EXPECT_TRUE(r.asymptotic);
  const auto edge = thm2_bound(32, 2);
  EXPECT_EQ(edge.value, 1.0L);
  EXPECT_TRUE(edge.clamped);
  EXPECT_NEAR(thm2_bound(800, 1, 1.0L).value, 1.0L / 800, 1e-15L);
  try {
    thm2_bound(31, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::RegimeViolation);
  }
}

TEST(AlternatingBound, Examples) {
  const auto r = thm3_bound(4096, 1);
  ASSERT_TRUE(r.exact.has_value());
  EXPECT_EQ(*r.exact, Rational(1, 3));
  EXPECT_TRUE(r.asymptotic);
  EXPECT_EQ(thm3_bound(4096, 2).exact, Rational(2, 5));
  EXPECT_EQ(thm3_bound(16, 1).value, 1.0L);
  try {
    thm3_bound(4, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::RegimeViolation);
  }
  EXPECT_THROW(thm3_bound(7, 2), Error);
}

TEST(Combinatorics, Basics) {
  EXPECT_EQ(binomial(10, 5), 252);
  EXPECT_EQ(binomial(5, 7), 0);
  EXPECT_EQ(falling_factorial(5, 3), 60);
  EXPECT_THROW(falling_factorial(3, 5), Error);
}
