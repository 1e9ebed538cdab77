#include "owl/weights.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace owl {
namespace {

TEST(WeightVector, CachesGapMeanAndMax) {
  const WeightVector w(std::vector<double>{3.0, 2.0, 0.5});
  EXPECT_DOUBLE_EQ(w.delta(), 1.0);
  EXPECT_DOUBLE_EQ(w.mean(), 5.5 / 3.0);
  EXPECT_DOUBLE_EQ(w.max(), 3.0);
  EXPECT_DOUBLE_EQ(w.max_over_mean(), 3.0 / (5.5 / 3.0));
}

TEST(WeightVector, SingleEntryGapIsLeadingWeight) {
  const WeightVector w(std::vector<double>{0.7});
  EXPECT_DOUBLE_EQ(w.delta(), 0.7);
}

TEST(WeightVector, RejectsInvalidSequences) {
  EXPECT_THROW(WeightVector(std::vector<double>{}), std::invalid_argument);
  EXPECT_THROW(WeightVector(std::vector<double>{1.0, 2.0}), std::invalid_argument);
  EXPECT_THROW(WeightVector(std::vector<double>{1.0, -0.1}), std::invalid_argument);
  EXPECT_THROW(WeightVector(std::vector<double>{0.0, 0.0}), std::invalid_argument);
  EXPECT_THROW(WeightVector(std::vector<double>{NAN}), std::invalid_argument);
  EXPECT_THROW(WeightVector(std::vector<double>{INFINITY, 1.0}), std::invalid_argument);
  EXPECT_NO_THROW(WeightVector(std::vector<double>{1.0, 0.0}));
}

TEST(WeightVector, ScaledMultipliesEveryEntry) {
  const WeightVector w = oscar_weights(3, 1.0, 1.0).scaled(0.5);
  EXPECT_DOUBLE_EQ(w[0], 1.5);
  EXPECT_DOUBLE_EQ(w[2], 0.5);
  EXPECT_THROW(w.scaled(0.0), std::invalid_argument);
}

TEST(OscarWeights, LinearDecay) {
  const WeightVector w = oscar_weights(4, 1.0, 0.5);
  EXPECT_DOUBLE_EQ(w[0], 2.5);
  EXPECT_DOUBLE_EQ(w[1], 2.0);
  EXPECT_DOUBLE_EQ(w[2], 1.5);
  EXPECT_DOUBLE_EQ(w[3], 1.0);
  EXPECT_DOUBLE_EQ(w.delta(), 0.5);
}

TEST(OscarWeights, ZeroSlopeIsUniform) {
  const WeightVector w = oscar_weights(3, 2.0, 0.0);
  EXPECT_EQ(w.values(), Vector::Constant(3, 2.0));
  EXPECT_DOUBLE_EQ(w.delta(), 0.0);
}

TEST(OscarWeights, VanishingLeadingWeightThrows) {
  EXPECT_THROW(oscar_weights(1, 0.0, 1.0), std::invalid_argument);
  EXPECT_THROW(oscar_weights(3, 0.0, 0.0), std::invalid_argument);
  EXPECT_THROW(oscar_weights(0, 1.0, 1.0), std::invalid_argument);
}

TEST(OscarWeights, LeadingOverMeanAtMostTwo) {
  for (std::size_t p = 1; p <= 50; ++p) {
    for (double l1 : {0.0, 0.1, 1.0}) {
      if (p == 1 && l1 == 0.0) {
        continue;  // single zero weight, rejected
      }
      const WeightVector w = oscar_weights(p, l1, 0.3);
      EXPECT_LE(w.max_over_mean(), 2.0 + 1e-12);
      EXPECT_GE(w.max_over_mean(), 1.0 - 1e-12);
    }
  }
}

TEST(MinGap, Examples) {
  EXPECT_DOUBLE_EQ(min_gap(WeightVector(std::vector<double>{3, 2, 1})), 1.0);
  EXPECT_DOUBLE_EQ(min_gap(WeightVector(std::vector<double>{2, 2, 2})), 0.0);
  EXPECT_DOUBLE_EQ(min_gap(oscar_weights(5, 0.0, 0.25)), 0.25);
}

// Reference quantiles from a high-precision table.
TEST(NormalQuantile, MatchesTable) {
  EXPECT_NEAR(normal_quantile(0.5), 0.0, 1e-15);
  EXPECT_NEAR(normal_quantile(0.75), 0.674489750196081743, 1e-12);
  EXPECT_NEAR(normal_quantile(0.875), 1.15034938037600817, 1e-12);
  EXPECT_NEAR(normal_quantile(0.95), 1.64485362695147271, 1e-12);
  EXPECT_NEAR(normal_quantile(0.975), 1.95996398454005423, 1e-12);
  EXPECT_NEAR(normal_quantile(0.999), 3.09023230616781436, 1e-11);
  EXPECT_NEAR(normal_quantile(1e-10), -6.36134090240406272, 1e-9);
  EXPECT_NEAR(normal_quantile(0.025), -1.95996398454005423, 1e-12);
  EXPECT_THROW(normal_quantile(0.0), std::invalid_argument);
  EXPECT_THROW(normal_quantile(1.0), std::invalid_argument);
}

TEST(SlopeWeights, Examples) {
  const WeightVector one = slope_weights(1, 0.1);
  EXPECT_NEAR(one[0], 1.6449, 1e-4);
  const WeightVector two = slope_weights(2, 0.5);
  EXPECT_NEAR(two[0], 1.1503, 1e-4);
  EXPECT_NEAR(two[1], 0.6745, 1e-4);
}

TEST(SlopeWeights, StrictlyDecreasing) {
  for (std::size_t p : {2u, 7u, 64u, 500u}) {
    for (double q : {0.01, 0.1, 0.5, 0.9}) {
      const WeightVector w = slope_weights(p, q);
      for (Eigen::Index i = 1; i < w.size(); ++i) {
        EXPECT_LT(w[i], w[i - 1]);
      }
    }
  }
}

TEST(SlopeWeights, RejectsOutOfRangeLevel) {
  EXPECT_THROW(slope_weights(3, 0.0), std::invalid_argument);
  EXPECT_THROW(slope_weights(3, 1.0), std::invalid_argument);
  EXPECT_THROW(slope_weights(3, -0.5), std::invalid_argument);
}

TEST(UniformWeights, Constant) {
  const WeightVector w = uniform_weights(4, 0.3);
  EXPECT_EQ(w.values(), Vector::Constant(4, 0.3));
  EXPECT_THROW(uniform_weights(4, 0.0), std::invalid_argument);
}

}  // namespace
}  // namespace owl
