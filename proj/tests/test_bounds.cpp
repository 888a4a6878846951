#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include <safegp/safegp.hpp>

#include "oracles.hpp"

using namespace safegp;

TEST(Normal, CdfAndTail) {
  EXPECT_DOUBLE_EQ(normal_cdf(0.0), 0.5);
  EXPECT_NEAR(normal_sf(2.0), 0.022750131948179209, 1e-15);
  EXPECT_NEAR(normal_cdf(-2.0), 0.022750131948179209, 1e-15);
  EXPECT_GT(normal_sf(30.0), 0.0);
}

TEST(Normal, QuantileMatchesBisection) {
  for (double p : {1e-12, 1e-6, 0.001, 0.02425, 0.1, 0.3, 0.5, 0.7, 0.969603644907, 0.999, 1 - 1e-9}) {
    // erfc near 1 is too coarse for bisection; use the lower tail instead.
    const double ref = p > 0.5 ? -oracle::phi_quantile(1.0 - p) : oracle::phi_quantile(p);
    EXPECT_NEAR(normal_quantile(p), ref, 1e-9) << "p = " << p;
  }
  EXPECT_EQ(normal_quantile(0.0), -std::numeric_limits<double>::infinity());
  EXPECT_EQ(normal_quantile(1.0), std::numeric_limits<double>::infinity());
  EXPECT_THROW(normal_quantile(1.5), InputError);
  EXPECT_THROW(normal_quantile(-0.1), InputError);
}

TEST(Normal, QuantileInvertsCdf) {
  for (int i = 1; i < 1000; ++i) {
    const double p = i / 1000.0;
    EXPECT_NEAR(normal_cdf(normal_quantile(p)), p, 1e-12);
  }
}

TEST(Okamoto, HandEvaluatedRadius) {
  EXPECT_NEAR(okamoto_radius(100, 1, 0.01), 0.31946425429017365, 1e-13);
  EXPECT_NEAR(okamoto_radius(100, 1, 0.05), 0.26432678925998917, 1e-13);
}

TEST(Okamoto, LogArgumentOfOneIsOutsideDomain) {
  // 6 eps / (pi^2 r^2) = 1 needs eps = pi^2 r^2 / 6 > 1, which the epsilon
  // precondition already excludes.
  EXPECT_THROW(okamoto_radius(100, 1, std::numbers::pi * std::numbers::pi / 6.0), InputError);
}

TEST(Okamoto, DoublingShrinksBySqrtTwo) {
  for (int r = 1; r < 10; ++r) {
    const double a = okamoto_radius(100u << r, r, 0.05);
    const double b = okamoto_radius(200u << r, r, 0.05);
    EXPECT_NEAR(b, a / std::sqrt(2.0), 1e-15);
    EXPECT_LT(b, a);
  }
}

TEST(Okamoto, RejectsBadArguments) {
  EXPECT_THROW(okamoto_radius(0, 1, 0.05), InputError);
  EXPECT_THROW(okamoto_radius(10, 0, 0.05), InputError);
  EXPECT_THROW(okamoto_radius(10, 1, 0.0), InputError);
  EXPECT_THROW(okamoto_radius(10, 1, 1.0), InputError);
}

TEST(MedianLevels, TableExample) {
  EXPECT_NEAR(median_confidence(1, 0.05), 0.96960364490729867, 1e-15);
  const auto lv = median_quantile_levels(100, 1, 0.05);
  ASSERT_TRUE(lv.has_value());
  EXPECT_NEAR(lv->lower, 0.40624999514978781, 1e-9);
  EXPECT_NEAR(lv->upper, 0.59375000485021219, 1e-9);
}

TEST(MedianLevels, ConvergeToHalf) {
  const auto big = median_quantile_levels(100'000'000, 1, 0.05);
  ASSERT_TRUE(big);
  EXPECT_NEAR(big->lower, 0.5, 1e-4);
  EXPECT_NEAR(big->upper, 0.5, 1e-4);
  // chi just above 1/2: eps = pi^2 / 12 * (1 - tiny) at r = 1.
  const double eps = std::numbers::pi * std::numbers::pi / 12.0 * (1.0 - 1e-9);
  const auto near_half = median_quantile_levels(1000, 1, eps);
  ASSERT_TRUE(near_half);
  EXPECT_NEAR(near_half->lower, 0.5, 1e-6);
  EXPECT_LE(near_half->lower, 0.5);
  EXPECT_GE(near_half->upper, 0.5);
}

TEST(MedianLevels, InsufficientSamples) {
  EXPECT_FALSE(median_quantile_levels(1, 1, 0.05).has_value());
  EXPECT_FALSE(median_quantile_levels(2, 1, 0.05).has_value());
  EXPECT_THROW(median_quantile_levels(100, 1, 0.9), InputError);  // chi < 1/2
}

TEST(EmpiricalQuantile, OrderStatisticDefinition) {
  const std::vector<double> five{5, 3, 1, 4, 2};
  EXPECT_EQ(empirical_quantile(five, 0.5), 2.0);
  const std::vector<double> one{7};
  EXPECT_EQ(empirical_quantile(one, 1.0), 7.0);
  const std::vector<double> three{3, 1, 2};
  EXPECT_EQ(empirical_quantile(three, 0.34), 1.0);
  EXPECT_FALSE(empirical_quantile(three, 0.2).has_value());
}

TEST(EmpiricalQuantile, MatchesSortOracle) {
  std::mt19937_64 eng(1);
  std::normal_distribution<double> nd;
  std::vector<double> v(1001);
  for (double& x : v) x = nd(eng);
  for (double beta : {0.01, 0.25, 0.4063, 0.5, 0.5937, 0.99, 1.0}) {
    EXPECT_EQ(*empirical_quantile(v, beta), oracle::order_stat(v, beta));
  }
}

TEST(BorellTail, Examples) {
  EXPECT_DOUBLE_EQ(borell_tail(0.0, 1.0, BorellKind::B1), 0.5);
  EXPECT_DOUBLE_EQ(borell_tail(0.0, 1.0, BorellKind::B2), 0.5);
  EXPECT_DOUBLE_EQ(borell_tail(0.0, 1.0, BorellKind::B3), 1.0);
  EXPECT_NEAR(borell_tail(1.0, 0.5, BorellKind::B1), 0.022750131948179209, 1e-15);
  EXPECT_NEAR(borell_tail(1.0, 0.5, BorellKind::B2), 0.067667641618306346, 1e-15);
  EXPECT_LT(borell_tail(100.0, 1.0, BorellKind::B3), 1e-300);
  EXPECT_THROW(borell_tail(-0.1, 1.0, BorellKind::B1), InputError);
  EXPECT_THROW(borell_tail(0.1, 0.0, BorellKind::B2), InputError);
}

TEST(BorellTail, ChainOrdering) {
  for (int i = 0; i <= 400; ++i) {
    const double u = i * 0.02;
    const double b1 = borell_tail(u, 0.7, BorellKind::B1);
    const double b2 = borell_tail(u, 0.7, BorellKind::B2);
    const double b3 = borell_tail(u, 0.7, BorellKind::B3);
    EXPECT_LE(b1, b2);
    EXPECT_LE(b2, b3);
    if (u > 0.0) EXPECT_LT(b1, b2);
  }
}

TEST(BorellPointBound, Examples) {
  EXPECT_DOUBLE_EQ(*borell_point_bound(1.0, 0.3), 0.5);
  EXPECT_NEAR(*borell_point_bound(0.0, 0.5), 0.022750131948179209, 1e-15);
  EXPECT_EQ(*borell_point_bound(0.2, 1e-13), 0.0);
  EXPECT_LT(*borell_point_bound(0.2, 1e-3), 1e-100);
  EXPECT_FALSE(borell_point_bound(1.01, 0.5).has_value());
}

TEST(Schedule, DoublingSizes) {
  SamplingSchedule s;
  EXPECT_EQ(s.size(0), 0u);
  EXPECT_EQ(s.size(1), 100u);
  EXPECT_EQ(s.size(5), 1600u);
  EXPECT_EQ(s.size(14), 819200u);
  SamplingSchedule flat{100, 1.0, 3};
  EXPECT_THROW(flat.validate(), InputError);
  SamplingSchedule none{0, 2.0, 3};
  EXPECT_THROW(none.validate(), InputError);
}
