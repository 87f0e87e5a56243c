#include <gtest/gtest.h>

#include <cmath>

#include "pacsafe/bounds.hpp"
#include "pacsafe/errors.hpp"

using namespace pacsafe;

namespace {

// Direct evaluation of 2 h (d + ln h), kept apart from the library.
double bound(double h, double d) { return 2.0 * h * (d + std::log(h)); }

}  // namespace

TEST(RequiredSamples, Examples) {
  EXPECT_EQ(required_samples(1.83, 272), 998u);
  EXPECT_NEAR(sample_bound(1.83, 272), 997.7, 0.05);
  EXPECT_EQ(required_samples(std::exp(1.0), 0), 6u);
  EXPECT_EQ(required_samples(25.0, 17), 1011u);
  EXPECT_EQ(required_samples(2.0, 0), 3u);
}

TEST(RequiredSamples, RejectsVacuousConfidence) {
  EXPECT_THROW(required_samples(1.0, 10), ValidationError);
  EXPECT_THROW(required_samples(0.5, 10), ValidationError);
  EXPECT_THROW(required_samples(std::nan(""), 10), ValidationError);
}

TEST(RequiredSamples, MonotoneInBothArguments) {
  std::uint64_t previous = 0;
  for (double h = 1.1; h < 200; h *= 1.3) {
    auto l = required_samples(h, 50);
    EXPECT_GE(l, previous);
    previous = l;
  }
  previous = 0;
  for (std::uint64_t d = 0; d < 5000; d += 37) {
    auto l = required_samples(4.0, d);
    EXPECT_GE(l, previous);
    previous = l;
  }
}

TEST(RequiredSamples, HugeCountsUseWidePrecision) {
  BigInt d = ipow(3, 60);
  double expected = bound(2.0, d.convert_to<double>());
  EXPECT_NEAR(sample_bound(2.0, d) / expected, 1.0, 1e-12);
  EXPECT_THROW(required_samples(2.0, ipow(10, 40)), ResourceError);
}

TEST(SolveH, TableConfidences) {
  const std::pair<int, double> cases[] = {{17, 0.96}, {41, 0.91},  {99, 0.80}, {23, 0.95},
                                          {71, 0.85}, {207, 0.58}, {952, 0.0}, {988, 0.0}};
  for (auto [d, confidence] : cases) {
    auto p = solve_h(1000, d);
    EXPECT_NEAR(p.confidence, confidence, 0.01) << "d=" << d;
    EXPECT_NEAR(bound(p.h, d), 1000.0, 1e-6 * 1000) << "d=" << d;
    EXPECT_EQ(p.samples, 1000u);
    EXPECT_EQ(p.d, d);
  }
}

TEST(SolveH, VacuousWhenBelowOne) {
  auto p = solve_h(1000, 952);
  EXPECT_LT(p.h, 1.0);
  EXPECT_EQ(p.confidence, 0.0);
}

TEST(SolveH, ZeroCountAndValidation) {
  auto p = solve_h(6, 0);
  EXPECT_NEAR(bound(p.h, 0), 6.0, 1e-8);
  EXPECT_THROW(solve_h(0, 5), ValidationError);
}

TEST(SolveH, RoundTripWithRequiredSamples) {
  for (double h : {1.2, 1.83, 2.5, 7.0, 25.0, 140.0}) {
    for (std::uint64_t d : {0u, 1u, 17u, 272u, 4000u}) {
      auto l = required_samples(h, d);
      auto p = solve_h(l, d);
      const double slack = 1.0 / (2.0 * (static_cast<double>(d) + std::log(h))) + 1e-8 * h;
      EXPECT_GE(p.h, h - 1e-8 * h);
      EXPECT_LE(p.h, h + std::abs(slack)) << "h=" << h << " d=" << d;
    }
  }
}

TEST(SolveH, ConfidenceMonotone) {
  double previous = 2.0;
  for (std::uint64_t d = 0; d < 2000; d += 13) {
    double c = solve_h(1000, d).confidence;
    EXPECT_LE(c, previous);
    previous = c;
  }
  previous = -1.0;
  for (std::uint64_t l = 50; l < 100000; l = l * 3 / 2) {
    double c = solve_h(l, 40).confidence;
    EXPECT_GE(c, previous);
    previous = c;
  }
}

TEST(Confidence, ClampAndInverse) {
  EXPECT_EQ(confidence_of(0.5), 0.0);
  EXPECT_EQ(confidence_of(1.0), 0.0);
  EXPECT_DOUBLE_EQ(confidence_of(4.0), 0.75);
  for (double c : {0.1, 0.5, 0.9, 0.99}) EXPECT_NEAR(confidence_of(h_for_confidence(c)), c, 1e-12);
  EXPECT_THROW(h_for_confidence(1.0), ValidationError);
  EXPECT_THROW(h_for_confidence(0.0), ValidationError);
}

TEST(SafetyProbability, Examples) {
  EXPECT_DOUBLE_EQ(safety_probability(272, 4, 5), 0.265625);
  EXPECT_NEAR(safety_probability(17, 3, 3), 0.63, 0.005);
  EXPECT_EQ(safety_probability(0, 3, 3), 0.0);
  EXPECT_EQ(safety_probability(27, 3, 3), 1.0);
  EXPECT_THROW(safety_probability(28, 3, 3), ValidationError);
}

TEST(SafetyProbability, StaysInUnitIntervalForHugeHorizons) {
  BigInt total = ipow(3, 200);
  double p = safety_probability(total / 7, 3, 200);
  EXPECT_NEAR(p, 1.0 / 7.0, 1e-12);
  EXPECT_EQ(safety_probability(total, 3, 200), 1.0);
}
