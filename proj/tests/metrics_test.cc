/* Copyright 2026 The detdiag Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include <random>
#include <string>

#include "detdiag/errors.h"
#include "detdiag/metrics.h"
#include "gtest/gtest.h"
#include "oracles.h"

namespace detdiag {
namespace {

std::vector<Verdict> Parse(const std::string& s) {
  std::vector<Verdict> out;
  for (char c : s) {
    out.push_back(c == 'T'   ? Verdict::kTruePositive
                  : c == 'F' ? Verdict::kFalsePositive
                             : Verdict::kIgnored);
  }
  return out;
}

PrCurve Curve(const std::string& s, std::size_t n_pos) {
  return BuildPrCurve(Parse(s), n_pos);
}

TEST(PrCurveTest, SingleTruePositive) {
  const PrCurve c = Curve("T", 1);
  EXPECT_EQ(c.recall, std::vector<double>{1.0});
  EXPECT_EQ(c.precision, std::vector<double>{1.0});
}

TEST(PrCurveTest, TpFpTp) {
  const PrCurve c = Curve("TFT", 2);
  EXPECT_EQ(c.recall, (std::vector<double>{0.5, 0.5, 1.0}));
  EXPECT_EQ(c.precision, (std::vector<double>{1.0, 0.5, 2.0 / 3.0}));
  EXPECT_EQ(c.cum_tp, (std::vector<std::size_t>{1, 1, 2}));
  EXPECT_EQ(c.cum_fp, (std::vector<std::size_t>{0, 1, 1}));
}

TEST(PrCurveTest, AllFalsePositivesAndIgnoredDropped) {
  const PrCurve c = Curve("FIFF", 3);
  ASSERT_EQ(c.size(), 3u);
  for (double r : c.recall) EXPECT_EQ(r, 0.0);
  EXPECT_EQ(Curve("TTT", 0).recall, (std::vector<double>{0, 0, 0}));
}

TEST(PrCurveTest, KeepsScores) {
  const std::vector<double> scores = {0.9, 0.8, 0.7};
  const PrCurve c = BuildPrCurve(Parse("TIF"), 1, scores);
  EXPECT_EQ(c.score, (std::vector<double>{0.9, 0.7}));
}

TEST(AveragePrecisionTest, Examples) {
  EXPECT_EQ(AveragePrecision(Curve("TTTT", 4)), 1.0);
  const double ap = AveragePrecision(Curve("TFT", 2));
  EXPECT_NEAR(ap, 0.5 * 1.0 + 0.5 * (2.0 / 3.0), 1e-15);
  EXPECT_NEAR(ap, oracle::RiemannAp("TFT", 2, std::nullopt), 1e-9);
  EXPECT_EQ(AveragePrecision(Curve("FFF", 2)), 0.0);
  EXPECT_EQ(AveragePrecision(Curve("", 2)), 0.0);
  // Partial recall without false positives.
  EXPECT_NEAR(AveragePrecision(Curve("TT", 4)), 0.5, 1e-15);
}

TEST(AveragePrecisionTest, ElevenPoint) {
  EXPECT_NEAR(AveragePrecision(Curve("TT", 2), ApMode::kElevenPoint), 1.0, 1e-15);
  EXPECT_NEAR(AveragePrecision(Curve("TFT", 2), ApMode::kElevenPoint),
              (6.0 + 5.0 * (2.0 / 3.0)) / 11.0, 1e-15);
}

TEST(NormalizedApTest, Examples) {
  for (double n_ref : {0.5, 1.0, 7.0, 100.0}) {
    EXPECT_EQ(NormalizedAveragePrecision(Curve("TTT", 3), n_ref), 1.0);
  }
  const double fp_first = NormalizedAveragePrecision(Curve("FTT", 2), 2.0);
  EXPECT_NEAR(fp_first, 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(fp_first, oracle::RiemannAp("FTT", 2, 2.0), 1e-9);
  EXPECT_EQ(NormalizedAveragePrecision(Curve("TF", 1), 1.0), 1.0);
  EXPECT_NEAR(oracle::RiemannAp("TF", 1, 1.0), 1.0, 1e-12);
}

TEST(NormalizedApTest, RejectsNonPositiveReference) {
  EXPECT_THROW(NormalizedAveragePrecision(Curve("T", 1), 0.0), DomainError);
  EXPECT_THROW(NormalizedAveragePrecision(Curve("T", 1), -2.0), DomainError);
}

std::string RandomSequence(std::mt19937& rng, int max_len = 50) {
  std::uniform_int_distribution<int> len(0, max_len), kind(0, 9);
  std::string s;
  for (int i = len(rng); i > 0; --i) {
    const int k = kind(rng);
    s += k < 4 ? 'T' : (k < 9 ? 'F' : 'I');
  }
  return s;
}

int CountTp(const std::string& s) {
  return static_cast<int>(std::count(s.begin(), s.end(), 'T'));
}

TEST(MetricsProperty, BoundedAndFpInsertionNeverHelps) {
  std::mt19937 rng(8);
  std::uniform_int_distribution<int> extra(0, 5);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::string s = RandomSequence(rng);
    const std::size_t n_pos = CountTp(s) + extra(rng);
    if (n_pos == 0) continue;
    const double ap = AveragePrecision(Curve(s, n_pos));
    const double napn = NormalizedAveragePrecision(Curve(s, n_pos), 3.0);
    EXPECT_GE(ap, 0.0);
    EXPECT_LE(ap, 1.0);
    EXPECT_GE(napn, 0.0);
    EXPECT_LE(napn, 1.0);
    for (std::size_t pos = 0; pos <= s.size(); ++pos) {
      std::string t = s;
      t.insert(pos, 1, 'F');
      EXPECT_LE(AveragePrecision(Curve(t, n_pos)), ap + 1e-15);
      EXPECT_LE(NormalizedAveragePrecision(Curve(t, n_pos), 3.0), napn + 1e-15);
    }
  }
}

TEST(MetricsProperty, NoFalsePositivesGivesRecall) {
  std::mt19937 rng(9);
  std::uniform_int_distribution<int> tps(0, 30), misses(0, 10);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = tps(rng);
    const std::size_t n_pos = n + misses(rng);
    if (n_pos == 0) continue;
    const PrCurve c = Curve(std::string(n, 'T'), n_pos);
    const double recall = static_cast<double>(n) / static_cast<double>(n_pos);
    EXPECT_NEAR(AveragePrecision(c), recall, 1e-12);
    EXPECT_NEAR(NormalizedAveragePrecision(c, 4.0), recall, 1e-12);
  }
}

TEST(MetricsProperty, PerfectIffNoFalsePositiveBeforeFullRecall) {
  std::mt19937 rng(10);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::string s = RandomSequence(rng, 12);
    const int n_pos = CountTp(s);
    if (n_pos == 0) continue;
    const std::size_t last_tp = s.find_last_of('T');
    const bool clean = s.substr(0, last_tp).find('F') == std::string::npos;
    EXPECT_EQ(AveragePrecision(Curve(s, n_pos)) == 1.0, clean) << s;
    EXPECT_EQ(NormalizedAveragePrecision(Curve(s, n_pos), 2.0) == 1.0, clean) << s;
  }
}

TEST(MetricsProperty, EnvelopeMatchesRiemannSum) {
  constexpr int kDivisors[] = {1, 2, 4, 5, 8, 10, 16, 20, 25, 40, 50};
  std::mt19937 rng(12);
  for (int trial = 0; trial < 60; ++trial) {
    const std::string s = RandomSequence(rng);
    const int tp = CountTp(s);
    int n_pos = 50;
    for (int d : kDivisors) {
      if (d >= std::max(tp, 1)) {
        n_pos = d;
        break;
      }
    }
    EXPECT_NEAR(AveragePrecision(Curve(s, n_pos)),
                oracle::RiemannAp(s, n_pos, std::nullopt), 1e-6);
    EXPECT_NEAR(NormalizedAveragePrecision(Curve(s, n_pos), 5.0),
                oracle::RiemannAp(s, n_pos, 5.0), 1e-6);
  }
}

TEST(FpDistributionTest, Examples) {
  const FpType types[] = {FpType::kLoc, FpType::kLoc, FpType::kBg, FpType::kSim};
  const std::size_t k2[] = {2};
  const auto s2 = BuildFpDistribution(types, k2);
  ASSERT_EQ(s2.size(), 1u);
  EXPECT_EQ(s2[0][FpType::kLoc], 1.0);
  EXPECT_EQ(s2[0][FpType::kBg], 0.0);

  const std::size_t k4[] = {1, 4};
  const auto s4 = BuildFpDistribution(types, k4);
  EXPECT_EQ(s4[0][FpType::kLoc], 1.0);
  EXPECT_EQ(s4[1][FpType::kLoc], 0.5);
  EXPECT_EQ(s4[1][FpType::kBg], 0.25);
  EXPECT_EQ(s4[1][FpType::kSim], 0.25);
  EXPECT_EQ(s4[1][FpType::kOth], 0.0);
}

TEST(FpDistributionTest, ScheduleErrors) {
  const FpType types[] = {FpType::kLoc, FpType::kBg};
  const std::size_t not_increasing[] = {2, 2};
  const std::size_t too_long[] = {1, 3};
  const std::size_t zero[] = {0, 1};
  EXPECT_THROW(BuildFpDistribution(types, not_increasing), ScheduleError);
  EXPECT_THROW(BuildFpDistribution(types, too_long), ScheduleError);
  EXPECT_THROW(BuildFpDistribution(types, zero), ScheduleError);
  EXPECT_TRUE(BuildFpDistribution(types, {}).empty());
}

TEST(FpDistributionProperty, FractionsSumToOne) {
  std::mt19937 rng(13);
  std::uniform_int_distribution<int> len(1, 300), type(0, 3);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<FpType> types(len(rng));
    for (FpType& t : types) t = static_cast<FpType>(type(rng));
    const auto schedule = DefaultSchedule(20, types.size());
    for (const auto& e : BuildFpDistribution(types, schedule)) {
      double sum = 0.0;
      for (double f : e.fractions) sum += f;
      EXPECT_NEAR(sum, 1.0, 1e-12);
    }
  }
}

TEST(DefaultScheduleTest, LogSpacedAndClamped) {
  const auto s = DefaultSchedule(20, 1000);
  ASSERT_EQ(s.size(), 8u);
  EXPECT_EQ(s.front(), 25u);
  EXPECT_EQ(s.back(), 1000u);
  EXPECT_TRUE(std::is_sorted(s.begin(), s.end()));
  EXPECT_EQ(DefaultSchedule(20, 10), std::vector<std::size_t>{10});
  EXPECT_TRUE(DefaultSchedule(20, 0).empty());
  const auto small = DefaultSchedule(4, 12);  // starts at 5
  EXPECT_EQ(small.front(), 5u);
  EXPECT_EQ(small.back(), 12u);
  EXPECT_EQ(ClampSchedule(std::vector<std::size_t>{1, 5, 50}, 10),
            (std::vector<std::size_t>{1, 5}));
}

TEST(DefaultReferenceCountTest, RoundsUp) {
  EXPECT_EQ(DefaultReferenceCount(10, 3), 4u);
  EXPECT_EQ(DefaultReferenceCount(9, 3), 3u);
  EXPECT_EQ(DefaultReferenceCount(0, 3), 1u);
  EXPECT_EQ(DefaultReferenceCount(5, 0), 1u);
}

}  // namespace
}  // namespace detdiag
