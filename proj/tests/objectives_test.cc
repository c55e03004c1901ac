// Copyright 2026 The ppgsearch Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ppgsearch/objectives.h"

#include <cmath>
#include <stdexcept>

#include <gtest/gtest.h>

#include "oracles.h"

namespace ppgsearch {
namespace {

QueryInstance MakeInstance(std::vector<int> grades, std::vector<int> groups) {
  QueryInstance instance;
  instance.query_id = "q";
  for (size_t k = 0; k < grades.size(); ++k) {
    instance.items.push_back(
        {"d" + std::to_string(k + 1), grades[k], grades[k], groups[k]});
  }
  return instance;
}

const ExposureModel kLog;

TEST(ExposureTest, Discounts) {
  EXPECT_DOUBLE_EQ(kLog.Discount(1), 1.0);
  EXPECT_DOUBLE_EQ(kLog.Discount(3), 0.5);
  const ExposureModel geometric{ExposureKind::kGeometric, 0.5};
  EXPECT_DOUBLE_EQ(geometric.Discount(1), 1.0);
  EXPECT_DOUBLE_EQ(geometric.Discount(3), 0.25);
}

TEST(ExposureTest, ExpectedExposureAveragesSessions) {
  const RankingPolicy single{{Permutation{0, 1, 2}}};
  EXPECT_DOUBLE_EQ(ExpectedExposure(single, kLog)[0], 1.0);
  const RankingPolicy two{{Permutation{0, 1, 2}, Permutation{1, 2, 0}}};
  EXPECT_DOUBLE_EQ(ExpectedExposure(two, kLog)[0], 0.75);
}

TEST(TargetExposureTest, Examples) {
  const auto distinct = TargetExposure(MakeInstance({1, 4, 2}, {0, 0, 1}), kLog);
  EXPECT_DOUBLE_EQ(distinct[1], kLog.Discount(1));
  EXPECT_DOUBLE_EQ(distinct[2], kLog.Discount(2));
  EXPECT_DOUBLE_EQ(distinct[0], kLog.Discount(3));

  const auto tied = TargetExposure(MakeInstance({4, 4, 1}, {0, 1, 0}), kLog);
  EXPECT_NEAR(tied[0], (1.0 + 1.0 / std::log2(3.0)) / 2, 1e-15);
  EXPECT_NEAR(tied[0], 0.8155, 1e-4);
  EXPECT_DOUBLE_EQ(tied[0], tied[1]);

  const auto equal = TargetExposure(MakeInstance({2, 2, 2, 2}, {0, 1, 0, 1}), kLog);
  const double mean =
      (kLog.Discount(1) + kLog.Discount(2) + kLog.Discount(3) + kLog.Discount(4)) / 4;
  for (double e : equal) EXPECT_NEAR(e, mean, 1e-15);
}

TEST(EelTest, Examples) {
  const QueryInstance distinct = MakeInstance({3, 0, 4, 1}, {0, 1, 1, 0});
  EXPECT_EQ(Eel(RankingPolicy{{Permutation{2, 0, 3, 1}}}, distinct, kLog), 0.0);

  const QueryInstance one_group = MakeInstance({3, 0, 4}, {5, 5, 5});
  EXPECT_NEAR(Eel(RankingPolicy{{Permutation{1, 0, 2}}}, one_group, kLog), 0.0,
              1e-15);

  const QueryInstance tied = MakeInstance({2, 2}, {0, 1});
  EXPECT_NEAR(Eel(RankingPolicy{{Permutation{0, 1}, Permutation{1, 0}}}, tied, kLog),
              0.0, 1e-15);
  EXPECT_GT(Eel(RankingPolicy{{Permutation{0, 1}}}, tied, kLog), 0.0);
}

TEST(EelTest, MeanAggregationDividesByGroupSize) {
  const QueryInstance instance = MakeInstance({4, 3, 0}, {0, 0, 1});
  const RankingPolicy policy{{Permutation{2, 1, 0}}};
  const auto e = ExpectedExposure(policy, kLog);
  const auto t = TargetExposure(instance, kLog);
  const double g0 = (e[0] + e[1] - t[0] - t[1]) / 2;
  const double g1 = e[2] - t[2];
  EXPECT_NEAR(Eel(policy, instance, kLog, GroupAggregation::kMean),
              std::sqrt(g0 * g0 + g1 * g1), 1e-15);
}

TEST(DtrTest, Examples) {
  const QueryInstance instance = MakeInstance({4, 2}, {0, 1});
  const double dtr = Dtr(RankingPolicy{{Permutation{0, 1}}}, instance, kLog);
  EXPECT_NEAR(dtr, (1.0 / std::log2(3.0) / 2) / 0.25, 1e-15);
  EXPECT_NEAR(dtr, 1.2619, 1e-4);

  const QueryInstance equal = MakeInstance({3, 3}, {0, 1});
  EXPECT_DOUBLE_EQ(
      Dtr(RankingPolicy{{Permutation{0, 1}, Permutation{1, 0}}}, equal, kLog), 1.0);
}

TEST(DtrTest, ScaleInvariantInUtilities) {
  const QueryInstance a = MakeInstance({2, 1, 1, 0}, {0, 1, 0, 1});
  const QueryInstance b = MakeInstance({4, 2, 2, 0}, {0, 1, 0, 1});
  const RankingPolicy policy{{Permutation{3, 0, 2, 1}}};
  EXPECT_NEAR(Dtr(policy, a, kLog), Dtr(policy, b, kLog), 1e-15);
}

TEST(DtrTest, Errors) {
  EXPECT_THROW(Dtr(RankingPolicy{{Permutation{0, 1}}}, MakeInstance({2, 0}, {0, 1}),
                   kLog),
               std::domain_error);
  EXPECT_THROW(Dtr(RankingPolicy{{Permutation{0, 1, 2}}},
                   MakeInstance({2, 1, 3}, {0, 1, 2}), kLog),
               std::invalid_argument);
}

TEST(NdcgTest, Examples) {
  const QueryInstance instance = MakeInstance({4, 0}, {0, 1});
  EXPECT_DOUBLE_EQ(NdcgAtK(Permutation{0, 1}, instance), 1.0);
  EXPECT_NEAR(NdcgAtK(Permutation{1, 0}, instance), 1.0 / std::log2(3.0), 1e-15);
  EXPECT_NEAR(NdcgAtK(Permutation{1, 0}, instance), 0.6309, 1e-4);
  EXPECT_DOUBLE_EQ(NdcgAtK(Permutation{1, 0}, MakeInstance({0, 0}, {0, 1})), 1.0);
  const RankingPolicy policy{{Permutation{0, 1}, Permutation{1, 0}}};
  EXPECT_NEAR(NdcgAtK(policy, instance), (1.0 + 1.0 / std::log2(3.0)) / 2, 1e-15);
}

TEST(NdcgTest, CutoffIgnoresLowerRanks) {
  std::vector<int> grades(12, 0);
  grades[11] = 3;
  const QueryInstance instance = MakeInstance(grades, std::vector<int>(12, 0));
  EXPECT_EQ(NdcgAtK(Permutation::Identity(12), instance), 0.0);
}

TEST(SplitSessionsTest, ByItemIdentity) {
  const RankingPolicy policy = SplitSessions(Permutation{4, 0, 3, 2, 5, 1}, 3, 2);
  ASSERT_EQ(policy.sessions.size(), 2u);
  EXPECT_EQ(policy.sessions[0], (Permutation{0, 2, 1}));
  EXPECT_EQ(policy.sessions[1], (Permutation{1, 0, 2}));
  EXPECT_THROW(SplitSessions(Permutation{0, 1, 2}, 2, 2), std::invalid_argument);
}

TEST(MakeObjectiveTest, EelAtIdealIsZeroAndDtrIsShifted) {
  const QueryInstance instance = MakeInstance({1, 4, 3, 0}, {0, 1, 0, 1});
  const Objective eel = MakeObjective(FairnessMetric::kEel, instance, 1, kLog);
  EXPECT_EQ(eel.n, 4);
  EXPECT_EQ(eel.evaluate(Permutation{1, 2, 0, 3}), 0.0);

  const Objective dtr = MakeObjective(FairnessMetric::kDtr, instance, 2, kLog);
  EXPECT_EQ(dtr.n, 8);
  const Permutation p{1, 2, 0, 3, 4, 6, 5, 7};
  EXPECT_DOUBLE_EQ(dtr.evaluate(p),
                   Dtr(SplitSessions(p, 4, 2), instance, kLog) - 1.0);
  EXPECT_THROW(MakeObjective(FairnessMetric::kDtr,
                             MakeInstance({0, 4}, {0, 1}), 1, kLog),
               std::domain_error);
}

TEST(MetricTest, BruteForceMinimumIsALowerBound) {
  const QueryInstance instance = MakeInstance({4, 2, 1, 3, 0}, {0, 0, 0, 1, 1});
  const double min_eel =
      oracle::BruteForceMetricMinimum(FairnessMetric::kEel, instance, 1, kLog);
  const double min_dtr =
      oracle::BruteForceMetricMinimum(FairnessMetric::kDtr, instance, 1, kLog);
  for (const auto& p : oracle::AllPermutations(5)) {
    const RankingPolicy policy{{Permutation(p)}};
    EXPECT_GE(Eel(policy, instance, kLog), min_eel - 1e-12);
    EXPECT_GE(Dtr(policy, instance, kLog), min_dtr - 1e-12);
  }
  EXPECT_GE(min_dtr, 1.0);
}

}  // namespace
}  // namespace ppgsearch
