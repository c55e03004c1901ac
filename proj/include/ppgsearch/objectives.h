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

#ifndef PPGSEARCH_OBJECTIVES_H_
#define PPGSEARCH_OBJECTIVES_H_

#include <string>
#include <vector>

#include "ppgsearch/optimizer.h"
#include "ppgsearch/permutation.h"

namespace ppgsearch {

struct QueryItem {
  std::string id;
  int utility_grade = 0;   // 0..4; drives the fairness metrics.
  int true_relevance = 0;  // 0..4; drives nDCG.
  int group = 0;
};

struct QueryInstance {
  std::string query_id;
  std::vector<QueryItem> items;

  int size() const { return static_cast<int>(items.size()); }
};

enum class ExposureKind {
  kLogarithmic,  // 1 / log2(rank + 1)
  kGeometric,    // patience^(rank - 1), rank-biased precision style
};

// Position discount; ranks are 1-based.
struct ExposureModel {
  ExposureKind kind = ExposureKind::kLogarithmic;
  double patience = 0.5;  // kGeometric only.

  double Discount(int rank) const;
};

// How per-item exposures are combined into a group's exposure for EEL.
enum class GroupAggregation { kSum, kMean };

// One permutation of the query's items per session.
struct RankingPolicy {
  std::vector<Permutation> sessions;
};

// Mean discount each item receives across the sessions.
std::vector<double> ExpectedExposure(const RankingPolicy& policy,
                                     const ExposureModel& model);

// Exposure under the ideal policy that ranks higher grades first and
// shuffles uniformly within a grade: each item gets the mean discount of
// its grade's block of positions.
std::vector<double> TargetExposure(const QueryInstance& instance,
                                   const ExposureModel& model);

// Euclidean distance between group-aggregated expected and target exposure.
double Eel(const RankingPolicy& policy, const QueryInstance& instance,
           const ExposureModel& model,
           GroupAggregation aggregation = GroupAggregation::kSum);

// Disparate treatment ratio between exactly two groups: exposure per unit
// of mean utility, larger ratio over smaller, so the result is >= 1.
// Throws std::invalid_argument unless exactly two groups are present and
// std::domain_error if a group has zero mean utility.
double Dtr(const RankingPolicy& policy, const QueryInstance& instance,
           const ExposureModel& model);

// nDCG@k with gain 2^rel - 1 and discount 1/log2(rank + 1) on
// true_relevance. A query with zero ideal DCG scores 1.
double NdcgAtK(const Permutation& ranking, const QueryInstance& instance,
               int k = 10);
// Mean NdcgAtK over sessions.
double NdcgAtK(const RankingPolicy& policy, const QueryInstance& instance,
               int k = 10);

// Reads a ranking of sessions * n concatenated items (item s*n + k is copy
// s of item k) as one ranking per session, in order of appearance.
RankingPolicy SplitSessions(const Permutation& concatenated, int n,
                            int sessions);

enum class FairnessMetric { kDtr, kEel };

const char* MetricName(FairnessMetric metric);

// Plain metric value of a policy (DTR itself, not DTR - 1).
double EvaluateMetric(FairnessMetric metric, const RankingPolicy& policy,
                      const QueryInstance& instance, const ExposureModel& model,
                      GroupAggregation aggregation = GroupAggregation::kSum);

// Objective over the sessions * n concatenated list. EEL is used as is and
// DTR is shifted to DTR - 1, so both are minimized at 0. Validates the
// instance for the metric up front.
Objective MakeObjective(FairnessMetric metric, const QueryInstance& instance,
                        int sessions, const ExposureModel& model,
                        GroupAggregation aggregation = GroupAggregation::kSum);

}  // namespace ppgsearch

#endif  // PPGSEARCH_OBJECTIVES_H_
