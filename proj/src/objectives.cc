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

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

namespace ppgsearch {

double ExposureModel::Discount(int rank) const {
  switch (kind) {
    case ExposureKind::kLogarithmic:
      return 1.0 / std::log2(rank + 1.0);
    case ExposureKind::kGeometric:
      return std::pow(patience, rank - 1);
  }
  throw std::logic_error("unknown exposure kind");
}

std::vector<double> ExpectedExposure(const RankingPolicy& policy,
                                     const ExposureModel& model) {
  if (policy.sessions.empty()) {
    throw std::invalid_argument("ExpectedExposure: empty policy");
  }
  const int n = policy.sessions.front().size();
  std::vector<double> exposure(n, 0.0);
  for (const Permutation& session : policy.sessions) {
    if (session.size() != n) {
      throw std::invalid_argument("ExpectedExposure: ragged sessions");
    }
    for (int k = 0; k < n; ++k) exposure[session[k]] += model.Discount(k + 1);
  }
  for (double& e : exposure) e /= static_cast<double>(policy.sessions.size());
  return exposure;
}

std::vector<double> TargetExposure(const QueryInstance& instance,
                                   const ExposureModel& model) {
  const int n = instance.size();
  std::vector<int> ideal(n);
  std::iota(ideal.begin(), ideal.end(), 0);
  std::stable_sort(ideal.begin(), ideal.end(), [&](int a, int b) {
    return instance.items[a].utility_grade > instance.items[b].utility_grade;
  });
  std::vector<double> target(n, 0.0);
  for (int begin = 0; begin < n;) {
    const int grade = instance.items[ideal[begin]].utility_grade;
    int end = begin;
    double block = 0.0;
    while (end < n && instance.items[ideal[end]].utility_grade == grade) {
      block += model.Discount(end + 1);
      ++end;
    }
    for (int k = begin; k < end; ++k) target[ideal[k]] = block / (end - begin);
    begin = end;
  }
  return target;
}

namespace {

// Group id -> member item indices, in increasing id order.
std::map<int, std::vector<int>> GroupMembers(const QueryInstance& instance) {
  std::map<int, std::vector<int>> members;
  for (int k = 0; k < instance.size(); ++k) {
    members[instance.items[k].group].push_back(k);
  }
  return members;
}

void CheckPolicy(const RankingPolicy& policy, const QueryInstance& instance) {
  for (const Permutation& session : policy.sessions) {
    if (session.size() != instance.size()) {
      throw std::invalid_argument("policy and query sizes differ");
    }
  }
}

}  // namespace

double Eel(const RankingPolicy& policy, const QueryInstance& instance,
           const ExposureModel& model, GroupAggregation aggregation) {
  CheckPolicy(policy, instance);
  const std::vector<double> expected = ExpectedExposure(policy, model);
  const std::vector<double> target = TargetExposure(instance, model);
  double squared = 0.0;
  for (const auto& [group, members] : GroupMembers(instance)) {
    double diff = 0.0;
    for (int k : members) diff += expected[k] - target[k];
    if (aggregation == GroupAggregation::kMean) diff /= members.size();
    squared += diff * diff;
  }
  return std::sqrt(squared);
}

double Dtr(const RankingPolicy& policy, const QueryInstance& instance,
           const ExposureModel& model) {
  CheckPolicy(policy, instance);
  const auto members = GroupMembers(instance);
  if (members.size() != 2) {
    throw std::invalid_argument("Dtr: needs exactly two groups");
  }
  const std::vector<double> expected = ExpectedExposure(policy, model);
  double ratio[2];
  int g = 0;
  for (const auto& [group, items] : members) {
    double exposure = 0.0;
    double utility = 0.0;
    for (int k : items) {
      exposure += expected[k];
      utility += instance.items[k].utility_grade;
    }
    utility /= items.size();
    if (utility <= 0.0) {
      throw std::domain_error("Dtr: a group has zero mean utility");
    }
    ratio[g++] = exposure / utility;
  }
  return std::max(ratio[0] / ratio[1], ratio[1] / ratio[0]);
}

double NdcgAtK(const Permutation& ranking, const QueryInstance& instance,
               int k) {
  if (ranking.size() != instance.size()) {
    throw std::invalid_argument("NdcgAtK: size mismatch");
  }
  const int n = instance.size();
  const int cutoff = std::min(k, n);
  auto gain = [](int rel) { return std::exp2(rel) - 1.0; };
  std::vector<int> grades(n);
  for (int i = 0; i < n; ++i) grades[i] = instance.items[i].true_relevance;
  double dcg = 0.0;
  for (int r = 0; r < cutoff; ++r) {
    dcg += gain(grades[ranking[r]]) / std::log2(r + 2.0);
  }
  std::sort(grades.begin(), grades.end(), std::greater<>());
  double ideal = 0.0;
  for (int r = 0; r < cutoff; ++r) ideal += gain(grades[r]) / std::log2(r + 2.0);
  return ideal > 0.0 ? dcg / ideal : 1.0;
}

double NdcgAtK(const RankingPolicy& policy, const QueryInstance& instance,
               int k) {
  if (policy.sessions.empty()) {
    throw std::invalid_argument("NdcgAtK: empty policy");
  }
  double sum = 0.0;
  for (const Permutation& session : policy.sessions) {
    sum += NdcgAtK(session, instance, k);
  }
  return sum / policy.sessions.size();
}

RankingPolicy SplitSessions(const Permutation& concatenated, int n,
                            int sessions) {
  if (concatenated.size() != n * sessions) {
    throw std::invalid_argument("SplitSessions: size mismatch");
  }
  std::vector<std::vector<int>> orders(sessions);
  for (auto& order : orders) order.reserve(n);
  for (int item : concatenated.order()) orders[item / n].push_back(item % n);
  RankingPolicy policy;
  policy.sessions.reserve(sessions);
  for (auto& order : orders) policy.sessions.emplace_back(std::move(order));
  return policy;
}

const char* MetricName(FairnessMetric metric) {
  return metric == FairnessMetric::kDtr ? "dtr" : "eel";
}

double EvaluateMetric(FairnessMetric metric, const RankingPolicy& policy,
                      const QueryInstance& instance, const ExposureModel& model,
                      GroupAggregation aggregation) {
  return metric == FairnessMetric::kDtr
             ? Dtr(policy, instance, model)
             : Eel(policy, instance, model, aggregation);
}

Objective MakeObjective(FairnessMetric metric, const QueryInstance& instance,
                        int sessions, const ExposureModel& model,
                        GroupAggregation aggregation) {
  if (sessions < 1) {
    throw std::invalid_argument("MakeObjective: need at least 1 session");
  }
  const int n = instance.size();
  if (metric == FairnessMetric::kDtr) {
    // Fails early on instances the metric cannot score.
    RankingPolicy probe{{Permutation::Identity(n)}};
    Dtr(probe, instance, model);
  }
  Objective objective;
  objective.n = n * sessions;
  objective.evaluate = [=](const Permutation& concatenated) {
    const RankingPolicy policy = SplitSessions(concatenated, n, sessions);
    const double value =
        EvaluateMetric(metric, policy, instance, model, aggregation);
    return metric == FairnessMetric::kDtr ? value - 1.0 : value;
  };
  return objective;
}

}  // namespace ppgsearch
