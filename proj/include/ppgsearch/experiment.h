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

#ifndef PPGSEARCH_EXPERIMENT_H_
#define PPGSEARCH_EXPERIMENT_H_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ppgsearch/dataset.h"
#include "ppgsearch/objectives.h"
#include "ppgsearch/optimizer.h"

namespace ppgsearch {

// Invalid or inconsistent experiment configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Method { kPpg, kPpgIntra, kPl, kRand };

const char* MethodName(Method method);
Method ParseMethod(const std::string& name);  // Throws ConfigError.

struct ExperimentConfig {
  std::string dataset;
  std::vector<Method> methods;
  FairnessMetric metric = FairnessMetric::kEel;
  std::vector<int> sessions = {1};
  TrainConfig train;
  ExposureModel exposure;
  GroupAggregation aggregation = GroupAggregation::kSum;
  uint64_t seed = 0;
  std::string output;
  int threads = 1;
  // Draws used to score a trained Plackett-Luce policy.
  int pl_eval_samples = 100;
  // Truncate and filter queries before running.
  bool filter = true;

  void Validate() const;  // Throws ConfigError.
};

// Parses the JSON config document. A relative dataset path is resolved
// against `base_dir`. Throws ConfigError.
ExperimentConfig ParseExperimentConfig(const std::string& text,
                                       const std::string& base_dir = "");
ExperimentConfig LoadExperimentConfig(const std::string& path);
// Full config echo; parses back to an equal config.
std::string ExperimentConfigToJson(const ExperimentConfig& config);

struct ResultRow {
  std::string query_id;
  Method method = Method::kPpg;
  FairnessMetric metric = FairnessMetric::kEel;
  int sessions = 1;
  double fairness = 0.0;  // Plain metric value (DTR, not DTR - 1).
  double ndcg = 0.0;      // nDCG@10, mean over sessions.
  int64_t evaluations = 0;
  double wall_seconds = 0.0;
};

// Result of one (query, method, N) cell. `initial` is the ranker's order of
// the query's items; PPG starts from it in every session.
ResultRow RunCell(const QueryInstance& instance, const Permutation& initial,
                  Method method, int sessions, const ExperimentConfig& config);

struct ExperimentSummary {
  int queries = 0;  // After filtering.
  int skipped = 0;  // Queries the metric cannot score.
  std::vector<std::string> skipped_reasons;
  std::vector<ResultRow> rows;
};

// Runs every query x method x N cell, then writes
//   <output>                 result table (deterministic for a seed)
//   <output>.manifest.json   config echo, seed, skip counts
//   <output>.timing.tsv      wall time per cell
// Throws ConfigError or DataError.
ExperimentSummary RunExperiment(const ExperimentConfig& config);

inline constexpr char kResultHeader[] =
    "query_id\tmethod\tmetric\tsessions\tfairness\tndcg10\tevaluations";

// Means per (method, metric, N) over the rows of all `inputs`; writes a
// table to `output` and gnuplot-style blocks to `<output>.series`. Throws
// DataError on a schema mismatch or when there are no rows.
void Aggregate(const std::vector<std::string>& inputs,
               const std::string& output);

// Synthetic queries: two groups of `items_per_group` items, grades distinct
// within each group and at least one grade 4, true relevance equal to the
// grade and scores ordered by grade.
std::vector<RawQueryRecord> MakeSyntheticSuite(int queries,
                                               int items_per_group,
                                               uint64_t seed);

// Items ordered by decreasing score, ties by index.
Permutation ScoreOrder(const std::vector<RawItem>& items);

}  // namespace ppgsearch

#endif  // PPGSEARCH_EXPERIMENT_H_
