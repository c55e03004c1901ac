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

#ifndef PPGSEARCH_OPTIMIZER_H_
#define PPGSEARCH_OPTIMIZER_H_

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "ppgsearch/permutation.h"
#include "ppgsearch/plackett_luce.h"
#include "ppgsearch/ppg.h"
#include "ppgsearch/rng.h"

namespace ppgsearch {

// Black-box objective over permutations of n items; lower is better. Must be
// deterministic within a run.
struct Objective {
  int n = 0;
  std::function<double(const Permutation&)> evaluate;
};

// Memoizes an Objective by permutation. evaluations() counts misses only.
class CachedObjective {
 public:
  explicit CachedObjective(Objective objective)
      : objective_(std::move(objective)) {}

  double operator()(const Permutation& p);
  int size() const { return objective_.n; }
  int64_t evaluations() const { return evaluations_; }

 private:
  struct Hash {
    size_t operator()(const std::vector<int>& v) const;
  };

  Objective objective_;
  std::unordered_map<std::vector<int>, double, Hash> cache_;
  int64_t evaluations_ = 0;
};

enum class ConstraintKind {
  kIntraGroupFixed,  // No inversion between two members of one group.
  kInterGroupFixed,  // No inversion between members of different groups.
};

// Pairwise constraint over item indices. Intra groups may overlap; inter
// groups must be disjoint. Items outside every group are unconstrained.
struct ConstraintSpec {
  ConstraintKind kind = ConstraintKind::kIntraGroupFixed;
  std::vector<std::vector<int>> groups;
};

// Pins forbidden pairs at weight 0 and marks them non-trainable. Throws
// std::invalid_argument on an unknown item or overlapping inter groups.
PpgModel ApplyConstraints(const PpgModel& model, const ConstraintSpec& spec);

// Moves the reference to `outcome.permutation` and conjugates the weights
// and mask so every weight stays attached to the same pair of items.
PpgModel UpdateReference(const PpgModel& model, const SampleOutcome& outcome);

enum class PpgSampler { kMerge, kAdjacentSweep, kRejection };

struct TrainConfig {
  int lambda = 8;               // Monte Carlo samples per iteration.
  double learning_rate = 0.01;
  int patience = 20;            // Iterations without a new best before stop.
  int max_iters = 2000;
  uint64_t seed = 0;
  // Subtract the batch-mean objective before weighting the scores.
  bool reward_baseline = false;
  // Draw the whole batch from the iteration-start model and defer the
  // reference move to the batch end, instead of moving it as soon as a
  // better sample appears.
  bool snapshot_batch = false;
  PpgSampler sampler = PpgSampler::kMerge;

  // Throws std::invalid_argument on out-of-range fields.
  void Validate() const;
};

// Mutable loop state shared by both distributions.
struct TrainState {
  int iteration = 0;
  int stale_iterations = 0;
  Permutation best_permutation;
  double best_value = 0.0;
  std::vector<std::pair<int, double>> history;
};

// Evaluates the start point. For PPG that is the reference; for PL, the
// mode of the model.
TrainState InitTrainState(const PpgModel& model, CachedObjective& objective);
TrainState InitTrainState(const PlModel& model, CachedObjective& objective);

// One outer iteration: lambda draws, best tracking (with in-batch reference
// moves for PPG), one gradient-descent step on the averaged score-function
// estimate, then clipping.
void ReinforceStep(PpgModel& model, CachedObjective& objective,
                   const TrainConfig& config, TrainState& state, Rng& rng);
void ReinforceStep(PlModel& model, CachedObjective& objective,
                   const TrainConfig& config, TrainState& state, Rng& rng);

struct TrainResult {
  Permutation best_permutation;
  double best_value = 0.0;
  std::variant<PpgModel, PlModel> final_model;
  std::vector<std::pair<int, double>> history;  // (iteration, best value)
  int64_t evaluations = 0;
  int iterations = 0;

  friend bool operator==(const TrainResult&, const TrainResult&) = default;
};

// Applies `constraints`, then steps until `patience` iterations pass without
// a new best or `max_iters` is reached. Seeds its generator from
// config.seed, so equal inputs give identical results.
TrainResult Train(PpgModel model, const Objective& objective,
                  const TrainConfig& config,
                  std::span<const ConstraintSpec> constraints = {});
TrainResult Train(PlModel model, const Objective& objective,
                  const TrainConfig& config);

// N copies of `items` back to back, plus an inter-group constraint with one
// group per session so sessions never mix.
template <typename T>
struct ConcatenatedSessions {
  std::vector<T> items;
  ConstraintSpec constraint;
};

template <typename T>
ConcatenatedSessions<T> ConcatenateSessions(std::span<const T> items,
                                            int sessions);

// Checkpoint document: n, reference, row-major weights and mask, iteration,
// seed and best value, as JSON text.
struct CheckpointInfo {
  int iteration = 0;
  uint64_t seed = 0;
  double best_value = 0.0;
};
std::string WriteCheckpoint(const PpgModel& model, const CheckpointInfo& info);
// Throws std::invalid_argument on malformed input.
PpgModel ReadCheckpoint(const std::string& text, CheckpointInfo* info);

// ---------------------------------------------------------------------------

template <typename T>
ConcatenatedSessions<T> ConcatenateSessions(std::span<const T> items,
                                            int sessions) {
  if (sessions < 1) {
    throw std::invalid_argument("ConcatenateSessions: need at least 1 session");
  }
  ConcatenatedSessions<T> result;
  result.constraint.kind = ConstraintKind::kInterGroupFixed;
  const int n = static_cast<int>(items.size());
  for (int s = 0; s < sessions; ++s) {
    std::vector<int> group;
    for (int k = 0; k < n; ++k) {
      result.items.push_back(items[k]);
      group.push_back(s * n + k);
    }
    result.constraint.groups.push_back(std::move(group));
  }
  return result;
}

}  // namespace ppgsearch

#endif  // PPGSEARCH_OPTIMIZER_H_
