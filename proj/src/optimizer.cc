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

#include "ppgsearch/optimizer.h"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "ppgsearch/ppg_sampler.h"

namespace ppgsearch {

size_t CachedObjective::Hash::operator()(const std::vector<int>& v) const {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (int x : v) {
    h ^= static_cast<uint64_t>(static_cast<uint32_t>(x));
    h *= 0x100000001b3ULL;
  }
  return static_cast<size_t>(MixSeed(h));
}

double CachedObjective::operator()(const Permutation& p) {
  if (p.size() != objective_.n) {
    throw std::invalid_argument("objective: permutation size mismatch");
  }
  std::vector<int> key(p.order().begin(), p.order().end());
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  const double value = objective_.evaluate(p);
  ++evaluations_;
  cache_.emplace(std::move(key), value);
  return value;
}

PpgModel ApplyConstraints(const PpgModel& model, const ConstraintSpec& spec) {
  const int n = model.size();
  const std::vector<int> position = model.reference().Positions();
  for (const auto& group : spec.groups) {
    for (int item : group) {
      if (item < 0 || item >= n) {
        throw std::invalid_argument("ApplyConstraints: unknown item " +
                                    std::to_string(item));
      }
    }
  }
  PpgModel result = model;
  if (spec.kind == ConstraintKind::kIntraGroupFixed) {
    for (const auto& group : spec.groups) {
      for (size_t a = 0; a < group.size(); ++a) {
        for (size_t b = a + 1; b < group.size(); ++b) {
          if (group[a] == group[b]) continue;
          result.Fix(position[group[a]], position[group[b]], 0.0);
        }
      }
    }
    return result;
  }
  std::vector<int> group_of(n, -1);
  for (size_t g = 0; g < spec.groups.size(); ++g) {
    for (int item : spec.groups[g]) {
      if (group_of[item] != -1 && group_of[item] != static_cast<int>(g)) {
        throw std::invalid_argument(
            "ApplyConstraints: inter-group groups overlap");
      }
      group_of[item] = static_cast<int>(g);
    }
  }
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (group_of[a] < 0 || group_of[b] < 0 || group_of[a] == group_of[b]) {
        continue;
      }
      result.Fix(position[a], position[b], 0.0);
    }
  }
  return result;
}

PpgModel UpdateReference(const PpgModel& model, const SampleOutcome& outcome) {
  const int n = model.size();
  if (outcome.order.size() != n) {
    throw std::invalid_argument("UpdateReference: outcome size mismatch");
  }
  // Entry (p, q) of the new matrices is the old entry for the reference
  // positions now sitting at p and q.
  SymmetricMatrix<double> weights(n, 0.0);
  SymmetricMatrix<char> trainable(n, 0);
  for (int p = 0; p < n; ++p) {
    for (int q = p + 1; q < n; ++q) {
      const int i = outcome.order[p];
      const int j = outcome.order[q];
      weights.Set(p, q, model.weight(i, j));
      trainable.Set(p, q, model.trainable(i, j) ? 1 : 0);
    }
  }
  PpgModel result;
  result.Reset(outcome.permutation, std::move(weights), std::move(trainable));
  return result;
}

void TrainConfig::Validate() const {
  if (lambda < 1) throw std::invalid_argument("lambda must be >= 1");
  if (!(learning_rate > 0.0)) {
    throw std::invalid_argument("learning_rate must be positive");
  }
  if (patience < 1) throw std::invalid_argument("patience must be >= 1");
  if (max_iters < 0) throw std::invalid_argument("max_iters must be >= 0");
}

namespace {

TrainState StartAt(Permutation start, CachedObjective& objective) {
  TrainState state;
  state.best_value = objective(start);
  state.best_permutation = std::move(start);
  return state;
}

void FinishIteration(TrainState& state, bool improved) {
  ++state.iteration;
  state.stale_iterations = improved ? 0 : state.stale_iterations + 1;
  state.history.emplace_back(state.iteration, state.best_value);
}

SampleOutcome DrawPpg(const PpgModel& model, PpgSampler sampler, Rng& rng) {
  switch (sampler) {
    case PpgSampler::kMerge:
      return MergeSample(model, rng);
    case PpgSampler::kAdjacentSweep:
      return AdjacentSweepSample(model, rng);
    case PpgSampler::kRejection:
      return RejectionSample(model, rng);
  }
  throw std::logic_error("unknown sampler");
}

}  // namespace

TrainState InitTrainState(const PpgModel& model, CachedObjective& objective) {
  return StartAt(model.reference(), objective);
}

TrainState InitTrainState(const PlModel& model, CachedObjective& objective) {
  return StartAt(model.Mode(), objective);
}

void ReinforceStep(PpgModel& model, CachedObjective& objective,
                   const TrainConfig& config, TrainState& state, Rng& rng) {
  const int n = model.size();
  // Scores are accumulated per pair of items rather than positions: the
  // reference may move mid-batch, but the weights travel with the items, so
  // each draw is scored against the model it came from.
  SymmetricMatrix<double> weighted_score(n, 0.0);
  SymmetricMatrix<double> score_sum(n, 0.0);
  double value_sum = 0.0;
  bool improved = false;

  const PpgModel snapshot = config.snapshot_batch ? model : PpgModel();
  const PpgModel& source = config.snapshot_batch ? snapshot : model;
  SampleOutcome batch_best;

  for (int s = 0; s < config.lambda; ++s) {
    SampleOutcome outcome = DrawPpg(source, config.sampler, rng);
    const double value = objective(outcome.permutation);
    value_sum += value;
    const std::vector<int> rank = outcome.order.Positions();
    const Permutation& ref = source.reference();
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (!source.trainable(i, j)) continue;
        const double term =
            ScoreTerm(source.weight(i, j), rank[i] > rank[j]);
        const int a = ref[i];
        const int b = ref[j];
        score_sum.Set(a, b, score_sum(a, b) + term);
        weighted_score.Set(a, b, weighted_score(a, b) + value * term);
      }
    }
    if (value < state.best_value) {
      state.best_value = value;
      state.best_permutation = outcome.permutation;
      improved = true;
      if (config.snapshot_batch) {
        batch_best = std::move(outcome);
      } else {
        model = UpdateReference(model, outcome);
      }
    }
  }
  if (config.snapshot_batch && improved) {
    model = UpdateReference(model, batch_best);
  }

  const double baseline =
      config.reward_baseline ? value_sum / config.lambda : 0.0;
  const double step = config.learning_rate / config.lambda;
  const Permutation& ref = model.reference();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (!model.trainable(i, j)) continue;
      const int a = ref[i];
      const int b = ref[j];
      const double gradient = weighted_score(a, b) - baseline * score_sum(a, b);
      model.SetWeight(i, j,
                      std::clamp(model.weight(i, j) - step * gradient,
                                 PpgModel::kMinWeight, PpgModel::kMaxWeight));
    }
  }
  FinishIteration(state, improved);
}

void ReinforceStep(PlModel& model, CachedObjective& objective,
                   const TrainConfig& config, TrainState& state, Rng& rng) {
  const int n = model.size();
  std::vector<double> weighted_score(n, 0.0);
  std::vector<double> score_sum(n, 0.0);
  double value_sum = 0.0;
  bool improved = false;
  const std::vector<double> theta = model.Theta();
  for (int s = 0; s < config.lambda; ++s) {
    Permutation sample = PlSample(model, rng);
    const double value = objective(sample);
    value_sum += value;
    // Chain rule onto log theta.
    const std::vector<double> gradient = PlLogProbGradient(model, sample);
    for (int k = 0; k < n; ++k) {
      const double term = gradient[k] * theta[k];
      score_sum[k] += term;
      weighted_score[k] += value * term;
    }
    if (value < state.best_value) {
      state.best_value = value;
      state.best_permutation = std::move(sample);
      improved = true;
    }
  }
  const double baseline =
      config.reward_baseline ? value_sum / config.lambda : 0.0;
  const double step = config.learning_rate / config.lambda;
  std::vector<double>& log_theta = model.mutable_log_theta();
  for (int k = 0; k < n; ++k) {
    log_theta[k] -= step * (weighted_score[k] - baseline * score_sum[k]);
  }
  FinishIteration(state, improved);
}

namespace {

template <typename Model>
TrainResult RunLoop(Model model, const Objective& objective,
                    const TrainConfig& config) {
  config.Validate();
  CachedObjective cached(objective);
  if (cached.size() != model.size()) {
    throw std::invalid_argument("Train: objective and model sizes differ");
  }
  Rng rng(config.seed);
  TrainState state = InitTrainState(model, cached);
  while (state.iteration < config.max_iters &&
         state.stale_iterations < config.patience) {
    ReinforceStep(model, cached, config, state, rng);
  }
  TrainResult result;
  result.best_permutation = std::move(state.best_permutation);
  result.best_value = state.best_value;
  result.history = std::move(state.history);
  result.evaluations = cached.evaluations();
  result.iterations = state.iteration;
  result.final_model = std::move(model);
  return result;
}

}  // namespace

TrainResult Train(PpgModel model, const Objective& objective,
                  const TrainConfig& config,
                  std::span<const ConstraintSpec> constraints) {
  for (const ConstraintSpec& spec : constraints) {
    model = ApplyConstraints(model, spec);
  }
  model.ClipTrainable();
  return RunLoop(std::move(model), objective, config);
}

TrainResult Train(PlModel model, const Objective& objective,
                  const TrainConfig& config) {
  return RunLoop(std::move(model), objective, config);
}

std::string WriteCheckpoint(const PpgModel& model, const CheckpointInfo& info) {
  nlohmann::ordered_json doc;
  doc["format"] = "ppgsearch-checkpoint";
  doc["version"] = 1;
  doc["n"] = model.size();
  doc["reference"] = std::vector<int>(model.reference().order().begin(),
                                      model.reference().order().end());
  doc["weights"] = model.weights().data();
  std::vector<int> mask(model.trainable_mask().data().begin(),
                        model.trainable_mask().data().end());
  doc["trainable"] = mask;
  doc["iteration"] = info.iteration;
  doc["seed"] = info.seed;
  doc["best_value"] = info.best_value;
  return doc.dump(2) + "\n";
}

PpgModel ReadCheckpoint(const std::string& text, CheckpointInfo* info) {
  try {
    const nlohmann::json doc = nlohmann::json::parse(text);
    if (doc.at("format") != "ppgsearch-checkpoint" || doc.at("version") != 1) {
      throw std::invalid_argument("ReadCheckpoint: unsupported document");
    }
    const int n = doc.at("n").get<int>();
    Permutation reference(doc.at("reference").get<std::vector<int>>());
    const auto weights = doc.at("weights").get<std::vector<double>>();
    const auto mask = doc.at("trainable").get<std::vector<int>>();
    if (reference.size() != n || weights.size() != static_cast<size_t>(n) * n ||
        mask.size() != weights.size()) {
      throw std::invalid_argument("ReadCheckpoint: inconsistent sizes");
    }
    SymmetricMatrix<double> w(n, 0.0);
    SymmetricMatrix<char> m(n, 0);
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const size_t ij = static_cast<size_t>(i) * n + j;
        const size_t ji = static_cast<size_t>(j) * n + i;
        if (weights[ij] != weights[ji] || mask[ij] != mask[ji]) {
          throw std::invalid_argument("ReadCheckpoint: matrix not symmetric");
        }
        if (!(weights[ij] >= 0.0 && weights[ij] <= 1.0)) {
          throw std::invalid_argument("ReadCheckpoint: weight outside [0, 1]");
        }
        w.Set(i, j, weights[ij]);
        m.Set(i, j, mask[ij] != 0 ? 1 : 0);
      }
    }
    PpgModel model;
    model.Reset(std::move(reference), std::move(w), std::move(m));
    if (info != nullptr) {
      info->iteration = doc.at("iteration").get<int>();
      info->seed = doc.at("seed").get<uint64_t>();
      info->best_value = doc.at("best_value").get<double>();
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("ReadCheckpoint: ") + e.what());
  }
}

}  // namespace ppgsearch
