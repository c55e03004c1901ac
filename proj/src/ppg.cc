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

#include "ppgsearch/ppg.h"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ppgsearch {

PpgModel::PpgModel(Permutation reference, double initial_weight)
    : reference_(std::move(reference)),
      weights_(reference_.size(), initial_weight),
      trainable_(reference_.size(), 1) {
  if (!(initial_weight >= 0.0 && initial_weight <= 1.0)) {
    throw std::invalid_argument("PpgModel: initial weight outside [0, 1]");
  }
  ClearDiagonal();
}

void PpgModel::SetWeight(int i, int j, double w) {
  if (i == j) throw std::invalid_argument("PpgModel: diagonal weight");
  if (!(w >= 0.0 && w <= 1.0)) {
    throw std::invalid_argument("PpgModel: weight outside [0, 1]");
  }
  weights_.Set(i, j, w);
}

void PpgModel::Fix(int i, int j, double w) {
  SetWeight(i, j, w);
  trainable_.Set(i, j, 0);
}

void PpgModel::Reset(Permutation reference, SymmetricMatrix<double> weights,
                     SymmetricMatrix<char> trainable) {
  if (weights.size() != reference.size() ||
      trainable.size() != reference.size()) {
    throw std::invalid_argument("PpgModel::Reset: size mismatch");
  }
  reference_ = std::move(reference);
  weights_ = std::move(weights);
  trainable_ = std::move(trainable);
  ClearDiagonal();
}

// The diagonal carries no pair; keep it canonical so equality ignores it.
void PpgModel::ClearDiagonal() {
  for (int i = 0; i < size(); ++i) {
    weights_.Set(i, i, 0.0);
    trainable_.Set(i, i, 0);
  }
}

void PpgModel::ClipTrainable() {
  const int n = size();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (!trainable(i, j)) continue;
      weights_.Set(i, j, std::clamp(weights_(i, j), kMinWeight, kMaxWeight));
    }
  }
}

SampleOutcome SampleOutcome::FromPositionOrder(const PpgModel& model,
                                               Permutation position_order) {
  SampleOutcome outcome;
  outcome.permutation = model.reference().Compose(position_order);
  outcome.positive_edges = InversionSetOfPositionOrder(position_order.order());
  outcome.order = std::move(position_order);
  return outcome;
}

namespace {

void CheckExactSize(const PpgModel& model, const char* what) {
  if (model.size() > kMaxExactSize) {
    throw std::invalid_argument(std::string(what) +
                                ": enumeration limited to n <= " +
                                std::to_string(kMaxExactSize));
  }
}

// Calls fn(edges) for the inversion set of every ordering of n positions.
template <typename Fn>
void ForEachValidInversionSet(int n, Fn fn) {
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  do {
    fn(InversionSetOfPositionOrder(order));
  } while (std::next_permutation(order.begin(), order.end()));
}

}  // namespace

double RawOutcomeProbability(const PpgModel& model, const InversionSet& edges) {
  const int n = model.size();
  if (edges.MinimumSize() > n) {
    throw std::invalid_argument("RawOutcomeProbability: index out of range");
  }
  double p = 1.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double w = model.weight(i, j);
      p *= edges.Contains(i, j) ? w : 1.0 - w;
    }
  }
  return p;
}

double ExactRho(const PpgModel& model) {
  CheckExactSize(model, "ExactRho");
  double rho = 0.0;
  ForEachValidInversionSet(model.size(), [&](const InversionSet& edges) {
    rho += RawOutcomeProbability(model, edges);
  });
  return rho;
}

double ConditionalProbability(const PpgModel& model,
                              const InversionSet& edges) {
  if (!IsValidInversionSet(model.size(), edges)) {
    throw std::invalid_argument("ConditionalProbability: invalid edges");
  }
  return RawOutcomeProbability(model, edges) / ExactRho(model);
}

double ScoreTerm(double weight, bool in_edges) {
  return ((in_edges ? 1.0 : 0.0) - weight) / (weight * (1.0 - weight));
}

SymmetricMatrix<double> LogProbGradient(const PpgModel& model,
                                        const SampleOutcome& outcome) {
  const int n = model.size();
  if (outcome.order.size() != n) {
    throw std::invalid_argument("LogProbGradient: outcome size mismatch");
  }
  const std::vector<int> rank = outcome.order.Positions();
  SymmetricMatrix<double> gradient(n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (!model.trainable(i, j)) continue;
      const double w = model.weight(i, j);
      if (w <= 0.0 || w >= 1.0) {
        throw std::domain_error("LogProbGradient: trainable weight at 0 or 1");
      }
      gradient.Set(i, j, ScoreTerm(w, rank[i] > rank[j]));
    }
  }
  return gradient;
}

NormalizerSplit ExactBeta(const PpgModel& model, IndexPair pair) {
  CheckExactSize(model, "ExactBeta");
  const int n = model.size();
  if (pair.second >= n) {
    throw std::invalid_argument("ExactBeta: pair index out of range");
  }
  NormalizerSplit split;
  ForEachValidInversionSet(n, [&](const InversionSet& edges) {
    double p = 1.0;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (IndexPair(i, j) == pair) continue;
        const double w = model.weight(i, j);
        p *= edges.Contains(i, j) ? w : 1.0 - w;
      }
    }
    (edges.Contains(pair) ? split.with_edge : split.without_edge) += p;
  });
  const double w = model.weight(pair.first, pair.second);
  const double diff = split.with_edge - split.without_edge;
  split.beta = diff / (w * diff + split.without_edge);
  return split;
}

}  // namespace ppgsearch
