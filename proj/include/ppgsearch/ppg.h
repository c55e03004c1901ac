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

#ifndef PPGSEARCH_PPG_H_
#define PPGSEARCH_PPG_H_

#include "ppgsearch/permutation.h"
#include "ppgsearch/symmetric_matrix.h"

namespace ppgsearch {

// Probabilistic permutation graph: a reference permutation plus one
// inversion probability per pair of reference positions. Weights and the
// trainable mask are indexed by position in the reference, not by item.
class PpgModel {
 public:
  static constexpr double kMinWeight = 0.01;
  static constexpr double kMaxWeight = 0.99;

  PpgModel() = default;
  explicit PpgModel(Permutation reference, double initial_weight = 0.5);
  explicit PpgModel(int n, double initial_weight = 0.5)
      : PpgModel(Permutation::Identity(n), initial_weight) {}

  int size() const { return reference_.size(); }
  const Permutation& reference() const { return reference_; }

  double weight(int i, int j) const { return weights_(i, j); }
  bool trainable(int i, int j) const { return trainable_(i, j) != 0; }
  const SymmetricMatrix<double>& weights() const { return weights_; }
  const SymmetricMatrix<char>& trainable_mask() const { return trainable_; }

  // Sets a weight; the mask is untouched. Throws outside [0, 1].
  void SetWeight(int i, int j, double w);
  // Pins a pair at `w` and marks it non-trainable.
  void Fix(int i, int j, double w);

  // Replaces the reference and both matrices wholesale. Used by reference
  // updates and checkpoint loading.
  void Reset(Permutation reference, SymmetricMatrix<double> weights,
             SymmetricMatrix<char> trainable);

  // Clamps trainable weights into [kMinWeight, kMaxWeight].
  void ClipTrainable();

  friend bool operator==(const PpgModel&, const PpgModel&) = default;

 private:
  void ClearDiagonal();

  Permutation reference_;
  SymmetricMatrix<double> weights_;
  SymmetricMatrix<char> trainable_;
};

// Result of one draw. `order` lists reference positions in sampled order,
// `permutation` is the corresponding item order and `positive_edges` the
// inversion set relative to the reference.
struct SampleOutcome {
  Permutation order;
  Permutation permutation;
  InversionSet positive_edges;

  // Builds a consistent outcome from an ordering of reference positions.
  static SampleOutcome FromPositionOrder(const PpgModel& model,
                                         Permutation position_order);
};

// Largest n accepted by the enumeration-based exact quantities below.
inline constexpr int kMaxExactSize = 6;

// Product of w_e over `edges` and (1 - w_e) over the remaining pairs.
// `edges` need not be a valid inversion set.
double RawOutcomeProbability(const PpgModel& model, const InversionSet& edges);

// Probability that independent edge sampling yields a valid permutation
// graph: the sum of RawOutcomeProbability over all n! valid inversion sets.
double ExactRho(const PpgModel& model);

// RawOutcomeProbability / ExactRho. Throws on an invalid `edges`.
double ConditionalProbability(const PpgModel& model, const InversionSet& edges);

// Approximate score function d log P / d w_e = (1[e in E] - w_e) /
// (w_e (1 - w_e)) per pair, dropping the normalizer term. Non-trainable
// pairs get 0. Throws if a trainable weight sits at 0 or 1.
SymmetricMatrix<double> LogProbGradient(const PpgModel& model,
                                        const SampleOutcome& outcome);

// Same score for one pair and membership flag.
double ScoreTerm(double weight, bool in_edges);

// Decomposition of the normalizer with respect to one pair e:
// rho = w_e * with_edge + (1 - w_e) * without_edge.
struct NormalizerSplit {
  double with_edge = 0.0;     // Sum over valid sets containing e, w_e omitted.
  double without_edge = 0.0;  // Sum over valid sets without e, (1-w_e) omitted.
  double beta = 0.0;          // (1/rho) d rho / d w_e.
};

// Exact normalizer-gradient term for `pair` by enumeration.
NormalizerSplit ExactBeta(const PpgModel& model, IndexPair pair);

}  // namespace ppgsearch

#endif  // PPGSEARCH_PPG_H_
