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

#ifndef PPGSEARCH_PLACKETT_LUCE_H_
#define PPGSEARCH_PLACKETT_LUCE_H_

#include <vector>

#include "ppgsearch/permutation.h"
#include "ppgsearch/rng.h"

namespace ppgsearch {

// Plackett-Luce distribution over permutations of n items. Parameters are
// kept as log(theta) so any real update leaves theta positive.
class PlModel {
 public:
  PlModel() = default;
  // Uniform model: all theta equal to 1.
  explicit PlModel(int n) : log_theta_(n, 0.0) {}
  // Throws unless every theta is positive and finite.
  static PlModel FromTheta(const std::vector<double>& theta);
  static PlModel FromLogTheta(std::vector<double> log_theta);

  int size() const { return static_cast<int>(log_theta_.size()); }
  double theta(int item) const;
  std::vector<double> Theta() const;
  const std::vector<double>& log_theta() const { return log_theta_; }
  std::vector<double>& mutable_log_theta() { return log_theta_; }

  // Items sorted by decreasing theta, ties by index.
  Permutation Mode() const;

  friend bool operator==(const PlModel&, const PlModel&) = default;

 private:
  std::vector<double> log_theta_;
};

// prod_i theta_{b_i} / sum_{j >= i} theta_{b_j}.
double PlProbability(const PlModel& model, const Permutation& b);

// Gumbel-max: sorts items by log(theta) + Gumbel noise, descending.
Permutation PlSample(const PlModel& model, Rng& rng);

// d log P(b) / d theta_k for every k.
std::vector<double> PlLogProbGradient(const PlModel& model,
                                      const Permutation& b);

}  // namespace ppgsearch

#endif  // PPGSEARCH_PLACKETT_LUCE_H_
