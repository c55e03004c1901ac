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

#ifndef PPGSEARCH_PPG_SAMPLER_H_
#define PPGSEARCH_PPG_SAMPLER_H_

#include <cstdint>
#include <vector>

#include "ppgsearch/ppg.h"
#include "ppgsearch/rng.h"

namespace ppgsearch {

inline constexpr int64_t kDefaultRejectionAttempts = 10'000'000;

// Exact draw from the conditional distribution: samples every pair
// independently and retries until the pairs form a valid inversion set.
// Throws std::runtime_error after `max_attempts` failures (rho ~ 0).
SampleOutcome RejectionSample(const PpgModel& model, Rng& rng,
                              int64_t max_attempts = kDefaultRejectionAttempts);

struct MergeSampleStats {
  int64_t bernoulli_trials = 0;
};

// Divide-and-conquer sampler. Splits the reference at ceil(n/2), samples
// both halves recursively from their diagonal weight blocks, then merges
// them top-down: the top half's items are inserted into the bottom half from
// the last one up, each passing bottom items while corrected Bernoulli
// trials succeed. Always valid, not exact.
SampleOutcome MergeSample(const PpgModel& model, Rng& rng,
                          MergeSampleStats* stats = nullptr);

// Corrected success probability for one merge trial. `weight` is the pair's
// weight, `later_reach` the probability that at least one later bottom item
// within reach would be passed, `earlier_top` the probability that at least
// one earlier top item would pass the same bottom item.
double CorrectedMergeProbability(double weight, double later_reach,
                                 double earlier_top);

// Round-based adjacent-swap sampler. Every round visits the eligible swap
// positions in random order and swaps the adjacent pair with its weight; a
// swap at k makes k-1 and k+1 ineligible for the rest of the round and
// eligible for the next. Pairs that are already inverted are not resampled.
// If `trace` is given it receives the item order before the first round and
// after every round.
SampleOutcome AdjacentSweepSample(const PpgModel& model, Rng& rng,
                                  std::vector<Permutation>* trace = nullptr);

}  // namespace ppgsearch

#endif  // PPGSEARCH_PPG_SAMPLER_H_
