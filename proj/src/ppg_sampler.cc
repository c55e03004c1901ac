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

#include "ppgsearch/ppg_sampler.h"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace ppgsearch {

SampleOutcome RejectionSample(const PpgModel& model, Rng& rng,
                              int64_t max_attempts) {
  const int n = model.size();
  std::vector<IndexPair> pairs;
  for (int64_t attempt = 0; attempt < max_attempts; ++attempt) {
    pairs.clear();
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (rng.Bernoulli(model.weight(i, j))) pairs.emplace_back(i, j);
      }
    }
    InversionSet edges(pairs);
    if (!IsValidInversionSet(n, edges)) continue;
    Permutation position_order =
        ApplyInversionSet(Permutation::Identity(n), edges);
    return SampleOutcome::FromPositionOrder(model, std::move(position_order));
  }
  throw std::runtime_error(
      "RejectionSample: attempt cap reached; the model puts almost no mass "
      "on valid permutation graphs");
}

double CorrectedMergeProbability(double weight, double later_reach,
                                 double earlier_top) {
  if (weight <= 0.0) return 0.0;
  const double blocked = later_reach + earlier_top - later_reach * earlier_top;
  const double impossible = (1.0 - weight) * blocked;
  // 1 - impossible >= weight > 0.
  return std::min(1.0, weight / (1.0 - impossible));
}

namespace {

class MergeSampler {
 public:
  MergeSampler(const PpgModel& model, Rng& rng, MergeSampleStats* stats)
      : model_(model), rng_(rng), stats_(stats), order_(model.size()) {}

  std::vector<int> Run() {
    if (!order_.empty()) Sample(0, static_cast<int>(order_.size()));
    return std::move(order_);
  }

 private:
  // Writes a sampled ordering of positions [lo, hi) into order_[lo, hi).
  void Sample(int lo, int hi) {
    if (hi - lo == 1) {
      order_[lo] = lo;
      return;
    }
    const int mid = lo + (hi - lo + 1) / 2;
    Sample(lo, mid);
    Sample(mid, hi);
    Merge(lo, mid, hi);
  }

  void Merge(int lo, int mid, int hi) {
    const std::vector<int> top(order_.begin() + lo, order_.begin() + mid);
    const std::vector<int> bottom(order_.begin() + mid, order_.begin() + hi);
    const int num_top = static_cast<int>(top.size());
    const int num_bottom = static_cast<int>(bottom.size());

    // earlier_keep[k][t] = prod over t' < t of (1 - w(top[t'], bottom[k])),
    // filled on first use of bottom item k.
    std::vector<std::vector<double>> earlier_keep(num_bottom);
    std::vector<double> later_keep;
    std::vector<int> passes(num_top, 0);

    int reach = num_bottom;  // Bottom items the current top item may pass.
    for (int t = num_top - 1; t >= 0 && reach > 0; --t) {
      // later_keep[k] = prod over k <= j < reach of (1 - w(top[t], bottom[j])).
      later_keep.assign(reach + 1, 1.0);
      for (int j = reach - 1; j >= 0; --j) {
        later_keep[j] = later_keep[j + 1] * (1.0 - Weight(top[t], bottom[j]));
      }
      int k = 0;
      for (; k < reach; ++k) {
        std::vector<double>& column = earlier_keep[k];
        if (column.empty()) {
          column.resize(num_top + 1);
          column[0] = 1.0;
          for (int s = 0; s < num_top; ++s) {
            column[s + 1] = column[s] * (1.0 - Weight(top[s], bottom[k]));
          }
        }
        const double p = CorrectedMergeProbability(
            Weight(top[t], bottom[k]), 1.0 - later_keep[k + 1],
            1.0 - column[t]);
        if (stats_ != nullptr) ++stats_->bernoulli_trials;
        if (!rng_.Bernoulli(p)) break;
      }
      passes[t] = k;
      reach = k;
    }

    // passes is non-decreasing in t; interleave accordingly.
    int out = lo;
    int b = 0;
    for (int t = 0; t < num_top; ++t) {
      while (b < passes[t]) order_[out++] = bottom[b++];
      order_[out++] = top[t];
    }
    while (b < num_bottom) order_[out++] = bottom[b++];
  }

  double Weight(int i, int j) const { return model_.weight(i, j); }

  const PpgModel& model_;
  Rng& rng_;
  MergeSampleStats* stats_;
  std::vector<int> order_;
};

}  // namespace

SampleOutcome MergeSample(const PpgModel& model, Rng& rng,
                          MergeSampleStats* stats) {
  MergeSampler sampler(model, rng, stats);
  return SampleOutcome::FromPositionOrder(model, Permutation(sampler.Run()));
}

SampleOutcome AdjacentSweepSample(const PpgModel& model, Rng& rng,
                                  std::vector<Permutation>* trace) {
  const int n = model.size();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  auto record = [&] {
    if (trace != nullptr) {
      trace->push_back(model.reference().Compose(Permutation(order)));
    }
  };
  record();

  std::vector<int> eligible;
  for (int k = 0; k + 1 < n; ++k) eligible.push_back(k);
  std::vector<char> blocked(n, 0);
  std::vector<char> queued(n, 0);
  while (!eligible.empty()) {
    // Random visiting order for this round.
    for (int k = static_cast<int>(eligible.size()) - 1; k > 0; --k) {
      std::swap(eligible[k], eligible[rng.UniformInt(k + 1)]);
    }
    std::vector<int> next;
    for (int k : eligible) {
      if (blocked[k]) continue;
      const int a = order[k];
      const int b = order[k + 1];
      if (a > b) continue;  // Already inverted.
      if (!rng.Bernoulli(model.weight(a, b))) continue;
      std::swap(order[k], order[k + 1]);
      for (int neighbor : {k - 1, k + 1}) {
        if (neighbor < 0 || neighbor + 1 >= n) continue;
        blocked[neighbor] = 1;
        if (!queued[neighbor]) {
          queued[neighbor] = 1;
          next.push_back(neighbor);
        }
      }
    }
    for (int k : eligible) blocked[k] = 0;
    for (int k : next) {
      queued[k] = 0;
      blocked[k] = 0;
    }
    eligible = std::move(next);
    record();
  }
  return SampleOutcome::FromPositionOrder(model, Permutation(std::move(order)));
}

}  // namespace ppgsearch
