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

#include "ppgsearch/plackett_luce.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ppgsearch {

PlModel PlModel::FromTheta(const std::vector<double>& theta) {
  std::vector<double> log_theta(theta.size());
  for (size_t k = 0; k < theta.size(); ++k) {
    if (!(theta[k] > 0.0) || !std::isfinite(theta[k])) {
      throw std::invalid_argument("PlModel: theta must be positive and finite");
    }
    log_theta[k] = std::log(theta[k]);
  }
  return FromLogTheta(std::move(log_theta));
}

PlModel PlModel::FromLogTheta(std::vector<double> log_theta) {
  for (double v : log_theta) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("PlModel: log theta must be finite");
    }
  }
  PlModel model;
  model.log_theta_ = std::move(log_theta);
  return model;
}

double PlModel::theta(int item) const { return std::exp(log_theta_[item]); }

std::vector<double> PlModel::Theta() const {
  std::vector<double> theta(log_theta_.size());
  for (int k = 0; k < size(); ++k) theta[k] = this->theta(k);
  return theta;
}

Permutation PlModel::Mode() const {
  std::vector<int> order(log_theta_.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return log_theta_[a] > log_theta_[b];
  });
  return Permutation(std::move(order));
}

namespace {

void CheckSize(const PlModel& model, const Permutation& b) {
  if (model.size() != b.size()) {
    throw std::invalid_argument("Plackett-Luce: permutation size mismatch");
  }
}

// Shifted theta, max log theta mapped to 1; P and its log-gradient in theta
// direction are unaffected up to the known scale.
std::vector<double> ScaledTheta(const PlModel& model, double* scale_log) {
  const auto& lt = model.log_theta();
  const double top = lt.empty() ? 0.0 : *std::max_element(lt.begin(), lt.end());
  std::vector<double> theta(lt.size());
  for (size_t k = 0; k < lt.size(); ++k) theta[k] = std::exp(lt[k] - top);
  if (scale_log != nullptr) *scale_log = top;
  return theta;
}

}  // namespace

double PlProbability(const PlModel& model, const Permutation& b) {
  CheckSize(model, b);
  const std::vector<double> theta = ScaledTheta(model, nullptr);
  const int n = b.size();
  double suffix = 0.0;
  for (int k = 0; k < n; ++k) suffix += theta[b[k]];
  double p = 1.0;
  for (int i = 0; i + 1 < n; ++i) {
    p *= theta[b[i]] / suffix;
    suffix -= theta[b[i]];
  }
  return p;
}

Permutation PlSample(const PlModel& model, Rng& rng) {
  const int n = model.size();
  std::vector<double> key(n);
  for (int k = 0; k < n; ++k) key[k] = model.log_theta()[k] + rng.Gumbel();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int c) { return key[a] > key[c]; });
  return Permutation(std::move(order));
}

std::vector<double> PlLogProbGradient(const PlModel& model,
                                      const Permutation& b) {
  CheckSize(model, b);
  const int n = b.size();
  double top = 0.0;
  const std::vector<double> scaled = ScaledTheta(model, &top);
  // Stage sums, accumulated from the back to avoid cancellation.
  std::vector<double> stage_sum(n + 1, 0.0);
  for (int i = n - 1; i >= 0; --i) stage_sum[i] = stage_sum[i + 1] + scaled[b[i]];
  const double unscale = std::exp(-top);  // d/dtheta = unscale * d/dscaled.

  std::vector<double> gradient(n, 0.0);
  // Running sum of 1/stage_sum over the stages where an item is still
  // unplaced: item b[i] sees stages 0..i, capped at n-2.
  double inverse_sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const int item = b[i];
    if (i < n - 1) {
      inverse_sum += 1.0 / stage_sum[i];
      gradient[item] = (1.0 / scaled[item] - inverse_sum) * unscale;
    } else {
      gradient[item] = -inverse_sum * unscale;
    }
  }
  return gradient;
}

}  // namespace ppgsearch
