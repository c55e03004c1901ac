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

#include "ppgsearch/permutation.h"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ppgsearch {

Permutation::Permutation(std::vector<int> order) : order_(std::move(order)) {
  std::vector<char> seen(order_.size(), 0);
  for (int item : order_) {
    if (item < 0 || item >= size() || seen[item]) {
      throw std::invalid_argument("Permutation: not a permutation of 0..n-1");
    }
    seen[item] = 1;
  }
}

Permutation Permutation::Identity(int n) {
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  return Permutation(std::move(order));
}

std::vector<int> Permutation::Positions() const {
  std::vector<int> positions(order_.size());
  for (int k = 0; k < size(); ++k) positions[order_[k]] = k;
  return positions;
}

Permutation Permutation::Compose(const Permutation& position_order) const {
  if (position_order.size() != size()) {
    throw std::invalid_argument("Permutation::Compose: size mismatch");
  }
  std::vector<int> result(order_.size());
  for (int k = 0; k < size(); ++k) result[k] = order_[position_order[k]];
  return Permutation(std::move(result));
}

IndexPair::IndexPair(int a, int b) {
  if (a == b) throw std::invalid_argument("IndexPair: self-pair");
  first = std::min(a, b);
  second = std::max(a, b);
}

InversionSet::InversionSet(std::vector<IndexPair> pairs)
    : pairs_(std::move(pairs)) {
  for (const IndexPair& p : pairs_) {
    if (p.first < 0 || p.first >= p.second) {
      throw std::invalid_argument("InversionSet: malformed pair");
    }
  }
  std::sort(pairs_.begin(), pairs_.end());
  pairs_.erase(std::unique(pairs_.begin(), pairs_.end()), pairs_.end());
}

InversionSet::InversionSet(std::initializer_list<std::pair<int, int>> pairs) {
  std::vector<IndexPair> converted;
  converted.reserve(pairs.size());
  for (const auto& [a, b] : pairs) converted.emplace_back(a, b);
  *this = InversionSet(std::move(converted));
}

InversionSet InversionSet::Complete(int n) {
  std::vector<IndexPair> pairs;
  pairs.reserve(static_cast<size_t>(n) * (n > 0 ? n - 1 : 0) / 2);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  }
  return InversionSet(std::move(pairs));
}

bool InversionSet::Contains(IndexPair pair) const {
  return std::binary_search(pairs_.begin(), pairs_.end(), pair);
}

int InversionSet::MinimumSize() const {
  int result = 0;
  for (const IndexPair& p : pairs_) result = std::max(result, p.second + 1);
  return result;
}

namespace {

// Dense symmetric membership table.
std::vector<char> ToAdjacency(int n, const InversionSet& edges) {
  if (edges.MinimumSize() > n) {
    throw std::invalid_argument("inversion set index out of range for n=" +
                                std::to_string(n));
  }
  std::vector<char> adjacency(static_cast<size_t>(n) * n, 0);
  for (const IndexPair& p : edges.pairs()) {
    adjacency[static_cast<size_t>(p.first) * n + p.second] = 1;
    adjacency[static_cast<size_t>(p.second) * n + p.first] = 1;
  }
  return adjacency;
}

}  // namespace

InversionSet InversionSetOfPositionOrder(std::span<const int> position_order) {
  const int n = static_cast<int>(position_order.size());
  std::vector<int> rank(n);
  for (int k = 0; k < n; ++k) rank[position_order[k]] = k;
  std::vector<IndexPair> pairs;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (rank[i] > rank[j]) pairs.emplace_back(i, j);
    }
  }
  return InversionSet(std::move(pairs));
}

InversionSet ComputeInversionSet(const Permutation& reference,
                                 const Permutation& target) {
  if (reference.size() != target.size()) {
    throw std::invalid_argument("ComputeInversionSet: size mismatch");
  }
  const std::vector<int> target_positions = target.Positions();
  // position_order[k] = reference position of the item at target slot k.
  const std::vector<int> reference_positions = reference.Positions();
  std::vector<int> position_order(reference.size());
  for (int k = 0; k < target.size(); ++k) {
    position_order[k] = reference_positions[target[k]];
  }
  return InversionSetOfPositionOrder(position_order);
}

Permutation ApplyInversionSet(const Permutation& reference,
                              const InversionSet& edges) {
  const int n = reference.size();
  const std::vector<char> adjacency = ToAdjacency(n, edges);
  // If `edges` is valid, the number of positions that end up ahead of i is
  // the kept pairs (j, i) with j < i plus the inverted pairs (i, j), j > i.
  std::vector<int> position_order(n, -1);
  for (int i = 0; i < n; ++i) {
    int ahead = 0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const bool inverted = adjacency[static_cast<size_t>(i) * n + j];
      if ((j < i) != inverted) ++ahead;
    }
    if (position_order[ahead] != -1) {
      throw std::invalid_argument("ApplyInversionSet: invalid inversion set");
    }
    position_order[ahead] = i;
  }
  if (InversionSetOfPositionOrder(position_order) != edges) {
    throw std::invalid_argument("ApplyInversionSet: invalid inversion set");
  }
  return reference.Compose(Permutation(std::move(position_order)));
}

bool IsValidInversionSet(int n, const InversionSet& edges) {
  const std::vector<char> adjacency = ToAdjacency(n, edges);
  auto inverted = [&](int a, int b) {
    return adjacency[static_cast<size_t>(a) * n + b] != 0;
  };
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const bool ij = inverted(i, j);
      for (int k = j + 1; k < n; ++k) {
        const bool jk = inverted(j, k);
        if (ij == jk && inverted(i, k) != ij) return false;
      }
    }
  }
  return true;
}

InversionSet ComplementInversionSet(int n, const InversionSet& edges) {
  if (!IsValidInversionSet(n, edges)) {
    throw std::invalid_argument("ComplementInversionSet: invalid input");
  }
  std::vector<IndexPair> pairs;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (!edges.Contains(i, j)) pairs.emplace_back(i, j);
    }
  }
  return InversionSet(std::move(pairs));
}

SupportEdgeFamily SupportEdges(int n, IndexPair pair) {
  if (n > kMaxSupportEdgesSize) {
    throw std::invalid_argument("SupportEdges: n exceeds the brute-force cap");
  }
  if (pair.second >= n) {
    throw std::invalid_argument("SupportEdges: pair index out of range");
  }
  std::vector<IndexPair> all = InversionSet::Complete(n).pairs();
  const int num_pairs = static_cast<int>(all.size());
  const int target_bit = static_cast<int>(
      std::find(all.begin(), all.end(), pair) - all.begin());
  auto to_set = [&](uint32_t mask) {
    std::vector<IndexPair> pairs;
    for (int b = 0; b < num_pairs; ++b) {
      if (mask & (1u << b)) pairs.push_back(all[b]);
    }
    return InversionSet(std::move(pairs));
  };

  std::vector<uint32_t> containing;
  for (uint32_t mask = 0; mask < (1u << num_pairs); ++mask) {
    if ((mask & (1u << target_bit)) && IsValidInversionSet(n, to_set(mask))) {
      containing.push_back(mask);
    }
  }
  SupportEdgeFamily family;
  for (uint32_t mask : containing) {
    const bool minimal = std::none_of(
        containing.begin(), containing.end(), [mask](uint32_t other) {
          return other != mask && (other & mask) == other;
        });
    if (minimal) family.push_back(to_set(mask & ~(1u << target_bit)));
  }
  std::sort(family.begin(), family.end());
  return family;
}

int64_t KendallDistance(const Permutation& a, const Permutation& b) {
  return ComputeInversionSet(a, b).size();
}

}  // namespace ppgsearch
