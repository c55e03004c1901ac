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

#ifndef PPGSEARCH_PERMUTATION_H_
#define PPGSEARCH_PERMUTATION_H_

#include <cstdint>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace ppgsearch {

// An ordering of the item indices 0..n-1. order()[k] is the item at
// position k.
class Permutation {
 public:
  Permutation() = default;
  // Throws std::invalid_argument unless `order` holds each of 0..n-1 once.
  explicit Permutation(std::vector<int> order);
  Permutation(std::initializer_list<int> order)
      : Permutation(std::vector<int>(order)) {}

  static Permutation Identity(int n);

  int size() const { return static_cast<int>(order_.size()); }
  int operator[](int position) const { return order_[position]; }
  std::span<const int> order() const { return order_; }

  // positions()[item] is the position of `item`.
  std::vector<int> Positions() const;

  // Item order obtained by reading this permutation at the positions listed
  // in `position_order`: result[k] = (*this)[position_order[k]].
  Permutation Compose(const Permutation& position_order) const;

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation&, const Permutation&) = default;

 private:
  std::vector<int> order_;
};

// Unordered pair stored canonically with first < second.
struct IndexPair {
  int first = 0;
  int second = 0;

  IndexPair() = default;
  // Canonicalizes; throws std::invalid_argument on a self-pair.
  IndexPair(int a, int b);

  friend bool operator==(const IndexPair&, const IndexPair&) = default;
  friend auto operator<=>(const IndexPair&, const IndexPair&) = default;
};

// A set of unordered index pairs. Indices are positions in some reference
// permutation; translating them to items is the caller's business.
class InversionSet {
 public:
  InversionSet() = default;
  // Accepts pairs in any orientation and order; duplicates collapse.
  explicit InversionSet(std::vector<IndexPair> pairs);
  InversionSet(std::initializer_list<std::pair<int, int>> pairs);

  // Every pair over n indices.
  static InversionSet Complete(int n);

  const std::vector<IndexPair>& pairs() const { return pairs_; }
  int size() const { return static_cast<int>(pairs_.size()); }
  bool empty() const { return pairs_.empty(); }
  bool Contains(IndexPair pair) const;
  bool Contains(int a, int b) const { return Contains(IndexPair(a, b)); }
  // Largest index mentioned plus one; 0 when empty.
  int MinimumSize() const;

  friend bool operator==(const InversionSet&, const InversionSet&) = default;
  friend auto operator<=>(const InversionSet&, const InversionSet&) = default;

 private:
  std::vector<IndexPair> pairs_;  // Sorted, unique.
};

// Minimal support sets of one pair, each with the pair itself removed.
using SupportEdgeFamily = std::vector<InversionSet>;

// Pairs of reference positions whose items appear in opposite relative
// order in `target`. Throws std::invalid_argument on a size mismatch.
InversionSet ComputeInversionSet(const Permutation& reference,
                                 const Permutation& target);

// Same, with the target given as an ordering of reference positions.
InversionSet InversionSetOfPositionOrder(std::span<const int> position_order);

// Inverse of ComputeInversionSet: the unique permutation whose inversion set
// relative to `reference` is `edges`. Throws std::invalid_argument if no
// such permutation exists.
Permutation ApplyInversionSet(const Permutation& reference,
                              const InversionSet& edges);

// True iff `edges` is the inversion set of some permutation of 0..n-1 with
// respect to the identity order. Cubic-time transitivity check: for every
// i < j < k, {i,j} and {j,k} inverted forces {i,k} inverted, and {i,j} and
// {j,k} both kept forces {i,k} kept. Throws on an index >= n.
bool IsValidInversionSet(int n, const InversionSet& edges);

// All pairs over n indices that are not in `edges`. Throws if `edges` is
// not a valid inversion set.
InversionSet ComplementInversionSet(int n, const InversionSet& edges);

// Largest n accepted by SupportEdges.
inline constexpr int kMaxSupportEdgesSize = 6;

// Brute-force support-edge oracle: enumerates all 2^C(n,2) edge subsets,
// keeps the valid ones containing `pair` that have no proper valid subset
// also containing `pair`, and strips `pair` from each. Sorted output.
SupportEdgeFamily SupportEdges(int n, IndexPair pair);

// Number of discordant pairs between two permutations of the same items.
int64_t KendallDistance(const Permutation& a, const Permutation& b);

}  // namespace ppgsearch

#endif  // PPGSEARCH_PERMUTATION_H_
