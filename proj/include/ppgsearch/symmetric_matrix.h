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

#ifndef PPGSEARCH_SYMMETRIC_MATRIX_H_
#define PPGSEARCH_SYMMETRIC_MATRIX_H_

#include <cstddef>
#include <vector>

namespace ppgsearch {

// Dense n x n matrix whose setter writes both (i, j) and (j, i).
template <typename T>
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;
  SymmetricMatrix(int n, T fill)
      : n_(n), values_(static_cast<size_t>(n) * n, fill) {}

  int size() const { return n_; }
  T operator()(int i, int j) const { return values_[Index(i, j)]; }
  void Set(int i, int j, T value) {
    values_[Index(i, j)] = value;
    values_[Index(j, i)] = value;
  }
  // Row-major storage, n * n entries.
  const std::vector<T>& data() const { return values_; }

  friend bool operator==(const SymmetricMatrix&,
                         const SymmetricMatrix&) = default;

 private:
  size_t Index(int i, int j) const {
    return static_cast<size_t>(i) * n_ + j;
  }

  int n_ = 0;
  std::vector<T> values_;
};

}  // namespace ppgsearch

#endif  // PPGSEARCH_SYMMETRIC_MATRIX_H_
