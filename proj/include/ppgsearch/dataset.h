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

#ifndef PPGSEARCH_DATASET_H_
#define PPGSEARCH_DATASET_H_

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ppgsearch/objectives.h"

namespace ppgsearch {

// Malformed or unusable input data.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RawItem {
  std::string item_id;
  double score = 0.0;  // Ranker output or relevance estimate.
  std::optional<int> true_relevance;
  int group = 0;
  std::optional<int> utility_grade;  // Set by DiscretizeGrades.

  friend bool operator==(const RawItem&, const RawItem&) = default;
};

struct RawQueryRecord {
  std::string query_id;
  std::vector<RawItem> items;

  friend bool operator==(const RawQueryRecord&,
                         const RawQueryRecord&) = default;
};

// Dataset files are JSON lines. The first line is the header
//   {"format":"ppgsearch-dataset","version":1}
// and every following non-empty line is one query:
//   {"query_id":"q1","items":[{"item_id":"d1","score":0.7,
//     "true_relevance":3,"group":1,"utility_grade":4}, ...]}
// true_relevance and utility_grade are optional.
inline constexpr char kDatasetFormat[] = "ppgsearch-dataset";
inline constexpr int kDatasetVersion = 1;

// Throws DataError with the offending line number.
std::vector<RawQueryRecord> ReadDataset(std::istream& in);
std::vector<RawQueryRecord> ReadDatasetFile(const std::string& path);
void WriteDataset(std::ostream& out,
                  const std::vector<RawQueryRecord>& records);
void WriteDatasetFile(const std::string& path,
                      const std::vector<RawQueryRecord>& records);

// Tab-separated export with header
//   query_id  item_id  score  relevance  group
// (relevance may be empty), grouped into records in first-seen order.
std::vector<RawQueryRecord> ReadTabular(std::istream& in);

// Per query, min-max maps scores onto [0, 5) and floors to grades 0..4:
// grade = floor(5 (s - min) / (span + 1e-9 span)). A constant-score query
// gets grade 0 everywhere.
std::vector<RawQueryRecord> DiscretizeGrades(
    std::vector<RawQueryRecord> records);

inline constexpr int kMaxItemsPerQuery = 20;

// Keeps the top `max_items` items of each query by score, then drops
// queries without a grade-4 item and queries whose relevant (grade > 0)
// items all share one group. Requires grades. Idempotent.
std::vector<RawQueryRecord> FilterQueries(std::vector<RawQueryRecord> records,
                                          int max_items = kMaxItemsPerQuery);

// Items keep the record's order. Missing true_relevance falls back to the
// utility grade. Throws DataError if grades are missing.
QueryInstance ToQueryInstance(const RawQueryRecord& record);

}  // namespace ppgsearch

#endif  // PPGSEARCH_DATASET_H_
