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

#include "ppgsearch/dataset.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace ppgsearch {

namespace {

using nlohmann::json;

constexpr int kMaxGrade = 4;

DataError LineError(int line, const std::string& what) {
  return DataError("line " + std::to_string(line) + ": " + what);
}

void CheckGrade(int grade, int line, const char* field) {
  if (grade < 0 || grade > kMaxGrade) {
    throw LineError(line, std::string(field) + " outside 0..4");
  }
}

RawQueryRecord ParseRecord(const json& doc, int line) {
  RawQueryRecord record;
  record.query_id = doc.at("query_id").get<std::string>();
  std::set<std::string> seen;
  for (const json& entry : doc.at("items")) {
    RawItem item;
    item.item_id = entry.at("item_id").get<std::string>();
    item.score = entry.at("score").get<double>();
    if (!std::isfinite(item.score)) throw LineError(line, "non-finite score");
    item.group = entry.at("group").get<int>();
    if (entry.contains("true_relevance") && !entry["true_relevance"].is_null()) {
      item.true_relevance = entry["true_relevance"].get<int>();
      CheckGrade(*item.true_relevance, line, "true_relevance");
    }
    if (entry.contains("utility_grade") && !entry["utility_grade"].is_null()) {
      item.utility_grade = entry["utility_grade"].get<int>();
      CheckGrade(*item.utility_grade, line, "utility_grade");
    }
    if (!seen.insert(item.item_id).second) {
      throw LineError(line, "duplicate item_id '" + item.item_id + "'");
    }
    record.items.push_back(std::move(item));
  }
  if (record.items.empty()) throw LineError(line, "query has no items");
  return record;
}

nlohmann::ordered_json RecordToJson(const RawQueryRecord& record) {
  nlohmann::ordered_json items = nlohmann::ordered_json::array();
  for (const RawItem& item : record.items) {
    nlohmann::ordered_json entry;
    entry["item_id"] = item.item_id;
    entry["score"] = item.score;
    if (item.true_relevance) entry["true_relevance"] = *item.true_relevance;
    entry["group"] = item.group;
    if (item.utility_grade) entry["utility_grade"] = *item.utility_grade;
    items.push_back(entry);
  }
  nlohmann::ordered_json doc;
  doc["query_id"] = record.query_id;
  doc["items"] = items;
  return doc;
}

}  // namespace

std::vector<RawQueryRecord> ReadDataset(std::istream& in) {
  std::vector<RawQueryRecord> records;
  std::string text;
  int line = 0;
  bool header_seen = false;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json doc = json::parse(text);
      if (!header_seen) {
        if (!doc.is_object() || doc.value("format", "") != kDatasetFormat) {
          throw LineError(line, "missing dataset header");
        }
        if (doc.value("version", 0) != kDatasetVersion) {
          throw LineError(line, "unsupported dataset version");
        }
        header_seen = true;
        continue;
      }
      records.push_back(ParseRecord(doc, line));
    } catch (const json::exception& e) {
      throw LineError(line, e.what());
    }
  }
  if (!header_seen) throw DataError("empty dataset: no header line");
  return records;
}

std::vector<RawQueryRecord> ReadDatasetFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open dataset '" + path + "'");
  return ReadDataset(in);
}

void WriteDataset(std::ostream& out,
                  const std::vector<RawQueryRecord>& records) {
  nlohmann::ordered_json header;
  header["format"] = kDatasetFormat;
  header["version"] = kDatasetVersion;
  out << header.dump() << "\n";
  for (const RawQueryRecord& record : records) {
    out << RecordToJson(record).dump() << "\n";
  }
}

void WriteDatasetFile(const std::string& path,
                      const std::vector<RawQueryRecord>& records) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write dataset '" + path + "'");
  WriteDataset(out, records);
}

std::vector<RawQueryRecord> ReadTabular(std::istream& in) {
  std::vector<RawQueryRecord> records;
  std::map<std::string, size_t> index;
  std::string text;
  int line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream stream(text);
    std::string field;
    while (std::getline(stream, field, '\t')) fields.push_back(field);
    if (fields.size() == 4) fields.insert(fields.begin() + 3, "");
    if (line == 1 && !fields.empty() && fields[0] == "query_id") continue;
    if (fields.size() != 5) throw LineError(line, "expected 5 columns");
    RawItem item;
    try {
      item.item_id = fields[1];
      item.score = std::stod(fields[2]);
      if (!fields[3].empty()) item.true_relevance = std::stoi(fields[3]);
      item.group = std::stoi(fields[4]);
    } catch (const std::exception&) {
      throw LineError(line, "unparsable number");
    }
    if (item.true_relevance) CheckGrade(*item.true_relevance, line, "relevance");
    auto [it, inserted] = index.emplace(fields[0], records.size());
    if (inserted) records.push_back(RawQueryRecord{fields[0], {}});
    RawQueryRecord& record = records[it->second];
    for (const RawItem& existing : record.items) {
      if (existing.item_id == item.item_id) {
        throw LineError(line, "duplicate item_id '" + item.item_id + "'");
      }
    }
    record.items.push_back(std::move(item));
  }
  return records;
}

std::vector<RawQueryRecord> DiscretizeGrades(
    std::vector<RawQueryRecord> records) {
  for (RawQueryRecord& record : records) {
    if (record.items.empty()) continue;
    double lo = record.items.front().score;
    double hi = lo;
    for (const RawItem& item : record.items) {
      lo = std::min(lo, item.score);
      hi = std::max(hi, item.score);
    }
    const double span = hi - lo;
    for (RawItem& item : record.items) {
      if (span <= 0.0) {
        item.utility_grade = 0;
        continue;
      }
      const double scaled = 5.0 * (item.score - lo) / (span + 1e-9 * span);
      item.utility_grade =
          std::clamp(static_cast<int>(std::floor(scaled)), 0, kMaxGrade);
    }
  }
  return records;
}

std::vector<RawQueryRecord> FilterQueries(std::vector<RawQueryRecord> records,
                                          int max_items) {
  std::vector<RawQueryRecord> kept;
  for (RawQueryRecord& record : records) {
    for (const RawItem& item : record.items) {
      if (!item.utility_grade) {
        throw DataError("FilterQueries: query '" + record.query_id +
                        "' has no grades");
      }
    }
    if (static_cast<int>(record.items.size()) > max_items) {
      std::vector<size_t> order(record.items.size());
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return record.items[a].score > record.items[b].score;
      });
      order.resize(max_items);
      std::sort(order.begin(), order.end());  // Keep the original order.
      std::vector<RawItem> top;
      for (size_t k : order) top.push_back(std::move(record.items[k]));
      record.items = std::move(top);
    }
    bool has_top_grade = false;
    std::set<int> relevant_groups;
    for (const RawItem& item : record.items) {
      if (*item.utility_grade == kMaxGrade) has_top_grade = true;
      if (*item.utility_grade > 0) relevant_groups.insert(item.group);
    }
    if (has_top_grade && relevant_groups.size() > 1) {
      kept.push_back(std::move(record));
    }
  }
  return kept;
}

QueryInstance ToQueryInstance(const RawQueryRecord& record) {
  QueryInstance instance;
  instance.query_id = record.query_id;
  for (const RawItem& item : record.items) {
    if (!item.utility_grade) {
      throw DataError("query '" + record.query_id + "' has no grades");
    }
    QueryItem converted;
    converted.id = item.item_id;
    converted.utility_grade = *item.utility_grade;
    converted.true_relevance = item.true_relevance.value_or(*item.utility_grade);
    converted.group = item.group;
    instance.items.push_back(std::move(converted));
  }
  return instance;
}

}  // namespace ppgsearch
