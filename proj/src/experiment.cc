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

#include "ppgsearch/experiment.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <thread>
#include <tuple>

#include "json.hpp"
#include "ppgsearch/rng.h"

namespace ppgsearch {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string FormatDouble(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

const char* SamplerName(PpgSampler sampler) {
  switch (sampler) {
    case PpgSampler::kMerge:
      return "merge";
    case PpgSampler::kAdjacentSweep:
      return "adjacent";
    case PpgSampler::kRejection:
      return "rejection";
  }
  return "?";
}

PpgSampler ParseSampler(const std::string& name) {
  if (name == "merge") return PpgSampler::kMerge;
  if (name == "adjacent") return PpgSampler::kAdjacentSweep;
  if (name == "rejection") return PpgSampler::kRejection;
  throw ConfigError("unknown sampler '" + name + "'");
}

FairnessMetric ParseMetric(const std::string& name) {
  if (name == "dtr") return FairnessMetric::kDtr;
  if (name == "eel") return FairnessMetric::kEel;
  throw ConfigError("unknown metric '" + name + "'");
}

}  // namespace

const char* MethodName(Method method) {
  switch (method) {
    case Method::kPpg:
      return "ppg";
    case Method::kPpgIntra:
      return "ppg_intra";
    case Method::kPl:
      return "pl";
    case Method::kRand:
      return "rand";
  }
  return "?";
}

Method ParseMethod(const std::string& name) {
  if (name == "ppg") return Method::kPpg;
  if (name == "ppg_intra") return Method::kPpgIntra;
  if (name == "pl") return Method::kPl;
  if (name == "rand") return Method::kRand;
  throw ConfigError("unknown method '" + name + "'");
}

void ExperimentConfig::Validate() const {
  if (dataset.empty()) throw ConfigError("config: 'dataset' is required");
  if (output.empty()) throw ConfigError("config: 'output' is required");
  if (methods.empty()) throw ConfigError("config: no methods given");
  if (sessions.empty()) throw ConfigError("config: no session counts given");
  for (int n : sessions) {
    if (n < 1) throw ConfigError("config: session counts must be >= 1");
  }
  if (threads < 1) throw ConfigError("config: threads must be >= 1");
  if (pl_eval_samples < 1) {
    throw ConfigError("config: pl_eval_samples must be >= 1");
  }
  if (exposure.kind == ExposureKind::kGeometric &&
      !(exposure.patience > 0.0 && exposure.patience < 1.0)) {
    throw ConfigError("config: geometric exposure needs patience in (0, 1)");
  }
  try {
    train.Validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: train: ") + e.what());
  }
}

namespace {

// A misspelled key would otherwise fall back to a default silently.
void CheckKeys(const json& object, std::initializer_list<const char*> allowed,
               const std::string& where) {
  for (const auto& [key, value] : object.items()) {
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) {
          return key == a;
        }) == allowed.end()) {
      throw ConfigError("config: unknown key '" + where + key + "'");
    }
  }
}

}  // namespace

ExperimentConfig ParseExperimentConfig(const std::string& text,
                                       const std::string& base_dir) {
  ExperimentConfig config;
  try {
    const json doc = json::parse(text);
    if (!doc.is_object()) throw ConfigError("config: expected an object");
    CheckKeys(doc,
              {"dataset", "method", "methods", "metric", "sessions", "seed",
               "output", "threads", "pl_eval_samples", "filter", "train",
               "exposure"},
              "");
    // Relative paths are relative to the config file.
    auto resolve = [&](std::string path) {
      if (base_dir.empty() || !std::filesystem::path(path).is_relative()) {
        return path;
      }
      return (std::filesystem::path(base_dir) / path).lexically_normal().string();
    };
    config.dataset = resolve(doc.at("dataset").get<std::string>());
    const json& methods = doc.contains("methods") ? doc.at("methods")
                                                  : doc.at("method");
    if (methods.is_string()) {
      config.methods.push_back(ParseMethod(methods.get<std::string>()));
    } else {
      for (const json& m : methods) {
        config.methods.push_back(ParseMethod(m.get<std::string>()));
      }
    }
    config.metric = ParseMetric(doc.at("metric").get<std::string>());
    if (doc.contains("sessions")) {
      const json& s = doc.at("sessions");
      config.sessions = s.is_number() ? std::vector<int>{s.get<int>()}
                                      : s.get<std::vector<int>>();
    }
    config.seed = doc.value("seed", uint64_t{0});
    config.output = resolve(doc.at("output").get<std::string>());
    config.threads = doc.value("threads", 1);
    config.pl_eval_samples = doc.value("pl_eval_samples", 100);
    config.filter = doc.value("filter", true);
    if (doc.contains("train")) {
      const json& t = doc.at("train");
      CheckKeys(t,
                {"lambda", "learning_rate", "patience", "max_iters",
                 "reward_baseline", "snapshot_batch", "sampler"},
                "train.");
      TrainConfig& train = config.train;
      train.lambda = t.value("lambda", train.lambda);
      train.learning_rate = t.value("learning_rate", train.learning_rate);
      train.patience = t.value("patience", train.patience);
      train.max_iters = t.value("max_iters", train.max_iters);
      train.reward_baseline = t.value("reward_baseline", train.reward_baseline);
      train.snapshot_batch = t.value("snapshot_batch", train.snapshot_batch);
      train.sampler = ParseSampler(t.value("sampler", std::string("merge")));
    }
    if (doc.contains("exposure")) {
      const json& e = doc.at("exposure");
      CheckKeys(e, {"kind", "patience", "aggregation"}, "exposure.");
      const std::string kind = e.value("kind", std::string("log"));
      if (kind == "log") {
        config.exposure.kind = ExposureKind::kLogarithmic;
      } else if (kind == "geometric") {
        config.exposure.kind = ExposureKind::kGeometric;
      } else {
        throw ConfigError("config: unknown exposure kind '" + kind + "'");
      }
      config.exposure.patience = e.value("patience", config.exposure.patience);
      const std::string aggregation = e.value("aggregation", std::string("sum"));
      if (aggregation == "sum") {
        config.aggregation = GroupAggregation::kSum;
      } else if (aggregation == "mean") {
        config.aggregation = GroupAggregation::kMean;
      } else {
        throw ConfigError("config: unknown aggregation '" + aggregation + "'");
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  config.Validate();
  return config;
}

ExperimentConfig LoadExperimentConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseExperimentConfig(
      buffer.str(), std::filesystem::path(path).parent_path().string());
}

namespace {

ordered_json ConfigToJsonDoc(const ExperimentConfig& config) {
  ordered_json doc;
  doc["dataset"] = config.dataset;
  std::vector<std::string> methods;
  for (Method m : config.methods) methods.push_back(MethodName(m));
  doc["methods"] = methods;
  doc["metric"] = MetricName(config.metric);
  doc["sessions"] = config.sessions;
  doc["seed"] = config.seed;
  doc["output"] = config.output;
  doc["threads"] = config.threads;
  doc["pl_eval_samples"] = config.pl_eval_samples;
  doc["filter"] = config.filter;
  ordered_json train;
  train["lambda"] = config.train.lambda;
  train["learning_rate"] = config.train.learning_rate;
  train["patience"] = config.train.patience;
  train["max_iters"] = config.train.max_iters;
  train["reward_baseline"] = config.train.reward_baseline;
  train["snapshot_batch"] = config.train.snapshot_batch;
  train["sampler"] = SamplerName(config.train.sampler);
  doc["train"] = train;
  ordered_json exposure;
  exposure["kind"] =
      config.exposure.kind == ExposureKind::kLogarithmic ? "log" : "geometric";
  exposure["patience"] = config.exposure.patience;
  exposure["aggregation"] =
      config.aggregation == GroupAggregation::kSum ? "sum" : "mean";
  doc["exposure"] = exposure;
  return doc;
}

// Deterministic per-cell generator, independent of scheduling.
Rng CellRng(const ExperimentConfig& config, const std::string& query_id,
            Method method, int sessions) {
  return Rng::ForStream(config.seed, query_id + "\x1f" + MethodName(method) +
                                         "\x1f" + std::to_string(sessions));
}

Permutation UniformPermutation(int n, Rng& rng) {
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (int k = n - 1; k > 0; --k) std::swap(order[k], order[rng.UniformInt(k + 1)]);
  return Permutation(std::move(order));
}

}  // namespace

std::string ExperimentConfigToJson(const ExperimentConfig& config) {
  return ConfigToJsonDoc(config).dump(2) + "\n";
}

Permutation ScoreOrder(const std::vector<RawItem>& items) {
  std::vector<int> order(items.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return items[a].score > items[b].score;
  });
  return Permutation(std::move(order));
}

ResultRow RunCell(const QueryInstance& instance, const Permutation& initial,
                  Method method, int sessions, const ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  const int n = instance.size();
  if (initial.size() != n) {
    throw std::invalid_argument("RunCell: initial ranking size mismatch");
  }
  ResultRow row;
  row.query_id = instance.query_id;
  row.method = method;
  row.metric = config.metric;
  row.sessions = sessions;
  Rng rng = CellRng(config, instance.query_id, method, sessions);
  TrainConfig train = config.train;
  train.seed = rng.NextU64();

  auto score = [&](const RankingPolicy& policy) {
    row.fairness = EvaluateMetric(config.metric, policy, instance,
                                  config.exposure, config.aggregation);
    row.ndcg = NdcgAtK(policy, instance);
  };

  switch (method) {
    case Method::kRand: {
      RankingPolicy policy;
      for (int s = 0; s < sessions; ++s) {
        policy.sessions.push_back(UniformPermutation(n, rng));
      }
      score(policy);
      row.evaluations = 1;
      break;
    }
    case Method::kPpg:
    case Method::kPpgIntra: {
      const Objective objective = MakeObjective(
          config.metric, instance, sessions, config.exposure,
          config.aggregation);
      std::vector<int> reference;
      for (int s = 0; s < sessions; ++s) {
        for (int item : initial.order()) reference.push_back(s * n + item);
      }
      std::vector<int> base(n);
      std::iota(base.begin(), base.end(), 0);
      std::vector<ConstraintSpec> constraints = {
          ConcatenateSessions(std::span<const int>(base), sessions).constraint};
      if (method == Method::kPpgIntra) {
        // Each fairness group keeps the ranker's order within every session.
        ConstraintSpec intra{ConstraintKind::kIntraGroupFixed, {}};
        std::map<int, std::vector<int>> by_group;
        for (int k = 0; k < n; ++k) by_group[instance.items[k].group].push_back(k);
        for (int s = 0; s < sessions; ++s) {
          for (const auto& [group, members] : by_group) {
            std::vector<int> items;
            for (int k : members) items.push_back(s * n + k);
            intra.groups.push_back(std::move(items));
          }
        }
        constraints.push_back(std::move(intra));
      }
      const TrainResult result =
          Train(PpgModel(Permutation(std::move(reference))), objective, train,
                constraints);
      score(SplitSessions(result.best_permutation, n, sessions));
      row.evaluations = result.evaluations;
      break;
    }
    case Method::kPl: {
      const Objective objective = MakeObjective(
          config.metric, instance, sessions, config.exposure,
          config.aggregation);
      const TrainResult result = Train(PlModel(n * sessions), objective, train);
      // A Plackett-Luce policy is stochastic; report its expected metric.
      const PlModel& model = std::get<PlModel>(result.final_model);
      double fairness = 0.0;
      double ndcg = 0.0;
      for (int draw = 0; draw < config.pl_eval_samples; ++draw) {
        score(SplitSessions(PlSample(model, rng), n, sessions));
        fairness += row.fairness;
        ndcg += row.ndcg;
      }
      row.fairness = fairness / config.pl_eval_samples;
      row.ndcg = ndcg / config.pl_eval_samples;
      row.evaluations = result.evaluations;
      break;
    }
  }
  row.wall_seconds = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - start)
                         .count();
  return row;
}

ExperimentSummary RunExperiment(const ExperimentConfig& config) {
  config.Validate();
  std::vector<RawQueryRecord> records = ReadDatasetFile(config.dataset);
  const bool graded = std::all_of(
      records.begin(), records.end(), [](const RawQueryRecord& r) {
        return std::all_of(r.items.begin(), r.items.end(),
                           [](const RawItem& item) {
                             return item.utility_grade.has_value();
                           });
      });
  if (!graded) records = DiscretizeGrades(std::move(records));
  if (config.filter) records = FilterQueries(std::move(records));
  if (records.empty()) throw DataError("no queries left after filtering");

  struct QueryOutcome {
    std::vector<ResultRow> rows;
    std::string skip_reason;
  };
  std::vector<QueryOutcome> outcomes(records.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t q = next++; q < records.size(); q = next++) {
      const QueryInstance instance = ToQueryInstance(records[q]);
      const Permutation initial = ScoreOrder(records[q].items);
      try {
        for (int sessions : config.sessions) {
          for (Method method : config.methods) {
            outcomes[q].rows.push_back(
                RunCell(instance, initial, method, sessions, config));
          }
        }
      } catch (const std::exception& e) {
        // Metric undefined for this query (e.g. a zero-utility group).
        outcomes[q].rows.clear();
        outcomes[q].skip_reason = instance.query_id + ": " + e.what();
      }
    }
  };
  const int threads =
      std::min<int>(config.threads, static_cast<int>(records.size()));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  ExperimentSummary summary;
  summary.queries = static_cast<int>(records.size());
  for (QueryOutcome& outcome : outcomes) {
    if (!outcome.skip_reason.empty()) {
      ++summary.skipped;
      summary.skipped_reasons.push_back(std::move(outcome.skip_reason));
    }
    for (ResultRow& row : outcome.rows) summary.rows.push_back(std::move(row));
  }

  std::ofstream table(config.output);
  if (!table) throw ConfigError("cannot write output '" + config.output + "'");
  table << kResultHeader << "\n";
  for (const ResultRow& row : summary.rows) {
    table << row.query_id << '\t' << MethodName(row.method) << '\t'
          << MetricName(row.metric) << '\t' << row.sessions << '\t'
          << FormatDouble(row.fairness) << '\t' << FormatDouble(row.ndcg)
          << '\t' << row.evaluations << "\n";
  }

  std::ofstream timing(config.output + ".timing.tsv");
  timing << "query_id\tmethod\tsessions\twall_seconds\n";
  for (const ResultRow& row : summary.rows) {
    timing << row.query_id << '\t' << MethodName(row.method) << '\t'
           << row.sessions << '\t' << FormatDouble(row.wall_seconds) << "\n";
  }

  ordered_json manifest = ConfigToJsonDoc(config);
  manifest["queries"] = summary.queries;
  manifest["skipped"] = summary.skipped;
  manifest["skipped_queries"] = summary.skipped_reasons;
  manifest["rows"] = summary.rows.size();
  std::ofstream manifest_out(config.output + ".manifest.json");
  manifest_out << manifest.dump(2) << "\n";
  return summary;
}

namespace {

std::vector<std::string> SplitTabs(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream stream(line);
  std::string field;
  while (std::getline(stream, field, '\t')) fields.push_back(field);
  return fields;
}

}  // namespace

void Aggregate(const std::vector<std::string>& inputs,
               const std::string& output) {
  struct Cell {
    int count = 0;
    double fairness = 0.0;
    double ndcg = 0.0;
  };
  // Keyed by (method, metric, N); first-seen order is kept for output.
  std::map<std::tuple<std::string, std::string, int>, Cell> cells;
  std::vector<std::tuple<std::string, std::string, int>> order;
  for (const std::string& path : inputs) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open result file '" + path + "'");
    std::string line;
    if (!std::getline(in, line) || line != kResultHeader) {
      throw DataError("'" + path + "': not a result table (header mismatch)");
    }
    int line_number = 1;
    while (std::getline(in, line)) {
      ++line_number;
      if (line.empty()) continue;
      const std::vector<std::string> fields = SplitTabs(line);
      if (fields.size() != 7) {
        throw DataError("'" + path + "' line " + std::to_string(line_number) +
                        ": expected 7 columns");
      }
      try {
        const auto key = std::make_tuple(fields[1], fields[2],
                                         std::stoi(fields[3]));
        auto [it, inserted] = cells.try_emplace(key);
        if (inserted) order.push_back(key);
        it->second.count += 1;
        it->second.fairness += std::stod(fields[4]);
        it->second.ndcg += std::stod(fields[5]);
      } catch (const std::logic_error&) {
        throw DataError("'" + path + "' line " + std::to_string(line_number) +
                        ": unparsable number");
      }
    }
  }
  if (cells.empty()) throw DataError("aggregate: no result rows");

  std::ofstream table(output);
  if (!table) throw DataError("cannot write '" + output + "'");
  table << "method\tmetric\tsessions\tqueries\tmean_fairness\tmean_ndcg10\n";
  for (const auto& key : order) {
    const Cell& cell = cells.at(key);
    table << std::get<0>(key) << '\t' << std::get<1>(key) << '\t'
          << std::get<2>(key) << '\t' << cell.count << '\t'
          << FormatDouble(cell.fairness / cell.count) << '\t'
          << FormatDouble(cell.ndcg / cell.count) << "\n";
  }

  // One gnuplot data block per (method, metric), sorted by N.
  std::ofstream series(output + ".series");
  std::map<std::pair<std::string, std::string>, std::vector<int>> blocks;
  std::vector<std::pair<std::string, std::string>> block_order;
  for (const auto& key : order) {
    const auto block = std::make_pair(std::get<0>(key), std::get<1>(key));
    auto [it, inserted] = blocks.try_emplace(block);
    if (inserted) block_order.push_back(block);
    it->second.push_back(std::get<2>(key));
  }
  bool first = true;
  for (const auto& block : block_order) {
    std::vector<int>& sessions = blocks[block];
    std::sort(sessions.begin(), sessions.end());
    if (!first) series << "\n\n";
    first = false;
    series << "# method=" << block.first << " metric=" << block.second << "\n";
    series << "# sessions mean_fairness mean_ndcg10\n";
    for (int s : sessions) {
      const Cell& cell = cells.at(std::make_tuple(block.first, block.second, s));
      series << s << ' ' << FormatDouble(cell.fairness / cell.count) << ' '
             << FormatDouble(cell.ndcg / cell.count) << "\n";
    }
  }
}

std::vector<RawQueryRecord> MakeSyntheticSuite(int queries,
                                               int items_per_group,
                                               uint64_t seed) {
  if (items_per_group < 1 || items_per_group > 5) {
    throw std::invalid_argument(
        "MakeSyntheticSuite: items_per_group must be in 1..5");
  }
  Rng rng(seed);
  auto distinct_grades = [&] {
    std::vector<int> grades = {0, 1, 2, 3, 4};
    for (int k = 4; k > 0; --k) std::swap(grades[k], grades[rng.UniformInt(k + 1)]);
    grades.resize(items_per_group);
    return grades;
  };
  std::vector<RawQueryRecord> records;
  for (int q = 0; q < queries; ++q) {
    std::vector<int> grades[2];
    do {
      grades[0] = distinct_grades();
      grades[1] = distinct_grades();
    } while (std::count(grades[0].begin(), grades[0].end(), 4) +
                 std::count(grades[1].begin(), grades[1].end(), 4) ==
             0);
    RawQueryRecord record;
    record.query_id = "s" + std::to_string(q);
    for (int g = 0; g < 2; ++g) {
      for (int k = 0; k < items_per_group; ++k) {
        RawItem item;
        item.item_id = "g" + std::to_string(g) + "i" + std::to_string(k);
        item.utility_grade = grades[g][k];
        item.true_relevance = grades[g][k];
        item.group = g;
        item.score = grades[g][k] + 0.9 * rng.Uniform();
        record.items.push_back(std::move(item));
      }
    }
    // Present items in random order; the score order is the ranker output.
    for (int k = static_cast<int>(record.items.size()) - 1; k > 0; --k) {
      std::swap(record.items[k], record.items[rng.UniformInt(k + 1)]);
    }
    records.push_back(std::move(record));
  }
  return records;
}

}  // namespace ppgsearch
