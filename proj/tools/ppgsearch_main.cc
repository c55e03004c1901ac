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

// Command-line front end:
//   ppgsearch run --config <path> [--output <path>]
//   ppgsearch aggregate --inputs <paths...> --out <path>
//   ppgsearch synth --out <path> [--queries 50] [--items-per-group 4] [--seed 1]
//   ppgsearch convert --tsv <path> --out <path>
// Exit codes: 0 success, 1 config error, 2 data error.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ppgsearch/dataset.h"
#include "ppgsearch/experiment.h"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitData = 2;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fairness post-processing with probabilistic permutation graphs"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output_override;
  auto* run = app.add_subcommand("run", "Run an experiment config");
  run->add_option("--config", config_path, "Experiment config (JSON)")
      ->required();
  run->add_option("--output", output_override,
                  "Override the config's output path");

  std::vector<std::string> inputs;
  std::string aggregate_out;
  auto* aggregate = app.add_subcommand("aggregate", "Average result tables");
  aggregate->add_option("--inputs", inputs, "Result tables")->required();
  aggregate->add_option("--out", aggregate_out, "Summary table")->required();

  std::string synth_out;
  int synth_queries = 50;
  int synth_items = 4;
  uint64_t synth_seed = 1;
  auto* synth = app.add_subcommand("synth", "Write a synthetic dataset");
  synth->add_option("--out", synth_out, "Dataset path")->required();
  synth->add_option("--queries", synth_queries, "Number of queries");
  synth->add_option("--items-per-group", synth_items, "Items in each group");
  synth->add_option("--seed", synth_seed, "Generator seed");

  std::string tsv_in;
  std::string convert_out;
  auto* convert = app.add_subcommand(
      "convert", "Convert a tab-separated export to the dataset format");
  convert->add_option("--tsv", tsv_in, "query_id item_id score relevance group")
      ->required();
  convert->add_option("--out", convert_out, "Dataset path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (run->parsed()) {
      ppgsearch::ExperimentConfig config =
          ppgsearch::LoadExperimentConfig(config_path);
      if (!output_override.empty()) config.output = output_override;
      const ppgsearch::ExperimentSummary summary =
          ppgsearch::RunExperiment(config);
      std::cout << "queries " << summary.queries << ", skipped "
                << summary.skipped << ", rows " << summary.rows.size()
                << " -> " << config.output << "\n";
    } else if (aggregate->parsed()) {
      ppgsearch::Aggregate(inputs, aggregate_out);
    } else if (synth->parsed()) {
      ppgsearch::WriteDatasetFile(
          synth_out, ppgsearch::MakeSyntheticSuite(synth_queries, synth_items,
                                                   synth_seed));
    } else if (convert->parsed()) {
      std::ifstream in(tsv_in);
      if (!in) throw ppgsearch::DataError("cannot open '" + tsv_in + "'");
      ppgsearch::WriteDatasetFile(convert_out, ppgsearch::ReadTabular(in));
    }
  } catch (const ppgsearch::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ppgsearch::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return 0;
}
