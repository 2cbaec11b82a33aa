// Copyright 2026 The tsfnet Authors.
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

// Command-line front end: one subcommand per pipeline stage plus "run".

#include <algorithm>
#include <iostream>
#include <optional>
#include <string>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "tsf/config.h"
#include "tsf/pipeline.h"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitStage = 3;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Link-tracing study simulator and network analysis pipeline"};
  app.require_subcommand(1, 1);
  // Global flags may also follow the subcommand.
  app.fallthrough();

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out;
  app.add_option("--config", config_path, "key = value configuration file");
  app.add_option("--rng-seed", seed, "master seed; overrides the file");
  app.add_option("--out", out, "output directory; overrides the file");
  std::optional<int> seeds, target;
  std::optional<double> participation, masking;
  app.add_option("--seeds", seeds, "number of initial seeds");
  app.add_option("--target", target, "target number of interviews");
  app.add_option("--participation", participation,
                 "participation probability for every site and sex")
      ->check(CLI::Range(0.0, 1.0));
  app.add_option("--masking", masking, "masking probability for both sites")
      ->check(CLI::Range(0.0, 1.0));

  for (int i = 0; i < tsf::kNumStages; ++i) {
    auto stage = static_cast<tsf::Stage>(i);
    app.add_subcommand(std::string(tsf::ToString(stage)),
                       fmt::format("run only the {} stage", tsf::ToString(stage)));
  }
  app.add_subcommand("run", "run every stage and write manifest.json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitConfig;
  }

  tsf::RunConfig config;
  try {
    config = config_path.empty() ? tsf::ParseRunConfig("", "defaults")
                                 : tsf::LoadRunConfig(config_path);
    if (seed) config.seed = *seed;
    if (!out.empty()) config.output_dir = out;
    if (seeds) {
      config.study.n_seeds = *seeds;
      config.study.max_seeds = std::max(config.study.max_seeds, *seeds);
    }
    if (target) config.study.target_interviews = *target;
    if (participation) config.study.SetParticipation(*participation);
    if (masking) config.study.masking.fill(*masking);
    config.Validate();
    config.master_seed();
  } catch (const tsf::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    if (name == "run") {
      tsf::ArtifactManifest m = tsf::RunPipeline(config);
      std::cout << fmt::format("wrote {} files to {}\n", m.files.size(), config.output_dir);
    } else {
      tsf::Pipeline p(config);
      p.Run(tsf::ParseStage(name));
      std::cout << fmt::format("{}: done\n", name);
    }
  } catch (const tsf::StageError& e) {
    std::cerr << e.what() << "\n";
    return kExitStage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitStage;
  }
  return 0;
}
