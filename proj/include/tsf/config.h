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

#ifndef TSF_CONFIG_H_
#define TSF_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tsf/ergm.h"
#include "tsf/fieldwork.h"
#include "tsf/identity.h"
#include "tsf/netstats.h"
#include "tsf/rdsest.h"
#include "tsf/synthpop.h"

namespace tsf {

struct AnalysisConfig {
  int ei_permutations = 5000;
  std::vector<NodeAttr> ei_attributes = {NodeAttr::kSex, NodeAttr::kSite};
  std::vector<TermSpec> ergm_terms = {TermSpec::Edges(),
                                      TermSpec::Uniform(NodeAttr::kSex),
                                      TermSpec::Uniform(NodeAttr::kSite),
                                      TermSpec::Gwdsp(0.5)};
  // Layers to fit: "link_tracing", "participants", "network_of_networks".
  std::vector<std::string> ergm_layers = {"participants", "link_tracing"};
  // The largest this many chains are fitted as well.
  int ergm_chains = 3;
  Solver solver;
  DegreeSource degree_source = DegreeSource::kElicited;
  double reference_ci = 8.0;
};

struct RunConfig {
  std::optional<std::uint64_t> seed;
  std::string output_dir = "out";
  std::string population_preset = "castellon_dambovita";
  PopulationConfig population;
  TieConfig ties;
  StudyConfig study;
  LinkPolicy linkage;
  AnalysisConfig analysis;

  // Throws ConfigError when no seed was configured.
  std::uint64_t master_seed() const;
  // Runs every module-level validation.
  void Validate() const;
  // Every key with its resolved value, one "key = value" line each, in a
  // fixed order. Parsing the snapshot yields the same configuration.
  std::string Snapshot() const;
};

// Line-oriented "key = value" text; '#' starts a comment. Unknown and
// repeated keys are rejected with the key named. The population preset is
// applied first, then every other key, regardless of file order.
RunConfig ParseRunConfig(std::string_view text, std::string_view source = "config");
RunConfig LoadRunConfig(const std::filesystem::path& path);

// All recognised keys in snapshot order.
std::vector<std::string> ConfigKeys();

}  // namespace tsf

#endif  // TSF_CONFIG_H_
