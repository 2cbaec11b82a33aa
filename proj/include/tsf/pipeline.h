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

#ifndef TSF_PIPELINE_H_
#define TSF_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tsf/config.h"

namespace tsf {

enum class Stage : std::uint8_t {
  kGenerate,
  kSample,
  kLink,
  kBuild,
  kStats,
  kFit,
  kEstimate,
  kReport,
};
inline constexpr int kNumStages = 8;
std::string_view ToString(Stage s);
Stage ParseStage(std::string_view s);

class StageError : public Error {
 public:
  StageError(Stage stage, const std::string& cause);
  Stage stage() const { return stage_; }

 private:
  Stage stage_;
};

struct ArtifactEntry {
  std::string name;
  std::string sha256;
  std::uintmax_t bytes = 0;

  bool operator==(const ArtifactEntry&) const = default;
};

struct ArtifactManifest {
  std::uint64_t seed = 0;
  // Resolved configuration without the output directory.
  std::string config_snapshot;
  std::vector<ArtifactEntry> files;  // sorted by name

  std::string ToJson() const;
  bool operator==(const ArtifactManifest&) const = default;
};

std::string Sha256Hex(std::string_view data);

// Runs stages against an output directory. Each stage reads what it needs
// from earlier stages, from memory when this object produced it and from
// the directory otherwise.
class Pipeline {
 public:
  explicit Pipeline(RunConfig config);
  ~Pipeline();

  const RunConfig& config() const { return config_; }
  std::filesystem::path out_dir() const { return config_.output_dir; }

  // Throws StageError naming the stage; that stage's files keep their
  // ".partial" suffix.
  void Run(Stage stage);
  void RunAll();
  // Hashes every committed file and writes manifest.json.
  ArtifactManifest WriteManifest();

  // Opaque cache of loaded artifacts.
  struct State;

 private:
  void RunImpl(Stage stage);

  RunConfig config_;
  std::unique_ptr<State> state_;
};

// The generate stage without file output: persons with identifiers, plus ties,
// drawn from the streams derived from the master seed.
GroundTruthGraph GenerateTruth(const RunConfig& config);

// Validates the configuration, runs every stage and writes the manifest.
ArtifactManifest RunPipeline(const RunConfig& config);

}  // namespace tsf

#endif  // TSF_PIPELINE_H_
