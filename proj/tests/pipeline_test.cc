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

#include "tsf/pipeline.h"

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "tsf/csv.h"
#include "tsf/hiveplot.h"
#include "tsf/io.h"
#include "tsf/report.h"
#include "tsf/rng.h"

namespace tsf {
namespace {

namespace fs = std::filesystem;

fs::path TempDir(const std::string& name) {
  fs::path p = fs::temp_directory_path() /
               ("tsf_pipeline_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string ReadAll(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

RunConfig MinimalConfig(const fs::path& out, std::uint64_t seed = 7) {
  auto c = ParseRunConfig(
      "seed = " + std::to_string(seed) +
      "\npopulation.preset = small\nstudy.seeds = 2\nstudy.max_seeds = 2\n"
      "study.target = 10\nanalysis.ei_permutations = 500\n");
  c.output_dir = out.string();
  return c;
}

TEST(RunPipeline, MinimalConfigSmoke) {
  auto dir = TempDir("smoke");
  const auto start = std::chrono::steady_clock::now();
  auto m = RunPipeline(MinimalConfig(dir));
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EXPECT_LT(secs, 5.0);
  std::set<std::string> listed;
  for (const auto& f : m.files) listed.insert(f.name);
  for (const char* name :
       {"persons.csv", "truth_ties.csv", "observations.csv", "study_log.csv", "entities.csv",
        "linkage.csv", "nodes.csv", "arcs.csv", "edges.csv", "stats.csv", "ei_permutation.csv",
        "fit.csv", "estimates.csv", "report.md"}) {
    EXPECT_TRUE(listed.count(name)) << name;
  }
  // Every emitted file is listed with its hash; nothing is left partial.
  for (const auto& e : fs::directory_iterator(dir)) {
    const auto name = e.path().filename().string();
    EXPECT_FALSE(name.ends_with(".partial")) << name;
    if (name == "manifest.json") continue;
    EXPECT_TRUE(listed.count(name)) << name;
  }
  for (const auto& f : m.files) {
    const auto text = ReadAll(dir / f.name);
    EXPECT_EQ(f.sha256, Sha256Hex(text)) << f.name;
    EXPECT_EQ(f.bytes, text.size());
    EXPECT_EQ(text.find('\r'), std::string::npos) << f.name;
  }
  EXPECT_EQ(ReadAll(dir / "manifest.json"), m.ToJson());
  EXPECT_TRUE(std::is_sorted(m.files.begin(), m.files.end(),
                             [](const auto& a, const auto& b) { return a.name < b.name; }));
}

TEST(RunPipeline, DeterministicAcrossOutputDirectories) {
  auto a = RunPipeline(MinimalConfig(TempDir("det_a")));
  auto b = RunPipeline(MinimalConfig(TempDir("det_b")));
  EXPECT_EQ(a.ToJson(), b.ToJson());
  auto c = RunPipeline(MinimalConfig(TempDir("det_c"), 8));
  EXPECT_NE(a.ToJson(), c.ToJson());
}

TEST(RunPipeline, StagesRerunInIsolation) {
  auto dir = TempDir("rerun");
  auto m = RunPipeline(MinimalConfig(dir));
  std::map<std::string, std::string> before;
  for (const auto& f : m.files) before[f.name] = f.sha256;
  Pipeline p(MinimalConfig(dir));
  p.Run(Stage::kStats);
  p.Run(Stage::kReport);
  auto again = p.WriteManifest();
  for (const auto& f : again.files) EXPECT_EQ(before[f.name], f.sha256) << f.name;
}

TEST(Pipeline, MissingInputsNameTheStage) {
  auto dir = TempDir("missing");
  Pipeline p(MinimalConfig(dir));
  try {
    p.Run(Stage::kBuild);
    FAIL() << "expected StageError";
  } catch (const StageError& e) {
    EXPECT_EQ(e.stage(), Stage::kBuild);
    EXPECT_NE(std::string(e.what()).find("stage build failed"), std::string::npos);
  }
}

TEST(StageWriter, UncommittedFilesStayPartial) {
  auto dir = TempDir("partial");
  {
    StageWriter w(dir);
    w.Write("a.csv", "x\n1\n");
  }
  EXPECT_TRUE(fs::exists(dir / "a.csv.partial"));
  EXPECT_FALSE(fs::exists(dir / "a.csv"));
  StageWriter w(dir);
  w.Write("b.csv", "x\n");
  w.Commit();
  EXPECT_TRUE(fs::exists(dir / "b.csv"));
  EXPECT_FALSE(fs::exists(dir / "b.csv.partial"));
}

TEST(ExportNetwork, RoundTripAndEmptyLayer) {
  auto dir = TempDir("export");
  RunPipeline(MinimalConfig(dir / "run"));
  auto net = ImportNetwork(dir / "run");
  ExportNetwork(net, "network_of_networks", dir / "copy");
  EXPECT_EQ(ImportNetwork(dir / "copy"), net);
  for (const char* f : {"nodes.csv", "arcs.csv", "edges.csv"}) {
    EXPECT_EQ(ReadAll(dir / "copy" / f), ReadAll(dir / "run" / f)) << f;
  }
  ExportNetwork(net, "link_tracing", dir / "lt");
  auto lt = ImportNetwork(dir / "lt");
  EXPECT_EQ(lt.CountArcs(ArcKind::kNomination), 0u);
  EXPECT_EQ(lt.arcs().size(), net.CountArcs(ArcKind::kReferral));

  ExportNetwork(MultiLayerNetwork{}, "network_of_networks", dir / "empty");
  for (const char* f : {"nodes.csv", "arcs.csv", "edges.csv"}) {
    const auto text = ReadAll(dir / "empty" / f);
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1) << f;
  }
  EXPECT_EQ(ImportNetwork(dir / "empty"), MultiLayerNetwork{});
  EXPECT_THROW(ExportNetwork(net, "nope", dir / "x"), Error);
}

TEST(HivePlot, StarCentreRanksFirst) {
  std::vector<std::pair<std::size_t, std::size_t>> star = {{1, 0}, {1, 2}};
  auto g = Digraph::FromArcs(3, star);
  for (std::size_t v = 0; v < 3; ++v) {
    g.set_site(v, Site::kDestination);
    g.set_sex(v, Sex::kFemale);
  }
  auto h = MakeHivePlot(g);
  for (const auto& n : h.nodes) {
    if (n.id == 1) EXPECT_EQ(n.rank, 1u);
  }
  EXPECT_EQ(h.within, 2u);
  EXPECT_EQ(h.between, 0u);
  g.set_site(2, std::nullopt);
  EXPECT_THROW(MakeHivePlot(g), Error);
}

TEST(HivePlot, ArcClassesConserveCount) {
  Rng rng(3);
  Digraph g(40);
  for (std::size_t u = 0; u < 40; ++u) {
    g.set_site(u, static_cast<Site>(rng.Index(3)));
    g.set_sex(u, rng.Bernoulli(0.5) ? Sex::kMale : Sex::kFemale);
    for (std::size_t v = 0; v < 40; ++v)
      if (u != v && rng.Bernoulli(0.05)) g.AddArc(u, v);
  }
  auto h = MakeHivePlot(g);
  EXPECT_EQ(h.within + h.between, g.num_arcs());
  EXPECT_EQ(h.arcs.size(), g.num_arcs());
  std::size_t sum = 0;
  for (const auto& [k, n] : h.axis_counts) sum += n;
  EXPECT_EQ(sum, g.num_arcs());
  // Ranks on each axis are a permutation of 1..k ordered by out-degree.
  std::map<std::string, std::vector<const HiveNode*>> axes;
  for (const auto& n : h.nodes) axes[n.axis].push_back(&n);
  for (auto& [axis, nodes] : axes) {
    std::sort(nodes.begin(), nodes.end(), [](auto a, auto b) { return a->rank < b->rank; });
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      EXPECT_EQ(nodes[i]->rank, i + 1);
      if (i) EXPECT_GE(nodes[i - 1]->out_degree, nodes[i]->out_degree);
    }
  }
}

const char* kSections[] = {"## Participation", "## Participant demographics",
                           "## E-I index and permutation test", "## Chains",
                           "## Personal network alters", "## Network structure",
                           "## Representativeness", "## ERGM fits"};

TEST(Report, AllSectionsAndMissingFileNotices) {
  auto dir = TempDir("report");
  RunPipeline(MinimalConfig(dir));
  const auto full = ReadAll(dir / "report.md");
  for (const char* s : kSections) EXPECT_NE(full.find(s), std::string::npos) << s;
  EXPECT_NE(full.find("MPLE"), std::string::npos);

  // Headers-only stats file: notice instead of a table, no failure.
  {
    std::ofstream(dir / "stats.csv", std::ios::trunc) << "layer,statistic,value\n";
  }
  fs::remove(dir / "alters.csv");
  Pipeline p(MinimalConfig(dir));
  EXPECT_NO_THROW(p.Run(Stage::kReport));
  const auto partial = ReadAll(dir / "report.md");
  EXPECT_NE(partial.find("`stats.csv` has no rows"), std::string::npos);
  EXPECT_NE(partial.find("`alters.csv` is missing"), std::string::npos);
  for (const char* s : kSections) EXPECT_NE(partial.find(s), std::string::npos) << s;
}

// Every number in a report table must be a rounding of some value in the
// CSV files the report summarises.
TEST(Report, NumbersAreReExtractableFromCsvs) {
  auto dir = TempDir("consistency");
  RunPipeline(MinimalConfig(dir));
  std::vector<double> values;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.path().extension() != ".csv") continue;
    const auto table = CsvTable::Read(e.path());
    for (std::size_t r = 0; r < table.num_rows(); ++r) {
      for (const auto& cell : table.row(r)) {
        char* end = nullptr;
        const double v = std::strtod(cell.c_str(), &end);
        if (!cell.empty() && end == cell.c_str() + cell.size()) values.push_back(v);
      }
    }
  }
  std::istringstream report(ReadAll(dir / "report.md"));
  std::string line;
  int checked = 0;
  while (std::getline(report, line)) {
    if (!line.starts_with("|")) continue;
    std::istringstream cells(line);
    std::string token;
    while (cells >> token) {
      std::erase_if(token, [](char c) { return c == '(' || c == ')' || c == '*' || c == '|'; });
      if (token.empty()) continue;
      char* end = nullptr;
      const double x = std::strtod(token.c_str(), &end);
      if (end != token.c_str() + token.size()) continue;
      const auto dot = token.find('.');
      const int decimals = dot == std::string::npos ? 0 : static_cast<int>(token.size() - dot - 1);
      const double tol = 0.5 * std::pow(10.0, -decimals) + 1e-9;
      const bool found = std::any_of(values.begin(), values.end(),
                                     [&](double v) { return std::abs(v - x) <= tol; });
      EXPECT_TRUE(found) << token << " in: " << line;
      ++checked;
    }
  }
  EXPECT_GT(checked, 100);
}

TEST(Config, RejectionsNameTheKey) {
  for (const auto& key : ConfigKeys()) {
    for (const char* bad : {"@@", "-5", "1e999", "nan"}) {
      const std::string text = "seed = 1\n" + key + " = " + bad + "\n";
      try {
        ParseRunConfig(text).Validate();
      } catch (const ConfigError& e) {
        EXPECT_TRUE(std::string(e.what()).starts_with(key) ||
                    std::string(e.what()).find(key + ":") != std::string::npos)
            << key << " = " << bad << " -> " << e.what();
      }
    }
  }
  Rng rng(1);
  for (int i = 0; i < 50; ++i) {
    std::string key = "k";
    for (int j = 0; j < 6; ++j) key += static_cast<char>('a' + rng.Index(26));
    try {
      ParseRunConfig("seed = 1\n" + key + " = 3\n");
      FAIL() << "unknown key accepted: " << key;
    } catch (const ConfigError& e) {
      EXPECT_TRUE(std::string(e.what()).starts_with(key)) << e.what();
    }
  }
  EXPECT_THROW(ParseRunConfig("population.preset = small\n").master_seed(), ConfigError);
}

TEST(Config, SnapshotRoundTrip) {
  auto c = MinimalConfig("/tmp/x");
  auto again = ParseRunConfig(c.Snapshot());
  EXPECT_EQ(again.Snapshot(), c.Snapshot());
}

int RunCli(const std::string& args) {
  const char* bin = std::getenv("TSFNET_BIN");
  const std::string cmd = std::string(bin) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(Cli, ExitCodes) {
  if (!std::getenv("TSFNET_BIN")) GTEST_SKIP() << "TSFNET_BIN not set";
  auto dir = TempDir("cli");
  {
    std::ofstream(dir / "good.conf") << "seed = 3\npopulation.preset = small\n"
                                        "study.seeds = 2\nstudy.max_seeds = 2\nstudy.target = 10\n"
                                        "analysis.ei_permutations = 200\n";
    std::ofstream(dir / "bad.conf") << "seed = 3\nstudy.bogus = 1\n";
    std::ofstream(dir / "noseed.conf") << "population.preset = small\n";
  }
  const auto d = dir.string();
  EXPECT_EQ(RunCli("run --config " + d + "/good.conf --out " + d + "/out"), 0);
  EXPECT_TRUE(fs::exists(dir / "out" / "manifest.json"));
  EXPECT_EQ(RunCli("--config " + d + "/good.conf --out " + d + "/out2 run"), 0);
  EXPECT_EQ(ReadAll(dir / "out" / "manifest.json"), ReadAll(dir / "out2" / "manifest.json"));
  EXPECT_EQ(RunCli("run --config " + d + "/bad.conf --out " + d + "/o"), 2);
  EXPECT_EQ(RunCli("run --config " + d + "/noseed.conf --out " + d + "/o"), 2);
  EXPECT_EQ(RunCli("run --config " + d + "/missing.conf"), 2);
  EXPECT_EQ(RunCli("run --config " + d + "/good.conf --masking 2"), 2);
  EXPECT_EQ(RunCli("--config " + d + "/good.conf"), 2);
  EXPECT_EQ(RunCli("fit --config " + d + "/good.conf --out " + d + "/empty"), 3);
  EXPECT_EQ(RunCli("stats --config " + d + "/good.conf --out " + d + "/out"), 0);
}

}  // namespace
}  // namespace tsf
