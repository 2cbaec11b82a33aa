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

#include <algorithm>
#include <map>
#include <set>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "json.hpp"
#include "tsf/csv.h"
#include "tsf/ergm.h"
#include "tsf/hiveplot.h"
#include "tsf/io.h"
#include "tsf/netbuild.h"
#include "tsf/netstats.h"
#include "tsf/rdsest.h"
#include "tsf/report.h"
#include "tsf/rng.h"

namespace tsf {

namespace fs = std::filesystem;

namespace {

constexpr std::array<std::string_view, kNumStages> kStageNames = {
    "generate", "sample", "link", "build", "stats", "fit", "estimate", "report"};

std::string Num(double v) { return FormatDouble(v); }
std::string Num(std::size_t v) { return std::to_string(v); }

std::string OptNum(const std::optional<double>& v) {
  return v ? FormatDouble(*v) : std::string("NA");
}

}  // namespace

std::string_view ToString(Stage s) { return kStageNames[static_cast<std::size_t>(s)]; }

Stage ParseStage(std::string_view s) {
  for (int i = 0; i < kNumStages; ++i) {
    if (kStageNames[static_cast<std::size_t>(i)] == s) return static_cast<Stage>(i);
  }
  throw ParseError(fmt::format("unknown stage '{}'", s));
}

StageError::StageError(Stage stage, const std::string& cause)
    : Error(fmt::format("stage {} failed: {}", ToString(stage), cause)), stage_(stage) {}

std::string Sha256Hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 computation failed");
  }
  std::string hex;
  hex.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

std::string ArtifactManifest::ToJson() const {
  nlohmann::ordered_json j;
  j["seed"] = seed;
  j["config"] = config_snapshot;
  nlohmann::ordered_json files_json = nlohmann::ordered_json::array();
  for (const auto& f : files) {
    nlohmann::ordered_json e;
    e["name"] = f.name;
    e["sha256"] = f.sha256;
    e["bytes"] = f.bytes;
    files_json.push_back(e);
  }
  j["files"] = files_json;
  return j.dump(2) + "\n";
}

struct Pipeline::State {
  std::optional<GroundTruthGraph> truth;
  std::optional<std::vector<Person>> persons;  // when truth is not loaded
  std::optional<StudyLog> log;
  std::optional<EntityPartition> partition;
  std::optional<MultiLayerNetwork> network;
};

Pipeline::Pipeline(RunConfig config)
    : config_(std::move(config)), state_(std::make_unique<State>()) {}

Pipeline::~Pipeline() = default;

namespace {


const GroundTruthGraph& LoadTruth(Pipeline::State& s, const fs::path& dir);

}  // namespace

void Pipeline::Run(Stage stage) {
  try {
    RunImpl(stage);
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(stage, e.what());
  }
}

void Pipeline::RunAll() {
  for (int i = 0; i < kNumStages; ++i) Run(static_cast<Stage>(i));
}

namespace {

const GroundTruthGraph& LoadTruth(Pipeline::State& s, const fs::path& dir) {
  if (!s.truth) {
    auto persons = ParsePersons(CsvTable::Read(dir / "persons.csv"));
    auto ties = ParseTies(CsvTable::Read(dir / "truth_ties.csv"));
    s.truth.emplace(std::move(persons), std::move(ties));
    s.persons.reset();
  }
  return *s.truth;
}

const std::vector<Person>& LoadPersons(Pipeline::State& s, const fs::path& dir) {
  if (s.truth) return s.truth->persons();
  if (!s.persons) s.persons = ParsePersons(CsvTable::Read(dir / "persons.csv"));
  return *s.persons;
}

const StudyLog& LoadLog(Pipeline::State& s, const fs::path& dir) {
  if (!s.log) s.log = ReadStudyLog(dir);
  return *s.log;
}

const EntityPartition& LoadPartition(Pipeline::State& s, const fs::path& dir) {
  if (!s.partition) {
    s.partition = ParsePartition(CsvTable::Read(dir / "entities.csv"),
                                 CsvTable::Read(dir / "entity_profiles.csv"));
  }
  return *s.partition;
}

const MultiLayerNetwork& LoadNetwork(Pipeline::State& s, const fs::path& dir) {
  if (!s.network) s.network = ImportNetwork(dir);
  return *s.network;
}

struct NamedLayer {
  std::string name;
  Digraph graph;
};

// Whole-network layers followed by one layer per seed chain.
std::vector<NamedLayer> AnalysisLayers(const MultiLayerNetwork& net,
                                       const std::vector<EntityId>& seeds,
                                       std::vector<Chain>* chains_out) {
  std::vector<NamedLayer> layers;
  Digraph lt = LinkTracingLayer(net);
  auto chains = DecomposeChains(lt, seeds);
  for (std::size_t i = 0; i < chains.size(); ++i) {
    layers.push_back({fmt::format("seed_{}", i + 1), lt.Induced(chains[i].members)});
  }
  layers.push_back({"link_tracing", lt});
  layers.push_back({"participants", ParticipantLayer(net)});
  layers.push_back({"network_of_networks", NetworkOfNetworksLayer(net)});
  if (chains_out) *chains_out = std::move(chains);
  return layers;
}

std::vector<EntityId> SeedsOf(const MultiLayerNetwork& net) {
  // Seeds in interview order are recovered from chains.csv when available;
  // this fallback orders them by entity id.
  std::vector<EntityId> seeds;
  for (const auto& n : net.nodes()) {
    if (n.seed) seeds.push_back(n.id);
  }
  return seeds;
}

std::vector<EntityId> LoadSeedOrder(const fs::path& dir, const MultiLayerNetwork& net) {
  if (!fs::exists(dir / "seeds.csv")) return SeedsOf(net);
  auto t = CsvTable::Read(dir / "seeds.csv");
  t.RequireHeader({"chain", "seed_entity"});
  std::vector<EntityId> seeds;
  for (std::size_t r = 0; r < t.num_rows(); ++r) {
    seeds.push_back(static_cast<EntityId>(ParseInt(t.row(r)[1], "seed_entity")));
  }
  return seeds;
}

void StageGenerate(const RunConfig& cfg, Pipeline::State& s, StageWriter& w) {
  s.truth = GenerateTruth(cfg);
  s.persons.reset();
  w.Write("persons.csv", PersonsCsv(s.truth->persons()));
  w.Write("truth_ties.csv", TiesCsv(s.truth->ties()));
}

void StageSample(const RunConfig& cfg, Pipeline::State& s, const fs::path& dir,
                 StageWriter& w) {
  const auto& truth = LoadTruth(s, dir);
  s.log = RunStudy(truth, cfg.study, DeriveSeed(cfg.master_seed(), "sample"));
  WriteStudyLog(w, *s.log);
}

void StageLink(const RunConfig& cfg, Pipeline::State& s, const fs::path& dir,
               StageWriter& w) {
  const auto& log = LoadLog(s, dir);
  auto result = LinkRecords(log.observations, cfg.linkage);
  auto metrics = AuditConflicts(result.partition, result.conflicts, &log.truth);
  w.Write("entities.csv", EntityMapCsv(result.partition));
  w.Write("entity_profiles.csv", EntityProfilesCsv(result.partition));
  w.Write("conflicts.csv", ConflictsCsv(result.conflicts));
  CsvWriter m({"metric", "value"});
  m.AddRow({"observations", Num(result.partition.num_observations())});
  m.AddRow({"entities", Num(result.partition.num_entities())});
  std::set<PersonId> true_persons;
  for (const auto& [o, p] : log.truth) true_persons.insert(p);
  m.AddRow({"true_persons", Num(true_persons.size())});
  m.AddRow({"precision", OptNum(metrics.precision)});
  m.AddRow({"recall", OptNum(metrics.recall)});
  m.AddRow({"merge_errors", metrics.merge_errors ? Num(*metrics.merge_errors) : "NA"});
  m.AddRow({"split_errors", metrics.split_errors ? Num(*metrics.split_errors) : "NA"});
  m.AddRow({"same_code_conflicts", Num(metrics.same_code_conflicts)});
  m.AddRow({"suspected_duplicates", Num(metrics.suspected_duplicates)});
  w.Write("linkage.csv", m.str());
  s.partition = std::move(result.partition);
}

void StageBuild(Pipeline::State& s, const fs::path& dir, StageWriter& w) {
  const auto& log = LoadLog(s, dir);
  const auto& partition = LoadPartition(s, dir);
  s.network = BuildNetworkOfNetworks(log, partition);
  const auto& net = *s.network;
  w.Write("nodes.csv", NodesCsv(net));
  w.Write("arcs.csv", ArcsCsv(net));
  w.Write("edges.csv", EdgesCsv(net));
  auto seeds = SeedEntities(log, partition);
  CsvWriter sw({"chain", "seed_entity"});
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    sw.AddRow({Num(i + 1), std::to_string(seeds[i])});
  }
  w.Write("seeds.csv", sw.str());
  Digraph lt = LinkTracingLayer(net);
  auto chains = DecomposeChains(lt, seeds);
  CsvWriter cw({"chain", "seed_entity", "entity_id", "depth"});
  for (std::size_t i = 0; i < chains.size(); ++i) {
    for (const auto& [v, d] : chains[i].depth) {
      cw.AddRow({Num(i + 1), std::to_string(chains[i].seed), std::to_string(lt.id(v)),
                 std::to_string(d)});
    }
  }
  w.Write("chains.csv", cw.str());
}

void WriteLayerStats(CsvWriter& out, const std::string& name, const Digraph& g,
                     std::optional<std::size_t> edges) {
  LayerStats st = SummarizeLayer(g);
  auto row = [&](std::string_view stat, std::string value) {
    out.AddRow({name, std::string(stat), std::move(value)});
  };
  row("nodes", Num(st.nodes));
  row("arcs", Num(st.arcs));
  if (edges) row("edges", Num(*edges));
  row("mutual_dyads", Num(st.dyads.mutual));
  row("asymmetric_dyads", Num(st.dyads.asymmetric));
  row("null_dyads", Num(st.dyads.null));
  row("density", OptNum(st.density));
  for (int k = 0; k < 4; ++k) {
    const auto& c = st.centralization[static_cast<std::size_t>(k)];
    row(fmt::format("centralization_{}", ToString(static_cast<CentralityKind>(k))),
        c ? Num(c->value) : "NA");
  }
  bool caution = st.nodes < 3;
  row("caution", caution ? "1" : "0");
  row("components", Num(st.components));
  row("main_component_share", Num(st.main_component_share));
}

void StageStats(const RunConfig& cfg, Pipeline::State& s, const fs::path& dir,
                StageWriter& w) {
  const auto& net = LoadNetwork(s, dir);
  const auto& log = LoadLog(s, dir);
  const auto& persons = LoadPersons(s, dir);
  const auto seeds = LoadSeedOrder(dir, net);
  std::vector<Chain> chains;
  auto layers = AnalysisLayers(net, seeds, &chains);

  CsvWriter stats({"layer", "statistic", "value"});
  for (const auto& l : layers) {
    std::optional<std::size_t> edges;
    if (l.name == "network_of_networks") edges = net.edges().size();
    WriteLayerStats(stats, l.name, l.graph, edges);
  }
  stats.AddRow({"network_of_networks", "referral_arcs", Num(net.CountArcs(ArcKind::kReferral))});
  stats.AddRow(
      {"network_of_networks", "nomination_arcs", Num(net.CountArcs(ArcKind::kNomination))});
  std::size_t elicited = 0;
  for (const auto& pn : log.personal_networks) elicited += pn.alters.size();
  stats.AddRow({"network_of_networks", "elicited_alters", Num(elicited)});
  stats.AddRow({"network_of_networks", "referral_events", Num(log.referrals.size())});
  w.Write("stats.csv", stats.str());

  CsvWriter ei({"layer", "attribute", "observed", "mean", "sd", "p", "n_perm", "note"});
  CsvWriter ein({"layer", "attribute", "entity_id", "ei"});
  for (const auto& l : layers) {
    if (l.name != "link_tracing" && l.name != "participants") continue;
    for (NodeAttr attr : cfg.analysis.ei_attributes) {
      const std::string an(ToString(attr));
      try {
        Categorical cat = NodeCategories(l.graph, attr);
        auto r = EiPermutationTest(
            l.graph, cat.code, cfg.analysis.ei_permutations,
            DeriveSeed(cfg.master_seed(), fmt::format("stats.ei.{}.{}", l.name, an)));
        ei.AddRow({l.name, an, Num(r.observed), Num(r.mean), Num(r.sd), Num(r.p),
                   std::to_string(r.n_permutations), ""});
        for (std::size_t v = 0; v < l.graph.num_nodes(); ++v) {
          if (auto x = EiNode(l.graph, v, cat.code)) {
            ein.AddRow({l.name, an, std::to_string(l.graph.id(v)), Num(*x)});
          }
        }
      } catch (const Error& e) {
        ei.AddRow({l.name, an, "NA", "NA", "NA", "NA",
                   std::to_string(cfg.analysis.ei_permutations), e.what()});
      }
    }
  }
  w.Write("ei_permutation.csv", ei.str());
  w.Write("ei_nodes.csv", ein.str());

  CsvWriter mix({"layer", "attribute", "from", "to", "count"});
  for (const auto& l : layers) {
    if (l.name != "link_tracing" && l.name != "network_of_networks") continue;
    try {
      Categorical cat = NodeCategories(l.graph, NodeAttr::kSiteSex);
      auto m = ComputeMixing(l.graph, cat);
      for (std::size_t a = 0; a < m.categories.size(); ++a) {
        for (std::size_t b = 0; b < m.categories.size(); ++b) {
          mix.AddRow({l.name, "site_sex", m.categories[a], m.categories[b],
                      Num(m.counts[a][b])});
        }
      }
    } catch (const Error&) {
      // Nodes without sex or site: no mixing table for this layer.
    }
  }
  w.Write("mixing.csv", mix.str());

  const Digraph& lt = std::find_if(layers.begin(), layers.end(), [](const auto& l) {
                        return l.name == "link_tracing";
                      })->graph;
  CsvWriter comp({"column", "metric", "value"});
  for (const auto& col : ChainComposition(net, lt, chains)) {
    auto row = [&](std::string metric, std::string value) {
      comp.AddRow({col.label, std::move(metric), std::move(value)});
    };
    row("volume", Num(col.volume));
    row("participants", Num(col.by_role[0]));
    row("non_participants", Num(col.by_role[1]));
    for (Site site : kAllSites) {
      const auto& r = col.by_site_role[static_cast<std::size_t>(Index(site))];
      row(fmt::format("{}_participants", ToString(site)), Num(r[0]));
      row(fmt::format("{}_non_participants", ToString(site)), Num(r[1]));
    }
    row("unknown_site_participants", Num(col.by_site_role[kNumSites][0]));
    row("unknown_site_non_participants", Num(col.by_site_role[kNumSites][1]));
    row("females", Num(col.by_sex[0]));
    row("males", Num(col.by_sex[1]));
    row("unknown_sex", Num(col.by_sex[2]));
    for (Site site : {Site::kDestination, Site::kOrigin}) {
      for (Sex sex : {Sex::kMale, Sex::kFemale}) {
        const auto& r = col.by_site_sex_role[static_cast<std::size_t>(Index(site))]
                                            [static_cast<std::size_t>(Index(sex))];
        const char* sx = sex == Sex::kMale ? "male" : "female";
        row(fmt::format("{}_{}_participants", ToString(site), sx), Num(r[0]));
        row(fmt::format("{}_{}_non_participants", ToString(site), sx), Num(r[1]));
      }
    }
    if (col.distances) {
      if (col.label != "link_tracing") {
        row("longest_from_seed", Num(static_cast<std::size_t>(col.distances->longest_from_seed)));
        row("avg_from_seed", Num(col.distances->avg_from_seed));
      }
      row("avg_pairwise", Num(col.distances->avg_pairwise));
      row("sd_pairwise", Num(col.distances->sd_pairwise));
    }
    row("share_of_network", Num(col.share_of_network));
  }
  w.Write("composition.csv", comp.str());

  auto part = SummarizeParticipation(log);
  CsvWriter pw({"site", "sex", "contacted", "participated", "rate"});
  auto prow = [&](std::string site, std::string sex, const ParticipationCell& c) {
    std::string rate = c.contacted ? Num(static_cast<double>(c.participated) /
                                         static_cast<double>(c.contacted))
                                   : "NA";
    pw.AddRow({std::move(site), std::move(sex), Num(c.contacted), Num(c.participated), rate});
  };
  for (Site site : {Site::kOrigin, Site::kDestination}) {
    for (Sex sex : {Sex::kFemale, Sex::kMale}) {
      prow(std::string(ToString(site)), std::string(ToString(sex)),
           part.cells[static_cast<std::size_t>(Index(site))]
                     [static_cast<std::size_t>(Index(sex))]);
    }
    prow(std::string(ToString(site)), "all", part.site_total(site));
  }
  for (Sex sex : {Sex::kFemale, Sex::kMale}) {
    prow("all", std::string(ToString(sex)), part.sex_total(sex));
  }
  prow("all", "all", part.grand_total());
  w.Write("participation.csv", pw.str());
  CsvWriter fw({"metric", "value"});
  fw.AddRow({"interviews", Num(log.interviews.size())});
  fw.AddRow({"nominations", Num(part.nominations)});
  fw.AddRow({"accepted_nominations", Num(part.accepted_nominations)});
  fw.AddRow({"success_rate", Num(part.success_rate())});
  fw.AddRow({"max_wave", Num(static_cast<std::size_t>(log.max_wave()))});
  fw.AddRow({"exhausted", log.exhausted ? "1" : "0"});
  fw.AddRow({"seeds", Num(log.seeds.size())});
  w.Write("fieldwork.csv", fw.str());

  auto demo = SummarizeParticipants(log, persons);
  CsvWriter dw({"site", "variable", "category", "value"});
  for (Site site : {Site::kOrigin, Site::kDestination}) {
    const auto i = static_cast<std::size_t>(Index(site));
    const std::string sn(ToString(site));
    dw.AddRow({sn, "n", "", Num(demo.n[i])});
    dw.AddRow({sn, "sex", "F", Num(demo.sex[i][0])});
    dw.AddRow({sn, "sex", "M", Num(demo.sex[i][1])});
    dw.AddRow({sn, "age", "mean", demo.n[i] ? Num(demo.age_mean[i]) : "NA"});
    dw.AddRow({sn, "age", "sd", demo.n[i] > 1 ? Num(demo.age_sd[i]) : "NA"});
    for (int m = 0; m < 3; ++m) {
      dw.AddRow({sn, "migrant_type", std::string(ToString(static_cast<MigrantType>(m))),
                 Num(demo.migrant[i][static_cast<std::size_t>(m)])});
    }
    auto vocab = [&](const char* var, const auto& names, const std::vector<std::size_t>& counts) {
      for (std::size_t k = 0; k < names.size(); ++k) {
        dw.AddRow({sn, var, std::string(names[k]), Num(counts[k])});
      }
    };
    vocab("religion", kReligions, demo.religion[i]);
    vocab("education", kEducationLevels, demo.education[i]);
    vocab("work", kWorkStatuses, demo.work[i]);
    vocab("marital", kMaritalStatuses, demo.marital[i]);
  }
  w.Write("demographics.csv", dw.str());

  auto alters = SummarizeAlters(log, persons);
  CsvWriter aw({"row", "class", "respondents", "total", "mean", "sd"});
  for (int r = 0; r < kNumAlterRows; ++r) {
    for (int c = 0; c <= kNumRespondentClasses; ++c) {
      const auto& cell = alters.cells[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
      std::string cls = c == kNumRespondentClasses
                            ? "all"
                            : std::string(ToString(static_cast<RespondentClass>(c)));
      aw.AddRow({std::string(AlterRowName(r)), cls,
                 Num(alters.respondents[static_cast<std::size_t>(c)]), Num(cell.total),
                 Num(cell.mean), Num(cell.sd)});
    }
  }
  w.Write("alters.csv", aw.str());

  CsvWriter hs({"layer", "src_axis", "dst_axis", "class", "arcs"});
  for (const auto& l : layers) {
    if (l.name != "link_tracing" && l.name != "network_of_networks") continue;
    try {
      auto h = MakeHivePlot(l.graph, NodeAttr::kSite);
      w.Write(fmt::format("hive_{}_nodes.csv", l.name), HiveNodesCsv(h));
      w.Write(fmt::format("hive_{}_arcs.csv", l.name), HiveArcsCsv(h));
      for (const auto& [axes, count] : h.axis_counts) {
        hs.AddRow({l.name, axes.first, axes.second,
                   axes.first == axes.second ? "within" : "between", Num(count)});
      }
    } catch (const Error&) {
      // Nodes without a site cannot be placed on an axis.
    }
  }
  w.Write("hive_summary.csv", hs.str());
}

void StageFit(const RunConfig& cfg, Pipeline::State& s, const fs::path& dir,
              StageWriter& w) {
  const auto& net = LoadNetwork(s, dir);
  const auto seeds = LoadSeedOrder(dir, net);
  std::vector<Chain> chains;
  auto layers = AnalysisLayers(net, seeds, &chains);
  std::vector<const NamedLayer*> models;
  for (const auto& name : cfg.analysis.ergm_layers) {
    for (const auto& l : layers) {
      if (l.name == name) models.push_back(&l);
    }
  }
  std::vector<std::size_t> order(chains.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return chains[a].members.size() > chains[b].members.size();
  });
  for (std::size_t k = 0; k < order.size() && k < static_cast<std::size_t>(cfg.analysis.ergm_chains);
       ++k) {
    models.push_back(&layers[order[k]]);
  }
  CsvWriter fit({"model", "term", "theta", "se", "p_value", "stars"});
  CsvWriter sum({"model", "nodes", "arcs", "n_dyads", "log_pseudo_likelihood", "aic", "bic",
                 "converged", "iterations", "error"});
  for (const NamedLayer* l : models) {
    try {
      auto r = FitMple(l->graph, cfg.analysis.ergm_terms, cfg.analysis.solver);
      for (const auto& t : r.terms) {
        fit.AddRow({l->name, t.term, Num(t.theta), Num(t.se), Num(t.p_value), t.stars});
      }
      sum.AddRow({l->name, Num(l->graph.num_nodes()), Num(l->graph.num_arcs()),
                  Num(r.n_dyads), Num(r.log_pseudo_likelihood), Num(r.aic), Num(r.bic),
                  r.converged ? "1" : "0", std::to_string(r.iterations), ""});
    } catch (const Error& e) {
      sum.AddRow({l->name, Num(l->graph.num_nodes()), Num(l->graph.num_arcs()), "NA", "NA",
                  "NA", "NA", "0", "0", e.what()});
    }
  }
  w.Write("fit.csv", fit.str());
  w.Write("fit_summary.csv", sum.str());
}

void StageEstimate(const RunConfig& cfg, Pipeline::State& s, const fs::path& dir,
                   StageWriter& w) {
  const auto& truth = LoadTruth(s, dir);
  const auto& log = LoadLog(s, dir);
  const auto& partition = LoadPartition(s, dir);
  const auto& net = LoadNetwork(s, dir);
  const auto params = PopulationParameters(truth.persons());

  CsvWriter ew({"scope", "site", "attribute", "n", "naive", "weighted", "parameter",
                "deviation", "flagged", "sd"});
  auto emit = [&](const std::string& scope, const SampleFrame& frame) {
    auto rep = RepresentativenessReport(frame, params, cfg.analysis.reference_ci);
    for (const auto& row : rep.rows) {
      std::string sd = "";
      if (row.what == EstimandKind::kMeanAge) sd = Num(AgeSd(FilterSite(frame, row.site)));
      ew.AddRow({scope, std::string(ToString(row.site)), std::string(ToString(row.what)),
                 Num(row.n), Num(row.naive), OptNum(row.weighted), OptNum(row.parameter),
                 OptNum(row.deviation), row.flagged ? "1" : "0", sd});
    }
  };
  emit("participants", BuildSampleFrame(log, truth, cfg.analysis.degree_source));

  const auto seeds = LoadSeedOrder(dir, net);
  Digraph lt = LinkTracingLayer(net);
  auto chains = DecomposeChains(lt, seeds);
  if (!chains.empty()) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < chains.size(); ++i) {
      if (chains[i].members.size() > chains[best].members.size()) best = i;
    }
    std::set<EntityId> members;
    for (std::size_t v : chains[best].members) members.insert(lt.id(v));
    std::set<ObsId> only;
    for (const auto& iv : log.interviews) {
      if (members.count(partition.EntityOf(iv.respondent))) only.insert(iv.respondent);
    }
    emit(fmt::format("seed_{}_chain", best + 1),
         BuildSampleFrame(log, truth, cfg.analysis.degree_source, &only));
  }
  CsvWriter pw({"site", "population", "mean_age", "female_share"});
  for (Site site : {Site::kDestination, Site::kOrigin}) {
    const auto& p = params[static_cast<std::size_t>(Index(site))];
    pw.AddRow({std::string(ToString(site)), Num(p.size), Num(p.mean_age), Num(p.female_share)});
  }
  w.Write("estimates.csv", ew.str());
  w.Write("population.csv", pw.str());

  CsvWriter mw({"site", "elicited", "elicited_referred", "referred", "masking", "overlap"});
  for (const auto& d : ComputeMasking(log, partition)) {
    mw.AddRow({std::string(ToString(d.site)), Num(d.elicited), Num(d.elicited_referred),
               Num(d.referred), Num(d.masking()), Num(d.overlap())});
  }
  w.Write("masking.csv", mw.str());
}

}  // namespace

void Pipeline::RunImpl(Stage stage) {
  const fs::path dir = out_dir();
  StageWriter w(dir);
  State& s = *state_;
  switch (stage) {
    case Stage::kGenerate: StageGenerate(config_, s, w); break;
    case Stage::kSample: StageSample(config_, s, dir, w); break;
    case Stage::kLink: StageLink(config_, s, dir, w); break;
    case Stage::kBuild: StageBuild(s, dir, w); break;
    case Stage::kStats: StageStats(config_, s, dir, w); break;
    case Stage::kFit: StageFit(config_, s, dir, w); break;
    case Stage::kEstimate: StageEstimate(config_, s, dir, w); break;
    case Stage::kReport: w.Write("report.md", RenderReport(dir)); break;
  }
  w.Commit();
}

ArtifactManifest Pipeline::WriteManifest() {
  ArtifactManifest m;
  m.seed = config_.master_seed();
  std::string snap = config_.Snapshot();
  std::string filtered;
  std::size_t pos = 0;
  while (pos < snap.size()) {
    auto end = snap.find('\n', pos);
    std::string line = snap.substr(pos, end - pos + 1);
    if (!line.starts_with("output ")) filtered += line;
    pos = end + 1;
  }
  m.config_snapshot = filtered;
  const fs::path dir = out_dir();
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::string name = entry.path().filename().string();
    if (name == "manifest.json" || name.ends_with(".partial")) continue;
    std::string data = ReadFile(entry.path());
    m.files.push_back({name, Sha256Hex(data), data.size()});
  }
  std::sort(m.files.begin(), m.files.end(),
            [](const auto& a, const auto& b) { return a.name < b.name; });
  WriteFile(dir / "manifest.json", m.ToJson());
  return m;
}

GroundTruthGraph GenerateTruth(const RunConfig& config) {
  const auto seed = config.master_seed();
  auto persons =
      GeneratePopulation(config.population, DeriveSeed(seed, "generate.population"));
  auto pool =
      MakeNamePool(config.population.name_pool_size, DeriveSeed(seed, "generate.names"));
  AssignIdentifiers(persons, pool, config.population.phone_missing_rate,
                    DeriveSeed(seed, "generate.identifiers"));
  return GenerateTies(std::move(persons), config.ties, DeriveSeed(seed, "generate.ties"));
}

ArtifactManifest RunPipeline(const RunConfig& config) {
  config.Validate();
  Pipeline p(config);
  p.RunAll();
  return p.WriteManifest();
}

}  // namespace tsf
