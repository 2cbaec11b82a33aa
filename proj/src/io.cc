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

#include "tsf/io.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

namespace tsf {

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot read {}", path.string()));
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot write {}", path.string()));
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.close();
  if (!out) throw IoError(fmt::format("error while writing {}", path.string()));
}

StageWriter::StageWriter(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) {
    throw IoError(fmt::format("cannot create directory {}: {}", dir_.string(),
                              ec.message()));
  }
}

void StageWriter::Write(const std::string& name, const std::string& text) {
  WriteFile(dir_ / (name + ".partial"), text);
  files_.push_back(name);
}

void StageWriter::Commit() {
  for (const auto& name : files_) {
    std::error_code ec;
    std::filesystem::rename(dir_ / (name + ".partial"), dir_ / name, ec);
    if (ec) throw IoError(fmt::format("cannot commit {}: {}", name, ec.message()));
  }
}

namespace {

std::string Opt(const std::optional<Sex>& s) {
  return s ? std::string(ToString(*s)) : std::string();
}
std::string Opt(const std::optional<Site>& s) {
  return s ? std::string(ToString(*s)) : std::string();
}
template <std::size_t N>
std::string OptVocab(const std::optional<std::uint8_t>& i,
                     const std::array<std::string_view, N>& vocab) {
  return i ? std::string(vocab.at(*i)) : std::string();
}

template <std::size_t N>
std::uint8_t VocabIndex(std::string_view s, const std::array<std::string_view, N>& vocab,
                        std::string_view what) {
  for (std::size_t i = 0; i < N; ++i) {
    if (vocab[i] == s) return static_cast<std::uint8_t>(i);
  }
  throw ParseError(fmt::format("unknown {} '{}'", what, s));
}
template <std::size_t N>
std::optional<std::uint8_t> OptVocabIndex(std::string_view s,
                                          const std::array<std::string_view, N>& vocab,
                                          std::string_view what) {
  if (s.empty()) return std::nullopt;
  return VocabIndex(s, vocab, what);
}

std::string Bool(bool b) { return b ? "1" : "0"; }
bool ParseBool(std::string_view s, std::string_view what) {
  if (s == "1") return true;
  if (s == "0") return false;
  throw ParseError(fmt::format("{}: expected 0 or 1, got '{}'", what, s));
}

std::uint32_t U32(std::string_view s, std::string_view what) {
  long long v = ParseInt(s, what);
  if (v < 0 || v > 0xffffffffLL) {
    throw ParseError(fmt::format("{}: {} out of range", what, v));
  }
  return static_cast<std::uint32_t>(v);
}

// Row accessor that resolves columns once by name.
class Rows {
 public:
  Rows(const CsvTable& t, std::initializer_list<std::string_view> cols) : t_(t) {
    t.RequireHeader(cols);
  }
  std::size_t size() const { return t_.num_rows(); }
  const std::string& at(std::size_t r, std::size_t c) const { return t_.row(r)[c]; }

 private:
  const CsvTable& t_;
};

}  // namespace

std::string PersonsCsv(const std::vector<Person>& persons) {
  CsvWriter w({"person_id", "site", "sex", "age", "religion", "education", "work",
               "marital", "migrant_type", "first_name", "last_name", "phone"});
  for (const auto& p : persons) {
    w.AddRow({std::to_string(p.id), std::string(ToString(p.site)),
              std::string(ToString(p.sex)), std::to_string(p.age),
              std::string(kReligions.at(p.religion)),
              std::string(kEducationLevels.at(p.education)),
              std::string(kWorkStatuses.at(p.work)),
              std::string(kMaritalStatuses.at(p.marital)),
              std::string(ToString(p.migrant_type)), p.first_name, p.last_name,
              p.phone.value_or("")});
  }
  return w.str();
}

std::vector<Person> ParsePersons(const CsvTable& t) {
  Rows rows(t, {"person_id", "site", "sex", "age", "religion", "education", "work",
                "marital", "migrant_type", "first_name", "last_name", "phone"});
  std::vector<Person> out;
  out.reserve(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    Person p;
    p.id = U32(rows.at(r, 0), "person_id");
    p.site = ParseSite(rows.at(r, 1));
    p.sex = ParseSex(rows.at(r, 2));
    p.age = static_cast<int>(ParseInt(rows.at(r, 3), "age"));
    p.religion = VocabIndex(rows.at(r, 4), kReligions, "religion");
    p.education = VocabIndex(rows.at(r, 5), kEducationLevels, "education");
    p.work = VocabIndex(rows.at(r, 6), kWorkStatuses, "work status");
    p.marital = VocabIndex(rows.at(r, 7), kMaritalStatuses, "marital status");
    p.migrant_type = ParseMigrantType(rows.at(r, 8));
    p.first_name = rows.at(r, 9);
    p.last_name = rows.at(r, 10);
    if (!rows.at(r, 11).empty()) p.phone = rows.at(r, 11);
    out.push_back(std::move(p));
  }
  return out;
}

std::string TiesCsv(const std::vector<Tie>& ties) {
  CsvWriter w({"person_a", "person_b", "tie_kind"});
  for (const auto& t : ties) {
    w.AddRow({std::to_string(t.a), std::to_string(t.b), std::string(ToString(t.kind))});
  }
  return w.str();
}

std::vector<Tie> ParseTies(const CsvTable& t) {
  Rows rows(t, {"person_a", "person_b", "tie_kind"});
  std::vector<Tie> out;
  out.reserve(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out.push_back({U32(rows.at(r, 0), "person_a"), U32(rows.at(r, 1), "person_b"),
                   ParseTieKind(rows.at(r, 2))});
  }
  return out;
}

std::string ObservationsCsv(const std::vector<ObservationRecord>& obs) {
  CsvWriter w({"obs_id", "source", "alias", "sex", "residence", "occupation", "religion",
               "reporting_respondent"});
  for (const auto& o : obs) {
    w.AddRow({std::to_string(o.id), std::string(ToString(o.source)), o.alias.Render(),
              Opt(o.sex), Opt(o.residence), OptVocab(o.occupation, kWorkStatuses),
              OptVocab(o.religion, kReligions),
              o.reporting_respondent ? std::to_string(*o.reporting_respondent) : ""});
  }
  return w.str();
}

std::vector<ObservationRecord> ParseObservations(const CsvTable& t) {
  Rows rows(t, {"obs_id", "source", "alias", "sex", "residence", "occupation", "religion",
                "reporting_respondent"});
  std::vector<ObservationRecord> out;
  out.reserve(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    ObservationRecord o;
    o.id = U32(rows.at(r, 0), "obs_id");
    o.source = ParseObservationSource(rows.at(r, 1));
    o.alias = AliasCode::Parse(rows.at(r, 2));
    o.sex = ParseOptionalSex(rows.at(r, 3));
    o.residence = ParseOptionalSite(rows.at(r, 4));
    o.occupation = OptVocabIndex(rows.at(r, 5), kWorkStatuses, "occupation");
    o.religion = OptVocabIndex(rows.at(r, 6), kReligions, "religion");
    if (!rows.at(r, 7).empty()) o.reporting_respondent = U32(rows.at(r, 7), "reporting_respondent");
    out.push_back(std::move(o));
  }
  return out;
}

StudyLogFiles StudyLogCsv(const StudyLog& log) {
  StudyLogFiles f;
  f.observations = ObservationsCsv(log.observations);
  {
    CsvWriter w({"obs_id", "person_id"});
    for (const auto& [o, p] : log.truth) w.AddRow({std::to_string(o), std::to_string(p)});
    f.observations_truth = w.str();
  }
  {
    CsvWriter w({"seq", "respondent_obs", "person_id", "site", "wave", "interviewer_site"});
    for (const auto& iv : log.interviews) {
      w.AddRow({std::to_string(iv.seq), std::to_string(iv.respondent),
                std::to_string(iv.person), std::string(ToString(iv.site)),
                std::to_string(iv.wave), std::string(ToString(iv.interviewer_site))});
    }
    f.interviews = w.str();
  }
  {
    CsvWriter w({"seq", "referee_obs", "referral_obs", "referee_person", "referral_person",
                 "site", "wave", "accepted"});
    for (const auto& r : log.referrals) {
      w.AddRow({std::to_string(r.seq), std::to_string(r.referee), std::to_string(r.referral),
                std::to_string(r.referee_person), std::to_string(r.referral_person),
                std::string(ToString(r.site)), std::to_string(r.wave), Bool(r.accepted)});
    }
    f.referrals = w.str();
  }
  {
    CsvWriter w({"respondent_obs", "respondent_person", "alter_obs", "alter_person",
                 "category", "sampled"});
    CsvWriter t({"respondent_obs", "a_obs", "b_obs", "present"});
    for (const auto& pn : log.personal_networks) {
      const std::string ro = std::to_string(pn.respondent);
      const std::string rp = std::to_string(pn.respondent_person);
      if (pn.alters.empty()) w.AddRow({ro, rp, "", "", "", ""});
      for (const auto& a : pn.alters) {
        bool sampled = std::binary_search(pn.sampled.begin(), pn.sampled.end(), a.obs);
        w.AddRow({ro, rp, std::to_string(a.obs), std::to_string(a.person),
                  std::string(ToString(a.category)), Bool(sampled)});
      }
      for (const auto& at : pn.alter_ties) {
        t.AddRow({ro, std::to_string(at.a), std::to_string(at.b), Bool(at.present)});
      }
    }
    f.elicitations = w.str();
    f.alter_ties = t.str();
  }
  {
    CsvWriter w({"key", "value"});
    w.AddRow({"exhausted", Bool(log.exhausted)});
    for (ObsId s : log.seeds) w.AddRow({"seed", std::to_string(s)});
    f.study = w.str();
  }
  {
    CsvWriter w({"seq", "event", "respondent_obs", "referral_obs", "site", "wave", "accepted"});
    std::size_t i = 0, j = 0;
    while (i < log.interviews.size() || j < log.referrals.size()) {
      if (j == log.referrals.size() ||
          (i < log.interviews.size() && log.interviews[i].seq < log.referrals[j].seq)) {
        const auto& iv = log.interviews[i++];
        w.AddRow({std::to_string(iv.seq), "interview", std::to_string(iv.respondent), "",
                  std::string(ToString(iv.site)), std::to_string(iv.wave), ""});
      } else {
        const auto& r = log.referrals[j++];
        w.AddRow({std::to_string(r.seq), "referral", std::to_string(r.referee),
                  std::to_string(r.referral), std::string(ToString(r.site)),
                  std::to_string(r.wave), Bool(r.accepted)});
      }
    }
    f.events = w.str();
  }
  return f;
}

void WriteStudyLog(StageWriter& w, const StudyLog& log) {
  auto f = StudyLogCsv(log);
  w.Write("observations.csv", f.observations);
  w.Write("observations_truth.csv", f.observations_truth);
  w.Write("interviews.csv", f.interviews);
  w.Write("referrals.csv", f.referrals);
  w.Write("elicitations.csv", f.elicitations);
  w.Write("alter_ties.csv", f.alter_ties);
  w.Write("study.csv", f.study);
  w.Write("study_log.csv", f.events);
}

StudyLog ReadStudyLog(const std::filesystem::path& dir) {
  StudyLog log;
  log.observations = ParseObservations(CsvTable::Read(dir / "observations.csv"));
  {
    auto t = CsvTable::Read(dir / "observations_truth.csv");
    Rows rows(t, {"obs_id", "person_id"});
    for (std::size_t r = 0; r < rows.size(); ++r) {
      log.truth[U32(rows.at(r, 0), "obs_id")] = U32(rows.at(r, 1), "person_id");
    }
  }
  {
    auto t = CsvTable::Read(dir / "interviews.csv");
    Rows rows(t, {"seq", "respondent_obs", "person_id", "site", "wave", "interviewer_site"});
    for (std::size_t r = 0; r < rows.size(); ++r) {
      InterviewEvent iv;
      iv.seq = static_cast<std::size_t>(ParseInt(rows.at(r, 0), "seq"));
      iv.respondent = U32(rows.at(r, 1), "respondent_obs");
      iv.person = U32(rows.at(r, 2), "person_id");
      iv.site = ParseSite(rows.at(r, 3));
      iv.wave = static_cast<int>(ParseInt(rows.at(r, 4), "wave"));
      iv.interviewer_site = ParseSite(rows.at(r, 5));
      log.interviews.push_back(iv);
    }
  }
  {
    auto t = CsvTable::Read(dir / "referrals.csv");
    Rows rows(t, {"seq", "referee_obs", "referral_obs", "referee_person", "referral_person",
                  "site", "wave", "accepted"});
    for (std::size_t r = 0; r < rows.size(); ++r) {
      ReferralEvent e;
      e.seq = static_cast<std::size_t>(ParseInt(rows.at(r, 0), "seq"));
      e.referee = U32(rows.at(r, 1), "referee_obs");
      e.referral = U32(rows.at(r, 2), "referral_obs");
      e.referee_person = U32(rows.at(r, 3), "referee_person");
      e.referral_person = U32(rows.at(r, 4), "referral_person");
      e.site = ParseSite(rows.at(r, 5));
      e.wave = static_cast<int>(ParseInt(rows.at(r, 6), "wave"));
      e.accepted = ParseBool(rows.at(r, 7), "accepted");
      log.referrals.push_back(e);
    }
  }
  {
    auto t = CsvTable::Read(dir / "elicitations.csv");
    Rows rows(t, {"respondent_obs", "respondent_person", "alter_obs", "alter_person",
                  "category", "sampled"});
    std::map<ObsId, std::size_t> index;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      ObsId ro = U32(rows.at(r, 0), "respondent_obs");
      auto [it, inserted] = index.emplace(ro, log.personal_networks.size());
      if (inserted) {
        PersonalNetworkObservation pn;
        pn.respondent = ro;
        pn.respondent_person = U32(rows.at(r, 1), "respondent_person");
        log.personal_networks.push_back(std::move(pn));
      }
      if (rows.at(r, 2).empty()) continue;
      auto& pn = log.personal_networks[it->second];
      ElicitedAlter a;
      a.obs = U32(rows.at(r, 2), "alter_obs");
      a.person = U32(rows.at(r, 3), "alter_person");
      a.category = ParseAlterCategory(rows.at(r, 4));
      pn.alters.push_back(a);
      if (ParseBool(rows.at(r, 5), "sampled")) pn.sampled.push_back(a.obs);
    }
    for (auto& pn : log.personal_networks) std::sort(pn.sampled.begin(), pn.sampled.end());
    auto tt = CsvTable::Read(dir / "alter_ties.csv");
    Rows trows(tt, {"respondent_obs", "a_obs", "b_obs", "present"});
    for (std::size_t r = 0; r < trows.size(); ++r) {
      ObsId ro = U32(trows.at(r, 0), "respondent_obs");
      auto it = index.find(ro);
      if (it == index.end()) {
        throw ParseError(fmt::format("alter_ties.csv: respondent {} has no elicitations", ro));
      }
      log.personal_networks[it->second].alter_ties.push_back(
          {U32(trows.at(r, 1), "a_obs"), U32(trows.at(r, 2), "b_obs"),
           ParseBool(trows.at(r, 3), "present")});
    }
  }
  {
    auto t = CsvTable::Read(dir / "study.csv");
    Rows rows(t, {"key", "value"});
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const auto& k = rows.at(r, 0);
      if (k == "exhausted") {
        log.exhausted = ParseBool(rows.at(r, 1), "exhausted");
      } else if (k == "seed") {
        log.seeds.push_back(U32(rows.at(r, 1), "seed"));
      } else {
        throw ParseError(fmt::format("study.csv: unknown key '{}'", k));
      }
    }
  }
  return log;
}

std::string EntityMapCsv(const EntityPartition& p) {
  CsvWriter w({"obs_id", "entity_id"});
  for (const auto& [o, e] : p.mapping()) w.AddRow({std::to_string(o), std::to_string(e)});
  return w.str();
}

std::string EntityProfilesCsv(const EntityPartition& p) {
  CsvWriter w({"entity_id", "alias", "sex", "residence", "occupation", "religion",
               "num_observations"});
  for (std::size_t e = 0; e < p.num_entities(); ++e) {
    const auto& pr = p.profile(static_cast<EntityId>(e));
    w.AddRow({std::to_string(e), pr.alias.Render(), Opt(pr.sex), Opt(pr.residence),
              OptVocab(pr.occupation, kWorkStatuses), OptVocab(pr.religion, kReligions),
              std::to_string(pr.num_observations)});
  }
  return w.str();
}

EntityPartition ParsePartition(const CsvTable& map, const CsvTable& entities) {
  Rows mrows(map, {"obs_id", "entity_id"});
  std::vector<std::pair<ObsId, EntityId>> mapping;
  for (std::size_t r = 0; r < mrows.size(); ++r) {
    mapping.emplace_back(U32(mrows.at(r, 0), "obs_id"), U32(mrows.at(r, 1), "entity_id"));
  }
  Rows erows(entities, {"entity_id", "alias", "sex", "residence", "occupation", "religion",
                        "num_observations"});
  std::vector<EntityProfile> profiles;
  for (std::size_t r = 0; r < erows.size(); ++r) {
    if (U32(erows.at(r, 0), "entity_id") != r) {
      throw ParseError("entity_profiles.csv: entity ids must be dense and ascending");
    }
    EntityProfile p;
    p.alias = AliasCode::Parse(erows.at(r, 1));
    p.sex = ParseOptionalSex(erows.at(r, 2));
    p.residence = ParseOptionalSite(erows.at(r, 3));
    p.occupation = OptVocabIndex(erows.at(r, 4), kWorkStatuses, "occupation");
    p.religion = OptVocabIndex(erows.at(r, 5), kReligions, "religion");
    p.num_observations = static_cast<std::size_t>(ParseInt(erows.at(r, 6), "num_observations"));
    profiles.push_back(p);
  }
  return EntityPartition(std::move(mapping), std::move(profiles));
}

std::string ConflictsCsv(const ConflictReport& r) {
  CsvWriter w({"alias", "reason", "resolution", "observations"});
  for (const auto& c : r.conflicts) {
    std::string ids;
    for (std::size_t i = 0; i < c.observations.size(); ++i) {
      if (i) ids += ' ';
      ids += std::to_string(c.observations[i]);
    }
    w.AddRow({c.alias, std::string(ToString(c.reason)), std::string(ToString(c.resolution)),
              ids});
  }
  return w.str();
}

ConflictReport ParseConflicts(const CsvTable& t) {
  Rows rows(t, {"alias", "reason", "resolution", "observations"});
  ConflictReport rep;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    Conflict c;
    c.alias = rows.at(r, 0);
    const auto& reason = rows.at(r, 1);
    if (reason == ToString(ConflictReason::kSameCodeDifferentPeople)) {
      c.reason = ConflictReason::kSameCodeDifferentPeople;
    } else if (reason == ToString(ConflictReason::kDifferentCodesSamePersonSuspected)) {
      c.reason = ConflictReason::kDifferentCodesSamePersonSuspected;
    } else {
      throw ParseError(fmt::format("conflicts.csv: unknown reason '{}'", reason));
    }
    bool found = false;
    for (int k = 0; k <= static_cast<int>(ConflictResolution::kMerged); ++k) {
      if (ToString(static_cast<ConflictResolution>(k)) == rows.at(r, 2)) {
        c.resolution = static_cast<ConflictResolution>(k);
        found = true;
      }
    }
    if (!found) {
      throw ParseError(fmt::format("conflicts.csv: unknown resolution '{}'", rows.at(r, 2)));
    }
    std::istringstream ids(rows.at(r, 3));
    std::string tok;
    while (ids >> tok) c.observations.push_back(U32(tok, "observations"));
    rep.conflicts.push_back(std::move(c));
  }
  return rep;
}

std::string NodesCsv(const MultiLayerNetwork& net) {
  CsvWriter w({"entity_id", "role", "seed", "site", "sex"});
  for (const auto& n : net.nodes()) {
    w.AddRow({std::to_string(n.id), std::string(ToString(n.role)), Bool(n.seed),
              Opt(n.site), Opt(n.sex)});
  }
  return w.str();
}

std::string ArcsCsv(const MultiLayerNetwork& net) {
  CsvWriter w({"src", "dst", "kind"});
  for (const auto& a : net.arcs()) {
    w.AddRow({std::to_string(a.src), std::to_string(a.dst), std::string(ToString(a.kind))});
  }
  return w.str();
}

std::string EdgesCsv(const MultiLayerNetwork& net) {
  CsvWriter w({"a", "b"});
  for (const auto& e : net.edges()) w.AddRow({std::to_string(e.a), std::to_string(e.b)});
  return w.str();
}

MultiLayerNetwork ParseNetwork(const CsvTable& nodes, const CsvTable& arcs,
                               const CsvTable& edges) {
  Rows nrows(nodes, {"entity_id", "role", "seed", "site", "sex"});
  std::vector<Node> ns;
  for (std::size_t r = 0; r < nrows.size(); ++r) {
    ns.push_back({U32(nrows.at(r, 0), "entity_id"), ParseNodeRole(nrows.at(r, 1)),
                  ParseBool(nrows.at(r, 2), "seed"), ParseOptionalSex(nrows.at(r, 4)),
                  ParseOptionalSite(nrows.at(r, 3))});
  }
  Rows arows(arcs, {"src", "dst", "kind"});
  std::vector<Arc> as;
  for (std::size_t r = 0; r < arows.size(); ++r) {
    as.push_back({U32(arows.at(r, 0), "src"), U32(arows.at(r, 1), "dst"),
                  ParseArcKind(arows.at(r, 2))});
  }
  Rows erows(edges, {"a", "b"});
  std::vector<Edge> es;
  for (std::size_t r = 0; r < erows.size(); ++r) {
    es.push_back({U32(erows.at(r, 0), "a"), U32(erows.at(r, 1), "b")});
  }
  return MultiLayerNetwork(std::move(ns), std::move(as), std::move(es));
}

MultiLayerNetwork SelectLayer(const MultiLayerNetwork& net, const std::string& layer) {
  if (layer == "network_of_networks") return net;
  if (layer != "link_tracing") throw Error(fmt::format("unknown layer '{}'", layer));
  std::vector<Node> nodes;
  for (const auto& n : net.nodes()) {
    if (n.role != NodeRole::kAlterOnly) nodes.push_back(n);
  }
  std::vector<Arc> arcs;
  for (const auto& a : net.arcs()) {
    if (a.kind == ArcKind::kReferral) arcs.push_back(a);
  }
  return MultiLayerNetwork(std::move(nodes), std::move(arcs), {});
}

void ExportNetwork(const MultiLayerNetwork& net, const std::string& layer,
                   const std::filesystem::path& dir) {
  auto sub = SelectLayer(net, layer);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError(fmt::format("cannot create directory {}", dir.string()));
  WriteFile(dir / "nodes.csv", NodesCsv(sub));
  WriteFile(dir / "arcs.csv", ArcsCsv(sub));
  WriteFile(dir / "edges.csv", EdgesCsv(sub));
}

MultiLayerNetwork ImportNetwork(const std::filesystem::path& dir) {
  return ParseNetwork(CsvTable::Read(dir / "nodes.csv"), CsvTable::Read(dir / "arcs.csv"),
                      CsvTable::Read(dir / "edges.csv"));
}

}  // namespace tsf
