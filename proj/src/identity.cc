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

#include "tsf/identity.h"

#include <algorithm>
#include <numeric>
#include <set>

#include <fmt/format.h>

namespace tsf {
namespace {

// ASCII base letter for a Latin code point, or 0 when it is not a letter.
char FoldCodePoint(std::uint32_t cp) {
  if (cp >= 'a' && cp <= 'z') return static_cast<char>(cp - 'a' + 'A');
  if (cp >= 'A' && cp <= 'Z') return static_cast<char>(cp);
  if (cp >= 0xC0 && cp <= 0xFF) {
    const std::uint32_t c = cp >= 0xE0 ? cp - 0x20 : cp;  // to upper block
    if (c <= 0xC5) return 'A';
    if (c == 0xC6) return 'A';
    if (c == 0xC7) return 'C';
    if (c <= 0xCB) return 'E';
    if (c <= 0xCF) return 'I';
    if (c == 0xD0) return 'D';
    if (c == 0xD1) return 'N';
    if (c <= 0xD6 || c == 0xD8) return 'O';
    if (c == 0xD7 || c == 0xF7) return 0;
    if (c <= 0xDC) return 'U';
    if (c == 0xDD || cp == 0xFF) return 'Y';
    if (cp == 0xDF) return 'S';
    return 0;
  }
  struct Range {
    std::uint32_t lo, hi;
    char base;
  };
  static constexpr Range kExtended[] = {
      {0x100, 0x105, 'A'}, {0x106, 0x10D, 'C'}, {0x10E, 0x111, 'D'},
      {0x112, 0x11B, 'E'}, {0x11C, 0x123, 'G'}, {0x124, 0x127, 'H'},
      {0x128, 0x131, 'I'}, {0x134, 0x135, 'J'}, {0x136, 0x138, 'K'},
      {0x139, 0x142, 'L'}, {0x143, 0x14B, 'N'}, {0x14C, 0x153, 'O'},
      {0x154, 0x159, 'R'}, {0x15A, 0x161, 'S'}, {0x162, 0x167, 'T'},
      {0x168, 0x173, 'U'}, {0x174, 0x175, 'W'}, {0x176, 0x178, 'Y'},
      {0x179, 0x17E, 'Z'}, {0x218, 0x219, 'S'}, {0x21A, 0x21B, 'T'},
  };
  for (const Range& r : kExtended) {
    if (cp >= r.lo && cp <= r.hi) return r.base;
  }
  return 0;
}

// First `n` letters of a UTF-8 string, folded; invalid bytes are skipped.
std::string FoldedLetters(std::string_view s, std::size_t n) {
  std::string out;
  std::size_t i = 0;
  while (i < s.size() && out.size() < n) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    std::uint32_t cp = 0;
    std::size_t len = 1;
    if (b0 < 0x80) {
      cp = b0;
    } else if ((b0 & 0xE0) == 0xC0) {
      cp = b0 & 0x1F;
      len = 2;
    } else if ((b0 & 0xF0) == 0xE0) {
      cp = b0 & 0x0F;
      len = 3;
    } else if ((b0 & 0xF8) == 0xF0) {
      cp = b0 & 0x07;
      len = 4;
    } else {
      ++i;
      continue;
    }
    if (i + len > s.size()) break;
    bool valid = true;
    for (std::size_t k = 1; k < len; ++k) {
      const auto b = static_cast<unsigned char>(s[i + k]);
      if ((b & 0xC0) != 0x80) valid = false;
      cp = (cp << 6) | (b & 0x3F);
    }
    i += valid ? len : 1;
    if (!valid) continue;
    if (char c = FoldCodePoint(cp)) out += c;
  }
  return out;
}

template <std::size_t N>
void FillPadded(std::array<char, N>& dst, const std::string& letters) {
  dst.fill(AliasCode::kPad);
  std::copy_n(letters.begin(), std::min(N, letters.size()), dst.begin());
}

}  // namespace

std::string AliasCode::Render() const {
  std::string s;
  s.append(name3.begin(), name3.end());
  s.append(surname3.begin(), surname3.end());
  s.append(phone4.begin(), phone4.end());
  return s;
}

std::string AliasCode::letters() const {
  std::string s;
  s.append(name3.begin(), name3.end());
  s.append(surname3.begin(), surname3.end());
  return s;
}

AliasCode AliasCode::Parse(std::string_view r) {
  auto bad = [&] { return ParseError("invalid alias code '" + std::string(r) + "'"); };
  if (r.size() != 10) throw bad();
  AliasCode a;
  for (int i = 0; i < 6; ++i) {
    const char c = r[i];
    if (!((c >= 'A' && c <= 'Z') || c == kPad)) throw bad();
    (i < 3 ? a.name3[i] : a.surname3[i - 3]) = c;
  }
  const std::string_view phone = r.substr(6);
  if (phone != kMissingPhone) {
    for (char c : phone) {
      if (c < '0' || c > '9') throw bad();
    }
  }
  std::copy(phone.begin(), phone.end(), a.phone4.begin());
  if (a.name3[0] == kPad) throw bad();
  return a;
}

AliasCode EncodeAlias(std::string_view first_name, std::string_view last_name,
                      std::optional<std::string_view> phone) {
  const std::string first = FoldedLetters(first_name, 3);
  if (first.empty()) {
    throw EncodingError("cannot encode alias: first name '" +
                        std::string(first_name) + "' has no letters");
  }
  AliasCode a;
  FillPadded(a.name3, first);
  FillPadded(a.surname3, FoldedLetters(last_name, 3));
  if (phone) {
    std::string digits;
    for (char c : *phone) {
      if (c >= '0' && c <= '9') digits += c;
    }
    if (digits.size() >= 4) {
      std::copy(digits.end() - 4, digits.end(), a.phone4.begin());
    }
  }
  return a;
}

std::string_view ToString(ObservationSource s) {
  switch (s) {
    case ObservationSource::kRespondent:
      return "respondent";
    case ObservationSource::kReferral:
      return "referral";
    case ObservationSource::kAlter:
      return "alter";
  }
  return "?";
}

ObservationSource ParseObservationSource(std::string_view s) {
  if (s == "respondent") return ObservationSource::kRespondent;
  if (s == "referral") return ObservationSource::kReferral;
  if (s == "alter") return ObservationSource::kAlter;
  throw ParseError("unknown observation source '" + std::string(s) + "'");
}

std::string_view ToString(ConflictReason r) {
  return r == ConflictReason::kSameCodeDifferentPeople
             ? "same_code_different_people"
             : "different_codes_same_person_suspected";
}

std::string_view ToString(ConflictResolution r) {
  switch (r) {
    case ConflictResolution::kSplit:
      return "split";
    case ConflictResolution::kMergedForReview:
      return "merged_for_review";
    case ConflictResolution::kUnresolved:
      return "unresolved";
    case ConflictResolution::kNotMerged:
      return "not_merged";
    case ConflictResolution::kMerged:
      return "merged";
  }
  return "?";
}

EntityPartition::EntityPartition(std::vector<std::pair<ObsId, EntityId>> mapping,
                                 std::vector<EntityProfile> profiles)
    : mapping_(std::move(mapping)), profiles_(std::move(profiles)) {
  std::sort(mapping_.begin(), mapping_.end());
}

bool EntityPartition::Contains(ObsId obs) const {
  auto it = std::lower_bound(mapping_.begin(), mapping_.end(),
                             std::make_pair(obs, EntityId{0}));
  return it != mapping_.end() && it->first == obs;
}

EntityId EntityPartition::EntityOf(ObsId obs) const {
  auto it = std::lower_bound(mapping_.begin(), mapping_.end(),
                             std::make_pair(obs, EntityId{0}));
  if (it == mapping_.end() || it->first != obs) {
    throw LinkageError(fmt::format("observation {} does not resolve to an entity", obs));
  }
  return it->second;
}

std::size_t ConflictReport::Count(ConflictReason reason) const {
  return static_cast<std::size_t>(
      std::count_if(conflicts.begin(), conflicts.end(),
                    [&](const Conflict& c) { return c.reason == reason; }));
}

bool ConflictReport::Flags(const AliasCode& alias) const {
  const std::string r = alias.Render();
  return std::any_of(conflicts.begin(), conflicts.end(), [&](const Conflict& c) {
    return c.reason == ConflictReason::kSameCodeDifferentPeople && c.alias == r;
  });
}

namespace {

// Evidence accumulated for a candidate entity.
struct Cluster {
  std::vector<std::size_t> members;  // indices into the sorted observations
  std::set<Sex> sexes;
  std::set<Site> residences;
  std::set<std::uint8_t> occupations;
  std::set<std::uint8_t> religions;
  bool has_respondent = false;
  // (source, reporting respondent) pairs already present.
  std::set<std::pair<ObservationSource, ObsId>> mentions;
  // Respondent observations in the cluster, and the respondents who
  // reported any of its mentions. Nobody names themselves.
  std::set<ObsId> respondents;
  std::set<ObsId> reporters;

  void Add(std::size_t idx, const ObservationRecord& o) {
    members.push_back(idx);
    if (o.sex) sexes.insert(*o.sex);
    if (o.residence) residences.insert(*o.residence);
    if (o.occupation) occupations.insert(*o.occupation);
    if (o.religion) religions.insert(*o.religion);
    if (o.source == ObservationSource::kRespondent) {
      has_respondent = true;
      respondents.insert(o.id);
    }
    if (o.reporting_respondent && o.source != ObservationSource::kRespondent) {
      mentions.emplace(o.source, *o.reporting_respondent);
      reporters.insert(*o.reporting_respondent);
    }
  }

  void Absorb(const Cluster& other) {
    members.insert(members.end(), other.members.begin(), other.members.end());
    sexes.insert(other.sexes.begin(), other.sexes.end());
    residences.insert(other.residences.begin(), other.residences.end());
    occupations.insert(other.occupations.begin(), other.occupations.end());
    religions.insert(other.religions.begin(), other.religions.end());
    has_respondent = has_respondent || other.has_respondent;
    mentions.insert(other.mentions.begin(), other.mentions.end());
    respondents.insert(other.respondents.begin(), other.respondents.end());
    reporters.insert(other.reporters.begin(), other.reporters.end());
  }

  bool SoftDisagreement() const {
    return occupations.size() > 1 || religions.size() > 1;
  }
};

template <typename T>
bool Agrees(const std::set<T>& values, const std::optional<T>& v) {
  return !v || values.empty() || (values.size() == 1 && *values.begin() == *v);
}

template <typename T>
bool SetsAgree(const std::set<T>& a, const std::set<T>& b) {
  if (a.empty() || b.empty()) return true;
  std::set<T> u = a;
  u.insert(b.begin(), b.end());
  return u.size() == 1;
}

bool HardCompatible(const Cluster& c, const ObservationRecord& o) {
  if (!Agrees(c.sexes, o.sex) || !Agrees(c.residences, o.residence)) return false;
  if (o.source == ObservationSource::kRespondent && c.has_respondent) return false;
  if (o.reporting_respondent && o.source != ObservationSource::kRespondent &&
      c.mentions.count({o.source, *o.reporting_respondent})) {
    return false;
  }
  if (o.source == ObservationSource::kRespondent && c.reporters.count(o.id)) return false;
  if (o.reporting_respondent && o.source != ObservationSource::kRespondent &&
      c.respondents.count(*o.reporting_respondent)) {
    return false;
  }
  return true;
}

bool HardCompatible(const Cluster& a, const Cluster& b) {
  if (!SetsAgree(a.sexes, b.sexes) || !SetsAgree(a.residences, b.residences)) {
    return false;
  }
  if (a.has_respondent && b.has_respondent) return false;
  for (const auto& m : b.mentions) {
    if (a.mentions.count(m)) return false;
  }
  for (ObsId r : a.respondents) {
    if (b.reporters.count(r)) return false;
  }
  for (ObsId r : b.respondents) {
    if (a.reporters.count(r)) return false;
  }
  return true;
}

int SoftScore(const Cluster& c, const ObservationRecord& o) {
  int score = 0;
  if (o.occupation && !c.occupations.empty()) {
    score += c.occupations.count(*o.occupation) ? 1 : -1;
  }
  if (o.religion && !c.religions.empty()) {
    score += c.religions.count(*o.religion) ? 1 : -1;
  }
  return score;
}

bool HasBothHard(const ObservationRecord& o) { return o.sex && o.residence; }

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  std::size_t Find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  // The smaller root survives so results do not depend on call order.
  std::size_t Union(std::size_t a, std::size_t b) {
    a = Find(a);
    b = Find(b);
    if (a == b) return a;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
    return a;
  }

 private:
  std::vector<std::size_t> parent_;
};

template <typename T>
std::optional<T> Modal(const std::vector<std::optional<T>>& values) {
  std::map<T, int> counts;
  for (const auto& v : values) {
    if (v) ++counts[*v];
  }
  std::optional<T> best;
  int best_count = 0;
  for (const auto& [v, n] : counts) {
    if (n > best_count) {
      best = v;
      best_count = n;
    }
  }
  return best;
}

}  // namespace

LinkResult LinkRecords(std::span<const ObservationRecord> observations,
                       const LinkPolicy& policy) {
  if (policy.fuzzy_edit_distance < 0 || policy.fuzzy_edit_distance > 1) {
    throw ConfigError("link.fuzzy_edit_distance: must be 0 or 1");
  }
  std::vector<ObservationRecord> obs(observations.begin(), observations.end());
  std::sort(obs.begin(), obs.end(),
            [](const auto& a, const auto& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < obs.size(); ++i) {
    if (obs[i].id == obs[i - 1].id) {
      throw LinkageError(fmt::format("duplicate observation id {}", obs[i].id));
    }
  }

  // Alias blocks in lexicographic alias order; members in id order.
  std::map<AliasCode, std::vector<std::size_t>> blocks;
  for (std::size_t i = 0; i < obs.size(); ++i) blocks[obs[i].alias].push_back(i);

  ConflictReport report;
  std::vector<Cluster> clusters;
  std::map<AliasCode, std::vector<std::size_t>> clusters_of_alias;

  auto ids_of = [&](const std::vector<std::size_t>& idx) {
    std::vector<ObsId> ids;
    for (std::size_t i : idx) ids.push_back(obs[i].id);
    std::sort(ids.begin(), ids.end());
    return ids;
  };

  for (const auto& [alias, members] : blocks) {
    std::vector<std::size_t> local;  // cluster indices for this block
    std::vector<std::size_t> unresolved;
    if (!policy.require_attribute_consistency) {
      Cluster c;
      for (std::size_t i : members) c.Add(i, obs[i]);
      local.push_back(clusters.size());
      clusters.push_back(std::move(c));
    } else {
      // Observations with both hard attributes anchor the clusters; partial
      // ones are attached afterwards.
      std::vector<std::size_t> order;
      for (std::size_t i : members) {
        if (HasBothHard(obs[i])) order.push_back(i);
      }
      for (std::size_t i : members) {
        if (!HasBothHard(obs[i])) order.push_back(i);
      }
      for (std::size_t i : order) {
        const ObservationRecord& o = obs[i];
        std::vector<std::size_t> fits;
        for (std::size_t c : local) {
          if (HardCompatible(clusters[c], o)) fits.push_back(c);
        }
        if (fits.size() > 1) {
          // Soft evidence breaks ties; a tie that survives is left unresolved.
          int best = INT32_MIN;
          std::vector<std::size_t> top;
          for (std::size_t c : fits) {
            const int s = SoftScore(clusters[c], o);
            if (s > best) {
              best = s;
              top = {c};
            } else if (s == best) {
              top.push_back(c);
            }
          }
          fits = top;
        }
        if (fits.size() == 1) {
          clusters[fits[0]].Add(i, o);
        } else if (fits.empty()) {
          Cluster c;
          c.Add(i, o);
          local.push_back(clusters.size());
          clusters.push_back(std::move(c));
        } else {
          Cluster c;
          c.Add(i, o);
          unresolved.push_back(i);
          clusters.push_back(std::move(c));
          // Not added to `local`: nothing else may join an unresolved mention.
        }
      }
    }
    const std::string rendered = alias.Render();
    if (local.size() > 1) {
      report.conflicts.push_back({rendered, ids_of(members),
                                  ConflictReason::kSameCodeDifferentPeople,
                                  ConflictResolution::kSplit});
    }
    if (!unresolved.empty()) {
      report.conflicts.push_back({rendered, ids_of(unresolved),
                                  ConflictReason::kSameCodeDifferentPeople,
                                  ConflictResolution::kUnresolved});
    }
    for (std::size_t c : local) {
      const Cluster& cl = clusters[c];
      if (cl.members.size() < 2) continue;
      // Merged on a code without phone digits, or over disagreeing soft
      // attributes: kept merged, queued for review.
      if (cl.SoftDisagreement() || !alias.has_phone()) {
        report.conflicts.push_back({rendered, ids_of(cl.members),
                                    ConflictReason::kSameCodeDifferentPeople,
                                    ConflictResolution::kMergedForReview});
      }
    }
    clusters_of_alias[alias] = local;
  }

  UnionFind uf(clusters.size());
  // Near-miss codes: same phone digits, letter blocks one substitution apart.
  std::map<std::string, std::vector<AliasCode>> by_phone;
  for (const auto& [alias, members] : blocks) {
    if (alias.has_phone()) by_phone[std::string(alias.phone())].push_back(alias);
  }
  std::vector<std::pair<AliasCode, AliasCode>> candidates;
  for (const auto& [phone, aliases] : by_phone) {
    for (std::size_t i = 0; i < aliases.size(); ++i) {
      for (std::size_t j = i + 1; j < aliases.size(); ++j) {
        const std::string a = aliases[i].letters();
        const std::string b = aliases[j].letters();
        int diff = 0;
        for (std::size_t k = 0; k < a.size(); ++k) diff += a[k] != b[k];
        if (diff == 1) candidates.emplace_back(aliases[i], aliases[j]);
      }
    }
  }
  std::sort(candidates.begin(), candidates.end());
  // Merged evidence per union-find root.
  std::map<std::size_t, Cluster> root_evidence;
  auto evidence = [&](std::size_t c) -> Cluster& {
    const std::size_t r = uf.Find(c);
    auto it = root_evidence.find(r);
    if (it == root_evidence.end()) it = root_evidence.emplace(r, clusters[c]).first;
    return it->second;
  };
  for (const auto& [a, b] : candidates) {
    for (std::size_t ca : clusters_of_alias[a]) {
      for (std::size_t cb : clusters_of_alias[b]) {
        if (uf.Find(ca) == uf.Find(cb)) continue;
        Cluster& ea = evidence(ca);
        Cluster& eb = evidence(cb);
        if (!HardCompatible(ea, eb)) continue;
        std::vector<std::size_t> both = ea.members;
        both.insert(both.end(), eb.members.begin(), eb.members.end());
        const std::string label = a.Render() + "|" + b.Render();
        if (policy.fuzzy_edit_distance == 1) {
          Cluster merged = ea;
          merged.Absorb(eb);
          root_evidence.erase(uf.Find(ca));
          root_evidence.erase(uf.Find(cb));
          const std::size_t r = uf.Union(ca, cb);
          root_evidence[r] = std::move(merged);
          report.conflicts.push_back(
              {label, ids_of(both), ConflictReason::kDifferentCodesSamePersonSuspected,
               ConflictResolution::kMerged});
        } else {
          report.conflicts.push_back(
              {label, ids_of(both), ConflictReason::kDifferentCodesSamePersonSuspected,
               ConflictResolution::kNotMerged});
        }
      }
    }
  }

  // Entities are numbered by their lowest observation id.
  std::vector<std::vector<std::size_t>> groups;
  std::map<std::size_t, std::size_t> group_of_root;
  std::vector<std::size_t> cluster_of_obs(obs.size());
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    for (std::size_t i : clusters[c].members) cluster_of_obs[i] = c;
  }
  for (std::size_t i = 0; i < obs.size(); ++i) {
    const std::size_t root = uf.Find(cluster_of_obs[i]);
    auto [it, inserted] = group_of_root.emplace(root, groups.size());
    if (inserted) groups.emplace_back();
    groups[it->second].push_back(i);
  }
  std::vector<std::pair<ObsId, EntityId>> mapping;
  std::vector<EntityProfile> profiles;
  for (std::size_t e = 0; e < groups.size(); ++e) {
    std::vector<std::optional<Sex>> sexes;
    std::vector<std::optional<Site>> sites;
    std::vector<std::optional<std::uint8_t>> occs, rels;
    for (std::size_t i : groups[e]) {
      mapping.emplace_back(obs[i].id, static_cast<EntityId>(e));
      sexes.push_back(obs[i].sex);
      sites.push_back(obs[i].residence);
      occs.push_back(obs[i].occupation);
      rels.push_back(obs[i].religion);
    }
    EntityProfile p;
    p.sex = Modal(sexes);
    p.residence = Modal(sites);
    p.occupation = Modal(occs);
    p.religion = Modal(rels);
    p.alias = obs[groups[e].front()].alias;
    p.num_observations = groups[e].size();
    profiles.push_back(p);
  }
  return {EntityPartition(std::move(mapping), std::move(profiles)), std::move(report)};
}

LinkageMetrics AuditConflicts(const EntityPartition& partition,
                              const ConflictReport& conflicts,
                              const std::map<ObsId, PersonId>* truth) {
  LinkageMetrics m;
  m.same_code_conflicts = conflicts.Count(ConflictReason::kSameCodeDifferentPeople);
  m.suspected_duplicates =
      conflicts.Count(ConflictReason::kDifferentCodesSamePersonSuspected);
  if (truth == nullptr) return m;

  // Pair counts from the contingency table of (entity, person).
  std::map<std::pair<EntityId, PersonId>, std::size_t> joint;
  std::map<EntityId, std::size_t> per_entity;
  std::map<PersonId, std::size_t> per_person;
  std::map<EntityId, std::set<PersonId>> persons_of_entity;
  std::map<PersonId, std::set<EntityId>> entities_of_person;
  for (const auto& [obs, entity] : partition.mapping()) {
    auto it = truth->find(obs);
    if (it == truth->end()) continue;
    ++joint[{entity, it->second}];
    ++per_entity[entity];
    ++per_person[it->second];
    persons_of_entity[entity].insert(it->second);
    entities_of_person[it->second].insert(entity);
  }
  auto pairs = [](std::size_t n) { return static_cast<double>(n) * (n - 1) / 2.0; };
  double together_both = 0, together_entity = 0, together_person = 0;
  for (const auto& [k, n] : joint) together_both += pairs(n);
  for (const auto& [k, n] : per_entity) together_entity += pairs(n);
  for (const auto& [k, n] : per_person) together_person += pairs(n);
  m.precision = together_entity > 0 ? together_both / together_entity : 1.0;
  m.recall = together_person > 0 ? together_both / together_person : 1.0;
  std::size_t merges = 0, splits = 0;
  for (const auto& [e, ps] : persons_of_entity) merges += ps.size() > 1;
  for (const auto& [p, es] : entities_of_person) splits += es.size() > 1;
  m.merge_errors = merges;
  m.split_errors = splits;
  return m;
}

}  // namespace tsf
