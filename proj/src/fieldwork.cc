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

#include "tsf/fieldwork.h"

#include <algorithm>
#include <limits>
#include <numeric>
#include <set>

#include <fmt/format.h>

#include "tsf/rng.h"

namespace tsf {
namespace {

constexpr std::array<std::string_view, kNumAlterCategories> kCategoryNames = {
    "local_friends",     "local_kin",     "returnees",        "corridor_kin",
    "corridor_friends",  "elsewhere_kin", "elsewhere_friends"};

void CheckProbability(double p, const std::string& field) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ConfigError(fmt::format("{}: {} is not a probability", field, p));
  }
}

int AgeBand(int age) {
  if (age < 30) return 0;
  if (age < 40) return 1;
  if (age < 50) return 2;
  if (age < 60) return 3;
  return 4;
}

int AttributeValue(const Person& p, SeedAttribute a) {
  switch (a) {
    case SeedAttribute::kSex:
      return Index(p.sex);
    case SeedAttribute::kMarital:
      return p.marital;
    case SeedAttribute::kAgeBand:
      return AgeBand(p.age);
    case SeedAttribute::kEducation:
      return p.education;
    case SeedAttribute::kReligion:
      return p.religion;
    case SeedAttribute::kWork:
      return p.work;
  }
  return 0;
}

int Distance(const Person& a, const Person& b,
             std::span<const SeedAttribute> attributes) {
  int d = 0;
  for (SeedAttribute attr : attributes) {
    d += AttributeValue(a, attr) != AttributeValue(b, attr);
  }
  return d;
}

bool IsKin(TieKind k) { return k == TieKind::kKin; }

}  // namespace

std::string_view ToString(AlterCategory c) {
  return kCategoryNames[static_cast<int>(c)];
}

AlterCategory ParseAlterCategory(std::string_view s) {
  for (int i = 0; i < kNumAlterCategories; ++i) {
    if (kCategoryNames[i] == s) return static_cast<AlterCategory>(i);
  }
  throw ParseError("unknown alter category '" + std::string(s) + "'");
}

int AlterQuotas::total() const { return std::accumulate(cap.begin(), cap.end(), 0); }

std::vector<SeedAttribute> DefaultSeedAttributes() {
  return {SeedAttribute::kSex,      SeedAttribute::kMarital,
          SeedAttribute::kAgeBand,  SeedAttribute::kEducation,
          SeedAttribute::kReligion, SeedAttribute::kWork};
}

void StudyConfig::SetParticipation(double p) {
  for (auto& row : participation) row.fill(p);
}

void StudyConfig::Validate() const {
  if (n_seeds < 1) throw ConfigError("study.seeds: must be >= 1");
  if (referral_quota_per_site < 0) {
    throw ConfigError("study.referral_quota_per_site: must be >= 0");
  }
  if (max_seeds < n_seeds) {
    throw ConfigError("study.max_seeds: must be >= study.seeds");
  }
  if (target_interviews < n_seeds) {
    throw ConfigError("study.target: must be >= study.seeds");
  }
  for (Site s : {Site::kOrigin, Site::kDestination}) {
    for (Sex x : {Sex::kFemale, Sex::kMale}) {
      CheckProbability(participation_prob(s, x),
                       fmt::format("study.participation.{}.{}", ToString(s),
                                   x == Sex::kFemale ? "female" : "male"));
    }
    CheckProbability(masking_prob(s), fmt::format("study.masking.{}", ToString(s)));
  }
  for (int c = 0; c < kNumAlterCategories; ++c) {
    if (alter_quotas.cap[c] < 0) {
      throw ConfigError(fmt::format("study.alter_quota.{}: must be >= 0",
                                    kCategoryNames[c]));
    }
  }
  if (alter_alter_sample_size < 0) {
    throw ConfigError("study.alter_alter_sample_size: must be >= 0");
  }
  if (!(referral_sex_weight >= 0.0)) {
    throw ConfigError("study.referral_sex_weight: must be >= 0");
  }
  CheckProbability(noise.alias_typo_rate, "study.noise.alias_typo_rate");
  CheckProbability(noise.alter_phone_unknown_rate,
                   "study.noise.alter_phone_unknown_rate");
  CheckProbability(noise.alter_attribute_noise, "study.noise.alter_attribute_noise");
  CheckProbability(noise.alter_tie_noise, "study.noise.alter_tie_noise");
}

int StudyLog::max_wave() const {
  int w = 0;
  for (const auto& iv : interviews) w = std::max(w, iv.wave);
  return w;
}

const ObservationRecord& StudyLog::observation(ObsId id) const {
  // Simulated logs number observations densely from zero.
  if (id < observations.size() && observations[id].id == id) return observations[id];
  for (const auto& o : observations) {
    if (o.id == id) return o;
  }
  throw LinkageError(fmt::format("unknown observation {}", id));
}

std::vector<PersonId> SelectSeeds(std::span<const Person> population, int k,
                                  std::span<const SeedAttribute> attributes,
                                  std::uint64_t rng_seed) {
  std::vector<PersonId> eligible;
  for (const Person& p : population) {
    if (p.site == Site::kDestination) eligible.push_back(p.id);
  }
  if (k < 0 || static_cast<std::size_t>(k) > eligible.size()) {
    throw ConfigError(fmt::format(
        "study.seeds: {} seeds requested but only {} destination residents exist", k,
        eligible.size()));
  }
  if (k == 0) return {};
  Rng rng(rng_seed);
  // A random priority order breaks ties between equally distant candidates.
  rng.Shuffle(eligible);
  auto person = [&](PersonId id) -> const Person& {
    // Population ids are positions in the span.
    return population[id];
  };
  std::vector<PersonId> seeds = {eligible.front()};
  std::vector<int> min_dist(eligible.size(), std::numeric_limits<int>::max());
  std::vector<bool> chosen(eligible.size(), false);
  chosen[0] = true;
  while (seeds.size() < static_cast<std::size_t>(k)) {
    const Person& last = person(seeds.back());
    std::size_t best = eligible.size();
    int best_dist = -1;
    for (std::size_t i = 0; i < eligible.size(); ++i) {
      if (chosen[i]) continue;
      min_dist[i] = std::min(min_dist[i], Distance(person(eligible[i]), last, attributes));
      if (min_dist[i] > best_dist) {
        best_dist = min_dist[i];
        best = i;
      }
    }
    chosen[best] = true;
    seeds.push_back(eligible[best]);
  }
  return seeds;
}

AlterCategory CategorizeAlter(const Person& respondent, const Person& alter,
                              TieKind kind) {
  const bool kin = IsKin(kind);
  if (alter.site == Site::kOther) {
    return kin ? AlterCategory::kElsewhereKin : AlterCategory::kElsewhereFriends;
  }
  if (alter.migrant_type == MigrantType::kReturnee) return AlterCategory::kReturnees;
  if (alter.site == respondent.site) {
    return kin ? AlterCategory::kLocalKin : AlterCategory::kLocalFriends;
  }
  return kin ? AlterCategory::kCorridorKin : AlterCategory::kCorridorFriends;
}

PersonalNetworkObservation ElicitPersonalNetwork(PersonId respondent,
                                                 const GroundTruthGraph& truth,
                                                 const AlterQuotas& quotas,
                                                 std::uint64_t rng_seed) {
  Rng rng(rng_seed);
  const Person& ego = truth.person(respondent);
  std::array<std::vector<PersonId>, kNumAlterCategories> pools;
  for (const auto& nb : truth.neighbors(respondent)) {
    const AlterCategory c = CategorizeAlter(ego, truth.person(nb.id), nb.kind);
    pools[static_cast<int>(c)].push_back(nb.id);
  }
  PersonalNetworkObservation pnet;
  pnet.respondent_person = respondent;
  for (int c = 0; c < kNumAlterCategories; ++c) {
    const auto& pool = pools[c];
    const std::size_t take =
        std::min<std::size_t>(pool.size(), static_cast<std::size_t>(quotas.cap[c]));
    std::vector<std::size_t> picks = rng.SampleWithoutReplacement(pool.size(), take);
    std::sort(picks.begin(), picks.end());
    for (std::size_t i : picks) {
      pnet.alters.push_back({0, pool[i], static_cast<AlterCategory>(c)});
    }
  }
  return pnet;
}

std::vector<AlterTieReport> SampleAlterAlterTies(PersonalNetworkObservation& pnet,
                                                 const GroundTruthGraph& truth, int k,
                                                 double perception_noise,
                                                 std::uint64_t rng_seed) {
  Rng rng(rng_seed);
  const std::size_t take =
      std::min<std::size_t>(pnet.alters.size(), static_cast<std::size_t>(std::max(k, 0)));
  std::vector<std::size_t> picks = rng.SampleWithoutReplacement(pnet.alters.size(), take);
  std::sort(picks.begin(), picks.end(), [&](std::size_t x, std::size_t y) {
    return pnet.alters[x].obs < pnet.alters[y].obs;
  });
  pnet.sampled.clear();
  for (std::size_t i : picks) pnet.sampled.push_back(pnet.alters[i].obs);
  std::vector<AlterTieReport> reports;
  for (std::size_t x = 0; x < picks.size(); ++x) {
    for (std::size_t y = x + 1; y < picks.size(); ++y) {
      const ElicitedAlter& a = pnet.alters[picks[x]];
      const ElicitedAlter& b = pnet.alters[picks[y]];
      bool present = truth.HasTie(a.person, b.person);
      if (perception_noise > 0.0 && rng.Bernoulli(perception_noise)) present = !present;
      reports.push_back({a.obs, b.obs, present});
    }
  }
  pnet.alter_ties = reports;
  return reports;
}

std::vector<Nomination> NominateReferrals(PersonId respondent,
                                          const GroundTruthGraph& truth,
                                          int quota_per_site, double masking_prob,
                                          double sex_weight, std::uint64_t rng_seed) {
  Rng rng(rng_seed);
  const Person& ego = truth.person(respondent);
  std::array<std::vector<PersonId>, 2> pools;  // origin, destination
  for (const auto& nb : truth.neighbors(respondent)) {
    const Person& p = truth.person(nb.id);
    // Every contact gets a masking draw so the stream does not depend on
    // which contacts are eligible.
    const bool masked = rng.Bernoulli(masking_prob);
    if (p.site == Site::kOther || masked) continue;
    pools[Index(p.site)].push_back(nb.id);
  }
  std::vector<Nomination> out;
  for (Site site : {Site::kDestination, Site::kOrigin}) {
    std::vector<PersonId> pool = pools[Index(site)];
    for (int q = 0; q < quota_per_site && !pool.empty(); ++q) {
      std::vector<double> w(pool.size());
      for (std::size_t i = 0; i < pool.size(); ++i) {
        w[i] = truth.person(pool[i]).sex == ego.sex ? sex_weight : 1.0;
      }
      std::size_t pick;
      if (std::accumulate(w.begin(), w.end(), 0.0) > 0.0) {
        pick = rng.Categorical(w);
      } else {
        pick = rng.Index(pool.size());
      }
      out.push_back({pool[pick], site});
      pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
    }
  }
  return out;
}

namespace {

enum class Status : std::uint8_t { kUntouched, kAccepted, kInterviewed, kRefused };

struct Pending {
  PersonId person;
  int wave;
  bool seed;
};

class StudyRunner {
 public:
  StudyRunner(const GroundTruthGraph& truth, const StudyConfig& config,
              std::uint64_t seed)
      : truth_(truth), config_(config), seed_(seed),
        status_(truth.num_persons(), Status::kUntouched) {}

  StudyLog Run() {
    // Replacement seeds continue the same max-min ordering, so the first
    // n_seeds do not depend on max_seeds.
    const auto residents = static_cast<int>(
        std::count_if(truth_.persons().begin(), truth_.persons().end(),
                      [](const Person& q) { return q.site == Site::kDestination; }));
    const auto candidates =
        SelectSeeds(truth_.persons(), std::max(config_.n_seeds,
                                               std::min(config_.max_seeds, residents)),
                    config_.seed_attributes,
                    DeriveSeed(seed_, "seeds"));
    std::size_t next_candidate = 0;
    std::vector<Pending> wave;
    for (; next_candidate < static_cast<std::size_t>(config_.n_seeds); ++next_candidate) {
      const PersonId p = candidates[next_candidate];
      status_[p] = Status::kAccepted;
      wave.push_back({p, 0, true});
    }
    int interviews = 0;
    bool halted = false;
    while (!wave.empty() && !halted) {
      // Ping-pong: alternate destination and origin respondents.
      std::vector<Pending> dest, orig;
      for (const Pending& e : wave) {
        (truth_.person(e.person).site == Site::kDestination ? dest : orig).push_back(e);
      }
      std::vector<Pending> order;
      for (std::size_t i = 0; i < std::max(dest.size(), orig.size()); ++i) {
        if (i < dest.size()) order.push_back(dest[i]);
        if (i < orig.size()) order.push_back(orig[i]);
      }
      std::vector<Pending> next;
      for (const Pending& e : order) {
        if (interviews >= config_.target_interviews) {
          halted = true;
          break;
        }
        Interview(e, next);
        ++interviews;
      }
      if (interviews >= config_.target_interviews) halted = true;
      while (next.empty() && !halted && next_candidate < candidates.size()) {
        const PersonId p = candidates[next_candidate++];
        if (status_[p] != Status::kUntouched) continue;
        status_[p] = Status::kAccepted;
        next.push_back({p, 0, true});
      }
      wave = std::move(next);
    }
    log_.exhausted = interviews < config_.target_interviews;
    return std::move(log_);
  }

 private:
  ObsId NewObservation(ObservationSource source, const Person& p,
                       std::optional<ObsId> reporter, Rng& rng) {
    ObservationRecord o;
    o.id = static_cast<ObsId>(log_.observations.size());
    o.source = source;
    std::optional<std::string_view> phone;
    if (p.phone) phone = *p.phone;
    const bool is_alter = source == ObservationSource::kAlter;
    if (is_alter && config_.noise.alter_phone_unknown_rate > 0.0 &&
        rng.Bernoulli(config_.noise.alter_phone_unknown_rate)) {
      phone.reset();
    }
    o.alias = EncodeAlias(p.first_name, p.last_name, phone);
    if (source != ObservationSource::kRespondent && config_.noise.alias_typo_rate > 0.0 &&
        rng.Bernoulli(config_.noise.alias_typo_rate)) {
      const std::size_t pos = rng.Index(6);
      char& c = pos < 3 ? o.alias.name3[pos] : o.alias.surname3[pos - 3];
      const char old = c;
      do {
        c = static_cast<char>('A' + rng.Index(26));
      } while (c == old);
    }
    o.sex = p.sex;
    o.residence = p.site;
    if (source != ObservationSource::kReferral) {
      o.occupation = p.work;
      o.religion = p.religion;
    }
    if (is_alter && config_.noise.alter_attribute_noise > 0.0) {
      const double q = config_.noise.alter_attribute_noise;
      if (rng.Bernoulli(q)) o.sex = p.sex == Sex::kFemale ? Sex::kMale : Sex::kFemale;
      if (rng.Bernoulli(q)) {
        o.occupation = static_cast<std::uint8_t>(rng.Index(kWorkStatuses.size()));
      }
      if (rng.Bernoulli(q)) {
        o.religion = static_cast<std::uint8_t>(rng.Index(kReligions.size()));
      }
    }
    o.reporting_respondent = reporter;
    log_.observations.push_back(o);
    log_.truth[o.id] = p.id;
    return o.id;
  }

  void Interview(const Pending& entry, std::vector<Pending>& next) {
    const PersonId p = entry.person;
    const int wave = entry.wave;
    const Person& person = truth_.person(p);
    Rng rng(DeriveSeed(seed_, "respondent", p));
    status_[p] = Status::kInterviewed;
    const ObsId resp = NewObservation(ObservationSource::kRespondent, person,
                                      std::nullopt, rng);
    log_.interviews.push_back({seq_++, resp, p, person.site, wave, person.site});
    if (entry.seed) log_.seeds.push_back(resp);

    PersonalNetworkObservation pnet = ElicitPersonalNetwork(
        p, truth_, config_.alter_quotas, DeriveSeed(seed_, "elicit", p));
    pnet.respondent = resp;
    for (ElicitedAlter& a : pnet.alters) {
      a.obs = NewObservation(ObservationSource::kAlter, truth_.person(a.person), resp, rng);
    }
    SampleAlterAlterTies(pnet, truth_, config_.alter_alter_sample_size,
                         config_.noise.alter_tie_noise,
                         DeriveSeed(seed_, "alter_ties", p));
    ++seq_;
    log_.personal_networks.push_back(std::move(pnet));

    const auto nominations = NominateReferrals(
        p, truth_, config_.referral_quota_per_site, config_.masking_prob(person.site),
        config_.referral_sex_weight, DeriveSeed(seed_, "nominate", p));
    for (const Nomination& n : nominations) {
      const Person& nominee = truth_.person(n.person);
      const ObsId ref = NewObservation(ObservationSource::kReferral, nominee, resp, rng);
      bool accepted = false;
      if (status_[n.person] == Status::kUntouched) {
        // One participation draw per person, made at first contact.
        Rng coin(DeriveSeed(seed_, "participation", n.person));
        accepted = coin.Bernoulli(config_.participation_prob(nominee.site, nominee.sex));
        status_[n.person] = accepted ? Status::kAccepted : Status::kRefused;
        if (accepted) next.push_back({n.person, wave + 1, false});
      }
      log_.referrals.push_back(
          {seq_++, resp, ref, p, n.person, nominee.site, wave + 1, accepted});
    }
  }

  const GroundTruthGraph& truth_;
  const StudyConfig& config_;
  std::uint64_t seed_;
  std::vector<Status> status_;
  StudyLog log_;
  std::size_t seq_ = 0;
};

}  // namespace

StudyLog RunStudy(const GroundTruthGraph& truth, const StudyConfig& config,
                  std::uint64_t rng_seed) {
  config.Validate();
  return StudyRunner(truth, config, rng_seed).Run();
}

ParticipationCell ParticipationSummary::site_total(Site s) const {
  ParticipationCell t;
  for (const auto& c : cells[Index(s)]) {
    t.contacted += c.contacted;
    t.participated += c.participated;
  }
  return t;
}

ParticipationCell ParticipationSummary::sex_total(Sex x) const {
  ParticipationCell t;
  for (const auto& row : cells) {
    t.contacted += row[Index(x)].contacted;
    t.participated += row[Index(x)].participated;
  }
  return t;
}

ParticipationCell ParticipationSummary::grand_total() const {
  ParticipationCell t;
  for (Sex x : {Sex::kFemale, Sex::kMale}) {
    const auto c = sex_total(x);
    t.contacted += c.contacted;
    t.participated += c.participated;
  }
  return t;
}

double ParticipationSummary::success_rate() const {
  return nominations == 0 ? 0.0
                          : static_cast<double>(accepted_nominations) / nominations;
}

ParticipationSummary SummarizeParticipation(const StudyLog& log) {
  ParticipationSummary s;
  // Persons are identified through the truth map when present, otherwise by
  // the observation itself.
  auto key = [&](ObsId obs) -> std::uint64_t {
    auto it = log.truth.find(obs);
    return it != log.truth.end() ? it->second : (1ULL << 40) + obs;
  };
  std::map<std::uint64_t, ObsId> contacted;  // person -> first observation
  std::set<std::uint64_t> interviewed;
  std::set<std::uint64_t> nominated, accepted;
  for (const auto& iv : log.interviews) {
    contacted.emplace(key(iv.respondent), iv.respondent);
    interviewed.insert(key(iv.respondent));
  }
  for (const auto& r : log.referrals) {
    const std::uint64_t k = key(r.referral);
    contacted.emplace(k, r.referral);
    nominated.insert(k);
    if (r.accepted) accepted.insert(k);
  }
  for (const auto& [k, obs] : contacted) {
    const ObservationRecord& o = log.observation(obs);
    if (!o.sex || !o.residence || *o.residence == Site::kOther) continue;
    ParticipationCell& cell = s.cells[Index(*o.residence)][Index(*o.sex)];
    ++cell.contacted;
    if (interviewed.count(k)) ++cell.participated;
  }
  // Seeds are contacted directly, not nominated.
  for (ObsId seed : log.seeds) nominated.erase(key(seed));
  s.nominations = nominated.size();
  for (std::uint64_t k : accepted) s.accepted_nominations += nominated.count(k);
  s.interviews = interviewed.size();
  return s;
}

}  // namespace tsf
