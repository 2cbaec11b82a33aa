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

#include "tsf/synthpop.h"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>
#include <set>

#include <fmt/format.h>

#include "tsf/rng.h"

namespace tsf {
namespace {

std::vector<double> Normalized(std::vector<double> counts) {
  const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
  for (double& c : counts) c /= total;
  return counts;
}

void CheckFraction(double v, const std::string& field) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw ConfigError(fmt::format("{}: {} is not a fraction in [0, 1]", field, v));
  }
}

void CheckDistribution(const std::vector<double>& p, std::size_t expected,
                       const std::string& field) {
  if (p.size() != expected) {
    throw ConfigError(fmt::format("{}: expected {} categories, got {}", field,
                                  expected, p.size()));
  }
  double sum = 0.0;
  for (double v : p) {
    CheckFraction(v, field);
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw ConfigError(fmt::format("{}: probabilities sum to {}, not 1", field, sum));
  }
}

// Origin-site and destination-site attribute profiles, from the respondent
// demographics of the two sites.
SiteConfig OriginProfile(std::size_t size) {
  SiteConfig s;
  s.size = size;
  s.female_share = 0.51;
  s.age_mean = 48.0;
  s.age_sd = 17.0;
  s.religion = Normalized({151, 0, 1, 0, 0, 0, 2, 2});
  s.education = Normalized({0, 0, 0, 3, 25, 12, 24, 56, 10, 19, 7});
  s.work = Normalized({59, 10, 1, 17, 54, 14, 0});
  s.marital = Normalized({58, 57, 26, 8, 7, 0, 0});
  s.returnee_share = 0.10;
  return s;
}

SiteConfig DestinationProfile(std::size_t size) {
  SiteConfig s;
  s.size = size;
  s.female_share = 0.53;
  s.age_mean = 41.0;
  s.age_sd = 13.0;
  s.religion = Normalized({119, 0, 4, 7, 5, 0, 0, 10});
  s.education = Normalized({1, 0, 0, 1, 7, 32, 14, 50, 19, 20, 1});
  s.work = Normalized({86, 10, 18, 9, 7, 7, 10});
  s.marital = Normalized({66, 36, 8, 25, 9, 1, 2});
  return s;
}

PopulationConfig CorridorPopulation(std::size_t origin, std::size_t destination,
                                    std::size_t other) {
  PopulationConfig c;
  c.site(Site::kOrigin) = OriginProfile(origin);
  c.site(Site::kDestination) = DestinationProfile(destination);
  c.site(Site::kOther) = DestinationProfile(other);
  c.site(Site::kOther).age_mean = 38.0;
  return c;
}

int DrawAge(Rng& rng, double mean, double sd) {
  // Normal truncated to [18, 95] by rejection, then rounded.
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const double a = std::round(rng.Normal(mean, sd));
    if (a >= 18.0 && a <= 95.0) return static_cast<int>(a);
  }
  return std::clamp(static_cast<int>(std::round(mean)), 18, 95);
}

std::uint8_t DrawCategory(Rng& rng, const std::vector<double>& p) {
  return static_cast<std::uint8_t>(rng.Categorical(p));
}

constexpr std::array<std::string_view, 48> kFirstNames = {
    "Maria",    "Ioana",   "Elena",    "Ana",      "Andreea",  "Mihaela",
    "Cristina", "Gabriela", "Daniela", "Alina",    "Florentina", "Ramona",
    "Georgiana", "Nicoleta", "Larisa", "Oana",     "Ștefania", "Rodica",
    "Vasilica", "Lăcrămioara", "Irina", "Simona",  "Camelia",  "Doina",
    "Ion",      "Gheorghe", "Vasile",  "Constantin", "Nicolae", "Ștefan",
    "Mihai",    "Andrei",  "Alexandru", "Florin",  "Marian",   "Cristian",
    "Dumitru",  "Petru",   "Adrian",   "Daniel",   "Costel",   "Cătălin",
    "Bogdan",   "Răzvan",  "Ovidiu",   "Sorin",    "Io",       "Ilie"};

constexpr std::array<std::string_view, 40> kSurnameStems = {
    "Pop",   "Ionesc",  "Popesc", "Dumitr", "Stan",   "Stoic",  "Gheorgh",
    "Mateesc", "Ciobot", "Rus",   "Bălan",  "Munteanu", "Lungu", "Marin",
    "Tudor", "Dobr",    "Barbu",  "Nistor", "Florea", "Ene",    "Preda",
    "Moldovan", "Ilie", "Olteanu", "Vlad",  "Toma",   "Șerban", "Neagu",
    "Ursu",  "Crăciun", "Zamfir", "Radu",   "Dinu",   "Manea",  "Ciocan",
    "Costache", "Petrescu", "Ardelean", "Voicu", "Pavel"};

constexpr std::array<std::string_view, 8> kSurnameSuffixes = {
    "", "u", "escu", "eanu", "aru", "ache", "ică", "oiu"};

}  // namespace

std::size_t PopulationConfig::total_size() const {
  std::size_t n = 0;
  for (const auto& s : sites) n += s.size;
  return n;
}

void PopulationConfig::Validate() const {
  for (Site site : kAllSites) {
    const SiteConfig& s = this->site(site);
    const std::string prefix = fmt::format("population.{}", ToString(site));
    CheckFraction(s.female_share, prefix + ".female_share");
    CheckFraction(s.returnee_share, prefix + ".returnee_share");
    if (!(s.age_sd >= 0.0)) {
      throw ConfigError(prefix + ".age_sd: must be >= 0");
    }
    if (!(s.age_mean >= 18.0 && s.age_mean <= 95.0)) {
      throw ConfigError(prefix + ".age_mean: must lie in [18, 95]");
    }
    if (s.size == 0) continue;
    CheckDistribution(s.religion, kReligions.size(), prefix + ".religion");
    CheckDistribution(s.education, kEducationLevels.size(), prefix + ".education");
    CheckDistribution(s.work, kWorkStatuses.size(), prefix + ".work");
    CheckDistribution(s.marital, kMaritalStatuses.size(), prefix + ".marital");
  }
  CheckFraction(phone_missing_rate, "population.phone_missing_rate");
  if (name_pool_size == 0 && total_size() > 0) {
    throw ConfigError("population.name_pool_size: must be > 0");
  }
  if (name_pool_size > NameUniverseSize()) {
    throw ConfigError(fmt::format(
        "population.name_pool_size: {} exceeds the {} available name pairs",
        name_pool_size, NameUniverseSize()));
  }
}

TieConfig TieConfig::Uniform(double p_within_site, double p_between_site) {
  TieConfig c;
  for (int a = 0; a < kNumSites; ++a) {
    for (int b = 0; b < kNumSites; ++b) {
      c.site_pair_prob[a][b] = a == b ? p_within_site : p_between_site;
    }
  }
  c.site_pair_prob[Index(Site::kOther)][Index(Site::kOther)] = 0.0;
  c.kin.enabled = false;
  return c;
}

void TieConfig::Validate() const {
  for (int a = 0; a < kNumSites; ++a) {
    for (int b = 0; b < kNumSites; ++b) {
      const std::string field =
          fmt::format("ties.p.{}.{}", ToString(static_cast<Site>(a)),
                      ToString(static_cast<Site>(b)));
      CheckFraction(site_pair_prob[a][b], field);
      if (site_pair_prob[a][b] != site_pair_prob[b][a]) {
        throw ConfigError(field + ": site-pair probabilities must be symmetric");
      }
    }
  }
  if (!(sex_homophily_multiplier >= 0.0)) {
    throw ConfigError("ties.sex_homophily_multiplier: must be >= 0");
  }
  CheckFraction(acquaintance_share, "ties.acquaintance_share");
  if (kin.enabled) {
    if (!(kin.mean_size >= 1.0)) {
      throw ConfigError("ties.kin.mean_size: must be >= 1");
    }
    for (int a = 0; a < kNumSites; ++a) {
      std::vector<double> row(kin.member_site[a].begin(), kin.member_site[a].end());
      CheckDistribution(row, kNumSites,
                        fmt::format("ties.kin.member_site.{}",
                                    ToString(static_cast<Site>(a))));
    }
  }
}

GroundTruthGraph::GroundTruthGraph(std::vector<Person> persons,
                                   std::vector<Tie> ties)
    : persons_(std::move(persons)), ties_(std::move(ties)) {
  const std::size_t n = persons_.size();
  std::vector<std::size_t> deg(n, 0);
  for (const Tie& t : ties_) {
    if (t.a == t.b) throw Error("GroundTruthGraph: self-tie");
    if (t.a >= n || t.b >= n) throw Error("GroundTruthGraph: unknown endpoint");
    ++deg[t.a];
    ++deg[t.b];
  }
  offsets_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) offsets_[i + 1] = offsets_[i] + deg[i];
  adjacency_.resize(offsets_[n]);
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (const Tie& t : ties_) {
    adjacency_[fill[t.a]++] = {t.b, t.kind};
    adjacency_[fill[t.b]++] = {t.a, t.kind};
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::sort(adjacency_.begin() + offsets_[i], adjacency_.begin() + offsets_[i + 1],
              [](const Neighbor& x, const Neighbor& y) { return x.id < y.id; });
  }
}

std::span<const GroundTruthGraph::Neighbor> GroundTruthGraph::neighbors(
    PersonId id) const {
  return {adjacency_.data() + offsets_.at(id), offsets_.at(id + 1) - offsets_[id]};
}

bool GroundTruthGraph::HasTie(PersonId a, PersonId b) const {
  auto nb = neighbors(a);
  auto it = std::lower_bound(nb.begin(), nb.end(), b,
                             [](const Neighbor& x, PersonId v) { return x.id < v; });
  return it != nb.end() && it->id == b;
}

std::vector<std::string> PresetNames() {
  return {"castellon_dambovita", "castellon_dambovita_census", "small"};
}

PopulationConfig PresetPopulation(const std::string& name) {
  if (name == "castellon_dambovita") {
    return CorridorPopulation(406598, 16840, 40000);
  }
  if (name == "castellon_dambovita_census") {
    return CorridorPopulation(406598, 30880, 40000);
  }
  if (name == "small") {
    PopulationConfig c = CorridorPopulation(25, 20, 5);
    c.name_pool_size = 2000;
    return c;
  }
  throw ConfigError("population.preset: unknown preset '" + name + "'");
}

TieConfig PresetTies(const std::string& name) {
  TieConfig c;
  const int o = Index(Site::kOrigin);
  const int d = Index(Site::kDestination);
  const int x = Index(Site::kOther);
  if (name == "castellon_dambovita" || name == "castellon_dambovita_census") {
    const PopulationConfig pop = PresetPopulation(name);
    const double n_o = static_cast<double>(pop.site(Site::kOrigin).size);
    const double n_d = static_cast<double>(pop.site(Site::kDestination).size);
    const double n_x = static_cast<double>(pop.site(Site::kOther).size);
    // Expected non-kin degree targets per site pair, before the sex
    // multiplier: origin residents ~9 local contacts, destination ~7,
    // migrants ~2 contacts back home, ~1 contact elsewhere.
    c.site_pair_prob[o][o] = 9.0 / n_o;
    c.site_pair_prob[d][d] = 7.0 / n_d;
    c.site_pair_prob[o][d] = c.site_pair_prob[d][o] = 2.0 / n_o;
    c.site_pair_prob[d][x] = c.site_pair_prob[x][d] = 0.9 / n_x;
    c.site_pair_prob[o][x] = c.site_pair_prob[x][o] = 1.0 / n_x;
    c.site_pair_prob[x][x] = 0.0;
    c.sex_homophily_multiplier = 1.3;
    c.kin.mean_size = 6.0;
    return c;
  }
  if (name == "small") {
    c = TieConfig::Uniform(0.15, 0.05);
    c.kin.enabled = true;
    c.kin.mean_size = 3.0;
    c.sex_homophily_multiplier = 1.2;
    return c;
  }
  throw ConfigError("population.preset: unknown preset '" + name + "'");
}

std::vector<Person> GeneratePopulation(const PopulationConfig& config,
                                       std::uint64_t rng_seed) {
  config.Validate();
  std::vector<Person> persons;
  persons.reserve(config.total_size());
  Rng rng(rng_seed);
  for (Site site : kAllSites) {
    const SiteConfig& s = config.site(site);
    for (std::size_t i = 0; i < s.size; ++i) {
      Person p;
      p.id = static_cast<PersonId>(persons.size());
      p.site = site;
      p.sex = rng.Bernoulli(s.female_share) ? Sex::kFemale : Sex::kMale;
      p.age = DrawAge(rng, s.age_mean, s.age_sd);
      p.religion = DrawCategory(rng, s.religion);
      p.education = DrawCategory(rng, s.education);
      p.work = DrawCategory(rng, s.work);
      p.marital = DrawCategory(rng, s.marital);
      switch (site) {
        case Site::kOrigin:
          p.migrant_type = rng.Bernoulli(s.returnee_share)
                               ? MigrantType::kReturnee
                               : MigrantType::kNonMigrant;
          break;
        case Site::kDestination:
        case Site::kOther:
          p.migrant_type = MigrantType::kMigrant;
          break;
      }
      persons.push_back(std::move(p));
    }
  }
  return persons;
}

namespace {

// Stem and suffix combinations can spell the same surname twice; the list
// keeps the first occurrence of each.
const std::vector<std::string>& Surnames() {
  static const std::vector<std::string> surnames = [] {
    std::vector<std::string> out;
    std::set<std::string> seen;
    for (auto stem : kSurnameStems) {
      for (auto suffix : kSurnameSuffixes) {
        std::string s = std::string(stem) + std::string(suffix);
        if (seen.insert(s).second) out.push_back(std::move(s));
      }
    }
    return out;
  }();
  return surnames;
}

}  // namespace

std::size_t NameUniverseSize() { return kFirstNames.size() * Surnames().size(); }

NamePool MakeNamePool(std::size_t size, std::uint64_t rng_seed) {
  const auto& surnames = Surnames();
  const std::size_t universe = NameUniverseSize();
  if (size > universe) {
    throw ConfigError(fmt::format(
        "population.name_pool_size: {} exceeds the {} available name pairs", size,
        universe));
  }
  Rng rng(rng_seed);
  NamePool pool;
  pool.reserve(size);
  for (std::size_t idx : rng.SampleWithoutReplacement(universe, size)) {
    pool.emplace_back(std::string(kFirstNames[idx / surnames.size()]),
                      surnames[idx % surnames.size()]);
  }
  return pool;
}

void AssignIdentifiers(std::vector<Person>& persons, const NamePool& pool,
                       double phone_missing_rate, std::uint64_t rng_seed) {
  if (pool.empty()) throw ConfigError("name pool is empty");
  CheckFraction(phone_missing_rate, "population.phone_missing_rate");
  Rng rng(rng_seed);
  for (Person& p : persons) {
    const auto& [first, last] = pool[rng.Index(pool.size())];
    p.first_name = first;
    p.last_name = last;
    if (rng.Bernoulli(phone_missing_rate)) {
      p.phone.reset();
    } else {
      std::string phone = "07";
      for (int i = 0; i < 8; ++i) phone += static_cast<char>('0' + rng.Index(10));
      p.phone = std::move(phone);
    }
  }
}

namespace {

std::uint64_t PairKey(PersonId a, PersonId b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

// Bernoulli(p) over every pair of `xs` (within == true) or every pair in
// xs × ys, visiting only the successes via geometric skips over the linear
// dyad index.
template <typename Emit>
void SampleBlock(const std::vector<PersonId>& xs, const std::vector<PersonId>& ys,
                 bool within, double p, Rng& rng, Emit&& emit) {
  if (p <= 0.0) return;
  const std::uint64_t nx = xs.size();
  const std::uint64_t ny = ys.size();
  const std::uint64_t total = within ? (nx < 2 ? 0 : nx * (nx - 1) / 2) : nx * ny;
  // Upper-triangle row r holds pairs (r, r+1 .. nx-1) and starts at row_begin.
  std::uint64_t row = 0;
  std::uint64_t row_begin = 0;
  std::uint64_t pos = 0;
  bool first = true;
  while (true) {
    const std::uint64_t skip = rng.Geometric(p);
    if (skip >= total) return;
    pos = first ? skip : pos + 1 + skip;
    first = false;
    if (pos >= total) return;
    if (within) {
      while (pos >= row_begin + (nx - 1 - row)) {
        row_begin += nx - 1 - row;
        ++row;
      }
      emit(xs[row], xs[row + 1 + (pos - row_begin)]);
    } else {
      emit(xs[pos / ny], ys[pos % ny]);
    }
  }
}

}  // namespace

GroundTruthGraph GenerateTies(std::vector<Person> persons, const TieConfig& config,
                              std::uint64_t rng_seed) {
  config.Validate();
  Rng rng(rng_seed);
  // Blocks are disjoint, so friend keys are distinct without a lookup.
  std::vector<std::uint64_t> keys;

  // Friend/acquaintance ties: six (site, sex) blocks, each block pair with a
  // constant dyad probability.
  std::array<std::vector<PersonId>, 2 * kNumSites> blocks;
  for (const Person& p : persons) {
    blocks[Index(p.site) * 2 + Index(p.sex)].push_back(p.id);
  }
  bool warned = false;
  for (int b1 = 0; b1 < 2 * kNumSites; ++b1) {
    for (int b2 = b1; b2 < 2 * kNumSites; ++b2) {
      double prob = config.site_pair_prob[b1 / 2][b2 / 2];
      if (b1 % 2 == b2 % 2) prob *= config.sex_homophily_multiplier;
      if (prob > 1.0) {
        if (!warned) {
          std::clog << "warning: tie probability " << prob
                    << " exceeds 1 after the sex multiplier; clamped\n";
          warned = true;
        }
        prob = 1.0;
      }
      SampleBlock(blocks[b1], blocks[b2], b1 == b2, prob, rng,
                  [&](PersonId a, PersonId b) { keys.push_back(PairKey(a, b)); });
    }
  }
  // Friend vs acquaintance labels, drawn in pair-key order for determinism.
  std::sort(keys.begin(), keys.end());
  std::vector<TieKind> kinds(keys.size(), TieKind::kFriend);
  for (auto& kind : kinds) {
    if (rng.Bernoulli(config.acquaintance_share)) kind = TieKind::kAcquaintance;
  }
  std::vector<std::uint64_t> kin_keys;

  if (config.kin.enabled && !persons.empty()) {
    // Founders are taken destination first, then origin, then other, so the
    // small destination site can draw kin across the corridor before the
    // origin pool is consumed by local groups.
    std::array<std::vector<PersonId>, kNumSites> pools;
    for (const Person& p : persons) pools[Index(p.site)].push_back(p.id);
    for (auto& pool : pools) rng.Shuffle(pool);
    std::array<std::size_t, kNumSites> cursor{};
    std::vector<bool> assigned(persons.size(), false);
    auto take = [&](int site) -> std::optional<PersonId> {
      auto& pool = pools[site];
      while (cursor[site] < pool.size() && assigned[pool[cursor[site]]]) {
        ++cursor[site];
      }
      if (cursor[site] == pool.size()) return std::nullopt;
      const PersonId id = pool[cursor[site]++];
      assigned[id] = true;
      return id;
    };
    for (Site founder_site : {Site::kDestination, Site::kOrigin, Site::kOther}) {
      const int fs = Index(founder_site);
      const std::vector<double> mix(config.kin.member_site[fs].begin(),
                                    config.kin.member_site[fs].end());
      while (auto founder = take(fs)) {
        std::vector<PersonId> group = {*founder};
        const std::uint64_t extra = rng.Poisson(config.kin.mean_size - 1.0);
        for (std::uint64_t m = 0; m < extra; ++m) {
          const int site = static_cast<int>(rng.Categorical(mix));
          auto member = take(site);
          if (!member) member = take(fs);
          if (!member) break;
          group.push_back(*member);
        }
        for (std::size_t i = 0; i < group.size(); ++i) {
          for (std::size_t j = i + 1; j < group.size(); ++j) {
            kin_keys.push_back(PairKey(group[i], group[j]));
          }
        }
      }
    }
  }

  // Kin overrides a friend or acquaintance label on the same pair.
  std::sort(kin_keys.begin(), kin_keys.end());
  kin_keys.erase(std::unique(kin_keys.begin(), kin_keys.end()), kin_keys.end());
  auto tie = [](std::uint64_t k, TieKind kind) {
    return Tie{static_cast<PersonId>(k >> 32), static_cast<PersonId>(k & 0xffffffffULL), kind};
  };
  std::vector<Tie> out;
  out.reserve(keys.size() + kin_keys.size());
  std::size_t i = 0, j = 0;
  while (i < keys.size() || j < kin_keys.size()) {
    if (j == kin_keys.size() || (i < keys.size() && keys[i] < kin_keys[j])) {
      out.push_back(tie(keys[i], kinds[i]));
      ++i;
    } else {
      if (i < keys.size() && keys[i] == kin_keys[j]) ++i;
      out.push_back(tie(kin_keys[j++], TieKind::kKin));
    }
  }
  return GroundTruthGraph(std::move(persons), std::move(out));
}

}  // namespace tsf
