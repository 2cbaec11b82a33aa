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

#include "tsf/config.h"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <fmt/format.h>

#include "tsf/csv.h"

namespace tsf {

namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> SplitList(std::string_view s) {
  std::vector<std::string_view> out;
  while (true) {
    auto comma = s.find(',');
    auto item = Trim(s.substr(0, comma));
    if (!item.empty()) out.push_back(item);
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

double ToDouble(std::string_view v) { return ParseDouble(v, "value"); }

long long ToInt(std::string_view v) { return ParseInt(v, "value"); }

std::size_t ToSize(std::string_view v) {
  long long x = ToInt(v);
  if (x < 0) throw ParseError("must be >= 0");
  return static_cast<std::size_t>(x);
}

bool ToBool(std::string_view v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ParseError("expected true or false");
}

std::vector<double> ToDoubles(std::string_view v) {
  std::vector<double> out;
  for (auto item : SplitList(v)) out.push_back(ToDouble(item));
  return out;
}

template <typename T, typename F>
std::string Join(const std::vector<T>& xs, F fmt_one) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ",";
    s += fmt_one(xs[i]);
  }
  return s;
}

std::string Doubles(const std::vector<double>& xs) {
  return Join(xs, [](double x) { return FormatDouble(x); });
}

std::string_view SeedAttrName(SeedAttribute a) {
  switch (a) {
    case SeedAttribute::kSex: return "sex";
    case SeedAttribute::kMarital: return "marital";
    case SeedAttribute::kAgeBand: return "age_band";
    case SeedAttribute::kEducation: return "education";
    case SeedAttribute::kReligion: return "religion";
    case SeedAttribute::kWork: return "work";
  }
  return "?";
}

SeedAttribute ParseSeedAttr(std::string_view s) {
  for (auto a : DefaultSeedAttributes()) {
    if (SeedAttrName(a) == s) return a;
  }
  throw ParseError(fmt::format("unknown seed attribute '{}'", s));
}

struct Field {
  std::string key;
  std::function<void(RunConfig&, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
};

void AddDouble(std::vector<Field>& f, std::string key,
               std::function<double&(RunConfig&)> ref) {
  f.push_back({std::move(key),
               [ref](RunConfig& c, std::string_view v) { ref(c) = ToDouble(v); },
               [ref](const RunConfig& c) {
                 return FormatDouble(ref(const_cast<RunConfig&>(c)));
               }});
}

void AddInt(std::vector<Field>& f, std::string key, std::function<int&(RunConfig&)> ref) {
  f.push_back({std::move(key),
               [ref](RunConfig& c, std::string_view v) {
                 ref(c) = static_cast<int>(ToInt(v));
               },
               [ref](const RunConfig& c) {
                 return std::to_string(ref(const_cast<RunConfig&>(c)));
               }});
}

std::vector<Field> BuildFields() {
  std::vector<Field> f;
  f.push_back({"seed",
               [](RunConfig& c, std::string_view v) {
                 std::uint64_t x = 0;
                 auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
                 if (ec != std::errc() || p != v.data() + v.size()) {
                   throw ParseError("expected an unsigned 64-bit integer");
                 }
                 c.seed = x;
               },
               [](const RunConfig& c) {
                 return c.seed ? std::to_string(*c.seed) : std::string();
               }});
  f.push_back({"output",
               [](RunConfig& c, std::string_view v) { c.output_dir = std::string(v); },
               [](const RunConfig& c) { return c.output_dir; }});
  f.push_back({"population.preset",
               [](RunConfig& c, std::string_view v) {
                 c.population_preset = std::string(v);
                 c.population = PresetPopulation(c.population_preset);
                 c.ties = PresetTies(c.population_preset);
               },
               [](const RunConfig& c) { return c.population_preset; }});
  for (Site s : kAllSites) {
    const std::string p = fmt::format("population.{}.", ToString(s));
    const int i = Index(s);
    f.push_back({p + "size",
                 [i](RunConfig& c, std::string_view v) {
                   c.population.sites[i].size = ToSize(v);
                 },
                 [i](const RunConfig& c) {
                   return std::to_string(c.population.sites[i].size);
                 }});
    AddDouble(f, p + "female_share",
              [i](RunConfig& c) -> double& { return c.population.sites[i].female_share; });
    AddDouble(f, p + "age_mean",
              [i](RunConfig& c) -> double& { return c.population.sites[i].age_mean; });
    AddDouble(f, p + "age_sd",
              [i](RunConfig& c) -> double& { return c.population.sites[i].age_sd; });
    AddDouble(f, p + "returnee_share",
              [i](RunConfig& c) -> double& { return c.population.sites[i].returnee_share; });
    using Vec = std::vector<double> SiteConfig::*;
    for (auto [name, member] : {std::pair<const char*, Vec>{"religion", &SiteConfig::religion},
                                {"education", &SiteConfig::education},
                                {"work", &SiteConfig::work},
                                {"marital", &SiteConfig::marital}}) {
      f.push_back({p + name,
                   [i, member](RunConfig& c, std::string_view v) {
                     c.population.sites[i].*member = ToDoubles(v);
                   },
                   [i, member](const RunConfig& c) {
                     return Doubles(c.population.sites[i].*member);
                   }});
    }
  }
  f.push_back({"population.name_pool_size",
               [](RunConfig& c, std::string_view v) {
                 c.population.name_pool_size = ToSize(v);
               },
               [](const RunConfig& c) {
                 return std::to_string(c.population.name_pool_size);
               }});
  AddDouble(f, "population.phone_missing_rate",
            [](RunConfig& c) -> double& { return c.population.phone_missing_rate; });

  for (int a = 0; a < kNumSites; ++a) {
    for (int b = a; b < kNumSites; ++b) {
      f.push_back({fmt::format("ties.p.{}.{}", ToString(static_cast<Site>(a)),
                               ToString(static_cast<Site>(b))),
                   [a, b](RunConfig& c, std::string_view v) {
                     double x = ToDouble(v);
                     c.ties.site_pair_prob[a][b] = x;
                     c.ties.site_pair_prob[b][a] = x;
                   },
                   [a, b](const RunConfig& c) {
                     return FormatDouble(c.ties.site_pair_prob[a][b]);
                   }});
    }
  }
  AddDouble(f, "ties.sex_homophily_multiplier",
            [](RunConfig& c) -> double& { return c.ties.sex_homophily_multiplier; });
  AddDouble(f, "ties.acquaintance_share",
            [](RunConfig& c) -> double& { return c.ties.acquaintance_share; });
  f.push_back({"ties.kin.enabled",
               [](RunConfig& c, std::string_view v) { c.ties.kin.enabled = ToBool(v); },
               [](const RunConfig& c) {
                 return std::string(c.ties.kin.enabled ? "true" : "false");
               }});
  AddDouble(f, "ties.kin.mean_size",
            [](RunConfig& c) -> double& { return c.ties.kin.mean_size; });
  for (Site s : kAllSites) {
    const int i = Index(s);
    f.push_back({fmt::format("ties.kin.member_site.{}", ToString(s)),
                 [i](RunConfig& c, std::string_view v) {
                   auto xs = ToDoubles(v);
                   if (xs.size() != kNumSites) throw ParseError("expected 3 values");
                   for (int t = 0; t < kNumSites; ++t) c.ties.kin.member_site[i][t] = xs[t];
                 },
                 [i](const RunConfig& c) {
                   const auto& r = c.ties.kin.member_site[i];
                   return Doubles({r.begin(), r.end()});
                 }});
  }

  AddInt(f, "study.seeds", [](RunConfig& c) -> int& { return c.study.n_seeds; });
  AddInt(f, "study.max_seeds", [](RunConfig& c) -> int& { return c.study.max_seeds; });
  AddInt(f, "study.referral_quota_per_site",
         [](RunConfig& c) -> int& { return c.study.referral_quota_per_site; });
  AddInt(f, "study.target", [](RunConfig& c) -> int& { return c.study.target_interviews; });
  // Uniform participation first so that the per-cell keys can refine it.
  f.push_back({"study.participation",
               [](RunConfig& c, std::string_view v) {
                 c.study.SetParticipation(ToDouble(v));
               },
               [](const RunConfig&) { return std::string(); }});
  for (Site s : {Site::kOrigin, Site::kDestination}) {
    for (Sex x : {Sex::kFemale, Sex::kMale}) {
      const int i = Index(s), j = Index(x);
      AddDouble(f,
                fmt::format("study.participation.{}.{}", ToString(s),
                            x == Sex::kFemale ? "female" : "male"),
                [i, j](RunConfig& c) -> double& { return c.study.participation[i][j]; });
    }
  }
  for (Site s : {Site::kOrigin, Site::kDestination}) {
    const int i = Index(s);
    AddDouble(f, fmt::format("study.masking.{}", ToString(s)),
              [i](RunConfig& c) -> double& { return c.study.masking[i]; });
  }
  for (int k = 0; k < kNumAlterCategories; ++k) {
    AddInt(f, fmt::format("study.alter_quota.{}", ToString(static_cast<AlterCategory>(k))),
           [k](RunConfig& c) -> int& { return c.study.alter_quotas.cap[k]; });
  }
  AddInt(f, "study.alter_alter_sample_size",
         [](RunConfig& c) -> int& { return c.study.alter_alter_sample_size; });
  AddDouble(f, "study.referral_sex_weight",
            [](RunConfig& c) -> double& { return c.study.referral_sex_weight; });
  f.push_back({"study.seed_attributes",
               [](RunConfig& c, std::string_view v) {
                 c.study.seed_attributes.clear();
                 for (auto item : SplitList(v)) {
                   c.study.seed_attributes.push_back(ParseSeedAttr(item));
                 }
               },
               [](const RunConfig& c) {
                 return Join(c.study.seed_attributes,
                             [](SeedAttribute a) { return std::string(SeedAttrName(a)); });
               }});
  AddDouble(f, "study.noise.alias_typo_rate",
            [](RunConfig& c) -> double& { return c.study.noise.alias_typo_rate; });
  AddDouble(f, "study.noise.alter_phone_unknown_rate",
            [](RunConfig& c) -> double& { return c.study.noise.alter_phone_unknown_rate; });
  AddDouble(f, "study.noise.alter_attribute_noise",
            [](RunConfig& c) -> double& { return c.study.noise.alter_attribute_noise; });
  AddDouble(f, "study.noise.alter_tie_noise",
            [](RunConfig& c) -> double& { return c.study.noise.alter_tie_noise; });

  f.push_back({"link.require_attribute_consistency",
               [](RunConfig& c, std::string_view v) {
                 c.linkage.require_attribute_consistency = ToBool(v);
               },
               [](const RunConfig& c) {
                 return std::string(c.linkage.require_attribute_consistency ? "true"
                                                                            : "false");
               }});
  AddInt(f, "link.fuzzy_edit_distance",
         [](RunConfig& c) -> int& { return c.linkage.fuzzy_edit_distance; });

  AddInt(f, "analysis.ei_permutations",
         [](RunConfig& c) -> int& { return c.analysis.ei_permutations; });
  f.push_back({"analysis.ei_attributes",
               [](RunConfig& c, std::string_view v) {
                 c.analysis.ei_attributes.clear();
                 for (auto item : SplitList(v)) {
                   c.analysis.ei_attributes.push_back(ParseNodeAttr(item));
                 }
               },
               [](const RunConfig& c) {
                 return Join(c.analysis.ei_attributes,
                             [](NodeAttr a) { return std::string(ToString(a)); });
               }});
  f.push_back({"analysis.ergm_terms",
               [](RunConfig& c, std::string_view v) {
                 c.analysis.ergm_terms.clear();
                 for (auto item : SplitList(v)) {
                   c.analysis.ergm_terms.push_back(TermSpec::Parse(item));
                 }
               },
               [](const RunConfig& c) {
                 return Join(c.analysis.ergm_terms,
                             [](const TermSpec& t) { return t.Label(); });
               }});
  f.push_back({"analysis.ergm_layers",
               [](RunConfig& c, std::string_view v) {
                 c.analysis.ergm_layers.clear();
                 for (auto item : SplitList(v)) {
                   if (item != "link_tracing" && item != "participants" &&
                       item != "network_of_networks") {
                     throw ParseError(fmt::format("unknown layer '{}'", item));
                   }
                   c.analysis.ergm_layers.emplace_back(item);
                 }
               },
               [](const RunConfig& c) {
                 return Join(c.analysis.ergm_layers, [](const std::string& s) { return s; });
               }});
  AddInt(f, "analysis.ergm_chains", [](RunConfig& c) -> int& { return c.analysis.ergm_chains; });
  AddInt(f, "analysis.mple_max_iter",
         [](RunConfig& c) -> int& { return c.analysis.solver.max_iter; });
  AddDouble(f, "analysis.mple_tol",
            [](RunConfig& c) -> double& { return c.analysis.solver.tol; });
  f.push_back({"analysis.degree_source",
               [](RunConfig& c, std::string_view v) {
                 c.analysis.degree_source = ParseDegreeSource(v);
               },
               [](const RunConfig& c) {
                 return std::string(ToString(c.analysis.degree_source));
               }});
  AddDouble(f, "analysis.reference_ci",
            [](RunConfig& c) -> double& { return c.analysis.reference_ci; });
  return f;
}

const std::vector<Field>& Fields() {
  static const std::vector<Field> fields = BuildFields();
  return fields;
}

}  // namespace

std::uint64_t RunConfig::master_seed() const {
  if (!seed) throw ConfigError("seed: a master seed is mandatory");
  return *seed;
}

void RunConfig::Validate() const {
  master_seed();
  population.Validate();
  ties.Validate();
  study.Validate();
  if (linkage.fuzzy_edit_distance < 0 || linkage.fuzzy_edit_distance > 1) {
    throw ConfigError("link.fuzzy_edit_distance: must be 0 or 1");
  }
  if (analysis.ei_permutations < 1) {
    throw ConfigError("analysis.ei_permutations: must be >= 1");
  }
  if (analysis.ergm_chains < 0) throw ConfigError("analysis.ergm_chains: must be >= 0");
  if (analysis.solver.max_iter < 1) {
    throw ConfigError("analysis.mple_max_iter: must be >= 1");
  }
  if (!(analysis.solver.tol > 0.0)) throw ConfigError("analysis.mple_tol: must be > 0");
  if (!(analysis.reference_ci >= 0.0)) {
    throw ConfigError("analysis.reference_ci: must be >= 0");
  }
  if (output_dir.empty()) throw ConfigError("output: must not be empty");
}

std::string RunConfig::Snapshot() const {
  std::string out;
  for (const auto& field : Fields()) {
    if (field.key == "study.participation") continue;  // covered by the cells
    out += fmt::format("{} = {}\n", field.key, field.get(*this));
  }
  return out;
}

std::vector<std::string> ConfigKeys() {
  std::vector<std::string> keys;
  for (const auto& field : Fields()) keys.push_back(field.key);
  return keys;
}

RunConfig ParseRunConfig(std::string_view text, std::string_view source) {
  std::map<std::string, std::pair<std::string, int>> values;
  int line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = Trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(
          fmt::format("{}:{}: expected 'key = value', got '{}'", source, line_no, line));
    }
    std::string key(Trim(line.substr(0, eq)));
    std::string value(Trim(line.substr(eq + 1)));
    if (key.empty()) {
      throw ConfigError(fmt::format("{}:{}: missing key", source, line_no));
    }
    bool known = false;
    for (const auto& field : Fields()) known = known || field.key == key;
    if (!known) {
      throw ConfigError(fmt::format("{}: {}:{}: unknown key", key, source, line_no));
    }
    if (values.count(key)) {
      throw ConfigError(fmt::format("{}: {}:{}: repeated key (first on line {})", key,
                                    source, line_no, values[key].second));
    }
    values[key] = {value, line_no};
  }

  RunConfig c;
  c.population = PresetPopulation(c.population_preset);
  c.ties = PresetTies(c.population_preset);
  for (const auto& field : Fields()) {
    auto it = values.find(field.key);
    if (it == values.end()) continue;
    const auto& [value, line] = it->second;
    if (value.empty() && field.key != "seed") {
      throw ConfigError(fmt::format("{}: {}:{}: empty value", field.key, source, line));
    }
    if (value.empty()) continue;
    try {
      field.set(c, value);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError(fmt::format("{}: {}:{}: invalid value '{}' ({})", field.key,
                                    source, line, value, e.what()));
    }
  }
  return c;
}

RunConfig LoadRunConfig(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(fmt::format("cannot read config file {}", path.string()));
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseRunConfig(ss.str(), path.string());
}

}  // namespace tsf
