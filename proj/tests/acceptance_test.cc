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

// Acceptance suite: prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "tsf/config.h"
#include "tsf/ergm.h"
#include "tsf/fieldwork.h"
#include "tsf/identity.h"
#include "tsf/netbuild.h"
#include "tsf/netstats.h"
#include "tsf/pipeline.h"
#include "tsf/rdsest.h"
#include "tsf/rng.h"

namespace {

using namespace tsf;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
  void Require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

std::string Fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

double Seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

Digraph RandomDigraph(std::size_t n, double p, Rng& rng) {
  Digraph g(n);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v)
      if (u != v && rng.Bernoulli(p)) g.AddArc(u, v);
  return g;
}

Digraph OutStar(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> arcs;
  for (std::size_t v = 1; v < n; ++v) arcs.push_back({0, v});
  return Digraph::FromArcs(n, arcs);
}

// 1. Structural fixtures for out-stars, compared at printed precision.
Outcome Criterion1() {
  Outcome o;
  const auto start = Clock::now();
  struct Fixture {
    std::size_t n;
    const char *density, *in, *out, *degree, *between;
  };
  for (const Fixture& f : {Fixture{7, "0.143", "2.8", "100.0", "50.0", "0.0"},
                           Fixture{4, "0.250", "11.1", "100.0", "50.0", "0.0"}}) {
    auto g = OutStar(f.n);
    auto pct = [&](CentralityKind k) {
      return Fmt("%.1f", 100.0 * ComputeCentralization(g, k).value);
    };
    const std::string got = Fmt("%.3f", Density(g)) + " " + pct(CentralityKind::kIndegree) +
                            " " + pct(CentralityKind::kOutdegree) + " " +
                            pct(CentralityKind::kDegree) + " " +
                            pct(CentralityKind::kBetweenness);
    const std::string want = std::string(f.density) + " " + f.in + " " + f.out + " " +
                             f.degree + " " + f.between;
    o.Require(got == want, "n=" + std::to_string(f.n) + " got " + got + " want " + want);
    // Exact rationals underneath: density 1/n, indegree 1/(n-1)^2.
    const double n = static_cast<double>(f.n);
    o.Require(Density(g) == (n - 1) / (n * (n - 1)), "density not exact");
    o.Require(std::abs(ComputeCentralization(g, CentralityKind::kIndegree).value -
                       1.0 / ((n - 1) * (n - 1))) < 1e-15,
              "indegree not exact");
  }
  const double secs = Seconds(start);
  o.Require(secs < 1.0, "runtime " + Fmt("%.2fs", secs));
  if (o.pass) o.detail = "both out-star columns reproduced";
  return o;
}

// 2. Dyad census identities on 1,000 random layers.
Outcome Criterion2() {
  Outcome o;
  Rng rng(2002);
  int bad = 0;
  for (int rep = 0; rep < 1000; ++rep) {
    const std::size_t n = 2 + rng.Index(59);
    auto g = RandomDigraph(n, rng.Uniform() * 0.3, rng);
    auto d = CountDyads(g);
    std::size_t m = 0, a = 0, z = 0;
    for (std::size_t u = 0; u < n; ++u)
      for (std::size_t v = u + 1; v < n; ++v) {
        const int k = g.HasArc(u, v) + g.HasArc(v, u);
        (k == 2 ? m : k == 1 ? a : z) += 1;
      }
    bad += !(d.mutual == m && d.asymmetric == a && d.null == z &&
             g.num_arcs() == 2 * d.mutual + d.asymmetric &&
             d.mutual + d.asymmetric + d.null == n * (n - 1) / 2);
  }
  o.Require(bad == 0, std::to_string(bad) + " layers violate the census identities");
  if (o.pass) o.detail = "1000 layers, identities exact";
  return o;
}

std::vector<int> RandomCodes(std::size_t n, int k, Rng& rng) {
  std::vector<int> c(n);
  for (auto& x : c) x = static_cast<int>(rng.Index(static_cast<std::uint64_t>(k)));
  return c;
}

// 3. E-I index against a counting oracle, null calibration and planted
// country homophily.
Outcome Criterion3() {
  Outcome o;
  const auto start = Clock::now();
  Rng rng(3003);
  int mismatched = 0;
  for (int rep = 0; rep < 500; ++rep) {
    const std::size_t n = 3 + rng.Index(48);
    auto g = RandomDigraph(n, 0.05 + 0.2 * rng.Uniform(), rng);
    if (g.num_arcs() == 0) g.AddArc(0, 1);
    auto code = RandomCodes(n, 2 + static_cast<int>(rng.Index(3)), rng);
    long e = 0, i = 0;
    for (auto [u, v] : g.ArcList()) (code[u] == code[v] ? i : e) += 1;
    mismatched += EiGlobal(g, code) != static_cast<double>(e - i) / static_cast<double>(e + i);
  }
  o.Require(mismatched == 0, std::to_string(mismatched) + " E-I mismatches");

  int rejected = 0, null_reps = 0;
  for (int rep = 0; rep < 200; ++rep) {
    auto g = RandomDigraph(30, 0.08, rng);
    auto code = RandomCodes(30, 2, rng);
    if (g.num_arcs() == 0 || std::count(code.begin(), code.end(), code[0]) == 30) {
      --rep;
      continue;
    }
    ++null_reps;
    rejected += EiPermutationTest(g, code, 999, 40000 + rep).p <= 0.05;
  }
  o.Require(rejected <= 16, std::to_string(rejected) + "/200 null rejections");

  const std::size_t n = 120;
  auto site = RandomCodes(n, 2, rng);
  Digraph g(n);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v)
      if (u != v && rng.Bernoulli(site[u] == site[v] ? 0.04 : 0.01)) g.AddArc(u, v);
  auto planted = EiPermutationTest(g, site, 5000, 3);
  o.Require(planted.observed < 0 && planted.p < 0.01,
            "planted E-I " + Fmt("%.3f", planted.observed) + " p " + Fmt("%.4f", planted.p));
  const double secs = Seconds(start);
  o.Require(secs < 30.0, "runtime " + Fmt("%.1fs", secs));
  if (o.pass) {
    o.detail = "500 exact; null rejections " + std::to_string(rejected) +
               "/200; planted E-I " + Fmt("%.3f", planted.observed) + " p " +
               Fmt("%.4f", planted.p) + "; " + Fmt("%.1fs", secs);
  }
  return o;
}

// Census-based GWDSP on the direction-collapsed graph.
double GwdspOracle(const std::vector<std::vector<bool>>& adj, double decay) {
  const std::size_t n = adj.size();
  double total = 0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) {
      int shared = 0;
      for (std::size_t c = 0; c < n; ++c)
        shared += c != a && c != b && (adj[a][c] || adj[c][a]) && (adj[b][c] || adj[c][b]);
      if (shared) total += std::exp(decay) * (1 - std::pow(1 - std::exp(-decay), shared));
    }
  return total;
}

// Maximises the pseudo-likelihood of {edges, nodematch.sex, gwdsp} by
// gradient ascent with step adaptation, building change statistics by
// recomputing the global statistics with and without each arc.
std::vector<double> BruteForceMple(const Digraph& g, double decay) {
  const std::size_t n = g.num_nodes();
  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n));
  for (auto [u, v] : g.ArcList()) adj[u][v] = true;
  std::vector<std::array<double, 3>> x;
  std::vector<double> y;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v) {
      if (u == v) continue;
      auto with = adj, without = adj;
      with[u][v] = true;
      without[u][v] = false;
      x.push_back({1.0, g.sex(u) == g.sex(v) ? 1.0 : 0.0,
                   GwdspOracle(with, decay) - GwdspOracle(without, decay)});
      y.push_back(adj[u][v]);
    }
  auto loglik = [&](const std::array<double, 3>& t) {
    double ll = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double eta = t[0] * x[i][0] + t[1] * x[i][1] + t[2] * x[i][2];
      ll += y[i] * eta - (eta > 0 ? eta + std::log1p(std::exp(-eta)) : std::log1p(std::exp(eta)));
    }
    return ll;
  };
  std::array<double, 3> t{0, 0, 0};
  double step = 0.1, ll = loglik(t);
  for (int iter = 0; iter < 2000000; ++iter) {
    std::array<double, 3> grad{0, 0, 0};
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double eta = t[0] * x[i][0] + t[1] * x[i][1] + t[2] * x[i][2];
      const double r = y[i] - 1 / (1 + std::exp(-eta));
      for (int k = 0; k < 3; ++k) grad[static_cast<std::size_t>(k)] += r * x[i][static_cast<std::size_t>(k)];
    }
    if (std::hypot(grad[0], grad[1], grad[2]) < 1e-11) break;
    std::array<double, 3> next;
    for (std::size_t k = 0; k < 3; ++k) next[k] = t[k] + step * grad[k];
    const double ll_next = loglik(next);
    if (ll_next >= ll) {
      t = next;
      ll = ll_next;
      step *= 1.2;
    } else {
      step *= 0.5;
    }
  }
  return {t[0], t[1], t[2]};
}

// 4. MPLE identities, brute-force agreement, GWDSP fixtures and planted
// sex homophily.
Outcome Criterion4() {
  Outcome o;
  const auto start = Clock::now();
  Rng rng(4004);
  std::vector<TermSpec> edges = {TermSpec::Edges()};
  for (int rep = 0; rep < 20; ++rep) {
    auto g = RandomDigraph(10 + rng.Index(30), 0.05 + 0.4 * rng.Uniform(), rng);
    const double d = Density(g);
    if (d == 0 || d == 1) continue;
    const double theta = FitMple(g, edges).terms[0].theta;
    o.Require(std::abs(theta - std::log(d / (1 - d))) <= 1e-6, "edges-only != logit(density)");
  }

  std::vector<TermSpec> full = {TermSpec::Edges(), TermSpec::Uniform(NodeAttr::kSex),
                                TermSpec::Gwdsp(0.5)};
  int compared = 0;
  double worst = 0;
  for (int rep = 0; rep < 200 && compared < 10; ++rep) {
    auto g = RandomDigraph(5, 0.35, rng);
    for (std::size_t v = 0; v < 5; ++v) g.set_sex(v, rng.Bernoulli(0.5) ? Sex::kMale : Sex::kFemale);
    FitResult fit;
    try {
      fit = FitMple(g, full);
    } catch (const FitError&) {
      continue;  // separated or rank-deficient: no finite maximiser
    }
    auto oracle = BruteForceMple(g, 0.5);
    for (std::size_t k = 0; k < 3; ++k) worst = std::max(worst, std::abs(fit.terms[k].theta - oracle[k]));
    ++compared;
  }
  o.Require(compared >= 10, "only " + std::to_string(compared) + " identifiable 5-node layers");
  o.Require(worst <= 1e-4, "brute-force gap " + Fmt("%.2g", worst));

  std::vector<std::pair<std::size_t, std::size_t>> tri = {{0, 1}, {1, 2}, {2, 0}};
  for (double decay : {0.0, 0.5, 1.0}) {
    o.Require(GwdspStatistic(Digraph::FromArcs(3, tri), decay) == 3.0,
              "gwdsp(triangle) != 3 at decay " + Fmt("%.1f", decay));
  }
  std::vector<std::pair<std::size_t, std::size_t>> cyc = {{0, 1}, {1, 2}, {2, 3}, {3, 0}};
  o.Require(GwdspStatistic(Digraph::FromArcs(4, cyc), 0.0) == 2.0, "gwdsp(4-cycle) != 2");

  std::vector<TermSpec> homophily = {TermSpec::Edges(), TermSpec::Uniform(NodeAttr::kSex)};
  int significant = 0;
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = 60;
    Digraph g(n);
    for (std::size_t v = 0; v < n; ++v) g.set_sex(v, rng.Bernoulli(0.5) ? Sex::kMale : Sex::kFemale);
    for (std::size_t u = 0; u < n; ++u)
      for (std::size_t v = 0; v < n; ++v)
        if (u != v && rng.Bernoulli(g.sex(u) == g.sex(v) ? 0.06 : 0.03)) g.AddArc(u, v);
    auto fit = FitMple(g, homophily);
    significant += fit.terms[1].theta > 0 && fit.terms[1].p_value < 0.05;
  }
  o.Require(significant >= 90, "planted homophily significant in " + std::to_string(significant) + "/100");
  const double secs = Seconds(start);
  o.Require(secs < 120.0, "runtime " + Fmt("%.1fs", secs));
  if (o.pass) {
    o.detail = std::to_string(compared) + " brute-force fits within " + Fmt("%.1g", worst) +
               "; planted homophily " + std::to_string(significant) + "/100; " + Fmt("%.1fs", secs);
  }
  return o;
}

// 5. RDS-II estimator identities and bias reduction.
Outcome Criterion5() {
  Outcome o;
  Rng rng(5005);
  auto resp = [](Sex s, double degree) {
    SampledRespondent r;
    r.sex = s;
    r.age = 40;
    r.degree = degree;
    return r;
  };
  SampleFrame equal;
  for (int i = 0; i < 25; ++i) equal.respondents.push_back(resp(rng.Bernoulli(0.3) ? Sex::kFemale : Sex::kMale, 5));
  o.Require(Rds2Estimate(equal, EstimandKind::kFemaleShare) ==
                NaiveEstimate(equal, EstimandKind::kFemaleShare),
            "equal degrees: weighted != naive");
  SampleFrame hand;
  hand.respondents = {resp(Sex::kFemale, 1), resp(Sex::kMale, 2)};
  o.Require(Rds2Estimate(hand, EstimandKind::kFemaleShare) == 2.0 / 3.0, "hand case != 2/3");

  int better = 0;
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<Sex> sex;
    std::vector<double> degree;
    double truth = 0;
    for (int i = 0; i < 2000; ++i) {
      const bool female = rng.Bernoulli(0.5);
      sex.push_back(female ? Sex::kFemale : Sex::kMale);
      degree.push_back(1.0 + static_cast<double>(rng.Poisson(female ? 12.0 : 4.0)));
      truth += female;
    }
    truth /= 2000.0;
    SampleFrame f;
    for (int i = 0; i < 150; ++i) {
      const std::size_t k = rng.Categorical(degree);  // degree-proportional inclusion
      f.respondents.push_back(resp(sex[k], degree[k]));
    }
    better += std::abs(Rds2Estimate(f, EstimandKind::kFemaleShare) - truth) <
              std::abs(NaiveEstimate(f, EstimandKind::kFemaleShare) - truth);
  }
  o.Require(better >= 160, "weighted better in " + std::to_string(better) + "/200");
  if (o.pass) o.detail = "weighted beats naive in " + std::to_string(better) + "/200";
  return o;
}

// 6. Protocol calibration on the full-size corridor preset.
Outcome Criterion6() {
  Outcome o;
  const auto start = Clock::now();
  RunConfig cfg = ParseRunConfig("", "defaults");
  double nodes = 0, arcs = 0;
  int deep = 0;
  const int reps = 100;
  for (int r = 0; r < reps; ++r) {
    cfg.seed = 1000 + static_cast<std::uint64_t>(r);
    auto truth = GenerateTruth(cfg);
    auto log = RunStudy(truth, cfg.study, DeriveSeed(*cfg.seed, "sample"));
    auto linked = LinkRecords(log.observations, cfg.linkage);
    auto lt = LinkTracingLayer(BuildLinkTracingNetwork(log, linked.partition));
    nodes += static_cast<double>(lt.num_nodes());
    arcs += static_cast<double>(lt.num_arcs());
    deep += log.max_wave() >= 10;
  }
  const double mean_nodes = nodes / reps;
  const double ratio = arcs / nodes;
  const double secs = Seconds(start);
  o.Require(std::abs(mean_nodes - 1068.0) <= 0.15 * 1068.0, "mean nodes " + Fmt("%.1f", mean_nodes));
  o.Require(std::abs(ratio - 1187.0 / 1068.0) <= 0.1, "arc/node ratio " + Fmt("%.3f", ratio));
  o.Require(deep * 2 >= reps, "wave depth >= 10 in " + std::to_string(deep) + "/100");
  o.Require(secs < 600.0, "runtime " + Fmt("%.0fs", secs));
  o.detail = (o.pass ? "" : o.detail + "; ") + "mean nodes " + Fmt("%.1f", mean_nodes) +
             ", ratio " + Fmt("%.3f", ratio) + ", depth>=10 in " + std::to_string(deep) +
             "/100, " + Fmt("%.0fs", secs);
  return o;
}

RunConfig SmallStudy(std::uint64_t seed) {
  RunConfig cfg = ParseRunConfig("population.preset = small\n", "acceptance");
  cfg.population.site(Site::kOrigin).size = 400;
  cfg.population.site(Site::kDestination).size = 300;
  cfg.population.site(Site::kOther).size = 50;
  cfg.ties = TieConfig::Uniform(0.02, 0.004);
  cfg.study.target_interviews = 80;
  cfg.seed = seed;
  return cfg;
}

// 7. Identity round trip: exact linkage without noise, and no silent
// merges under a collision-forcing name pool.
Outcome Criterion7() {
  Outcome o;
  int unique_reps = 0, imperfect = 0;
  for (int r = 0; r < 100; ++r) {
    RunConfig cfg = SmallStudy(7000 + static_cast<std::uint64_t>(r));
    cfg.population.phone_missing_rate = 0.0;
    cfg.study.noise = {};
    auto truth = GenerateTruth(cfg);
    auto log = RunStudy(truth, cfg.study, DeriveSeed(*cfg.seed, "sample"));
    std::map<std::string, std::set<PersonId>> by_alias;
    for (const auto& ob : log.observations) by_alias[ob.alias.Render()].insert(log.truth.at(ob.id));
    bool unique = true;
    for (const auto& [alias, people] : by_alias) unique &= people.size() == 1;
    if (!unique) continue;
    ++unique_reps;
    auto linked = LinkRecords(log.observations, cfg.linkage);
    auto m = AuditConflicts(linked.partition, linked.conflicts, &log.truth);
    imperfect += !(m.precision == 1.0 && m.recall == 1.0);
  }
  o.Require(unique_reps >= 50, "only " + std::to_string(unique_reps) + " replicates with unique triples");
  o.Require(imperfect == 0, std::to_string(imperfect) + " zero-noise replicates below 1.0");

  std::size_t collisions = 0, split = 0, reported = 0, silent = 0;
  for (int r = 0; r < 100; ++r) {
    RunConfig cfg = SmallStudy(77 + static_cast<std::uint64_t>(r));
    cfg.population.name_pool_size = 30;
    auto truth = GenerateTruth(cfg);
    auto log = RunStudy(truth, cfg.study, DeriveSeed(*cfg.seed, "sample"));
    auto linked = LinkRecords(log.observations, cfg.linkage);
    std::set<ObsId> flagged;
    for (const auto& c : linked.conflicts.conflicts) flagged.insert(c.observations.begin(), c.observations.end());
    std::map<std::string, std::map<PersonId, std::vector<ObsId>>> by_alias;
    for (const auto& ob : log.observations) by_alias[ob.alias.Render()][log.truth.at(ob.id)].push_back(ob.id);
    // Each pair of distinct people sharing an alias is one collision.
    for (const auto& [alias, people] : by_alias) {
      for (auto a = people.begin(); a != people.end(); ++a) {
        for (auto b = std::next(a); b != people.end(); ++b) {
          ++collisions;
          bool merged = false, flag = false;
          for (ObsId x : a->second)
            for (ObsId y : b->second) {
              if (linked.partition.EntityOf(x) != linked.partition.EntityOf(y)) continue;
              merged = true;
              flag |= flagged.count(x) || flagged.count(y);
            }
          if (!merged) ++split;
          else if (flag) ++reported;
          else ++silent;
        }
      }
    }
  }
  o.Require(collisions > 0, "name pool forced no collisions");
  o.Require(silent == 0, std::to_string(silent) + " silent merge(s) of people sharing name and phone digits");
  o.detail = (o.pass ? "" : o.detail + "; ") + std::to_string(unique_reps) +
             " exact zero-noise runs; collisions " + std::to_string(collisions) + ": split " +
             std::to_string(split) + ", reported " + std::to_string(reported) + ", silent " +
             std::to_string(silent);
  return o;
}

std::string ReadAll(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// 8. Two end-to-end runs with one config and seed give identical manifests.
Outcome Criterion8() {
  Outcome o;
  const fs::path root = fs::temp_directory_path() / "tsf_acceptance_determinism";
  fs::remove_all(root);
  fs::create_directories(root);
  std::ofstream(root / "run.conf") << "seed = 20260101\n";
  std::array<std::string, 2> manifests;
  const char* bin = std::getenv("TSFNET_BIN");
  for (int i = 0; i < 2; ++i) {
    const fs::path out = root / ("out" + std::to_string(i));
    if (bin) {
      const std::string cmd = std::string(bin) + " run --config " + (root / "run.conf").string() +
                              " --out " + out.string() + " >/dev/null 2>&1";
      const int status = std::system(cmd.c_str());
      o.Require(WIFEXITED(status) && WEXITSTATUS(status) == 0, "run exited abnormally");
    } else {
      RunConfig cfg = LoadRunConfig(root / "run.conf");
      cfg.output_dir = out.string();
      RunPipeline(cfg);
    }
    manifests[static_cast<std::size_t>(i)] = ReadAll(out / "manifest.json");
  }
  o.Require(!manifests[0].empty(), "no manifest written");
  o.Require(manifests[0] == manifests[1], "manifests differ");
  if (o.pass) {
    o.detail = "manifests identical (" + std::to_string(manifests[0].size()) + " bytes, " +
               (bin ? "via CLI" : "in process") + ")";
  }
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"structural fixtures", Criterion1}, {"dyad census", Criterion2},
      {"E-I machinery", Criterion3},       {"ERGM MPLE", Criterion4},
      {"RDS estimator", Criterion5},       {"protocol calibration", Criterion6},
      {"identity round trip", Criterion7}, {"end-to-end determinism", Criterion8}};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failed += !o.pass;
    std::printf("criterion %zu (%s): %s - %s\n", i + 1, criteria[i].first,
                o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
