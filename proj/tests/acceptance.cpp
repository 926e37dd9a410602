// Copyright 2026 The mdlearn Authors
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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Optional argument: a comma-separated list of criterion numbers.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>

#include "mdl/derandomizer.hpp"
#include "mdl/discrepancy.hpp"
#include "mdl/generators.hpp"
#include "mdl/harness.hpp"
#include "mdl/hashing.hpp"
#include "mdl/metrics.hpp"

using namespace mdl;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double time_limit;  // seconds
  std::function<Outcome()> run;
};

std::string Fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

constexpr double kEps = 0.15;
constexpr double kDelta = 0.15;

DerandConfig CalibratedConfig(RoundingMode rounding) {
  DerandConfig c;
  c.eps = kEps;
  c.delta = kDelta;
  c.mode = DerandMode::kCalibrated;
  c.m_override = 5000;
  c.threshold_scale = 1.0;
  c.rounding = rounding;
  return c;
}

GenSpec TableSpec() {
  GenSpec g;
  g.kind = GenKind::kRandomLabelConsistent;
  g.domain_size = 40;
  g.k = 6;
  g.hypothesis_count = 16;
  return g;
}

// Binomial slack used by the end-to-end criteria.
constexpr double kEndToEndSlack = 0.06;

CampaignSpec EndToEndCampaign(std::size_t parallelism) {
  CampaignSpec spec;
  spec.gen = TableSpec();
  spec.derand = CalibratedConfig(RoundingMode::kExplicitPerPoint);
  spec.master_seed = 2026;
  spec.trials = 200;
  spec.parallelism = parallelism;
  const double need = (1 - kDelta) - kEndToEndSlack;
  spec.predicates = {{Predicate::kOptPlusEps, need}, {Predicate::kRandomPlusHalfEps, need}};
  return spec;
}

CampaignSpec EquivalenceCampaign(RoundingMode rounding, std::size_t parallelism) {
  CampaignSpec spec = EndToEndCampaign(parallelism);
  GenSpec g = TableSpec();
  g.seed = 77;
  spec.fixed_instance = Generate(g);
  spec.derand.rounding = rounding;
  spec.master_seed = 4242;
  return spec;
}

// Cached so that the determinism criterion re-runs the same campaigns.
std::string g_explicit_csv;
std::string g_hash_csv;

double MeanDerandError(const CampaignResult& r) {
  double s = 0;
  for (const auto& t : r.reports) s += t.derandomized_error;
  return s / static_cast<double>(r.reports.size());
}

Outcome CheckGap() {
  auto g = GenGapExample(8);
  const double rand_err = RandomizedWorstCaseError(g.mixture, g.family);
  const double support = SupportWorstCase(g.mixture, g.family);
  bool tail_ok = true;
  for (std::size_t i = 0; i < 8; ++i) {
    double p = 0;
    for (std::size_t j = 0; j < g.mixture.support_size(); ++j) {
      if (ErrorOnDistribution(g.mixture.support()[j].labels, g.family.members[i]) == 1.0) {
        p += g.mixture.weights()[j];
      }
    }
    tail_ok = tail_ok && p == 0.125;
  }
  return {std::abs(rand_err - 0.125) <= 1e-12 && support == 1.0 && tail_ok,
          Fmt("randomized %.15g, support %.15g", rand_err, support) +
              (tail_ok ? ", single-draw exceedance 1/8 on all members" : ", exceedance mismatch")};
}

Outcome RowIdentity() {
  Rng rng(101);
  const std::size_t n = 12;
  int good = 0;
  for (int t = 0; t < 100; ++t) {
    std::vector<std::vector<std::uint8_t>> rows(n, std::vector<std::uint8_t>(n));
    for (auto& r : rows) {
      do {
        for (auto& v : r) v = rng.Bernoulli(0.5);
      } while (std::count(r.begin(), r.end(), 1) == 0);
    }
    BinaryMatrix a(rows);
    auto rf = MatrixToFamily(a);
    std::vector<Label> f(n);
    for (auto& v : f) v = rng.Bernoulli(0.5) ? 1 : -1;
    bool ok = true;
    for (std::size_t i = 0; i < n; ++i) {
      const std::int64_t s = a.RowProduct(i, f);
      const std::size_t hi_member = s >= 0 ? 2 * i + 1 : 2 * i;
      const Rational hi = ExactError(f, rf.exact.members[hi_member]);
      const Rational lo = ExactError(f, rf.exact.members[hi_member ^ 1]);
      ok = ok && hi == Rational(1, 2) + Rational(std::abs(s), 2 * a.row_ones(i)) &&
           hi + lo == Rational(1);
    }
    good += ok;
  }
  return {good == 100, Fmt("%.0f/100 pairs exact", good)};
}

Outcome ZeroHalf() {
  Rng rng(202);
  int good = 0;
  for (int t = 0; t < 20; ++t) {
    auto p = PlantedZeroMatrix(12, 0.4, rng);
    auto rf = MatrixToFamily(p.matrix);
    const bool ok = ColoringError(p.coloring, rf) == Rational(1, 2) &&
                    BruteforceMinDiscrepancy(p.matrix).inf_norm == 0 &&
                    MinDeterministicError(rf) == Rational(1, 2) &&
                    MinLabelingError(rf.exact) == Rational(1, 2);
    good += ok;
  }
  return {good == 20, Fmt("%.0f/20 planted instances", good)};
}

Outcome Distinguisher() {
  Rng rng(303);
  const double eps = 1.0 / (2.0 * std::sqrt(12.0));
  int correct = 0;
  for (int t = 0; t < 20; ++t) {
    auto p = PlantedZeroMatrix(12, 0.4, rng);
    auto best = MinErrorLabeling(MatrixToFamily(p.matrix));
    correct += Distinguish(p.matrix, best, eps) == Verdict::kZeroDiscrepancyLikely;
  }
  for (int t = 0; t < 20; ++t) {
    auto a = HighDiscrepancyMatrix(12, 6, 2, rng);
    if (BruteforceMinDiscrepancy(a).inf_norm < 2) continue;
    auto best = MinErrorLabeling(MatrixToFamily(a));
    correct += Distinguish(a, best, eps) == Verdict::kHighDiscrepancy;
  }
  return {correct == 40, Fmt("%.0f/40 verdicts correct at eps = %.6f", correct, eps)};
}

Outcome HedgeContract() {
  int good = 0;
  for (std::uint64_t t = 0; t < 50; ++t) {
    GenSpec g = TableSpec();
    g.seed = DeriveSeed(505, t);
    auto inst = Generate(g);
    SampleOracle oracle(inst.family, SampleOracle::Mode::kExact);
    auto cfg = HedgeConfig::Defaults(inst.family.k(), kEps);
    cfg.seed = DeriveSeed(g.seed, 1);
    auto f = HedgeLearn(oracle, inst.hypotheses, kEps, kDelta, cfg);
    good += RandomizedWorstCaseError(f, inst.family) <=
            OptBruteforce(inst.hypotheses, inst.family).value + kEps;
  }
  return {good >= 48, Fmt("%.0f/50 within OPT + eps (need 48)", good)};
}

Outcome PredicateLine(const CampaignResult& r) {
  std::ostringstream os;
  bool ok = r.summary.errors == 0;
  for (const auto& p : r.summary.predicates) {
    os << ToString(p.predicate) << ' ' << p.successes << '/' << r.summary.trials << " ["
       << Fmt("%.3f, %.3f", p.ci_low, p.ci_high) << "] need " << Fmt("%.2f", p.required)
       << "; ";
    ok = ok && p.met;
  }
  if (r.summary.errors) os << r.summary.errors << " trial errors";
  return {ok, os.str()};
}

Outcome EndToEnd() {
  const auto spec = EndToEndCampaign(1);
  auto res = RunCampaign(spec);
  g_explicit_csv = CampaignCsv(res);
  return PredicateLine(res);
}

DerandConfig TheoryConfig() {
  DerandConfig c;
  c.eps = kEps;
  c.delta = kDelta;
  c.mode = DerandMode::kTheory;
  return c;
}

Outcome HeavyCoverageProbe() {
  auto probe = GenHeavyPointProbe(DefaultHeavyProbe(40, 6, kEps, kDelta, 707));
  std::size_t heavy = 0;
  for (bool h : probe.heavy) heavy += h;
  if (heavy != 3) return {false, Fmt("probe has %.0f heavy points, expected 3", heavy)};
  SampleOracle oracle(probe.family, SampleOracle::Mode::kExact);
  const auto params = ResolveParams(TheoryConfig(), 6);
  const int runs = 500;
  int good = 0;
  for (int r = 0; r < runs; ++r) {
    Rng rng(DeriveSeed(708, static_cast<std::uint64_t>(r)));
    auto table = BuildBiasTable(oracle, params, rng);
    good += HeavyCoverage(table, probe.family, kEps, kDelta, HeavyVariant::kStandard, 360);
  }
  const double need = 1 - kDelta / 4 - 0.05;
  return {good >= need * runs,
          Fmt("%.0f/500 runs cover all heavy points (need %.4f, m = %.0f)", good, need,
              static_cast<double>(params.samples_per_member))};
}

Outcome LightDeviationProbe() {
  GenSpec g = TableSpec();
  g.bias = {0.0, 0.0, 0.0, 0.05};
  Instance inst;
  for (std::uint64_t s = 0;; ++s) {
    g.seed = DeriveSeed(808, s);
    inst = Generate(g);
    auto heavy = HeavyPoints(inst.family, kEps, kDelta);
    if (std::none_of(heavy.begin(), heavy.end(), [](bool h) { return h; })) break;
  }
  for (double e : inst.family.members[0].label_one_prob) {
    if (e < 0.45 || e > 0.55) return {false, "conditional outside [0.45, 0.55]"};
  }
  const int runs = 500;
  int good = 0;
  double worst = 0;
  for (int r = 0; r < runs; ++r) {
    auto rep = RunTrial(inst, {}, TheoryConfig(), DeriveSeed(809, static_cast<std::uint64_t>(r)), r);
    if (!rep.ok()) return {false, "trial error: " + rep.error};
    good += rep.outside_deviation <= kEps / 2;
    worst = std::max(worst, rep.outside_deviation);
  }
  const double need = 1 - kDelta / 4 - 0.05;
  return {good >= need * runs,
          Fmt("%.0f/500 runs within eps/2 (need %.4f), max deviation %.4f", good, need, worst)};
}

Outcome HashExactness() {
  int violations = 0;
  for (std::uint64_t x1 = 0; x1 < 5; ++x1) {
    for (std::uint64_t x2 = 0; x2 < 5; ++x2) {
      if (x1 == x2) continue;
      std::set<std::pair<std::uint64_t, std::uint64_t>> img;
      for (std::uint64_t a = 0; a < 25; ++a) {
        PolyHash q(5, {a % 5, a / 5});
        img.insert({q(x1), q(x2)});
      }
      violations += img.size() != 25;
    }
  }
  for (std::uint64_t x1 = 0; x1 < 7; ++x1) {
    for (std::uint64_t x2 = x1 + 1; x2 < 7; ++x2) {
      for (std::uint64_t x3 = x2 + 1; x3 < 7; ++x3) {
        std::set<std::array<std::uint64_t, 3>> img;
        for (std::uint64_t a = 0; a < 343; ++a) {
          auto q = PolyHash::AnyDegreeForTesting(7, {a % 7, a / 7 % 7, a / 49});
          img.insert({q(x1), q(x2), q(x3)});
        }
        violations += img.size() != 343;
      }
    }
  }

  // Marginal law on a one-point domain with mixtures of three or two hypotheses.
  HypothesisClass h;
  h.hypotheses = {{{1}}, {{-1}}};
  const std::array<std::pair<double, std::vector<std::size_t>>, 5> cases{{
      {0.0, {1}}, {1.0 / 3, {0, 1, 1}}, {0.5, {0, 1}}, {2.0 / 3, {0, 0, 1}}, {1.0, {0}}}};
  Rng rng(909);
  const int draws = 100000;
  int law_fail = 0;
  std::ostringstream os;
  for (const auto& [m, idx] : cases) {
    auto f = RandomizedClassifier::Uniform(h, idx);
    int plus = 0;
    for (int d = 0; d < draws; ++d) {
      plus += CompactClassifier(1, SampleHash(7, 2, rng), {}, f)(0) == 1;
    }
    const double expect = std::floor(m * 7 + 1e-9) / 7;
    const double sigma = std::sqrt(expect * (1 - expect) / draws);
    const double obs = plus / double(draws);
    law_fail += std::abs(obs - expect) > 3 * sigma;
    os << Fmt("%.3f->%.4f ", m, obs);
  }
  return {violations == 0 && law_fail == 0,
          Fmt("%.0f independence violations, %.0f marginal-law misses; ", violations, law_fail) +
              os.str()};
}

Outcome TailBound() {
  TailCheckConfig cfg;  // n = 64, r = 4, 1e5 draws, t in {0.5, 1, 2} sqrt(n)
  auto rep = EmpiricalTailBoundCheck(cfg);
  std::ostringstream os;
  for (const auto& p : rep.points) {
    os << Fmt("t=%.0f obs %.5f bound %.5f; ", p.deviation, p.observed, p.bound);
  }
  return {rep.ok(), os.str()};
}

Outcome RoundingEquivalence() {
  auto ex = RunCampaign(EquivalenceCampaign(RoundingMode::kExplicitPerPoint, 1));
  auto hs = RunCampaign(EquivalenceCampaign(RoundingMode::kHashCompact, 1));
  g_hash_csv = CampaignCsv(hs);
  const double a = MeanDerandError(ex);
  const double b = MeanDerandError(hs);
  auto pe = PredicateLine(ex);
  auto ph = PredicateLine(hs);
  return {std::abs(a - b) <= 0.02 && pe.pass && ph.pass,
          Fmt("mean er_P explicit %.4f hash %.4f (|diff| %.4f); ", a, b, std::abs(a - b)) +
              "explicit: " + pe.detail + "hash: " + ph.detail};
}

Outcome Determinism() {
  if (g_explicit_csv.empty()) g_explicit_csv = CampaignCsv(RunCampaign(EndToEndCampaign(1)));
  if (g_hash_csv.empty()) {
    g_hash_csv = CampaignCsv(RunCampaign(EquivalenceCampaign(RoundingMode::kHashCompact, 1)));
  }
  const bool explicit8 = CampaignCsv(RunCampaign(EndToEndCampaign(8))) == g_explicit_csv;
  const bool explicit1 = CampaignCsv(RunCampaign(EndToEndCampaign(1))) == g_explicit_csv;
  const bool hash8 =
      CampaignCsv(RunCampaign(EquivalenceCampaign(RoundingMode::kHashCompact, 8))) == g_hash_csv;
  return {explicit8 && explicit1 && hash8,
          std::string("explicit rerun p=1 ") + (explicit1 ? "same" : "DIFF") + ", p=8 " +
              (explicit8 ? "same" : "DIFF") + "; hash p=8 " + (hash8 ? "same" : "DIFF")};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  if (argc > 1) {
    std::stringstream ss(argv[1]);
    for (std::string tok; std::getline(ss, tok, ',');) only.insert(std::stoi(tok));
  }
  const std::vector<Criterion> criteria{
      {1, "gap example", 1, CheckGap},
      {2, "row identity", 1, RowIdentity},
      {3, "zero discrepancy <-> half error", 30, ZeroHalf},
      {4, "distinguisher", 60, Distinguisher},
      {5, "hedge contract", 60, HedgeContract},
      {6, "end-to-end derandomization", 300, EndToEnd},
      {7, "heavy point coverage", 120, HeavyCoverageProbe},
      {8, "light point deviation", 120, LightDeviationProbe},
      {9, "hash exactness", 30, HashExactness},
      {10, "limited-independence tail", 60, TailBound},
      {11, "rounding path equivalence", 300, RoundingEquivalence},
      {12, "campaign determinism", 1e9, Determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.time_limit;
    const bool pass = out.pass && in_time;
    failures += !pass;
    std::printf("[%s] %2d %s: %s (%.2fs%s)\n", pass ? "PASS" : "FAIL", c.id, c.name,
                out.detail.c_str(), secs, in_time ? "" : ", over time limit");
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
