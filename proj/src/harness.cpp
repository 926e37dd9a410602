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

#include "mdl/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <thread>

#include "mdl/io.hpp"
#include "mdl/metrics.hpp"
#include "mdl/rng.hpp"

namespace mdl {
namespace {

constexpr std::uint64_t kInstanceStream = 30;
constexpr std::uint64_t kLearnerStream = 10;
constexpr std::uint64_t kDerandStream = 20;

RandomizedLearner MakeLearner(const LearnerSettings& s, std::uint64_t seed) {
  return [s, seed](const SampleOracle& oracle, const HypothesisClass& h, double eps,
                   double delta) {
    auto cfg = HedgeConfig::Defaults(oracle.k(), eps);
    if (s.rounds) cfg.rounds = *s.rounds;
    if (s.learning_rate) cfg.learning_rate = *s.learning_rate;
    cfg.erm_sample_size = s.erm_sample_size;
    cfg.seed = seed;
    return HedgeLearn(oracle, h, eps, delta, cfg);
  };
}

std::string Num(double v) {
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

}  // namespace

TrialReport RunTrial(const Instance& instance, const LearnerSettings& learner,
                     const DerandConfig& derand, std::uint64_t seed, std::size_t trial_id,
                     std::optional<DerandResult>* result) {
  const auto start = std::chrono::steady_clock::now();
  TrialReport r;
  r.trial_id = trial_id;
  r.seed = seed;
  r.eps = derand.eps;
  try {
    const auto& fam = instance.family;
    SampleOracle oracle(fam, learner.oracle_mode);
    DerandConfig cfg = derand;
    cfg.seed = DeriveSeed(seed, kDerandStream);
    auto res = Derandomize(oracle, instance.hypotheses,
                           MakeLearner(learner, DeriveSeed(seed, kLearnerStream)), cfg);
    const auto labels = res.classifier.Labels();
    r.opt = OptBruteforce(instance.hypotheses, fam).value;
    r.randomized_error = RandomizedWorstCaseError(res.mixture, fam);
    r.derandomized_error = WorstCaseError(labels, fam).worst_case;
    r.table_size = res.table.size();
    const auto variant = res.classifier.is_compact() ? HeavyVariant::kHash
                                                     : HeavyVariant::kStandard;
    r.heavy_coverage = IsLabelConsistent(fam) &&
                       HeavyCoverage(res.table, fam, cfg.eps, cfg.delta, variant, cfg.c_prime);
    r.outside_deviation = MaxOutsideDeviation(labels, res.mixture, fam, res.table);
    if (result) result->emplace(std::move(res));
  } catch (const std::exception& e) {
    r.error = e.what();
    if (r.error.empty()) r.error = "unknown error";
  }
  r.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::string ToString(Predicate p) {
  switch (p) {
    case Predicate::kOptPlusEps: return "opt_plus_eps";
    case Predicate::kRandomPlusHalfEps: return "random_plus_half_eps";
    case Predicate::kHeavyCoverage: return "heavy_coverage";
    case Predicate::kOutsideDeviation: return "outside_deviation";
  }
  return "unknown";
}

Predicate ParsePredicate(const std::string& text) {
  for (auto p : {Predicate::kOptPlusEps, Predicate::kRandomPlusHalfEps,
                 Predicate::kHeavyCoverage, Predicate::kOutsideDeviation}) {
    if (ToString(p) == text) return p;
  }
  throw ContractError("unknown predicate '" + text + "'");
}

bool Holds(Predicate p, const TrialReport& r) {
  if (!r.ok()) return false;
  switch (p) {
    case Predicate::kOptPlusEps: return r.derandomized_error <= r.opt + r.eps;
    case Predicate::kRandomPlusHalfEps:
      return r.derandomized_error <= r.randomized_error + r.eps / 2;
    case Predicate::kHeavyCoverage: return r.heavy_coverage;
    case Predicate::kOutsideDeviation: return r.outside_deviation <= r.eps / 2;
  }
  return false;
}

bool CampaignSummary::all_met() const {
  for (const auto& p : predicates) {
    if (!p.met) return false;
  }
  return true;
}

WilsonInterval Wilson95(std::size_t successes, std::size_t trials) {
  if (trials == 0) return {0.0, 1.0};
  const double z = 1.959963984540054;
  const double n = static_cast<double>(trials);
  const double phat = static_cast<double>(successes) / n;
  const double denom = 1 + z * z / n;
  const double centre = (phat + z * z / (2 * n)) / denom;
  const double half = z * std::sqrt(phat * (1 - phat) / n + z * z / (4 * n * n)) / denom;
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

CampaignResult RunCampaign(const CampaignSpec& spec) {
  if (spec.trials == 0) throw ContractError("campaign needs at least one trial");
  CampaignResult out;
  out.reports.resize(spec.trials);

  auto run_one = [&](std::size_t t) {
    const std::uint64_t seed = DeriveSeed(spec.master_seed, t);
    if (spec.fixed_instance) {
      out.reports[t] = RunTrial(*spec.fixed_instance, spec.learner, spec.derand, seed, t);
      return;
    }
    try {
      GenSpec g = spec.gen;
      g.seed = DeriveSeed(seed, kInstanceStream);
      out.reports[t] = RunTrial(Generate(g), spec.learner, spec.derand, seed, t);
    } catch (const std::exception& e) {
      TrialReport r;
      r.trial_id = t;
      r.seed = seed;
      r.eps = spec.derand.eps;
      r.error = e.what();
      out.reports[t] = r;
    }
  };

  const std::size_t workers = std::max<std::size_t>(1, std::min(spec.parallelism, spec.trials));
  if (workers == 1) {
    for (std::size_t t = 0; t < spec.trials; ++t) run_one(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t t; (t = next.fetch_add(1)) < spec.trials;) run_one(t);
      });
    }
    for (auto& th : pool) th.join();
  }

  auto& s = out.summary;
  s.trials = spec.trials;
  for (const auto& r : out.reports) s.errors += r.ok() ? 0 : 1;
  for (const auto& req : spec.predicates) {
    PredicateSummary ps;
    ps.predicate = req.predicate;
    ps.required = req.min_fraction;
    for (const auto& r : out.reports) ps.successes += Holds(req.predicate, r) ? 1 : 0;
    ps.fraction = static_cast<double>(ps.successes) / static_cast<double>(s.trials);
    const auto ci = Wilson95(ps.successes, s.trials);
    ps.ci_low = ci.low;
    ps.ci_high = ci.high;
    ps.met = ps.fraction >= req.min_fraction;
    s.predicates.push_back(ps);
  }
  return out;
}

std::string TrialCsvHeader(bool with_timing) {
  std::string h =
      "trial_id,seed,opt,randomized_error,derandomized_error,table_size,heavy_coverage,"
      "outside_deviation,error";
  if (with_timing) h += ",wall_seconds";
  return h;
}

std::string TrialCsvRow(const TrialReport& r, bool with_timing) {
  std::ostringstream os;
  std::string err = r.error;
  for (auto& c : err) {
    if (c == ',' || c == '\n' || c == '"') c = ' ';
  }
  os << r.trial_id << ',' << r.seed << ',' << Num(r.opt) << ',' << Num(r.randomized_error)
     << ',' << Num(r.derandomized_error) << ',' << r.table_size << ','
     << (r.heavy_coverage ? 1 : 0) << ',' << Num(r.outside_deviation) << ',' << err;
  if (with_timing) os << ',' << Num(r.wall_seconds);
  return os.str();
}

std::string CampaignCsv(const CampaignResult& result, bool with_timing) {
  std::string out = TrialCsvHeader(with_timing) + "\n";
  for (const auto& r : result.reports) out += TrialCsvRow(r, with_timing) + "\n";
  return out;
}

std::string CampaignSummaryJson(const CampaignSpec& spec, const CampaignSummary& summary) {
  Json j;
  j["trials"] = summary.trials;
  j["errors"] = summary.errors;
  j["partial"] = summary.partial();
  j["all_met"] = summary.all_met();
  Json preds = Json::array();
  for (const auto& p : summary.predicates) {
    preds.push_back({{"predicate", ToString(p.predicate)},
                     {"successes", p.successes},
                     {"fraction", p.fraction},
                     {"ci95", {p.ci_low, p.ci_high}},
                     {"required", p.required},
                     {"met", p.met}});
  }
  j["predicates"] = std::move(preds);
  Json config;
  config["master_seed"] = spec.master_seed;
  config["parallelism"] = spec.parallelism;
  config["derand"] = ToJson(spec.derand);
  config["learner"] = {
      {"oracle_mode", spec.learner.oracle_mode == SampleOracle::Mode::kExact ? "exact"
                                                                               : "sampling"},
      {"erm_sample_size", spec.learner.erm_sample_size}};
  if (spec.learner.rounds) config["learner"]["rounds"] = *spec.learner.rounds;
  if (spec.learner.learning_rate) config["learner"]["learning_rate"] = *spec.learner.learning_rate;
  if (spec.fixed_instance) {
    config["instance"] = "fixed";
  } else {
    config["generator"] = ToJson(spec.gen);
  }
  j["config"] = std::move(config);
  return j.dump(2);
}

}  // namespace mdl
