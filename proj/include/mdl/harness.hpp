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

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mdl/derandomizer.hpp"
#include "mdl/generators.hpp"
#include "mdl/learner.hpp"

namespace mdl {

struct LearnerSettings {
  SampleOracle::Mode oracle_mode = SampleOracle::Mode::kExact;
  std::optional<std::size_t> rounds;      // default ceil(8 ln k / eps^2)
  std::optional<double> learning_rate;    // default sqrt(8 ln k / T)
  std::size_t erm_sample_size = 200;
};

struct TrialReport {
  std::size_t trial_id = 0;
  std::uint64_t seed = 0;
  double eps = 0.0;
  double opt = 0.0;
  double randomized_error = 0.0;    // max_i E_F[er_i]
  double derandomized_error = 0.0;  // er_P(f_hat)
  std::size_t table_size = 0;
  bool heavy_coverage = false;
  double outside_deviation = 0.0;   // max_i |X\T term of f_hat - X\T term of F|
  double wall_seconds = 0.0;
  std::string error;                // empty when the trial succeeded

  bool ok() const { return error.empty(); }
};

// The full pipeline on one instance; deterministic given seed. The learner
// and derandomizer streams are both derived from seed. When `result` is given
// it receives the classifier, mixture and table of a successful trial.
TrialReport RunTrial(const Instance& instance, const LearnerSettings& learner,
                     const DerandConfig& derand, std::uint64_t seed,
                     std::size_t trial_id = 0,
                     std::optional<DerandResult>* result = nullptr);

enum class Predicate {
  kOptPlusEps,         // er_P(f_hat) <= OPT + eps
  kRandomPlusHalfEps,  // er_P(f_hat) <= max_i E_F[er_i] + eps/2
  kHeavyCoverage,      // all heavy points in T with sign(beta) labels
  kOutsideDeviation,  // outside-T deviation <= eps/2
};

std::string ToString(Predicate p);
Predicate ParsePredicate(const std::string& text);
bool Holds(Predicate p, const TrialReport& report);

struct PredicateRequirement {
  Predicate predicate = Predicate::kOptPlusEps;
  double min_fraction = 0.0;
};

struct CampaignSpec {
  // When set every trial reuses this instance; otherwise each trial generates
  // one from `gen` with a seed derived from the trial seed.
  std::optional<Instance> fixed_instance;
  GenSpec gen;
  LearnerSettings learner;
  DerandConfig derand;
  std::uint64_t master_seed = 0;
  std::size_t trials = 1;
  std::size_t parallelism = 1;
  std::vector<PredicateRequirement> predicates;
};

struct PredicateSummary {
  Predicate predicate = Predicate::kOptPlusEps;
  std::size_t successes = 0;
  double fraction = 0.0;
  double ci_low = 0.0;   // Wilson 95%
  double ci_high = 0.0;
  double required = 0.0;
  bool met = false;
};

struct CampaignSummary {
  std::size_t trials = 0;
  std::size_t errors = 0;
  std::vector<PredicateSummary> predicates;

  bool partial() const { return errors > 0; }
  bool all_met() const;
};

struct CampaignResult {
  std::vector<TrialReport> reports;  // ordered by trial id
  CampaignSummary summary;
};

// Seeds: trial t uses DeriveSeed(master_seed, t). Results do not depend on
// parallelism.
CampaignResult RunCampaign(const CampaignSpec& spec);

struct WilsonInterval {
  double low = 0.0;
  double high = 1.0;
};
WilsonInterval Wilson95(std::size_t successes, std::size_t trials);

std::string TrialCsvHeader(bool with_timing = false);
std::string TrialCsvRow(const TrialReport& report, bool with_timing = false);
std::string CampaignCsv(const CampaignResult& result, bool with_timing = false);

// Machine-readable summary stanza (JSON) including a config echo.
std::string CampaignSummaryJson(const CampaignSpec& spec, const CampaignSummary& summary);

}  // namespace mdl
