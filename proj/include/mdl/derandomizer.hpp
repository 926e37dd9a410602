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
#include <map>
#include <span>
#include <vector>

#include "mdl/classifier.hpp"
#include "mdl/learner.hpp"
#include "mdl/metrics.hpp"
#include "mdl/rng.hpp"
#include "mdl/types.hpp"

namespace mdl {

enum class DerandMode {
  kTheory,      // gamma and m exactly from the constants C (and C')
  kCalibrated,  // m and the threshold scale set directly
};

enum class RoundingMode { kExplicitPerPoint, kHashCompact };

struct DerandConfig {
  double eps = 0.1;
  double delta = 0.1;
  double c_const = 4.0;    // C
  double c_prime = 360.0;  // C', hash variant only
  DerandMode mode = DerandMode::kTheory;
  std::size_t m_override = 0;   // calibrated mode
  double threshold_scale = 1.0; // calibrated mode
  RoundingMode rounding = RoundingMode::kExplicitPerPoint;
  std::uint64_t seed = 0;
};

// Quantities derived from a config for a family of k members.
//   Theory, explicit:  gamma = C k/(eps delta),     m = ceil(C ln^2(gamma)/eps^2)
//   Theory, hash:      gamma = C C' k/(eps delta),  m = ceil(C C' ln^3(gamma)/eps^2)
//   Calibrated:        gamma = C k/(eps delta),     m = m_override
struct DerandParams {
  double gamma = 0.0;
  std::size_t samples_per_member = 0;
  double threshold_scale = 1.0;
};

DerandParams ResolveParams(const DerandConfig& config, std::size_t k);

struct RhoEstimate {
  double rho = 0.0;
  std::size_t count = 0;
};

// rho = (#positive - #negative) / count. Throws for a zero count.
RhoEstimate EmpiricalRho(std::size_t positives, std::size_t negatives);

// |rho| > scale * sqrt(ln(gamma) / count), strictly. Requires gamma > 1.
bool ThresholdTest(double rho, std::size_t count, double gamma, double scale = 1.0);

struct BiasEntry {
  Label label = 1;
  std::size_t member = 0;  // distribution whose samples admitted x
  double rho = 0.0;
  std::size_t count = 0;
};

// The set T of points whose majority label was fixed from samples.
class BiasTable {
 public:
  bool contains(std::size_t x) const { return entries_.count(x) != 0; }
  std::size_t size() const { return entries_.size(); }
  const std::map<std::size_t, BiasEntry>& entries() const { return entries_; }
  std::map<std::size_t, Label> Labels() const;

  // Throws if x is already present or the entry fails the threshold test.
  void Insert(std::size_t x, const BiasEntry& entry, double gamma, double scale);

 private:
  std::map<std::size_t, BiasEntry> entries_;
};

// For i = 0..k-1 in order: draw m samples from D_i and admit every x not yet
// in T whose empirical rho passes the threshold test. Always samples, even
// when the oracle could expose the masses.
BiasTable BuildBiasTable(const SampleOracle& oracle, const DerandParams& params, Rng& rng);

// Full labeling: table labels on T, and for each x outside T an independent
// draw f ~ F with f(x) copied.
std::vector<Label> RoundOutsideTable(const RandomizedClassifier& f, const BiasTable& table,
                                     std::size_t domain_size, Rng& rng);

struct DerandResult {
  DeterministicClassifier classifier;
  RandomizedClassifier mixture;  // F returned by the learner
  BiasTable table;
  DerandParams params;
};

// Runs the learner at (eps/2, delta/2), builds T, and rounds outside T either
// explicitly or through a compact hash classifier. In Exact mode a family that
// is not label consistent is rejected.
DerandResult Derandomize(const SampleOracle& oracle, const HypothesisClass& h,
                         const RandomizedLearner& learner, const DerandConfig& config);

// Per-member error split into the T and X\T contributions. Sums to er_{D_i}.
struct SplitError {
  std::vector<double> in_table;
  std::vector<double> outside_table;
};

SplitError SplitErrors(std::span<const Label> f, const DistributionFamily& family,
                       const BiasTable& table);

// E_{f~F}[E_{D_i}[1{x not in T, f(x) != y}]] for each member.
std::vector<double> MixtureOutsideErrors(const RandomizedClassifier& f,
                                         const DistributionFamily& family,
                                         const BiasTable& table);

// max_i |X\T term of f_hat - X\T term of F|.
double MaxOutsideDeviation(std::span<const Label> f_hat, const RandomizedClassifier& f,
                           const DistributionFamily& family, const BiasTable& table);

// sum_{x in T} D_i(x) min(eta_x, 1 - eta_x) for each member.
std::vector<double> BayesTableTerm(const DistributionFamily& family, const BiasTable& table);

// Every heavily biased point is in T and every T label equals sign(beta_x).
bool HeavyCoverage(const BiasTable& table, const DistributionFamily& family, double eps,
                   double delta, HeavyVariant variant, double c_prime);

}  // namespace mdl
