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
#include <functional>
#include <span>
#include <vector>

#include "mdl/rng.hpp"
#include "mdl/types.hpp"

namespace mdl {

struct LabeledSample {
  std::size_t x = 0;
  Label y = 1;
};

// Draws (x, y) with Pr = mass[x] * Pr[y | x]: inverse CDF over the mass
// vector, then a label coin with Pr[+1] = label_one_prob[x].
LabeledSample DrawSample(const LabeledDistribution& member, Rng& rng);

// Access policy over a family. Exact mode exposes the true masses; Sampling
// mode only answers draws. Randomness is supplied by the caller's stream so
// every consumer owns its own reproducible stream.
class SampleOracle {
 public:
  enum class Mode { kExact, kSampling };

  SampleOracle(DistributionFamily family, Mode mode);

  Mode mode() const { return mode_; }
  bool is_exact() const { return mode_ == Mode::kExact; }
  std::size_t k() const { return family_.k(); }
  std::size_t domain_size() const { return family_.domain_size; }

  // Throws ContractError in Sampling mode.
  const DistributionFamily& family() const;

  LabeledSample Draw(std::size_t member, Rng& rng) const;
  std::vector<LabeledSample> DrawMany(std::size_t member, std::size_t count,
                                      Rng& rng) const;

 private:
  DistributionFamily family_;
  Mode mode_;
  std::vector<std::vector<double>> cdf_;
  std::vector<std::size_t> last_supported_;
};

struct WeightedSample {
  std::size_t x = 0;
  Label y = 1;
  double weight = 1.0;
};

// Index of the hypothesis minimizing error against a (mixture) distribution,
// lowest index on ties.
std::size_t ErmExact(const HypothesisClass& h, const LabeledDistribution& mixture);

// Index minimizing weighted empirical 0-1 loss, lowest index on ties.
std::size_t ErmEmpirical(const HypothesisClass& h, std::span<const WeightedSample> sample);

// The w-weighted mixture sum_i w_i D_i as a single labeled distribution.
LabeledDistribution MixtureOf(const DistributionFamily& family,
                              std::span<const double> weights);

struct HedgeConfig {
  std::size_t rounds = 1;         // T
  double learning_rate = 1.0;     // eta
  std::size_t erm_sample_size = 200;
  std::uint64_t seed = 0;

  // T = ceil(8 ln k / eps^2) (at least 1) and eta = sqrt(8 ln k / T). With a
  // single distribution the weights never matter and eta is set to 1.
  static HedgeConfig Defaults(std::size_t k, double eps);
};

struct HedgeTraceRow {
  std::size_t round = 0;
  std::size_t hypothesis = 0;
  std::vector<double> errors;   // exact or estimated er_{D_i}(h_t)
  std::vector<double> weights;  // w_t used to form the round's mixture
};

// Multiplicative weights over the k distributions with an ERM best response
// each round. Returns F uniform over the chosen hypotheses h_1..h_T.
RandomizedClassifier HedgeLearn(const SampleOracle& oracle, const HypothesisClass& h,
                                double eps, double delta, const HedgeConfig& config,
                                std::vector<HedgeTraceRow>* trace = nullptr);

// Any learner meeting the mixture guarantee max_i E_F[er_i] <= OPT + eps with
// probability 1 - delta can be plugged into the derandomizer.
using RandomizedLearner = std::function<RandomizedClassifier(
    const SampleOracle& oracle, const HypothesisClass& h, double eps, double delta)>;

// Hedge with HedgeConfig::Defaults(k, eps) and the given seed.
RandomizedLearner MakeHedgeLearner(std::uint64_t seed, std::size_t erm_sample_size = 200);

}  // namespace mdl
