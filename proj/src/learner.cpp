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

#include "mdl/learner.hpp"

#include <algorithm>
#include <cmath>

#include "mdl/metrics.hpp"

namespace mdl {
namespace {

std::size_t PickIndex(std::span<const double> cdf, std::size_t fallback, double u) {
  auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  if (it == cdf.end()) return fallback;
  return static_cast<std::size_t>(it - cdf.begin());
}

std::size_t LastSupported(const LabeledDistribution& d) {
  for (std::size_t x = d.size(); x-- > 0;) {
    if (d.mass[x] > 0) return x;
  }
  throw ContractError("distribution has no positive mass");
}

}  // namespace

LabeledSample DrawSample(const LabeledDistribution& member, Rng& rng) {
  std::vector<double> cdf(member.size());
  double acc = 0.0;
  for (std::size_t x = 0; x < member.size(); ++x) cdf[x] = acc += member.mass[x];
  const std::size_t x = PickIndex(cdf, LastSupported(member), rng.Uniform01());
  const Label y = rng.Bernoulli(member.label_one_prob[x]) ? Label{1} : Label{-1};
  return {x, y};
}

SampleOracle::SampleOracle(DistributionFamily family, Mode mode)
    : family_(std::move(family)), mode_(mode) {
  RequireValidFamily(family_);
  for (const auto& d : family_.members) {
    std::vector<double> cdf(d.size());
    double acc = 0.0;
    for (std::size_t x = 0; x < d.size(); ++x) cdf[x] = acc += d.mass[x];
    cdf_.push_back(std::move(cdf));
    last_supported_.push_back(LastSupported(d));
  }
}

const DistributionFamily& SampleOracle::family() const {
  if (!is_exact()) throw ContractError("sampling oracle does not expose the family");
  return family_;
}

LabeledSample SampleOracle::Draw(std::size_t member, Rng& rng) const {
  if (member >= k()) throw ContractError("oracle: member index out of range");
  const std::size_t x = PickIndex(cdf_[member], last_supported_[member], rng.Uniform01());
  const bool positive = rng.Bernoulli(family_.members[member].label_one_prob[x]);
  return {x, positive ? Label{1} : Label{-1}};
}

std::vector<LabeledSample> SampleOracle::DrawMany(std::size_t member, std::size_t count,
                                                  Rng& rng) const {
  std::vector<LabeledSample> out;
  out.reserve(count);
  for (std::size_t j = 0; j < count; ++j) out.push_back(Draw(member, rng));
  return out;
}

std::size_t ErmExact(const HypothesisClass& h, const LabeledDistribution& mixture) {
  if (h.size() == 0) throw ContractError("ERM over an empty hypothesis class");
  std::size_t best = 0;
  double best_err = 0.0;
  for (std::size_t j = 0; j < h.size(); ++j) {
    const double e = ErrorOnDistribution(h[j].labels, mixture);
    if (j == 0 || e < best_err) {
      best = j;
      best_err = e;
    }
  }
  return best;
}

std::size_t ErmEmpirical(const HypothesisClass& h, std::span<const WeightedSample> sample) {
  if (h.size() == 0) throw ContractError("ERM over an empty hypothesis class");
  if (sample.empty()) throw ContractError("ERM on an empty sample");
  std::size_t best = 0;
  double best_loss = 0.0;
  for (std::size_t j = 0; j < h.size(); ++j) {
    double loss = 0.0;
    for (const auto& s : sample) {
      if (h[j](s.x) != s.y) loss += s.weight;
    }
    if (j == 0 || loss < best_loss) {
      best = j;
      best_loss = loss;
    }
  }
  return best;
}

LabeledDistribution MixtureOf(const DistributionFamily& family,
                              std::span<const double> weights) {
  if (weights.size() != family.k()) throw ContractError("mixture: weight count mismatch");
  LabeledDistribution mix;
  mix.mass.assign(family.domain_size, 0.0);
  mix.label_one_prob.assign(family.domain_size, 0.0);
  std::vector<double> positive(family.domain_size, 0.0);
  for (std::size_t i = 0; i < family.k(); ++i) {
    const auto& d = family.members[i];
    for (std::size_t x = 0; x < family.domain_size; ++x) {
      mix.mass[x] += weights[i] * d.mass[x];
      positive[x] += weights[i] * d.mass[x] * d.label_one_prob[x];
    }
  }
  for (std::size_t x = 0; x < family.domain_size; ++x) {
    mix.label_one_prob[x] =
        mix.mass[x] > 0 ? std::clamp(positive[x] / mix.mass[x], 0.0, 1.0) : 0.5;
  }
  return mix;
}

HedgeConfig HedgeConfig::Defaults(std::size_t k, double eps) {
  if (!(eps > 0 && eps < 1)) throw ContractError("eps must lie in (0,1)");
  HedgeConfig cfg;
  const double log_k = std::log(static_cast<double>(k));
  cfg.rounds = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(8.0 * log_k / (eps * eps))));
  cfg.learning_rate =
      k > 1 ? std::sqrt(8.0 * log_k / static_cast<double>(cfg.rounds)) : 1.0;
  return cfg;
}

RandomizedClassifier HedgeLearn(const SampleOracle& oracle, const HypothesisClass& h,
                                double eps, double delta, const HedgeConfig& config,
                                std::vector<HedgeTraceRow>* trace) {
  if (!(eps > 0 && eps < 1) || !(delta > 0 && delta < 1)) {
    throw ContractError("hedge: eps and delta must lie in (0,1)");
  }
  if (config.rounds == 0) throw ContractError("hedge: rounds must be positive");
  if (!(config.learning_rate > 0)) throw ContractError("hedge: learning rate must be positive");
  if (!oracle.is_exact() && config.erm_sample_size == 0) {
    throw ContractError("hedge: sampling mode needs a positive ERM sample size");
  }
  const std::size_t k = oracle.k();
  std::vector<double> w(k, 1.0 / static_cast<double>(k));
  std::vector<double> errs(k, 0.0);
  std::vector<std::size_t> chosen;
  chosen.reserve(config.rounds);
  Rng rng(config.seed);
  std::vector<WeightedSample> sample;

  for (std::size_t t = 0; t < config.rounds; ++t) {
    std::size_t pick = 0;
    if (oracle.is_exact()) {
      const auto& family = oracle.family();
      pick = ErmExact(h, MixtureOf(family, w));
      for (std::size_t i = 0; i < k; ++i) {
        errs[i] = ErrorOnDistribution(h[pick].labels, family.members[i]);
      }
    } else {
      const double n = static_cast<double>(config.erm_sample_size);
      sample.clear();
      for (std::size_t i = 0; i < k; ++i) {
        for (const auto& s : oracle.DrawMany(i, config.erm_sample_size, rng)) {
          sample.push_back({s.x, s.y, w[i] / n});
        }
      }
      pick = ErmEmpirical(h, sample);
      for (std::size_t i = 0; i < k; ++i) {
        std::size_t wrong = 0;
        for (const auto& s : oracle.DrawMany(i, config.erm_sample_size, rng)) {
          wrong += h[pick](s.x) != s.y;
        }
        errs[i] = static_cast<double>(wrong) / n;
      }
    }
    chosen.push_back(pick);
    if (trace != nullptr) trace->push_back({t, pick, errs, w});

    // Up-weight the distributions the current hypothesis does badly on.
    double total = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      w[i] *= std::exp(config.learning_rate * errs[i]);
      total += w[i];
    }
    for (auto& v : w) v /= total;
  }
  return RandomizedClassifier::Uniform(h, chosen);
}

RandomizedLearner MakeHedgeLearner(std::uint64_t seed, std::size_t erm_sample_size) {
  return [seed, erm_sample_size](const SampleOracle& oracle, const HypothesisClass& h,
                                 double eps, double delta) {
    HedgeConfig cfg = HedgeConfig::Defaults(oracle.k(), eps);
    cfg.seed = seed;
    cfg.erm_sample_size = erm_sample_size;
    return HedgeLearn(oracle, h, eps, delta, cfg);
  };
}

}  // namespace mdl
