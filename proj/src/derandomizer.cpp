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

#include "mdl/derandomizer.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mdl/hashing.hpp"

namespace mdl {
namespace {

void CheckConfig(const DerandConfig& c) {
  if (!(c.eps > 0 && c.eps < 1) || !(c.delta > 0 && c.delta < 1)) {
    throw ContractError("derandomizer: eps and delta must lie in (0,1)");
  }
  if (!(c.c_const > 0) || !(c.c_prime > 0)) {
    throw ContractError("derandomizer: constants C and C' must be positive");
  }
  if (c.mode == DerandMode::kCalibrated &&
      (c.m_override == 0 || !(c.threshold_scale > 0))) {
    throw ContractError("derandomizer: calibrated mode needs m > 0 and a positive scale");
  }
}

}  // namespace

DerandParams ResolveParams(const DerandConfig& config, std::size_t k) {
  CheckConfig(config);
  const double base = static_cast<double>(k) / (config.eps * config.delta);
  const double eps2 = config.eps * config.eps;
  DerandParams p;
  if (config.mode == DerandMode::kCalibrated) {
    p.gamma = config.c_const * base;
    p.samples_per_member = config.m_override;
    p.threshold_scale = config.threshold_scale;
  } else if (config.rounding == RoundingMode::kHashCompact) {
    p.gamma = config.c_const * config.c_prime * base;
    const double lg = std::log(p.gamma);
    p.samples_per_member = static_cast<std::size_t>(
        std::ceil(config.c_const * config.c_prime * lg * lg * lg / eps2));
  } else {
    p.gamma = config.c_const * base;
    const double lg = std::log(p.gamma);
    p.samples_per_member =
        static_cast<std::size_t>(std::ceil(config.c_const * lg * lg / eps2));
  }
  if (!(p.gamma > 1)) throw ContractError("derandomizer: gamma must exceed 1");
  return p;
}

RhoEstimate EmpiricalRho(std::size_t positives, std::size_t negatives) {
  const std::size_t count = positives + negatives;
  if (count == 0) throw ContractError("empirical rho needs at least one sample");
  const double diff = static_cast<double>(positives) - static_cast<double>(negatives);
  return {diff / static_cast<double>(count), count};
}

bool ThresholdTest(double rho, std::size_t count, double gamma, double scale) {
  if (count == 0) throw ContractError("threshold test needs a positive count");
  if (!(gamma > 1)) throw ContractError("threshold test needs gamma > 1");
  return std::abs(rho) > scale * std::sqrt(std::log(gamma) / static_cast<double>(count));
}

std::map<std::size_t, Label> BiasTable::Labels() const {
  std::map<std::size_t, Label> out;
  for (const auto& [x, e] : entries_) out.emplace(x, e.label);
  return out;
}

void BiasTable::Insert(std::size_t x, const BiasEntry& entry, double gamma, double scale) {
  if (contains(x)) throw ContractError("bias table: duplicate key");
  if (!ThresholdTest(entry.rho, entry.count, gamma, scale)) {
    throw ContractError("bias table: entry does not pass the threshold");
  }
  entries_.emplace(x, entry);
}

BiasTable BuildBiasTable(const SampleOracle& oracle, const DerandParams& params, Rng& rng) {
  BiasTable table;
  const std::size_t n = oracle.domain_size();
  std::vector<std::size_t> positives(n), negatives(n);
  for (std::size_t i = 0; i < oracle.k(); ++i) {
    std::fill(positives.begin(), positives.end(), 0);
    std::fill(negatives.begin(), negatives.end(), 0);
    for (std::size_t j = 0; j < params.samples_per_member; ++j) {
      const auto s = oracle.Draw(i, rng);
      ++(s.y == 1 ? positives : negatives)[s.x];
    }
    for (std::size_t x = 0; x < n; ++x) {
      if (table.contains(x) || positives[x] + negatives[x] == 0) continue;
      const RhoEstimate est = EmpiricalRho(positives[x], negatives[x]);
      if (ThresholdTest(est.rho, est.count, params.gamma, params.threshold_scale)) {
        table.Insert(x, {SignOf(est.rho), i, est.rho, est.count}, params.gamma,
                     params.threshold_scale);
      }
    }
  }
  return table;
}

std::vector<Label> RoundOutsideTable(const RandomizedClassifier& f, const BiasTable& table,
                                     std::size_t domain_size, Rng& rng) {
  if (f.support_size() == 0) throw ContractError("rounding: empty mixture");
  if (f.domain_size() != domain_size) throw ContractError("rounding: domain size mismatch");
  std::vector<double> cdf(f.support_size());
  double acc = 0.0;
  for (std::size_t j = 0; j < cdf.size(); ++j) cdf[j] = acc += f.weights()[j];

  std::vector<Label> labels(domain_size);
  for (std::size_t x = 0; x < domain_size; ++x) {
    if (auto it = table.entries().find(x); it != table.entries().end()) {
      labels[x] = it->second.label;
      continue;
    }
    const double u = rng.Uniform01() * acc;
    auto pos = std::upper_bound(cdf.begin(), cdf.end(), u);
    std::size_t j = pos == cdf.end() ? cdf.size() - 1
                                     : static_cast<std::size_t>(pos - cdf.begin());
    labels[x] = f.support()[j](x);
  }
  return labels;
}

DerandResult Derandomize(const SampleOracle& oracle, const HypothesisClass& h,
                         const RandomizedLearner& learner, const DerandConfig& config) {
  const DerandParams params = ResolveParams(config, oracle.k());
  if (oracle.is_exact() && !IsLabelConsistent(oracle.family())) {
    throw ContractError("derandomize: family is not label consistent");
  }
  // The learner runs first and never sees the table samples.
  RandomizedClassifier mixture = learner(oracle, h, config.eps / 2, config.delta / 2);
  if (mixture.domain_size() != oracle.domain_size()) {
    throw ContractError("derandomize: learner returned a mixture over the wrong domain");
  }

  Rng table_rng(DeriveSeed(config.seed, 1));
  BiasTable table = BuildBiasTable(oracle, params, table_rng);

  if (config.rounding == RoundingMode::kExplicitPerPoint) {
    Rng round_rng(DeriveSeed(config.seed, 2));
    auto labels = RoundOutsideTable(mixture, table, oracle.domain_size(), round_rng);
    return {DeterministicClassifier(ExplicitLabels{std::move(labels)}), std::move(mixture),
            std::move(table), params};
  }
  const HashParams hp = ChooseHashParams(oracle.k(), config.eps, config.delta,
                                         oracle.domain_size(), config.c_prime);
  Rng hash_rng(DeriveSeed(config.seed, 3));
  PolyHash q = SampleHash(hp.prime, hp.degree, hash_rng);
  CompactClassifier compact(oracle.domain_size(), std::move(q), table.Labels(), mixture);
  return {DeterministicClassifier(std::move(compact)), std::move(mixture), std::move(table),
          params};
}

SplitError SplitErrors(std::span<const Label> f, const DistributionFamily& family,
                       const BiasTable& table) {
  if (f.size() != family.domain_size) throw ContractError("split error: size mismatch");
  SplitError out;
  out.in_table.assign(family.k(), 0.0);
  out.outside_table.assign(family.k(), 0.0);
  for (std::size_t i = 0; i < family.k(); ++i) {
    const auto& d = family.members[i];
    for (std::size_t x = 0; x < f.size(); ++x) {
      const double eta = d.label_one_prob[x];
      const double e = d.mass[x] * (f[x] == 1 ? 1.0 - eta : eta);
      (table.contains(x) ? out.in_table : out.outside_table)[i] += e;
    }
  }
  return out;
}

std::vector<double> MixtureOutsideErrors(const RandomizedClassifier& f,
                                         const DistributionFamily& family,
                                         const BiasTable& table) {
  std::vector<double> out(family.k(), 0.0);
  for (std::size_t j = 0; j < f.support_size(); ++j) {
    const auto split = SplitErrors(f.support()[j].labels, family, table);
    for (std::size_t i = 0; i < family.k(); ++i) {
      out[i] += f.weights()[j] * split.outside_table[i];
    }
  }
  return out;
}

double MaxOutsideDeviation(std::span<const Label> f_hat, const RandomizedClassifier& f,
                           const DistributionFamily& family, const BiasTable& table) {
  const auto ours = SplitErrors(f_hat, family, table).outside_table;
  const auto mix = MixtureOutsideErrors(f, family, table);
  double worst = 0.0;
  for (std::size_t i = 0; i < ours.size(); ++i) {
    worst = std::max(worst, std::abs(ours[i] - mix[i]));
  }
  return worst;
}

std::vector<double> BayesTableTerm(const DistributionFamily& family, const BiasTable& table) {
  std::vector<double> out(family.k(), 0.0);
  for (std::size_t i = 0; i < family.k(); ++i) {
    const auto& d = family.members[i];
    for (const auto& [x, entry] : table.entries()) {
      const double eta = d.label_one_prob[x];
      out[i] += d.mass[x] * std::min(eta, 1.0 - eta);
    }
  }
  return out;
}

bool HeavyCoverage(const BiasTable& table, const DistributionFamily& family, double eps,
                   double delta, HeavyVariant variant, double c_prime) {
  const auto beta = Biases(family);
  const auto heavy = HeavyPoints(family, eps, delta, variant, c_prime);
  for (std::size_t x = 0; x < family.domain_size; ++x) {
    if (heavy[x] && !table.contains(x)) return false;
  }
  for (const auto& [x, entry] : table.entries()) {
    if (beta[x] != 0.0 && entry.label != SignOf(beta[x])) return false;
  }
  return true;
}

}  // namespace mdl
