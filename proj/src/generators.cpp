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

#include "mdl/generators.hpp"

#include <cmath>

#include "mdl/rng.hpp"

namespace mdl {
namespace {

void CheckSpec(const GenSpec& spec) {
  if (spec.domain_size == 0 || spec.k == 0 || spec.hypothesis_count == 0) {
    throw ContractError("generator: counts must be positive");
  }
  const auto& b = spec.bias;
  auto in01 = [](double v) { return v >= 0 && v <= 1; };
  if (!in01(b.near_det_fraction) || !in01(b.fair_fraction) ||
      b.near_det_fraction + b.fair_fraction > 1) {
    throw ContractError("generator: bias profile fractions must lie in [0,1] and sum to <= 1");
  }
  if (!(b.near_det_min_abs_beta >= 0 && b.near_det_min_abs_beta <= 0.5) ||
      !(b.other_max_abs_beta >= 0 && b.other_max_abs_beta <= 0.5)) {
    throw ContractError("generator: bias magnitudes must lie in [0, 1/2]");
  }
}

std::vector<double> DirichletMass(std::size_t n, Rng& rng) {
  std::vector<double> m(n);
  double total = 0.0;
  for (auto& v : m) total += v = rng.Exponential();
  for (auto& v : m) v /= total;
  return m;
}

Hypothesis RandomLabeling(std::size_t n, Rng& rng) {
  Hypothesis h;
  h.labels.resize(n);
  for (auto& l : h.labels) l = rng.Bernoulli(0.5) ? Label{1} : Label{-1};
  return h;
}

double DrawBeta(const BiasProfile& b, Rng& rng) {
  const double u = rng.Uniform01();
  double magnitude = 0.0;
  if (u < b.near_det_fraction) {
    magnitude = b.near_det_min_abs_beta +
                (0.5 - b.near_det_min_abs_beta) * rng.Uniform01();
  } else if (u < b.near_det_fraction + b.fair_fraction) {
    magnitude = 0.0;
  } else {
    magnitude = b.other_max_abs_beta * rng.Uniform01();
  }
  return rng.Bernoulli(0.5) ? magnitude : -magnitude;
}

}  // namespace

std::string ToString(GenKind kind) {
  switch (kind) {
    case GenKind::kRandomLabelConsistent: return "random_label_consistent";
    case GenKind::kGapExample: return "gap_example";
    case GenKind::kBayesInClass: return "bayes_in_class";
    case GenKind::kHeavyPointProbe: return "heavy_point_probe";
  }
  return "unknown";
}

GenKind ParseGenKind(const std::string& text) {
  for (auto kind : {GenKind::kRandomLabelConsistent, GenKind::kGapExample,
                    GenKind::kBayesInClass, GenKind::kHeavyPointProbe}) {
    if (ToString(kind) == text) return kind;
  }
  throw ContractError("unknown generator kind '" + text + "'");
}

std::vector<Label> BayesLabeling(const DistributionFamily& family) {
  const auto eta = SharedLabelOneProb(family);
  std::vector<Label> labels(eta.size());
  for (std::size_t x = 0; x < eta.size(); ++x) labels[x] = SignOf(2.0 * eta[x] - 1.0);
  return labels;
}

HypothesisClass FullLabelingClass(std::size_t n) {
  if (n == 0 || n > 16) throw ContractError("full labeling class limited to 1..16 points");
  HypothesisClass h;
  for (std::size_t code = 0; code < (std::size_t{1} << n); ++code) {
    Hypothesis hyp;
    hyp.labels.resize(n);
    for (std::size_t j = 0; j < n; ++j) hyp.labels[j] = (code >> j & 1u) ? 1 : -1;
    h.hypotheses.push_back(std::move(hyp));
  }
  h.vc_dim = static_cast<int>(n);
  return h;
}

Instance GenRandomLabelConsistent(const GenSpec& spec) {
  CheckSpec(spec);
  Rng rng(spec.seed);
  Instance inst;
  inst.spec = spec;
  inst.family.domain_size = spec.domain_size;

  std::vector<double> eta(spec.domain_size);
  for (auto& v : eta) v = 0.5 + DrawBeta(spec.bias, rng);
  for (std::size_t i = 0; i < spec.k; ++i) {
    inst.family.members.push_back({DirichletMass(spec.domain_size, rng), eta});
  }
  for (std::size_t j = 0; j < spec.hypothesis_count; ++j) {
    inst.hypotheses.hypotheses.push_back(RandomLabeling(spec.domain_size, rng));
  }
  if (spec.kind == GenKind::kBayesInClass) {
    inst.hypotheses.hypotheses.push_back({BayesLabeling(inst.family)});
  }
  return inst;
}

GapExample GenGapExample(std::size_t k) {
  if (k < 2) throw ContractError("gap example needs k >= 2");
  GapExample g;
  g.family.domain_size = k;
  std::vector<std::size_t> all(k);
  for (std::size_t i = 0; i < k; ++i) {
    LabeledDistribution d;
    d.mass.assign(k, 0.0);
    d.mass[i] = 1.0;
    d.label_one_prob.assign(k, 1.0);
    g.family.members.push_back(std::move(d));

    Hypothesis h;
    h.labels.assign(k, 1);
    h.labels[i] = -1;
    g.hypotheses.hypotheses.push_back(std::move(h));
    all[i] = i;
  }
  g.mixture = RandomizedClassifier::Uniform(g.hypotheses, all);
  return g;
}

HeavyProbe GenHeavyPointProbe(const HeavyProbeParams& params) {
  const std::size_t n = params.domain_size;
  const std::size_t k = params.k;
  if (k == 0 || n == 0 || params.points.size() > n) {
    throw ContractError("heavy probe: bad sizes");
  }
  if (!(params.filler_max_abs_beta >= 0 && params.filler_max_abs_beta <= 0.5)) {
    throw ContractError("heavy probe: filler bias must lie in [0, 1/2]");
  }
  const double threshold =
      HeavyBiasThreshold(k, params.eps, params.delta, params.variant, params.c_prime);

  Rng rng(params.seed);
  HeavyProbe probe;
  probe.designated = params.points.size();
  probe.family.domain_size = n;
  std::vector<double> eta(n, 0.5);
  std::vector<double> used(k, 0.0);
  for (std::size_t p = 0; p < params.points.size(); ++p) {
    const auto& pt = params.points[p];
    if (pt.mass_by_member.size() != k || !(std::abs(pt.beta) <= 0.5)) {
      throw ContractError("heavy probe: point " + std::to_string(p) + " is malformed");
    }
    double strongest = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      if (!(pt.mass_by_member[i] >= 0)) throw ContractError("heavy probe: negative mass");
      used[i] += pt.mass_by_member[i];
      strongest = std::max(strongest, pt.beta * pt.beta * pt.mass_by_member[i]);
    }
    if (std::abs(strongest - threshold) <= 1e-9 * threshold) {
      throw ContractError("heavy probe: point " + std::to_string(p) +
                          " sits on the heavy threshold");
    }
    eta[p] = 0.5 + pt.beta;
  }
  const std::size_t filler = n - params.points.size();
  for (std::size_t x = params.points.size(); x < n; ++x) {
    eta[x] = 0.5 + params.filler_max_abs_beta * (2.0 * rng.Uniform01() - 1.0);
  }
  for (std::size_t i = 0; i < k; ++i) {
    const double left = 1.0 - used[i];
    if (left < -kProbTolerance) throw ContractError("heavy probe: member mass exceeds 1");
    if (left > kProbTolerance && filler == 0) {
      throw ContractError("heavy probe: leftover mass but no filler points");
    }
    LabeledDistribution d;
    d.mass.assign(n, filler > 0 ? std::max(left, 0.0) / static_cast<double>(filler) : 0.0);
    for (std::size_t p = 0; p < params.points.size(); ++p) {
      d.mass[p] = params.points[p].mass_by_member[i];
    }
    d.label_one_prob = eta;
    probe.family.members.push_back(std::move(d));
  }
  probe.heavy = HeavyPoints(probe.family, params.eps, params.delta, params.variant,
                            params.c_prime);
  return probe;
}

HeavyProbeParams DefaultHeavyProbe(std::size_t domain_size, std::size_t k, double eps,
                                   double delta, std::uint64_t seed) {
  if (k == 0 || domain_size < 4) throw ContractError("default probe needs k >= 1, |X| >= 4");
  HeavyProbeParams params;
  params.domain_size = domain_size;
  params.k = k;
  params.eps = eps;
  params.delta = delta;
  params.seed = seed;
  ProbePoint a{0.4, std::vector<double>(k, 0.0)};
  ProbePoint b{-0.35, std::vector<double>(k, 0.0)};
  ProbePoint c{0.3, std::vector<double>(k, 0.15)};
  a.mass_by_member[0] = 0.3;
  b.mass_by_member[k > 1 ? 1 : 0] = 0.25;
  params.points = {a, b, c};
  return params;
}

Instance Generate(const GenSpec& spec) {
  switch (spec.kind) {
    case GenKind::kRandomLabelConsistent:
    case GenKind::kBayesInClass:
      return GenRandomLabelConsistent(spec);
    case GenKind::kGapExample: {
      auto g = GenGapExample(spec.k);
      return {std::move(g.family), std::move(g.hypotheses), spec};
    }
    case GenKind::kHeavyPointProbe: {
      CheckSpec(spec);
      auto probe = GenHeavyPointProbe(
          DefaultHeavyProbe(spec.domain_size, spec.k, spec.eps, spec.delta, spec.seed));
      Rng rng(DeriveSeed(spec.seed, 1));
      Instance inst{std::move(probe.family), {}, spec};
      for (std::size_t j = 0; j < spec.hypothesis_count; ++j) {
        inst.hypotheses.hypotheses.push_back(RandomLabeling(spec.domain_size, rng));
      }
      return inst;
    }
  }
  throw ContractError("unknown generator kind");
}

}  // namespace mdl
