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

#include "mdl/metrics.hpp"
#include "mdl/types.hpp"

namespace mdl {

enum class GenKind {
  kRandomLabelConsistent,
  kGapExample,
  kBayesInClass,
  kHeavyPointProbe,
};

std::string ToString(GenKind kind);
GenKind ParseGenKind(const std::string& text);

// How the shared conditional is drawn. Each point is independently
//   near-deterministic with prob near_det_fraction: |beta| ~ U[near_det_min_abs_beta, 1/2],
//   fair with prob fair_fraction: beta = 0,
//   otherwise |beta| ~ U[0, other_max_abs_beta];
// with a fair random sign.
struct BiasProfile {
  double near_det_fraction = 0.4;
  double near_det_min_abs_beta = 0.4;
  double fair_fraction = 0.2;
  double other_max_abs_beta = 0.5;
};

struct GenSpec {
  GenKind kind = GenKind::kRandomLabelConsistent;
  std::size_t domain_size = 40;
  std::size_t k = 6;
  std::size_t hypothesis_count = 16;
  BiasProfile bias;
  // Only used by the heavy-point probe.
  double eps = 0.1;
  double delta = 0.1;
  std::uint64_t seed = 0;
};

struct Instance {
  DistributionFamily family;
  HypothesisClass hypotheses;
  std::optional<GenSpec> spec;
};

// sign(2 eta - 1) pointwise, ties to +1.
std::vector<Label> BayesLabeling(const DistributionFamily& family);

// All 2^n labelings of n points, n <= 16, in binary counting order with bit j
// of the index set meaning label +1 at point j.
HypothesisClass FullLabelingClass(std::size_t n);

// k Dirichlet(1) mass vectors (normalized exponentials), one shared
// conditional drawn from the bias profile, and hypothesis_count fair random
// labelings. For kBayesInClass the pointwise-Bayes labeling is appended.
Instance GenRandomLabelConsistent(const GenSpec& spec);

struct GapExample {
  DistributionFamily family;
  HypothesisClass hypotheses;
  RandomizedClassifier mixture;
};

// Domain x_0..x_{k-1}; D_i is a point mass on (x_i, +1); h_i labels x_i with
// -1 and every other point +1; F is uniform over h_0..h_{k-1}. Requires k >= 2.
GapExample GenGapExample(std::size_t k);

struct ProbePoint {
  double beta = 0.0;
  std::vector<double> mass_by_member;  // k entries
};

struct HeavyProbeParams {
  std::size_t domain_size = 30;
  std::size_t k = 2;
  double eps = 0.1;
  double delta = 0.1;
  HeavyVariant variant = HeavyVariant::kStandard;
  double c_prime = 360.0;
  // Designated points occupy indices 0..points.size()-1. Each member's
  // leftover mass is spread evenly over the remaining filler points.
  std::vector<ProbePoint> points;
  double filler_max_abs_beta = 0.0;
  std::uint64_t seed = 0;
};

struct HeavyProbe {
  DistributionFamily family;
  std::vector<bool> heavy;  // per point
  std::size_t designated = 0;
};

// Throws ContractError when a designated point sits on the heavy threshold
// (relative distance below 1e-9), or masses do not fit.
HeavyProbe GenHeavyPointProbe(const HeavyProbeParams& params);

// Three clearly heavy points (two single-member, one shared) among fair
// filler points at the given (k, eps, delta).
HeavyProbeParams DefaultHeavyProbe(std::size_t domain_size, std::size_t k, double eps,
                                   double delta, std::uint64_t seed);

// Dispatch on spec.kind.
Instance Generate(const GenSpec& spec);

}  // namespace mdl
