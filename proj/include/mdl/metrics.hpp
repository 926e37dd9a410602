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
#include <span>
#include <string>
#include <vector>

#include "mdl/types.hpp"

namespace mdl {

// Per-member errors of one classifier and their maximum. argmax_index is the
// lowest member index attaining the maximum.
struct ErrorReport {
  std::vector<double> per_distribution;
  double worst_case = 0.0;
  std::size_t argmax_index = 0;
};

// Exact er_D(f) = sum_x D(x) * Pr[y != f(x) | x].
double ErrorOnDistribution(std::span<const Label> f, const LabeledDistribution& d);

ErrorReport WorstCaseError(std::span<const Label> f, const DistributionFamily& family);

// E_{f~F}[er_{D_i}(f)] for each member i.
std::vector<double> RandomizedErrors(const RandomizedClassifier& f,
                                     const DistributionFamily& family);

// max_i E_{f~F}[er_{D_i}(f)].
double RandomizedWorstCaseError(const RandomizedClassifier& f,
                                const DistributionFamily& family);

// max over f in supp(F) of er_P(f). Never below the randomized value.
double SupportWorstCase(const RandomizedClassifier& f, const DistributionFamily& family);

struct OptResult {
  double value = 0.0;
  std::size_t index = 0;
};

// min_{h in H} er_P(h) by exhaustive search; lowest index on ties.
OptResult OptBruteforce(const HypothesisClass& h, const DistributionFamily& family);

// beta_x = Pr[y = 1 | x] - 1/2 under the shared conditional. Throws
// ContractError for families that are not label consistent.
double Bias(std::size_t x, const DistributionFamily& family);
std::vector<double> Biases(const DistributionFamily& family);

enum class HeavyVariant {
  kStandard,  // beta^2 D_i(x) > eps^2 / (8 ln(4k/delta))
  kHash,      // beta^2 D_i(x) > eps^2 / (C' ln^2(4k/delta))
};

double HeavyBiasThreshold(std::size_t k, double eps, double delta,
                          HeavyVariant variant, double c_prime);

// Strict inequality; true iff some member pushes x over the threshold.
bool IsHeavilyBiased(std::size_t x, const DistributionFamily& family, double eps,
                     double delta, HeavyVariant variant = HeavyVariant::kStandard,
                     double c_prime = 360.0);

// Heavy flag for every point, computed with one consistency check.
std::vector<bool> HeavyPoints(const DistributionFamily& family, double eps,
                              double delta,
                              HeavyVariant variant = HeavyVariant::kStandard,
                              double c_prime = 360.0);

inline constexpr std::size_t kMaxShatterPoints = 20;

// True iff every +-1 pattern on the points is realized by some h in H.
bool Shatters(const HypothesisClass& h, std::span<const std::size_t> points);

// Largest shattered subset size. Requires domain size <= 20.
int VcDimBruteforce(const HypothesisClass& h);

std::string ErrorReportCsvHeader(std::size_t k);
std::string ErrorReportCsvRow(const std::string& instance_id,
                              const std::string& classifier_id,
                              const ErrorReport& report);

}  // namespace mdl
