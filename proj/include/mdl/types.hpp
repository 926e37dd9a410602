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
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mdl {

// A binary label, always exactly -1 or +1.
using Label = std::int8_t;

inline constexpr double kProbTolerance = 1e-12;

// Raised when a caller violates a documented precondition.
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// sign() with the convention sign(0) = +1.
inline Label SignOf(double v) { return v < 0 ? Label{-1} : Label{1}; }

// One member D_i of a family: a point mass vector over the dense domain
// 0..n-1 and the conditional probability of label +1 at every point.
struct LabeledDistribution {
  std::vector<double> mass;
  std::vector<double> label_one_prob;

  std::size_t size() const { return mass.size(); }
};

struct DistributionFamily {
  std::size_t domain_size = 0;
  std::vector<LabeledDistribution> members;

  std::size_t k() const { return members.size(); }
};

struct Hypothesis {
  std::vector<Label> labels;

  std::size_t size() const { return labels.size(); }
  Label operator()(std::size_t x) const { return labels[x]; }
  bool operator==(const Hypothesis&) const = default;
};

struct HypothesisClass {
  std::vector<Hypothesis> hypotheses;
  // Populated by brute force on small instances only.
  std::optional<int> vc_dim;

  std::size_t size() const { return hypotheses.size(); }
  const Hypothesis& operator[](std::size_t i) const { return hypotheses[i]; }
};

// A finitely supported mixture F over a hypothesis class. The support
// hypotheses are copied so that F can be evaluated without the class; the
// class indices are kept for serialization and reporting.
class RandomizedClassifier {
 public:
  RandomizedClassifier() = default;

  // Validates weights (nonnegative, summing to 1 within kProbTolerance) and
  // merges repeated indices by summing their weights.
  static RandomizedClassifier FromClass(const HypothesisClass& h,
                                        std::span<const std::size_t> indices,
                                        std::span<const double> weights);

  static RandomizedClassifier Uniform(const HypothesisClass& h,
                                      std::span<const std::size_t> indices);

  std::size_t support_size() const { return support_.size(); }
  std::size_t domain_size() const {
    return support_.empty() ? 0 : support_.front().size();
  }
  const std::vector<std::size_t>& support_indices() const { return indices_; }
  const std::vector<Hypothesis>& support() const { return support_; }
  const std::vector<double>& weights() const { return weights_; }

  bool operator==(const RandomizedClassifier&) const = default;

 private:
  std::vector<std::size_t> indices_;
  std::vector<Hypothesis> support_;
  std::vector<double> weights_;
};

struct ValidationIssue {
  enum class Severity { kError, kWarning };
  Severity severity;
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;

  bool ok() const;
  std::size_t error_count() const;
  std::string ToString() const;
};

ValidationReport ValidateFamily(const DistributionFamily& family);
ValidationReport ValidateHypothesisClass(const HypothesisClass& h,
                                         std::size_t domain_size);

// Throws ContractError with the report text when the family is invalid.
void RequireValidFamily(const DistributionFamily& family);

// True iff every point that carries positive mass in two or more members has
// the same conditional label law (within tol) in all of them.
bool IsLabelConsistent(const DistributionFamily& family,
                       double tol = kProbTolerance);

// Shared conditional of a label-consistent family: for each x the
// label_one_prob of the first member with positive mass there, or member 0's
// when no member supports x.
std::vector<double> SharedLabelOneProb(const DistributionFamily& family);

}  // namespace mdl
