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

#include "mdl/types.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace mdl {

RandomizedClassifier RandomizedClassifier::FromClass(
    const HypothesisClass& h, std::span<const std::size_t> indices,
    std::span<const double> weights) {
  if (indices.empty()) throw ContractError("randomized classifier: empty support");
  if (indices.size() != weights.size()) {
    throw ContractError("randomized classifier: indices/weights size mismatch");
  }
  std::map<std::size_t, double> merged;
  double total = 0.0;
  for (std::size_t j = 0; j < indices.size(); ++j) {
    if (indices[j] >= h.size()) {
      throw ContractError("randomized classifier: support index " +
                          std::to_string(indices[j]) + " out of range");
    }
    if (!(weights[j] >= 0.0)) {
      throw ContractError("randomized classifier: negative weight");
    }
    merged[indices[j]] += weights[j];
    total += weights[j];
  }
  if (std::abs(total - 1.0) > kProbTolerance) {
    std::ostringstream os;
    os << "randomized classifier: weights sum to " << total << ", expected 1";
    throw ContractError(os.str());
  }
  RandomizedClassifier f;
  for (const auto& [index, w] : merged) {
    f.indices_.push_back(index);
    f.support_.push_back(h[index]);
    f.weights_.push_back(w);
  }
  return f;
}

RandomizedClassifier RandomizedClassifier::Uniform(
    const HypothesisClass& h, std::span<const std::size_t> indices) {
  // Weight by multiplicity so repeated indices merge into exact multiples.
  std::map<std::size_t, std::size_t> counts;
  for (auto i : indices) ++counts[i];
  std::vector<std::size_t> unique;
  std::vector<double> w;
  const double n = static_cast<double>(indices.size());
  for (const auto& [i, c] : counts) {
    unique.push_back(i);
    w.push_back(static_cast<double>(c) / n);
  }
  // Absorb rounding drift into the largest weight.
  double total = 0.0;
  for (double v : w) total += v;
  if (!w.empty()) {
    auto it = std::max_element(w.begin(), w.end());
    *it += 1.0 - total;
  }
  return FromClass(h, unique, w);
}

bool ValidationReport::ok() const { return error_count() == 0; }

std::size_t ValidationReport::error_count() const {
  return static_cast<std::size_t>(
      std::count_if(issues.begin(), issues.end(), [](const ValidationIssue& i) {
        return i.severity == ValidationIssue::Severity::kError;
      }));
}

std::string ValidationReport::ToString() const {
  std::ostringstream os;
  for (const auto& issue : issues) {
    os << (issue.severity == ValidationIssue::Severity::kError ? "error: "
                                                               : "warning: ")
       << issue.message << '\n';
  }
  return os.str();
}

ValidationReport ValidateFamily(const DistributionFamily& family) {
  ValidationReport report;
  auto error = [&](std::string msg) {
    report.issues.push_back({ValidationIssue::Severity::kError, std::move(msg)});
  };
  if (family.domain_size == 0) error("domain size must be at least 1");
  if (family.members.empty()) error("family has no members");
  for (std::size_t i = 0; i < family.members.size(); ++i) {
    const auto& d = family.members[i];
    const std::string who = "member " + std::to_string(i);
    if (d.mass.size() != family.domain_size ||
        d.label_one_prob.size() != family.domain_size) {
      error(who + ": vector length does not match domain size " +
            std::to_string(family.domain_size));
      continue;
    }
    double sum = 0.0;
    for (std::size_t x = 0; x < d.mass.size(); ++x) {
      if (!(d.mass[x] >= 0.0)) {
        std::ostringstream os;
        os << who << ": negative mass " << d.mass[x] << " at index " << x;
        error(os.str());
      }
      if (!(d.label_one_prob[x] >= 0.0 && d.label_one_prob[x] <= 1.0)) {
        std::ostringstream os;
        os << who << ": label_one_prob " << d.label_one_prob[x]
           << " out of [0,1] at index " << x;
        error(os.str());
      }
      sum += d.mass[x];
    }
    if (std::abs(sum - 1.0) > kProbTolerance) {
      std::ostringstream os;
      os << who << ": mass sum " << sum << " != 1";
      error(os.str());
    }
  }
  return report;
}

ValidationReport ValidateHypothesisClass(const HypothesisClass& h,
                                         std::size_t domain_size) {
  ValidationReport report;
  if (h.hypotheses.empty()) {
    report.issues.push_back(
        {ValidationIssue::Severity::kError, "hypothesis class is empty"});
  }
  std::set<std::vector<Label>> seen;
  for (std::size_t j = 0; j < h.size(); ++j) {
    const auto& labels = h[j].labels;
    if (labels.size() != domain_size) {
      report.issues.push_back({ValidationIssue::Severity::kError,
                               "hypothesis " + std::to_string(j) +
                                   ": length does not match domain size"});
      continue;
    }
    for (std::size_t x = 0; x < labels.size(); ++x) {
      if (labels[x] != 1 && labels[x] != -1) {
        report.issues.push_back({ValidationIssue::Severity::kError,
                                 "hypothesis " + std::to_string(j) +
                                     ": label at index " + std::to_string(x) +
                                     " is not +-1"});
        break;
      }
    }
    if (!seen.insert(labels).second) {
      report.issues.push_back({ValidationIssue::Severity::kWarning,
                               "hypothesis " + std::to_string(j) +
                                   " duplicates an earlier hypothesis"});
    }
  }
  return report;
}

void RequireValidFamily(const DistributionFamily& family) {
  auto report = ValidateFamily(family);
  if (!report.ok()) throw ContractError("invalid family:\n" + report.ToString());
}

bool IsLabelConsistent(const DistributionFamily& family, double tol) {
  for (std::size_t x = 0; x < family.domain_size; ++x) {
    bool have_ref = false;
    double ref = 0.0;
    for (const auto& d : family.members) {
      if (d.mass[x] <= 0.0) continue;
      if (!have_ref) {
        ref = d.label_one_prob[x];
        have_ref = true;
      } else if (std::abs(d.label_one_prob[x] - ref) > tol) {
        return false;
      }
    }
  }
  return true;
}

std::vector<double> SharedLabelOneProb(const DistributionFamily& family) {
  std::vector<double> eta(family.domain_size, 0.0);
  for (std::size_t x = 0; x < family.domain_size; ++x) {
    eta[x] = family.members.front().label_one_prob[x];
    for (const auto& d : family.members) {
      if (d.mass[x] > 0.0) {
        eta[x] = d.label_one_prob[x];
        break;
      }
    }
  }
  return eta;
}

}  // namespace mdl
