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

#include "mdl/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>

namespace mdl {
namespace {

void CheckEpsDelta(double eps, double delta) {
  if (!(eps > 0 && eps < 1) || !(delta > 0 && delta < 1)) {
    throw ContractError("eps and delta must lie in (0,1)");
  }
}

void RequireLabelConsistent(const DistributionFamily& family) {
  if (!IsLabelConsistent(family)) {
    throw ContractError("bias is only defined for label-consistent families");
  }
}

}  // namespace

double ErrorOnDistribution(std::span<const Label> f, const LabeledDistribution& d) {
  if (f.size() != d.size()) {
    throw ContractError("error: classifier covers " + std::to_string(f.size()) +
                        " points, distribution " + std::to_string(d.size()));
  }
  double err = 0.0;
  for (std::size_t x = 0; x < f.size(); ++x) {
    const double eta = d.label_one_prob[x];
    err += d.mass[x] * (f[x] == 1 ? 1.0 - eta : eta);
  }
  return err;
}

ErrorReport WorstCaseError(std::span<const Label> f, const DistributionFamily& family) {
  ErrorReport report;
  report.per_distribution.reserve(family.k());
  for (const auto& d : family.members) {
    report.per_distribution.push_back(ErrorOnDistribution(f, d));
  }
  for (std::size_t i = 0; i < report.per_distribution.size(); ++i) {
    if (i == 0 || report.per_distribution[i] > report.worst_case) {
      report.worst_case = report.per_distribution[i];
      report.argmax_index = i;
    }
  }
  return report;
}

std::vector<double> RandomizedErrors(const RandomizedClassifier& f,
                                     const DistributionFamily& family) {
  if (f.support_size() == 0) throw ContractError("randomized classifier has no support");
  std::vector<double> out(family.k(), 0.0);
  for (std::size_t j = 0; j < f.support_size(); ++j) {
    const auto& labels = f.support()[j].labels;
    for (std::size_t i = 0; i < family.k(); ++i) {
      out[i] += f.weights()[j] * ErrorOnDistribution(labels, family.members[i]);
    }
  }
  return out;
}

double RandomizedWorstCaseError(const RandomizedClassifier& f,
                                const DistributionFamily& family) {
  auto errs = RandomizedErrors(f, family);
  return *std::max_element(errs.begin(), errs.end());
}

double SupportWorstCase(const RandomizedClassifier& f, const DistributionFamily& family) {
  double worst = 0.0;
  for (const auto& h : f.support()) {
    worst = std::max(worst, WorstCaseError(h.labels, family).worst_case);
  }
  return worst;
}

OptResult OptBruteforce(const HypothesisClass& h, const DistributionFamily& family) {
  if (h.size() == 0) throw ContractError("OPT over an empty hypothesis class");
  OptResult best;
  for (std::size_t j = 0; j < h.size(); ++j) {
    const double v = WorstCaseError(h[j].labels, family).worst_case;
    if (j == 0 || v < best.value) best = {v, j};
  }
  return best;
}

double Bias(std::size_t x, const DistributionFamily& family) {
  RequireLabelConsistent(family);
  if (x >= family.domain_size) throw ContractError("bias: point out of domain");
  return SharedLabelOneProb(family)[x] - 0.5;
}

std::vector<double> Biases(const DistributionFamily& family) {
  RequireLabelConsistent(family);
  auto eta = SharedLabelOneProb(family);
  for (auto& v : eta) v -= 0.5;
  return eta;
}

double HeavyBiasThreshold(std::size_t k, double eps, double delta,
                          HeavyVariant variant, double c_prime) {
  CheckEpsDelta(eps, delta);
  const double log_term = std::log(4.0 * static_cast<double>(k) / delta);
  if (variant == HeavyVariant::kStandard) return eps * eps / (8.0 * log_term);
  if (!(c_prime > 0)) throw ContractError("C' must be positive");
  return eps * eps / (c_prime * log_term * log_term);
}

bool IsHeavilyBiased(std::size_t x, const DistributionFamily& family, double eps,
                     double delta, HeavyVariant variant, double c_prime) {
  const double beta = Bias(x, family);
  const double threshold = HeavyBiasThreshold(family.k(), eps, delta, variant, c_prime);
  for (const auto& d : family.members) {
    if (beta * beta * d.mass[x] > threshold) return true;
  }
  return false;
}

std::vector<bool> HeavyPoints(const DistributionFamily& family, double eps,
                              double delta, HeavyVariant variant, double c_prime) {
  const auto beta = Biases(family);
  const double threshold = HeavyBiasThreshold(family.k(), eps, delta, variant, c_prime);
  std::vector<bool> heavy(family.domain_size, false);
  for (std::size_t x = 0; x < family.domain_size; ++x) {
    for (const auto& d : family.members) {
      if (beta[x] * beta[x] * d.mass[x] > threshold) {
        heavy[x] = true;
        break;
      }
    }
  }
  return heavy;
}

bool Shatters(const HypothesisClass& h, std::span<const std::size_t> points) {
  if (points.size() > kMaxShatterPoints) {
    throw ContractError("shattering check limited to 20 points");
  }
  const std::size_t patterns = std::size_t{1} << points.size();
  if (h.size() < patterns) return false;
  std::vector<char> seen(patterns, 0);
  std::size_t distinct = 0;
  for (const auto& hyp : h.hypotheses) {
    std::size_t code = 0;
    for (std::size_t b = 0; b < points.size(); ++b) {
      if (hyp(points[b]) == 1) code |= std::size_t{1} << b;
    }
    if (!seen[code]) {
      seen[code] = 1;
      if (++distinct == patterns) return true;
    }
  }
  return distinct == patterns;
}

int VcDimBruteforce(const HypothesisClass& h) {
  if (h.size() == 0) throw ContractError("VC dimension of an empty class");
  const std::size_t n = h[0].size();
  if (n > kMaxShatterPoints) throw ContractError("VC brute force limited to |X| <= 20");
  int best = 0;
  std::vector<std::size_t> points;
  for (std::size_t s = 1; s <= n && (std::size_t{1} << s) <= h.size(); ++s) {
    bool found = false;
    // Gosper's hack over s-subsets of n bits.
    std::uint32_t subset = (std::uint32_t{1} << s) - 1;
    const std::uint32_t limit = std::uint32_t{1} << n;
    while (subset < limit && !found) {
      points.clear();
      for (std::size_t b = 0; b < n; ++b) {
        if (subset >> b & 1u) points.push_back(b);
      }
      found = Shatters(h, points);
      const std::uint32_t c = subset & (0u - subset);
      const std::uint32_t r = subset + c;
      subset = (((r ^ subset) >> 2) / c) | r;
    }
    if (!found) break;
    best = static_cast<int>(s);
  }
  return best;
}

std::string ErrorReportCsvHeader(std::size_t k) {
  std::ostringstream os;
  os << "instance_id,classifier_id";
  for (std::size_t i = 0; i < k; ++i) os << ",er_" << i;
  os << ",worst_case,argmax_index";
  return os.str();
}

std::string ErrorReportCsvRow(const std::string& instance_id,
                              const std::string& classifier_id,
                              const ErrorReport& report) {
  std::ostringstream os;
  os.precision(17);
  os << instance_id << ',' << classifier_id;
  for (double e : report.per_distribution) os << ',' << e;
  os << ',' << report.worst_case << ',' << report.argmax_index;
  return os.str();
}

}  // namespace mdl
