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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "mdl/generators.hpp"
#include "mdl/metrics.hpp"
#include "mdl/rng.hpp"

using namespace mdl;

namespace {

// Independent oracle: walk every (x, y) outcome with its probability.
double OutcomeError(const std::vector<Label>& f, const LabeledDistribution& d) {
  double err = 0;
  for (std::size_t x = 0; x < f.size(); ++x) {
    for (int y : {-1, 1}) {
      const double p = d.mass[x] * (y == 1 ? d.label_one_prob[x] : 1 - d.label_one_prob[x]);
      if (f[x] != y) err += p;
    }
  }
  return err;
}

DistributionFamily RandomFamily(std::size_t n, std::size_t k, Rng& rng, bool shared) {
  DistributionFamily fam;
  fam.domain_size = n;
  std::vector<double> eta(n);
  for (auto& v : eta) v = rng.Uniform01();
  for (std::size_t i = 0; i < k; ++i) {
    LabeledDistribution d;
    double total = 0;
    for (std::size_t x = 0; x < n; ++x) total += d.mass.emplace_back(rng.Exponential());
    for (auto& v : d.mass) v /= total;
    d.label_one_prob = eta;
    if (!shared) {
      for (auto& v : d.label_one_prob) v = rng.Uniform01();
    }
    fam.members.push_back(std::move(d));
  }
  return fam;
}

std::vector<Label> RandomLabels(std::size_t n, Rng& rng) {
  std::vector<Label> f(n);
  for (auto& l : f) l = rng.Bernoulli(0.5) ? 1 : -1;
  return f;
}

}  // namespace

TEST_CASE("error on distribution") {
  auto g = GenGapExample(4);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      CHECK(ErrorOnDistribution(g.hypotheses[j].labels, g.family.members[i]) ==
            (i == j ? 1.0 : 0.0));
    }
  }
  LabeledDistribution fair{{0.2, 0.3, 0.5}, {0.5, 0.5, 0.5}};
  CHECK(ErrorOnDistribution(std::vector<Label>{1, -1, 1}, fair) == doctest::Approx(0.5));
  std::vector<Label> short_f{1};
  CHECK_THROWS_AS(ErrorOnDistribution(short_f, fair), ContractError);
}

TEST_CASE("worst case error") {
  auto g = GenGapExample(5);
  for (const auto& h : g.hypotheses.hypotheses) {
    CHECK(WorstCaseError(h.labels, g.family).worst_case == 1.0);
  }
  std::vector<Label> plus(5, 1);
  CHECK(WorstCaseError(plus, g.family).worst_case == 0.0);

  Rng rng(1);
  for (int t = 0; t < 50; ++t) {
    auto fam = RandomFamily(9, 3, rng, t % 2 == 0);
    auto f = RandomLabels(9, rng);
    auto rep = WorstCaseError(f, fam);
    double worst = -1;
    std::size_t arg = 0;
    for (std::size_t i = 0; i < 3; ++i) {
      const double e = OutcomeError(f, fam.members[i]);
      CHECK(rep.per_distribution[i] == doctest::Approx(e).epsilon(1e-12));
      if (e > worst) worst = e, arg = i;
    }
    CHECK(rep.worst_case == doctest::Approx(worst).epsilon(1e-12));
    CHECK(rep.argmax_index == arg);
  }
}

TEST_CASE("argmax ties go to the lowest index") {
  DistributionFamily fam;
  fam.domain_size = 1;
  fam.members = {{{1.0}, {0.5}}, {{1.0}, {0.5}}};
  CHECK(WorstCaseError(std::vector<Label>{1}, fam).argmax_index == 0);
}

TEST_CASE("randomized and support errors") {
  auto g = GenGapExample(6);
  CHECK(RandomizedWorstCaseError(g.mixture, g.family) == doctest::Approx(1.0 / 6));
  CHECK(SupportWorstCase(g.mixture, g.family) == 1.0);

  Rng rng(2);
  for (int t = 0; t < 30; ++t) {
    auto fam = RandomFamily(2, 3, rng, true);
    HypothesisClass h;
    for (int j = 0; j < 4; ++j) h.hypotheses.push_back({RandomLabels(2, rng)});
    const double w0 = rng.Uniform01();
    std::vector<std::size_t> idx{0, 3};
    std::vector<double> w{w0, 1 - w0};
    auto f = RandomizedClassifier::FromClass(h, idx, w);

    // Enumerate support x domain x label.
    double worst = 0;
    for (const auto& d : fam.members) {
      double e = 0;
      for (std::size_t s = 0; s < f.support_size(); ++s) {
        for (std::size_t x = 0; x < 2; ++x) {
          const double wrong =
              f.support()[s](x) == 1 ? 1 - d.label_one_prob[x] : d.label_one_prob[x];
          e += f.weights()[s] * d.mass[x] * wrong;
        }
      }
      worst = std::max(worst, e);
    }
    CHECK(RandomizedWorstCaseError(f, fam) == doctest::Approx(worst).epsilon(1e-12));
    CHECK(SupportWorstCase(f, fam) >= RandomizedWorstCaseError(f, fam) - 1e-15);

    std::vector<std::size_t> one{2};
    auto single = RandomizedClassifier::Uniform(h, one);
    CHECK(RandomizedWorstCaseError(single, fam) ==
          doctest::Approx(WorstCaseError(h[2].labels, fam).worst_case));
    CHECK(SupportWorstCase(single, fam) == WorstCaseError(h[2].labels, fam).worst_case);
  }
}

TEST_CASE("randomized error is linear in the weights") {
  Rng rng(9);
  auto fam = RandomFamily(7, 4, rng, true);
  HypothesisClass h;
  for (int j = 0; j < 5; ++j) h.hypotheses.push_back({RandomLabels(7, rng)});
  std::vector<double> w(5);
  double total = 0;
  for (auto& v : w) total += v = rng.Exponential();
  for (auto& v : w) v /= total;
  std::vector<std::size_t> idx{0, 1, 2, 3, 4};
  auto f = RandomizedClassifier::FromClass(h, idx, w);
  auto per = RandomizedErrors(f, fam);
  for (std::size_t i = 0; i < 4; ++i) {
    double dot = 0;
    for (std::size_t j = 0; j < 5; ++j) dot += w[j] * ErrorOnDistribution(h[j].labels, fam.members[i]);
    CHECK(per[i] == doctest::Approx(dot).epsilon(1e-12));
  }
}

TEST_CASE("opt bruteforce") {
  auto g = GenGapExample(5);
  auto opt = OptBruteforce(g.hypotheses, g.family);
  CHECK(opt.value == 1.0);
  CHECK(opt.index == 0);

  GenSpec spec;
  spec.kind = GenKind::kBayesInClass;
  spec.k = 1;
  spec.domain_size = 20;
  for (std::uint64_t s = 0; s < 10; ++s) {
    spec.seed = s;
    auto inst = Generate(spec);
    const auto& d = inst.family.members[0];
    double bayes = 0;
    for (std::size_t x = 0; x < 20; ++x) {
      bayes += d.mass[x] * std::min(d.label_one_prob[x], 1 - d.label_one_prob[x]);
    }
    CHECK(OptBruteforce(inst.hypotheses, inst.family).value ==
          doctest::Approx(bayes).epsilon(1e-12));
  }

  spec.kind = GenKind::kRandomLabelConsistent;
  spec.k = 6;
  spec.domain_size = 40;
  for (std::uint64_t s = 0; s < 5; ++s) {
    spec.seed = s;
    auto inst = Generate(spec);
    auto o = OptBruteforce(inst.hypotheses, inst.family);
    double best = 2;
    for (const auto& h : inst.hypotheses.hypotheses) {
      const double e = WorstCaseError(h.labels, inst.family).worst_case;
      CHECK(o.value <= e);
      best = std::min(best, e);
    }
    CHECK(o.value == best);
  }
}

TEST_CASE("Bayes labeling is pointwise optimal") {
  Rng rng(4);
  for (int t = 0; t < 6; ++t) {
    const std::size_t n = 8 + t;
    const std::size_t k = t < 3 ? 1 : 3;
    auto fam = RandomFamily(n, k, rng, true);
    auto bayes = BayesLabeling(fam);
    // k = 1: Bayes is the best of all 2^n labelings.
    // k > 1: Bayes attains the pointwise minimum per member.
    auto rep = WorstCaseError(bayes, fam);
    for (std::size_t i = 0; i < k; ++i) {
      double pointwise = 0;
      for (std::size_t x = 0; x < n; ++x) {
        const double e = fam.members[i].label_one_prob[x];
        pointwise += fam.members[i].mass[x] * std::min(e, 1 - e);
      }
      CHECK(rep.per_distribution[i] == doctest::Approx(pointwise).epsilon(1e-12));
    }
    if (k == 1) {
      double best = 2;
      for (std::size_t code = 0; code < (std::size_t{1} << n); ++code) {
        std::vector<Label> f(n);
        for (std::size_t x = 0; x < n; ++x) f[x] = (code >> x & 1) ? 1 : -1;
        best = std::min(best, WorstCaseError(f, fam).worst_case);
      }
      CHECK(rep.worst_case == doctest::Approx(best).epsilon(1e-12));
    }
  }
}

TEST_CASE("bias") {
  DistributionFamily fam;
  fam.domain_size = 3;
  fam.members = {{{0.2, 0.3, 0.5}, {1.0, 0.5, 0.8}}};
  CHECK(Bias(0, fam) == 0.5);
  CHECK(Bias(1, fam) == 0.0);
  CHECK(Bias(2, fam) == doctest::Approx(0.3));
  fam.members.push_back({{0.2, 0.3, 0.5}, {0.0, 0.5, 0.8}});
  CHECK_THROWS_AS(Bias(0, fam), ContractError);
}

TEST_CASE("heavy bias threshold") {
  DistributionFamily fam;
  fam.domain_size = 2;
  fam.members = {{{1.0, 0.0}, {1.0, 0.5}}};
  CHECK(IsHeavilyBiased(0, fam, 0.1, 0.1));
  CHECK(0.25 > 0.01 / (8 * std::log(40.0)));
  CHECK_FALSE(IsHeavilyBiased(1, fam, 0.1, 0.1));
  CHECK_THROWS_AS(IsHeavilyBiased(0, fam, 0.0, 0.1), ContractError);
  CHECK_THROWS_AS(IsHeavilyBiased(0, fam, 0.1, 1.0), ContractError);

  // A point sitting exactly on the threshold is light. Pick beta = 1/2 and
  // solve for the mass.
  const double thr = HeavyBiasThreshold(1, 0.1, 0.1, HeavyVariant::kStandard, 360);
  CHECK(thr == doctest::Approx(0.01 / (8 * std::log(40.0))));
  DistributionFamily edge;
  edge.domain_size = 2;
  const double m = thr / 0.25;
  edge.members = {{{m, 1 - m}, {1.0, 0.5}}};
  CHECK(0.25 * m == thr);
  CHECK_FALSE(IsHeavilyBiased(0, edge, 0.1, 0.1));

  const double hthr = HeavyBiasThreshold(2, 0.1, 0.1, HeavyVariant::kHash, 360);
  CHECK(hthr == doctest::Approx(0.01 / (360 * std::pow(std::log(80.0), 2))));
}

TEST_CASE("shattering and VC dimension") {
  auto full = FullLabelingClass(4);
  std::vector<std::size_t> pts{0, 1, 2, 3};
  CHECK(Shatters(full, pts));
  CHECK(VcDimBruteforce(full) == 4);

  HypothesisClass constant;
  constant.hypotheses = {{{1, 1, 1}}};
  CHECK(VcDimBruteforce(constant) == 0);

  auto g = GenGapExample(5);
  for (std::size_t a = 0; a < 5; ++a) {
    for (std::size_t b = a + 1; b < 5; ++b) {
      std::vector<std::size_t> pair{a, b};
      CHECK_FALSE(Shatters(g.hypotheses, pair));
    }
  }
  CHECK(VcDimBruteforce(g.hypotheses) == 1);
  std::vector<std::size_t> many(21, 0);
  CHECK_THROWS_AS(Shatters(full, many), ContractError);
}

TEST_CASE("error report csv") {
  ErrorReport r{{0.25, 0.5}, 0.5, 1};
  CHECK(ErrorReportCsvHeader(2) == "instance_id,classifier_id,er_0,er_1,worst_case,argmax_index");
  CHECK(ErrorReportCsvRow("a", "b", r).rfind("a,b,", 0) == 0);
}
