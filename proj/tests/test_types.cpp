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

#include "mdl/classifier.hpp"
#include "mdl/discrepancy.hpp"
#include "mdl/generators.hpp"
#include "mdl/types.hpp"

using namespace mdl;

namespace {

DistributionFamily OneMember(std::vector<double> mass, std::vector<double> eta) {
  DistributionFamily f;
  f.domain_size = mass.size();
  f.members.push_back({std::move(mass), std::move(eta)});
  return f;
}

bool Mentions(const ValidationReport& r, const std::string& needle) {
  for (const auto& i : r.issues) {
    if (i.message.find(needle) != std::string::npos) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("validate_family") {
  SUBCASE("uniform quarter masses are valid") {
    auto r = ValidateFamily(OneMember({.25, .25, .25, .25}, {1, 1, 1, 1}));
    CHECK(r.ok());
    CHECK(r.issues.empty());
  }
  SUBCASE("mass sum 1.1 is reported") {
    auto r = ValidateFamily(OneMember({0.5, 0.6}, {1, 1}));
    CHECK_FALSE(r.ok());
    CHECK(Mentions(r, "mass sum 1.1 != 1"));
  }
  SUBCASE("out-of-range conditional names the index") {
    auto r = ValidateFamily(OneMember({0.5, 0.5}, {0.3, 1.2}));
    CHECK(r.error_count() == 1);
    CHECK(Mentions(r, "out of [0,1] at index 1"));
  }
  SUBCASE("length mismatch and empty family") {
    DistributionFamily f;
    f.domain_size = 3;
    CHECK(Mentions(ValidateFamily(f), "no members"));
    f.members.push_back({{1.0}, {1.0}});
    CHECK_FALSE(ValidateFamily(f).ok());
    CHECK_THROWS_AS(RequireValidFamily(f), ContractError);
  }
  SUBCASE("negative mass") {
    auto r = ValidateFamily(OneMember({-0.5, 1.5}, {1, 1}));
    CHECK(Mentions(r, "negative mass"));
  }
}

TEST_CASE("is_label_consistent") {
  DistributionFamily f;
  f.domain_size = 3;
  f.members.push_back({{0.2, 0.3, 0.5}, {0.1, 0.5, 0.9}});
  f.members.push_back({{0.6, 0.4, 0.0}, {0.1, 0.5, 0.9}});
  CHECK(IsLabelConsistent(f));

  SUBCASE("disjoint supports with different conditionals") {
    DistributionFamily g;
    g.domain_size = 2;
    g.members.push_back({{1.0, 0.0}, {0.2, 0.7}});
    g.members.push_back({{0.0, 1.0}, {0.9, 0.1}});
    CHECK(IsLabelConsistent(g));
  }
  SUBCASE("zero-mass disagreement is ignored") {
    f.members[1].label_one_prob[2] = 0.0;
    CHECK(IsLabelConsistent(f));
  }
  SUBCASE("shared supported disagreement") {
    f.members[1].label_one_prob[1] = 0.6;
    CHECK_FALSE(IsLabelConsistent(f));
    CHECK(IsLabelConsistent(f, 0.2));
  }
  SUBCASE("reduction families from nonzero matrices are inconsistent") {
    Rng rng(7);
    for (int t = 0; t < 5; ++t) {
      auto inst = PlantedZeroMatrix(6, 0.5, rng);
      CHECK_FALSE(IsLabelConsistent(MatrixToFamily(inst.matrix).family()));
    }
  }
  SUBCASE("generated families are consistent") {
    for (std::uint64_t s = 0; s < 5; ++s) {
      GenSpec spec;
      spec.seed = s;
      CHECK(IsLabelConsistent(Generate(spec).family));
    }
  }
}

TEST_CASE("shared conditional uses the first supporting member") {
  DistributionFamily f;
  f.domain_size = 2;
  f.members.push_back({{1.0, 0.0}, {0.3, 0.1}});
  f.members.push_back({{0.5, 0.5}, {0.3, 0.8}});
  auto eta = SharedLabelOneProb(f);
  CHECK(eta[0] == 0.3);
  CHECK(eta[1] == 0.8);
}

TEST_CASE("hypothesis class validation") {
  HypothesisClass h;
  CHECK_FALSE(ValidateHypothesisClass(h, 2).ok());
  h.hypotheses = {{{1, -1}}, {{1, -1}}};
  auto r = ValidateHypothesisClass(h, 2);
  CHECK(r.ok());
  CHECK(r.issues.size() == 1);
  CHECK(r.ToString().find("warning") != std::string::npos);
  h.hypotheses.push_back({{1, 0}});
  CHECK_FALSE(ValidateHypothesisClass(h, 2).ok());
}

TEST_CASE("randomized classifier construction") {
  HypothesisClass h;
  h.hypotheses = {{{1, 1}}, {{-1, 1}}, {{-1, -1}}};
  std::vector<std::size_t> idx{0, 2, 0};
  std::vector<double> w{0.25, 0.5, 0.25};
  auto f = RandomizedClassifier::FromClass(h, idx, w);
  REQUIRE(f.support_size() == 2);
  CHECK(f.support_indices() == std::vector<std::size_t>{0, 2});
  CHECK(f.weights()[0] == doctest::Approx(0.5));
  CHECK(f.support()[1] == h[2]);

  std::vector<double> bad{0.5, 0.6, 0.0};
  CHECK_THROWS_AS(RandomizedClassifier::FromClass(h, idx, bad), ContractError);
  std::vector<double> neg{1.5, -0.5, 0.0};
  CHECK_THROWS_AS(RandomizedClassifier::FromClass(h, idx, neg), ContractError);
  std::vector<std::size_t> out{5};
  std::vector<double> one{1.0};
  CHECK_THROWS_AS(RandomizedClassifier::FromClass(h, out, one), ContractError);

  std::vector<std::size_t> many{1, 1, 2};
  auto u = RandomizedClassifier::Uniform(h, many);
  REQUIRE(u.support_size() == 2);
  CHECK(u.weights()[0] == doctest::Approx(2.0 / 3.0));
  double total = 0;
  for (double x : u.weights()) total += x;
  CHECK(std::abs(total - 1.0) <= 1e-12);
}

TEST_CASE("explicit deterministic classifier") {
  DeterministicClassifier c(ExplicitLabels{{1, -1, 1}});
  CHECK(c.is_explicit());
  CHECK(c.domain_size() == 3);
  CHECK(c(1) == -1);
  CHECK(c.Labels() == std::vector<Label>{1, -1, 1});
  CHECK_THROWS(DeterministicClassifier(ExplicitLabels{{1, 2}}));
}

TEST_CASE("sign convention") {
  CHECK(SignOf(0.0) == 1);
  CHECK(SignOf(-1e-300) == -1);
  CHECK(SignOf(3.0) == 1);
}
