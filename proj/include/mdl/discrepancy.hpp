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

#include <boost/rational.hpp>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mdl/rng.hpp"
#include "mdl/types.hpp"

namespace mdl {

using Rational = boost::rational<std::int64_t>;

double ToDouble(const Rational& r);

// Square 0/1 matrix with no all-zero rows.
class BinaryMatrix {
 public:
  explicit BinaryMatrix(std::vector<std::vector<std::uint8_t>> rows);

  // First line n, then n lines of n characters from {0,1}.
  static BinaryMatrix Parse(const std::string& text);
  std::string ToString() const;

  std::size_t n() const { return rows_.size(); }
  std::uint8_t at(std::size_t i, std::size_t j) const { return rows_[i][j]; }
  const std::vector<std::uint8_t>& row(std::size_t i) const { return rows_[i]; }
  std::int64_t row_ones(std::size_t i) const { return row_ones_[i]; }

  // a_i . z for a +-1 vector z.
  std::int64_t RowProduct(std::size_t i, std::span<const Label> z) const;

  bool operator==(const BinaryMatrix&) const = default;

 private:
  std::vector<std::vector<std::uint8_t>> rows_;
  std::vector<std::int64_t> row_ones_;
};

struct RationalDistribution {
  std::vector<Rational> mass;
  std::vector<Rational> label_one_prob;
};

struct RationalFamily {
  std::size_t domain_size = 0;
  std::vector<RationalDistribution> members;

  std::size_t k() const { return members.size(); }
  DistributionFamily ToFamily() const;
};

// Direct summation sum_x D(x) Pr[y != f(x) | x], exact.
Rational ExactError(std::span<const Label> f, const RationalDistribution& d);
Rational ExactWorstCaseError(std::span<const Label> f, const RationalFamily& family);

// 2n members ordered D_1^+, D_1^-, ..., D_n^+, D_n^- (member 2i is D_{i+1}^+).
// D_i^+ puts mass 1/m_i on each x_j with a_ij = 1 and labels it +1; D_i^- has
// the same masses and label -1. The shattered points are x_j = j.
struct ReductionFamily {
  BinaryMatrix matrix;
  RationalFamily exact;

  std::size_t n() const { return matrix.n(); }
  DistributionFamily family() const { return exact.ToFamily(); }
};

ReductionFamily MatrixToFamily(const BinaryMatrix& a);

// 1/2 + |z.a_i| / (2 m_i): the error of z on D_i^{-sigma}, sigma = sign(z.a_i)
// with sign(0) = +1.
Rational RowIdentityError(const BinaryMatrix& a, std::size_t row, std::span<const Label> z);

// er_P(z) = max_i (1/2 + |z.a_i|/(2 m_i)). Cross-checks every row against
// direct summation over both paired members and throws std::logic_error on
// disagreement.
Rational ColoringError(std::span<const Label> z, const ReductionFamily& rf);

struct DiscrepancyResult {
  std::vector<Label> coloring;
  std::int64_t inf_norm = 0;
  std::int64_t two_norm_sq = 0;
  double two_norm() const;
};

inline constexpr std::size_t kMaxBruteforceN = 20;

// Minimizes (||Az||_inf, ||Az||_2) over z in {-1,1}^n, returning the
// lexicographically smallest minimizer with -1 < +1. Since z and -z tie, only
// colorings with z_0 = -1 are enumerated.
DiscrepancyResult BruteforceMinDiscrepancy(const BinaryMatrix& a);

struct PlantedInstance {
  BinaryMatrix matrix;
  std::vector<Label> coloring;
};

// Random A with A z = 0 for a uniformly drawn z: each row takes s positions
// where z = +1 and s where z = -1, s >= 1 with expected size growing with
// density. Requires n even.
PlantedInstance PlantedZeroMatrix(std::size_t n, double density, Rng& rng);

// Random rows of weight in [2, max_row_weight], redrawn until brute force
// certifies min_z ||Az||_inf >= min_inf_norm.
BinaryMatrix HighDiscrepancyMatrix(std::size_t n, std::size_t max_row_weight,
                                   std::int64_t min_inf_norm, Rng& rng,
                                   std::size_t max_attempts = 10000);

enum class Verdict { kZeroDiscrepancyLikely, kHighDiscrepancy };

std::string ToString(Verdict v);

// Computes er_P(f) exactly over the reduction family of A and answers
// "zero discrepancy" iff er_P(f) < 1/2 + eps.
Verdict Distinguish(const BinaryMatrix& a, std::span<const Label> f, double eps);

// Adds a point x_0 (index n) that every member returns as (x_0, +1) with
// probability 1 - 2 opt', rescaling the original masses by 2 opt'. Accepts
// opt' in (0, 1/2]; at 1/2 the dummy point carries zero mass.
RationalFamily DummyPointVariant(const ReductionFamily& rf, const Rational& opt_prime);

// min over all labelings of the domain of the exact worst-case error, by
// direct summation. Domain size <= 21.
Rational MinLabelingError(const RationalFamily& family);

// argmin over the 2^n labelings of the shattered points of er_P, first in
// binary counting order (bit j set means +1 at point j). Requires n <= 20.
std::vector<Label> MinErrorLabeling(const ReductionFamily& rf);

// er_P of MinErrorLabeling(rf).
Rational MinDeterministicError(const ReductionFamily& rf);

}  // namespace mdl
