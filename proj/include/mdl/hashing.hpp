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
#include <map>
#include <vector>

#include "mdl/rng.hpp"
#include "mdl/types.hpp"

namespace mdl {

// Deterministic Miller-Rabin, exact for all 64-bit inputs.
bool IsPrime(std::uint64_t n);

// Smallest prime >= n. Throws std::overflow_error beyond 2^62.
std::uint64_t NextPrime(std::uint64_t n);

// q(x) = sum_{i<r} alpha_i x^i (mod p) with coefficients in [0, p). A uniformly
// drawn coefficient vector makes q an r-wise independent map [p] -> [p].
class PolyHash {
 public:
  // Requires p prime and r = coefficients.size() even and >= 2.
  PolyHash(std::uint64_t prime, std::vector<std::uint64_t> coefficients);

  // Accepts any degree r >= 1. Only meant for exhaustive independence tests
  // and constant-polynomial checks; carries no rounding guarantee.
  static PolyHash AnyDegreeForTesting(std::uint64_t prime,
                                      std::vector<std::uint64_t> coefficients);

  std::uint64_t prime() const { return prime_; }
  std::size_t degree() const { return coefficients_.size(); }
  const std::vector<std::uint64_t>& coefficients() const { return coefficients_; }

  // Horner evaluation with 128-bit intermediates. Throws for x >= p.
  std::uint64_t operator()(std::uint64_t x) const;

  bool operator==(const PolyHash&) const = default;

 private:
  struct Unchecked {};
  PolyHash(Unchecked, std::uint64_t prime, std::vector<std::uint64_t> coefficients);

  std::uint64_t prime_ = 2;
  std::vector<std::uint64_t> coefficients_;
};

PolyHash SampleHash(std::uint64_t prime, std::size_t degree, Rng& rng);

// Exhaustive r-wise independence check of the degree-(r-1) polynomial family
// over F_p: for every set of r distinct keys, counts key sets whose image
// vectors do not cover [p]^r exactly once. Requires p^r <= 2^22.
std::size_t IndependenceViolations(std::uint64_t prime, std::size_t r);

// Fraction of fresh hashes q with q(0) < PositiveHashCount(marginal, p).
double HashedPlusFrequency(double marginal, std::uint64_t prime, std::size_t degree,
                           std::size_t draws, Rng& rng);

struct HashParams {
  std::size_t degree = 2;   // r
  std::uint64_t prime = 2;  // p = |Y|
};

// r = smallest even integer >= max(2, 2 ln(4k/delta)).
// p = NextPrime(max(|X| + 1, ceil(eps^-3 ln(4k/delta)), ceil(4 alpha^2/eps) + 1))
// with alpha = 2 eps / (ln(4k/delta) sqrt(c_prime)).
HashParams ChooseHashParams(std::size_t k, double eps, double delta,
                            std::size_t domain_size, double c_prime);

// Pr_{f~F}[f(x) = +1].
double MarginalOneProbability(const RandomizedClassifier& f, std::size_t x);

// floor(marginal * p), the number of hash values rounded to +1. The product is
// formed in long double; a product within 1e-9 (relative) of an integer is
// snapped to it so that exactly representable marginals like 1/3 * 3 land on
// the integer instead of one below it.
std::uint64_t PositiveHashCount(double marginal, std::uint64_t prime);

// The compact branch of a deterministic classifier: a bias-table override map
// plus a hash-rounded mixture everywhere else. f(x) = +1 iff
// q(x) + 1 <= marginal(x) * p, i.e. q(x) < PositiveHashCount(marginal(x), p).
class CompactClassifier {
 public:
  CompactClassifier(std::size_t domain_size, PolyHash hash,
                    std::map<std::size_t, Label> overrides,
                    RandomizedClassifier mixture);

  std::size_t domain_size() const { return domain_size_; }
  const PolyHash& hash() const { return hash_; }
  const std::map<std::size_t, Label>& overrides() const { return overrides_; }
  const RandomizedClassifier& mixture() const { return mixture_; }
  std::uint64_t range_size() const { return hash_.prime(); }

  Label operator()(std::size_t x) const;

 private:
  std::size_t domain_size_;
  PolyHash hash_;
  std::map<std::size_t, Label> overrides_;
  RandomizedClassifier mixture_;
};

// Tail bound for sums of r-wise independent variables with |Z_i - EZ_i| <= 1:
// Pr[|Z - mu| >= t] <= (r q / (e^{2/3} t^2))^{r/2}, q >= max(r, var Z).
double LimitedIndependenceTailBound(std::size_t r, double q, double t);

// Two-sided Hoeffding bound for n independent [0,1] variables.
double HoeffdingTailBound(std::size_t n, double t);

struct TailCheckConfig {
  std::size_t num_variables = 64;  // n
  std::size_t degree = 4;          // r
  std::uint64_t prime = 1000003;
  std::size_t draws = 100000;
  std::vector<double> deviation_multipliers{0.5, 1.0, 2.0};  // t = mult * sqrt(n)
  std::uint64_t seed = 1;
  // Draw every indicator from fresh randomness instead of one hash per draw,
  // and compare against the Hoeffding bound. Harness cross-check.
  bool fully_independent = false;
};

struct TailCheckPoint {
  double deviation = 0.0;   // t
  double observed = 0.0;    // empirical Pr[|Z - mu| >= t]
  double bound = 0.0;       // capped at 1
  double sampling_sigma = 0.0;
  bool violation = false;   // observed > bound + 3 sigma
};

struct TailCheckReport {
  double mean = 0.0;
  double variance = 0.0;
  double q = 0.0;
  std::vector<TailCheckPoint> points;

  bool ok() const;
};

// Indicators Z_x = 1{q(x) < (p+1)/2} for x = 0..n-1 under a fresh hash per
// draw; Z = sum Z_x has known mean and variance by pairwise independence.
TailCheckReport EmpiricalTailBoundCheck(const TailCheckConfig& config);

}  // namespace mdl
