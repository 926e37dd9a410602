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

#include "mdl/hashing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mdl {
namespace {

using u128 = unsigned __int128;

std::uint64_t MulMod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t PowMod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = MulMod(result, base, m);
    base = MulMod(base, base, m);
    exp >>= 1;
  }
  return result;
}

void CheckPrime(std::uint64_t p) {
  if (!IsPrime(p)) {
    throw ContractError("hash modulus " + std::to_string(p) + " is not prime");
  }
}

}  // namespace

bool IsPrime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t small : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % small == 0) return n == small;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // These bases are a deterministic witness set for n < 2^64.
  for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    std::uint64_t x = PowMod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = MulMod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::uint64_t NextPrime(std::uint64_t n) {
  constexpr std::uint64_t kLimit = std::uint64_t{1} << 62;
  if (n > kLimit) throw std::overflow_error("NextPrime: argument beyond 2^62");
  if (n <= 2) return 2;
  std::uint64_t c = n | 1;
  while (!IsPrime(c)) {
    c += 2;
    if (c > kLimit) throw std::overflow_error("NextPrime: result beyond 2^62");
  }
  return c;
}

PolyHash::PolyHash(std::uint64_t prime, std::vector<std::uint64_t> coefficients)
    : PolyHash(Unchecked{}, prime, std::move(coefficients)) {
  if (degree() < 2 || degree() % 2 != 0) {
    throw ContractError("hash degree r must be even and >= 2, got " +
                        std::to_string(degree()));
  }
}

PolyHash PolyHash::AnyDegreeForTesting(std::uint64_t prime,
                                       std::vector<std::uint64_t> coefficients) {
  if (coefficients.empty()) throw ContractError("hash degree r must be >= 1");
  return PolyHash(Unchecked{}, prime, std::move(coefficients));
}

PolyHash::PolyHash(Unchecked, std::uint64_t prime,
                   std::vector<std::uint64_t> coefficients)
    : prime_(prime), coefficients_(std::move(coefficients)) {
  CheckPrime(prime_);
  for (auto c : coefficients_) {
    if (c >= prime_) throw ContractError("hash coefficient not in [0, p)");
  }
}

std::uint64_t PolyHash::operator()(std::uint64_t x) const {
  if (x >= prime_) {
    throw ContractError("hash key " + std::to_string(x) + " not below p = " +
                        std::to_string(prime_));
  }
  std::uint64_t acc = 0;
  for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) {
    acc = static_cast<std::uint64_t>((static_cast<u128>(acc) * x + *it) % prime_);
  }
  return acc;
}

PolyHash SampleHash(std::uint64_t prime, std::size_t degree, Rng& rng) {
  CheckPrime(prime);
  std::vector<std::uint64_t> coefficients(degree);
  for (auto& c : coefficients) c = rng.UniformInt(prime);
  return PolyHash(prime, std::move(coefficients));
}

std::size_t IndependenceViolations(std::uint64_t prime, std::size_t r) {
  CheckPrime(prime);
  if (r == 0 || r > prime) throw ContractError("need 1 <= r <= p");
  std::uint64_t cells = 1;
  for (std::size_t i = 0; i < r; ++i) {
    cells *= prime;
    if (cells > (1u << 22)) throw ContractError("p^r too large for exhaustive check");
  }
  std::vector<PolyHash> family;
  family.reserve(cells);
  for (std::uint64_t code = 0; code < cells; ++code) {
    std::vector<std::uint64_t> a(r);
    for (std::uint64_t c = code, i = 0; i < r; ++i, c /= prime) a[i] = c % prime;
    family.push_back(PolyHash::AnyDegreeForTesting(prime, std::move(a)));
  }
  // Walk the r-subsets of [p] in lexicographic order.
  std::vector<std::uint64_t> keys(r);
  for (std::size_t i = 0; i < r; ++i) keys[i] = i;
  std::vector<char> seen(cells);
  std::size_t violations = 0;
  while (true) {
    std::fill(seen.begin(), seen.end(), 0);
    std::uint64_t distinct = 0;
    for (const auto& q : family) {
      std::uint64_t cell = 0;
      for (std::size_t i = r; i-- > 0;) cell = cell * prime + q(keys[i]);
      distinct += !seen[cell];
      seen[cell] = 1;
    }
    violations += distinct != cells;
    std::size_t i = r;
    while (i > 0 && keys[i - 1] == prime - r + i - 1) --i;
    if (i == 0) break;
    ++keys[i - 1];
    for (std::size_t j = i; j < r; ++j) keys[j] = keys[j - 1] + 1;
  }
  return violations;
}

double HashedPlusFrequency(double marginal, std::uint64_t prime, std::size_t degree,
                           std::size_t draws, Rng& rng) {
  if (draws == 0) throw ContractError("need at least one draw");
  const std::uint64_t cut = PositiveHashCount(marginal, prime);
  std::size_t plus = 0;
  for (std::size_t d = 0; d < draws; ++d) plus += SampleHash(prime, degree, rng)(0) < cut;
  return static_cast<double>(plus) / static_cast<double>(draws);
}

HashParams ChooseHashParams(std::size_t k, double eps, double delta,
                            std::size_t domain_size, double c_prime) {
  if (k == 0) throw ContractError("ChooseHashParams: k must be positive");
  if (!(eps > 0 && eps < 1) || !(delta > 0 && delta < 1)) {
    throw ContractError("ChooseHashParams: eps and delta must lie in (0,1)");
  }
  if (!(c_prime > 0)) throw ContractError("ChooseHashParams: C' must be positive");
  const double log_term = std::log(4.0 * static_cast<double>(k) / delta);

  HashParams params;
  auto r = static_cast<std::size_t>(std::ceil(2.0 * log_term));
  if (r % 2 != 0) ++r;
  params.degree = std::max<std::size_t>(r, 2);

  const double alpha = 2.0 * eps / (log_term * std::sqrt(c_prime));
  const auto by_domain = static_cast<std::uint64_t>(domain_size) + 1;
  const auto by_eps = static_cast<std::uint64_t>(std::ceil(log_term / (eps * eps * eps)));
  const auto by_alpha = static_cast<std::uint64_t>(std::ceil(4.0 * alpha * alpha / eps)) + 1;
  params.prime = NextPrime(std::max({by_domain, by_eps, by_alpha}));
  return params;
}

double MarginalOneProbability(const RandomizedClassifier& f, std::size_t x) {
  long double acc = 0.0L;
  const auto& support = f.support();
  const auto& weights = f.weights();
  for (std::size_t j = 0; j < support.size(); ++j) {
    if (support[j](x) == 1) acc += weights[j];
  }
  return static_cast<double>(acc);
}

std::uint64_t PositiveHashCount(double marginal, std::uint64_t prime) {
  const long double t = static_cast<long double>(marginal) * prime;
  const long double nearest = std::nearbyint(t);
  long double count = std::abs(t - nearest) <= 1e-9L * std::max(1.0L, t)
                          ? nearest
                          : std::floor(t);
  count = std::clamp(count, 0.0L, static_cast<long double>(prime));
  return static_cast<std::uint64_t>(count);
}

CompactClassifier::CompactClassifier(std::size_t domain_size, PolyHash hash,
                                     std::map<std::size_t, Label> overrides,
                                     RandomizedClassifier mixture)
    : domain_size_(domain_size),
      hash_(std::move(hash)),
      overrides_(std::move(overrides)),
      mixture_(std::move(mixture)) {
  if (hash_.prime() <= domain_size_) {
    throw ContractError("compact classifier: prime must exceed domain size");
  }
  if (mixture_.domain_size() != domain_size_) {
    throw ContractError("compact classifier: mixture domain size mismatch");
  }
  for (const auto& [x, label] : overrides_) {
    if (x >= domain_size_ || (label != 1 && label != -1)) {
      throw ContractError("compact classifier: bad override entry");
    }
  }
}

Label CompactClassifier::operator()(std::size_t x) const {
  if (x >= domain_size_) throw ContractError("compact classifier: point out of domain");
  if (auto it = overrides_.find(x); it != overrides_.end()) return it->second;
  const std::uint64_t count =
      PositiveHashCount(MarginalOneProbability(mixture_, x), hash_.prime());
  return hash_(x) < count ? Label{1} : Label{-1};
}

double LimitedIndependenceTailBound(std::size_t r, double q, double t) {
  if (t <= 0) return 1.0;
  const double base = static_cast<double>(r) * q / (std::exp(2.0 / 3.0) * t * t);
  return std::pow(base, static_cast<double>(r) / 2.0);
}

double HoeffdingTailBound(std::size_t n, double t) {
  return 2.0 * std::exp(-2.0 * t * t / static_cast<double>(n));
}

bool TailCheckReport::ok() const {
  return std::none_of(points.begin(), points.end(),
                      [](const TailCheckPoint& p) { return p.violation; });
}

TailCheckReport EmpiricalTailBoundCheck(const TailCheckConfig& config) {
  if (config.num_variables == 0 || config.draws == 0) {
    throw ContractError("tail check: need at least one variable and one draw");
  }
  if (config.prime <= config.num_variables) {
    throw ContractError("tail check: prime must exceed the number of keys");
  }
  const std::uint64_t cut = (config.prime + 1) / 2;
  const double prob = static_cast<double>(cut) / static_cast<double>(config.prime);
  const auto n = static_cast<double>(config.num_variables);

  TailCheckReport report;
  report.mean = n * prob;
  report.variance = n * prob * (1.0 - prob);
  report.q = std::max(static_cast<double>(config.degree), report.variance);

  std::vector<double> deviations;
  for (double mult : config.deviation_multipliers) {
    deviations.push_back(mult * std::sqrt(n));
  }
  std::vector<std::size_t> hits(deviations.size(), 0);

  Rng rng(config.seed);
  for (std::size_t draw = 0; draw < config.draws; ++draw) {
    std::size_t z = 0;
    if (config.fully_independent) {
      for (std::size_t x = 0; x < config.num_variables; ++x) {
        z += rng.UniformInt(config.prime) < cut;
      }
    } else {
      const PolyHash q = SampleHash(config.prime, config.degree, rng);
      for (std::size_t x = 0; x < config.num_variables; ++x) z += q(x) < cut;
    }
    const double dev = std::abs(static_cast<double>(z) - report.mean);
    for (std::size_t j = 0; j < deviations.size(); ++j) {
      if (dev >= deviations[j]) ++hits[j];
    }
  }

  for (std::size_t j = 0; j < deviations.size(); ++j) {
    TailCheckPoint point;
    point.deviation = deviations[j];
    point.observed = static_cast<double>(hits[j]) / static_cast<double>(config.draws);
    const double raw = config.fully_independent
                           ? HoeffdingTailBound(config.num_variables, deviations[j])
                           : LimitedIndependenceTailBound(config.degree, report.q,
                                                          deviations[j]);
    point.bound = std::min(1.0, raw);
    point.sampling_sigma =
        std::sqrt(point.bound * (1.0 - point.bound) / static_cast<double>(config.draws));
    point.violation = point.observed > point.bound + 3.0 * point.sampling_sigma;
    report.points.push_back(point);
  }
  return report;
}

}  // namespace mdl
