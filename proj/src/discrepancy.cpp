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

#include "mdl/discrepancy.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace mdl {
namespace {

const Rational kHalf(1, 2);

void CheckColoring(const BinaryMatrix& a, std::span<const Label> z) {
  if (z.size() != a.n()) throw ContractError("coloring length does not match n");
  for (Label v : z) {
    if (v != 1 && v != -1) throw ContractError("coloring entries must be +-1");
  }
}

std::vector<Label> LabelsFromCode(std::uint64_t code, std::size_t n) {
  std::vector<Label> z(n);
  for (std::size_t j = 0; j < n; ++j) {
    z[j] = (code >> j & 1u) ? Label{1} : Label{-1};
  }
  return z;
}

}  // namespace

double ToDouble(const Rational& r) { return boost::rational_cast<double>(r); }

BinaryMatrix::BinaryMatrix(std::vector<std::vector<std::uint8_t>> rows)
    : rows_(std::move(rows)) {
  if (rows_.empty()) throw ContractError("matrix must have n >= 1");
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (rows_[i].size() != rows_.size()) throw ContractError("matrix must be square");
    std::int64_t ones = 0;
    for (auto v : rows_[i]) {
      if (v > 1) throw ContractError("matrix entries must be 0 or 1");
      ones += v;
    }
    if (ones == 0) {
      throw ContractError("matrix row " + std::to_string(i) + " has no ones");
    }
    row_ones_.push_back(ones);
  }
}

BinaryMatrix BinaryMatrix::Parse(const std::string& text) {
  std::istringstream in(text);
  std::size_t n = 0;
  if (!(in >> n) || n == 0) throw ContractError("matrix file: bad dimension line");
  std::vector<std::vector<std::uint8_t>> rows;
  std::string line;
  while (rows.size() < n && in >> line) {
    if (line.size() != n) {
      throw ContractError("matrix file: row " + std::to_string(rows.size()) +
                          " has length " + std::to_string(line.size()));
    }
    std::vector<std::uint8_t> row(n);
    for (std::size_t j = 0; j < n; ++j) {
      if (line[j] != '0' && line[j] != '1') {
        throw ContractError("matrix file: characters must be 0 or 1");
      }
      row[j] = static_cast<std::uint8_t>(line[j] - '0');
    }
    rows.push_back(std::move(row));
  }
  if (rows.size() != n) throw ContractError("matrix file: expected " + std::to_string(n) + " rows");
  return BinaryMatrix(std::move(rows));
}

std::string BinaryMatrix::ToString() const {
  std::ostringstream os;
  os << n() << '\n';
  for (const auto& row : rows_) {
    for (auto v : row) os << static_cast<char>('0' + v);
    os << '\n';
  }
  return os.str();
}

std::int64_t BinaryMatrix::RowProduct(std::size_t i, std::span<const Label> z) const {
  std::int64_t s = 0;
  for (std::size_t j = 0; j < n(); ++j) {
    if (rows_[i][j]) s += z[j];
  }
  return s;
}

DistributionFamily RationalFamily::ToFamily() const {
  DistributionFamily fam;
  fam.domain_size = domain_size;
  for (const auto& d : members) {
    LabeledDistribution m;
    for (const auto& v : d.mass) m.mass.push_back(ToDouble(v));
    for (const auto& v : d.label_one_prob) m.label_one_prob.push_back(ToDouble(v));
    fam.members.push_back(std::move(m));
  }
  return fam;
}

Rational ExactError(std::span<const Label> f, const RationalDistribution& d) {
  if (f.size() != d.mass.size()) throw ContractError("exact error: size mismatch");
  Rational err(0);
  for (std::size_t x = 0; x < f.size(); ++x) {
    if (d.mass[x].numerator() == 0) continue;
    const Rational wrong = f[x] == 1 ? Rational(1) - d.label_one_prob[x] : d.label_one_prob[x];
    err += d.mass[x] * wrong;
  }
  return err;
}

Rational ExactWorstCaseError(std::span<const Label> f, const RationalFamily& family) {
  Rational worst(0);
  for (const auto& d : family.members) worst = std::max(worst, ExactError(f, d));
  return worst;
}

ReductionFamily MatrixToFamily(const BinaryMatrix& a) {
  const std::size_t n = a.n();
  RationalFamily fam;
  fam.domain_size = n;
  for (std::size_t i = 0; i < n; ++i) {
    for (int label_one : {1, 0}) {
      RationalDistribution d;
      d.mass.assign(n, Rational(0));
      d.label_one_prob.assign(n, Rational(label_one));
      for (std::size_t j = 0; j < n; ++j) {
        if (a.at(i, j)) d.mass[j] = Rational(1, a.row_ones(i));
      }
      fam.members.push_back(std::move(d));
    }
  }
  return {a, std::move(fam)};
}

Rational RowIdentityError(const BinaryMatrix& a, std::size_t row, std::span<const Label> z) {
  CheckColoring(a, z);
  const std::int64_t s = a.RowProduct(row, z);
  return kHalf + Rational(s < 0 ? -s : s, 2 * a.row_ones(row));
}

Rational ColoringError(std::span<const Label> z, const ReductionFamily& rf) {
  CheckColoring(rf.matrix, z);
  Rational worst(0);
  for (std::size_t i = 0; i < rf.n(); ++i) {
    const Rational identity = RowIdentityError(rf.matrix, i, z);
    const Rational direct = std::max(ExactError(z, rf.exact.members[2 * i]),
                                     ExactError(z, rf.exact.members[2 * i + 1]));
    if (identity != direct) {
      throw std::logic_error("row identity disagrees with direct summation");
    }
    worst = std::max(worst, identity);
  }
  return worst;
}

double DiscrepancyResult::two_norm() const {
  return std::sqrt(static_cast<double>(two_norm_sq));
}

DiscrepancyResult BruteforceMinDiscrepancy(const BinaryMatrix& a) {
  const std::size_t n = a.n();
  if (n > kMaxBruteforceN) throw ContractError("brute-force discrepancy limited to n <= 20");
  // Bit (n-1-j) of the code holds z_j, so ascending codes are ascending
  // lexicographic order; z_0 = -1 fixes the top bit to zero.
  std::vector<std::uint32_t> masks(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (a.at(i, j)) masks[i] |= std::uint32_t{1} << (n - 1 - j);
    }
  }
  const std::uint32_t count = std::uint32_t{1} << (n - 1);
  std::int64_t best_inf = std::numeric_limits<std::int64_t>::max();
  std::int64_t best_sq = std::numeric_limits<std::int64_t>::max();
  std::uint32_t best_code = 0;
  for (std::uint32_t code = 0; code < count; ++code) {
    std::int64_t inf = 0, sq = 0;
    for (std::size_t i = 0; i < n && inf <= best_inf; ++i) {
      const std::int64_t s = 2 * std::popcount(masks[i] & code) - a.row_ones(i);
      inf = std::max<std::int64_t>(inf, s < 0 ? -s : s);
      sq += s * s;
    }
    if (inf < best_inf || (inf == best_inf && sq < best_sq)) {
      best_inf = inf;
      best_sq = sq;
      best_code = code;
    }
  }
  DiscrepancyResult result;
  result.coloring.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    result.coloring[j] = (best_code >> (n - 1 - j) & 1u) ? Label{1} : Label{-1};
  }
  result.inf_norm = best_inf;
  result.two_norm_sq = best_sq;
  return result;
}

PlantedInstance PlantedZeroMatrix(std::size_t n, double density, Rng& rng) {
  if (n == 0 || n % 2 != 0) throw ContractError("planted instance needs an even n");
  if (!(density >= 0 && density <= 1)) throw ContractError("density must lie in [0,1]");
  std::vector<Label> z(n);
  std::vector<std::size_t> plus, minus;
  do {
    plus.clear();
    minus.clear();
    for (std::size_t j = 0; j < n; ++j) {
      z[j] = rng.Bernoulli(0.5) ? Label{1} : Label{-1};
      (z[j] == 1 ? plus : minus).push_back(j);
    }
  } while (plus.empty() || minus.empty());

  auto choose = [&rng](std::vector<std::size_t>& pool, std::size_t s,
                       std::vector<std::uint8_t>& row) {
    for (std::size_t t = 0; t < s; ++t) {
      const std::size_t pick = t + rng.UniformInt(pool.size() - t);
      std::swap(pool[t], pool[pick]);
      row[pool[t]] = 1;
    }
  };

  const std::size_t cap = std::min(plus.size(), minus.size());
  std::vector<std::vector<std::uint8_t>> rows;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t s = 1;
    for (std::size_t t = 1; t < cap; ++t) s += rng.Bernoulli(density);
    std::vector<std::uint8_t> row(n, 0);
    choose(plus, s, row);
    choose(minus, s, row);
    rows.push_back(std::move(row));
  }
  return {BinaryMatrix(std::move(rows)), std::move(z)};
}

BinaryMatrix HighDiscrepancyMatrix(std::size_t n, std::size_t max_row_weight,
                                   std::int64_t min_inf_norm, Rng& rng,
                                   std::size_t max_attempts) {
  if (n < 2 || max_row_weight < 2 || max_row_weight > n) {
    throw ContractError("high-discrepancy generator: need 2 <= max_row_weight <= n");
  }
  std::vector<std::size_t> pool(n);
  for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
    std::vector<std::vector<std::uint8_t>> rows;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t w = 2 + rng.UniformInt(max_row_weight - 1);
      for (std::size_t j = 0; j < n; ++j) pool[j] = j;
      std::vector<std::uint8_t> row(n, 0);
      for (std::size_t t = 0; t < w; ++t) {
        const std::size_t pick = t + rng.UniformInt(n - t);
        std::swap(pool[t], pool[pick]);
        row[pool[t]] = 1;
      }
      rows.push_back(std::move(row));
    }
    BinaryMatrix a(std::move(rows));
    if (BruteforceMinDiscrepancy(a).inf_norm >= min_inf_norm) return a;
  }
  throw std::runtime_error("high-discrepancy generator: no instance found");
}

std::string ToString(Verdict v) {
  return v == Verdict::kZeroDiscrepancyLikely ? "zero_discrepancy_likely"
                                              : "high_discrepancy";
}

Verdict Distinguish(const BinaryMatrix& a, std::span<const Label> f, double eps) {
  CheckColoring(a, f);
  Rational err(0);
  for (std::size_t i = 0; i < a.n(); ++i) err = std::max(err, RowIdentityError(a, i, f));
  const long double value = static_cast<long double>(err.numerator()) /
                            static_cast<long double>(err.denominator());
  return value < 0.5L + static_cast<long double>(eps) ? Verdict::kZeroDiscrepancyLikely
                                                       : Verdict::kHighDiscrepancy;
}

RationalFamily DummyPointVariant(const ReductionFamily& rf, const Rational& opt_prime) {
  if (opt_prime.numerator() <= 0 || opt_prime > kHalf) {
    throw ContractError("dummy-point variant needs opt' in (0, 1/2]");
  }
  const Rational scale = 2 * opt_prime;
  RationalFamily out;
  out.domain_size = rf.exact.domain_size + 1;
  for (const auto& d : rf.exact.members) {
    RationalDistribution m;
    for (const auto& v : d.mass) m.mass.push_back(v * scale);
    m.mass.push_back(Rational(1) - scale);
    m.label_one_prob = d.label_one_prob;
    m.label_one_prob.push_back(Rational(1));
    out.members.push_back(std::move(m));
  }
  return out;
}

Rational MinLabelingError(const RationalFamily& family) {
  const std::size_t n = family.domain_size;
  if (n == 0 || n > 21) throw ContractError("labeling enumeration limited to 1..21 points");
  Rational best(2);
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << n); ++code) {
    best = std::min(best, ExactWorstCaseError(LabelsFromCode(code, n), family));
  }
  return best;
}

std::vector<Label> MinErrorLabeling(const ReductionFamily& rf) {
  const std::size_t n = rf.n();
  if (n > kMaxBruteforceN) throw ContractError("labeling enumeration limited to n <= 20");
  // Row identity per labeling; MinLabelingError is the direct-summation twin.
  Rational best(2);
  std::uint64_t best_code = 0;
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << n); ++code) {
    const auto z = LabelsFromCode(code, n);
    Rational worst(0);
    for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, RowIdentityError(rf.matrix, i, z));
    if (worst < best) {
      best = worst;
      best_code = code;
    }
  }
  return LabelsFromCode(best_code, n);
}

Rational MinDeterministicError(const ReductionFamily& rf) {
  const auto z = MinErrorLabeling(rf);
  Rational worst(0);
  for (std::size_t i = 0; i < rf.n(); ++i) worst = std::max(worst, RowIdentityError(rf.matrix, i, z));
  return worst;
}

}  // namespace mdl
