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
#include <variant>
#include <vector>

#include "mdl/hashing.hpp"
#include "mdl/types.hpp"

namespace mdl {

struct ExplicitLabels {
  std::vector<Label> labels;
};

// A total +-1 labeling of the domain, stored either as an explicit table or
// in the compact override-table + hash + mixture form.
class DeterministicClassifier {
 public:
  explicit DeterministicClassifier(ExplicitLabels labels);
  explicit DeterministicClassifier(CompactClassifier compact);

  bool is_explicit() const { return std::holds_alternative<ExplicitLabels>(repr_); }
  bool is_compact() const { return std::holds_alternative<CompactClassifier>(repr_); }
  const ExplicitLabels& explicit_labels() const { return std::get<ExplicitLabels>(repr_); }
  const CompactClassifier& compact() const { return std::get<CompactClassifier>(repr_); }

  std::size_t domain_size() const;
  Label operator()(std::size_t x) const;

  // Full evaluation over 0..domain_size()-1.
  std::vector<Label> Labels() const;

 private:
  std::variant<ExplicitLabels, CompactClassifier> repr_;
};

}  // namespace mdl
