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

#include "mdl/classifier.hpp"

namespace mdl {

DeterministicClassifier::DeterministicClassifier(ExplicitLabels labels)
    : repr_(std::move(labels)) {
  for (Label l : explicit_labels().labels) {
    if (l != 1 && l != -1) throw ContractError("explicit classifier: label not +-1");
  }
}

DeterministicClassifier::DeterministicClassifier(CompactClassifier compact)
    : repr_(std::move(compact)) {}

std::size_t DeterministicClassifier::domain_size() const {
  if (is_explicit()) return explicit_labels().labels.size();
  return compact().domain_size();
}

Label DeterministicClassifier::operator()(std::size_t x) const {
  if (is_explicit()) {
    const auto& labels = explicit_labels().labels;
    if (x >= labels.size()) throw ContractError("classifier: point out of domain");
    return labels[x];
  }
  return compact()(x);
}

std::vector<Label> DeterministicClassifier::Labels() const {
  if (is_explicit()) return explicit_labels().labels;
  std::vector<Label> out(domain_size());
  for (std::size_t x = 0; x < out.size(); ++x) out[x] = compact()(x);
  return out;
}

}  // namespace mdl
