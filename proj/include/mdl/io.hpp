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

#include <string>

#include "json.hpp"
#include "mdl/classifier.hpp"
#include "mdl/derandomizer.hpp"
#include "mdl/generators.hpp"
#include "mdl/hashing.hpp"
#include "mdl/types.hpp"

namespace mdl {

using Json = nlohmann::json;

std::string ReadTextFile(const std::string& path);
void WriteTextFile(const std::string& path, const std::string& content);

Json ToJson(const GenSpec& spec);
GenSpec GenSpecFromJson(const Json& j);

Json ToJson(const DerandConfig& config);

// Instance files: domain_size, distributions[{mass, label_one_prob}],
// optional shared_label_one_prob (used for members that omit their own),
// hypotheses, optional vc_dim, optional gen_spec stanza.
Json InstanceToJson(const Instance& instance);
Instance InstanceFromJson(const Json& j);

Json RandomizedToJson(const RandomizedClassifier& f);
RandomizedClassifier RandomizedFromJson(const Json& j, const HypothesisClass& h);

// Classifier files: kind = explicit (labels) or compact (domain_size, prime,
// degree_r, coefficients, range_size, t_table [[x, label]...], and the
// mixture as support_indices/weights into the instance's hypothesis class).
// Reading a compact classifier therefore needs the hypothesis class.
Json ClassifierToJson(const DeterministicClassifier& c);
DeterministicClassifier ClassifierFromJson(const Json& j, const HypothesisClass* h);

// "p <prime>\nr <degree>\ncoefficients <a_0> ... <a_{r-1}>\n"
std::string FormatHashStanza(const PolyHash& q);
PolyHash ParseHashStanza(const std::string& text);

}  // namespace mdl
