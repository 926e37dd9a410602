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

#include "mdl/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mdl {
namespace {

std::vector<Label> LabelsFromJson(const Json& j) {
  std::vector<Label> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    const int l = v.get<int>();
    if (l != 1 && l != -1) throw ContractError("label entries must be -1 or +1");
    out.push_back(static_cast<Label>(l));
  }
  return out;
}

Json LabelsToJson(const std::vector<Label>& labels) {
  Json arr = Json::array();
  for (Label l : labels) arr.push_back(static_cast<int>(l));
  return arr;
}

}  // namespace

std::string ReadTextFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void WriteTextFile(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

Json ToJson(const GenSpec& spec) {
  return Json{{"kind", ToString(spec.kind)},
              {"domain_size", spec.domain_size},
              {"k", spec.k},
              {"hypothesis_count", spec.hypothesis_count},
              {"bias_profile",
               {{"near_det_fraction", spec.bias.near_det_fraction},
                {"near_det_min_abs_beta", spec.bias.near_det_min_abs_beta},
                {"fair_fraction", spec.bias.fair_fraction},
                {"other_max_abs_beta", spec.bias.other_max_abs_beta}}},
              {"eps", spec.eps},
              {"delta", spec.delta},
              {"seed", spec.seed}};
}

GenSpec GenSpecFromJson(const Json& j) {
  GenSpec spec;
  spec.kind = ParseGenKind(j.at("kind").get<std::string>());
  spec.domain_size = j.value("domain_size", spec.domain_size);
  spec.k = j.value("k", spec.k);
  spec.hypothesis_count = j.value("hypothesis_count", spec.hypothesis_count);
  if (j.contains("bias_profile")) {
    const auto& b = j.at("bias_profile");
    spec.bias.near_det_fraction = b.value("near_det_fraction", spec.bias.near_det_fraction);
    spec.bias.near_det_min_abs_beta =
        b.value("near_det_min_abs_beta", spec.bias.near_det_min_abs_beta);
    spec.bias.fair_fraction = b.value("fair_fraction", spec.bias.fair_fraction);
    spec.bias.other_max_abs_beta = b.value("other_max_abs_beta", spec.bias.other_max_abs_beta);
  }
  spec.eps = j.value("eps", spec.eps);
  spec.delta = j.value("delta", spec.delta);
  spec.seed = j.value("seed", spec.seed);
  return spec;
}

Json ToJson(const DerandConfig& c) {
  return Json{{"eps", c.eps},
              {"delta", c.delta},
              {"c_const", c.c_const},
              {"c_prime", c.c_prime},
              {"mode", c.mode == DerandMode::kTheory ? "theory" : "calibrated"},
              {"m_override", c.m_override},
              {"threshold_scale", c.threshold_scale},
              {"rounding",
               c.rounding == RoundingMode::kExplicitPerPoint ? "explicit" : "hash"},
              {"seed", c.seed}};
}

Json InstanceToJson(const Instance& instance) {
  const auto& fam = instance.family;
  Json j;
  j["domain_size"] = fam.domain_size;
  bool shared = !fam.members.empty();
  for (const auto& d : fam.members) {
    shared = shared && d.label_one_prob == fam.members.front().label_one_prob;
  }
  if (shared) j["shared_label_one_prob"] = fam.members.front().label_one_prob;
  Json dists = Json::array();
  for (const auto& d : fam.members) {
    Json m{{"mass", d.mass}};
    if (!shared) m["label_one_prob"] = d.label_one_prob;
    dists.push_back(std::move(m));
  }
  j["distributions"] = std::move(dists);
  Json hyps = Json::array();
  for (const auto& h : instance.hypotheses.hypotheses) hyps.push_back(LabelsToJson(h.labels));
  j["hypotheses"] = std::move(hyps);
  if (instance.hypotheses.vc_dim) j["vc_dim"] = *instance.hypotheses.vc_dim;
  if (instance.spec) j["gen_spec"] = ToJson(*instance.spec);
  return j;
}

Instance InstanceFromJson(const Json& j) {
  Instance inst;
  inst.family.domain_size = j.at("domain_size").get<std::size_t>();
  std::vector<double> shared;
  if (j.contains("shared_label_one_prob")) {
    shared = j.at("shared_label_one_prob").get<std::vector<double>>();
  }
  for (const auto& d : j.at("distributions")) {
    LabeledDistribution m;
    m.mass = d.at("mass").get<std::vector<double>>();
    if (d.contains("label_one_prob")) {
      m.label_one_prob = d.at("label_one_prob").get<std::vector<double>>();
    } else if (!shared.empty()) {
      m.label_one_prob = shared;
    } else {
      throw ContractError("instance file: distribution without label_one_prob");
    }
    inst.family.members.push_back(std::move(m));
  }
  for (const auto& h : j.at("hypotheses")) {
    inst.hypotheses.hypotheses.push_back({LabelsFromJson(h)});
  }
  if (j.contains("vc_dim")) inst.hypotheses.vc_dim = j.at("vc_dim").get<int>();
  if (j.contains("gen_spec")) inst.spec = GenSpecFromJson(j.at("gen_spec"));
  RequireValidFamily(inst.family);
  auto report = ValidateHypothesisClass(inst.hypotheses, inst.family.domain_size);
  if (!report.ok()) throw ContractError("instance file:\n" + report.ToString());
  return inst;
}

Json RandomizedToJson(const RandomizedClassifier& f) {
  return Json{{"kind", "randomized"},
              {"support_indices", f.support_indices()},
              {"weights", f.weights()}};
}

RandomizedClassifier RandomizedFromJson(const Json& j, const HypothesisClass& h) {
  const auto indices = j.at("support_indices").get<std::vector<std::size_t>>();
  const auto weights = j.at("weights").get<std::vector<double>>();
  return RandomizedClassifier::FromClass(h, indices, weights);
}

Json ClassifierToJson(const DeterministicClassifier& c) {
  if (c.is_explicit()) {
    return Json{{"kind", "explicit"}, {"labels", LabelsToJson(c.explicit_labels().labels)}};
  }
  const auto& cc = c.compact();
  Json table = Json::array();
  for (const auto& [x, label] : cc.overrides()) table.push_back({x, static_cast<int>(label)});
  return Json{{"kind", "compact"},
              {"domain_size", cc.domain_size()},
              {"prime", cc.hash().prime()},
              {"degree_r", cc.hash().degree()},
              {"coefficients", cc.hash().coefficients()},
              {"range_size", cc.range_size()},
              {"t_table", std::move(table)},
              {"mixture", RandomizedToJson(cc.mixture())}};
}

DeterministicClassifier ClassifierFromJson(const Json& j, const HypothesisClass* h) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "explicit") {
    return DeterministicClassifier(ExplicitLabels{LabelsFromJson(j.at("labels"))});
  }
  if (kind != "compact") throw ContractError("classifier file: unknown kind '" + kind + "'");
  if (h == nullptr) throw ContractError("compact classifier needs the hypothesis class");
  const auto prime = j.at("prime").get<std::uint64_t>();
  if (j.at("range_size").get<std::uint64_t>() != prime) {
    throw ContractError("classifier file: range_size must equal prime");
  }
  auto coefficients = j.at("coefficients").get<std::vector<std::uint64_t>>();
  if (coefficients.size() != j.at("degree_r").get<std::size_t>()) {
    throw ContractError("classifier file: degree_r does not match coefficient count");
  }
  std::map<std::size_t, Label> table;
  for (const auto& entry : j.at("t_table")) {
    const auto x = entry.at(0).get<std::size_t>();
    const int label = entry.at(1).get<int>();
    if (label != 1 && label != -1) throw ContractError("classifier file: bad t_table label");
    if (!table.emplace(x, static_cast<Label>(label)).second) {
      throw ContractError("classifier file: duplicate t_table key");
    }
  }
  return DeterministicClassifier(CompactClassifier(
      j.at("domain_size").get<std::size_t>(), PolyHash(prime, std::move(coefficients)),
      std::move(table), RandomizedFromJson(j.at("mixture"), *h)));
}

std::string FormatHashStanza(const PolyHash& q) {
  std::ostringstream os;
  os << "p " << q.prime() << "\nr " << q.degree() << "\ncoefficients";
  for (auto c : q.coefficients()) os << ' ' << c;
  os << '\n';
  return os.str();
}

PolyHash ParseHashStanza(const std::string& text) {
  std::istringstream in(text);
  std::string key;
  std::uint64_t p = 0;
  std::size_t r = 0;
  if (!(in >> key) || key != "p" || !(in >> p)) throw ContractError("hash stanza: expected 'p'");
  if (!(in >> key) || key != "r" || !(in >> r)) throw ContractError("hash stanza: expected 'r'");
  if (!(in >> key) || key != "coefficients") {
    throw ContractError("hash stanza: expected 'coefficients'");
  }
  std::vector<std::uint64_t> coefficients(r);
  for (auto& c : coefficients) {
    if (!(in >> c)) throw ContractError("hash stanza: too few coefficients");
  }
  return PolyHash(p, std::move(coefficients));
}

}  // namespace mdl
