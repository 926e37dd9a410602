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

// Python bindings. Instances, classifiers and summaries cross the boundary as
// JSON text; the Python package decodes them.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mdl/derandomizer.hpp"
#include "mdl/discrepancy.hpp"
#include "mdl/generators.hpp"
#include "mdl/harness.hpp"
#include "mdl/hashing.hpp"
#include "mdl/io.hpp"
#include "mdl/metrics.hpp"

namespace py = pybind11;
using namespace mdl;

namespace {

using Rows = std::vector<std::vector<std::uint8_t>>;

Rows RowsOf(const BinaryMatrix& a) {
  Rows rows;
  for (std::size_t i = 0; i < a.n(); ++i) rows.push_back(a.row(i));
  return rows;
}

DerandConfig MakeDerand(double eps, double delta, const std::string& mode, std::size_t m,
                        double threshold_scale, const std::string& rounding, double c_const) {
  DerandConfig c;
  c.eps = eps;
  c.delta = delta;
  c.c_const = c_const;
  if (mode == "calibrated") c.mode = DerandMode::kCalibrated;
  else if (mode != "theory") throw ContractError("mode must be 'theory' or 'calibrated'");
  c.m_override = m;
  c.threshold_scale = threshold_scale;
  if (rounding == "hash") c.rounding = RoundingMode::kHashCompact;
  else if (rounding != "explicit") throw ContractError("rounding must be 'explicit' or 'hash'");
  return c;
}

Instance ParseInstance(const std::string& text) { return InstanceFromJson(Json::parse(text)); }

}  // namespace

PYBIND11_MODULE(_mdlearn, m) {
  m.doc() = "Multi-distribution learning core";
  py::register_exception<ContractError>(m, "ContractError", PyExc_ValueError);

  m.def("generate",
        [](const std::string& kind, std::size_t domain_size, std::size_t k,
           std::size_t hypothesis_count, double eps, double delta, std::uint64_t seed) {
          GenSpec g;
          g.kind = ParseGenKind(kind);
          g.domain_size = domain_size;
          g.k = k;
          g.hypothesis_count = hypothesis_count;
          g.eps = eps;
          g.delta = delta;
          g.seed = seed;
          return InstanceToJson(Generate(g)).dump();
        },
        py::arg("kind") = "random_label_consistent", py::arg("domain_size") = 40,
        py::arg("k") = 6, py::arg("hypothesis_count") = 16, py::arg("eps") = 0.1,
        py::arg("delta") = 0.1, py::arg("seed") = 0);

  m.def("opt", [](const std::string& inst) {
    const auto i = ParseInstance(inst);
    return OptBruteforce(i.hypotheses, i.family).value;
  });

  m.def("worst_case_error", [](const std::string& inst, const std::vector<Label>& labels) {
    const auto i = ParseInstance(inst);
    const auto r = WorstCaseError(labels, i.family);
    return py::make_tuple(r.worst_case, r.per_distribution);
  });

  m.def("gap_example", [](std::size_t k) {
    const auto g = GenGapExample(k);
    return py::make_tuple(RandomizedWorstCaseError(g.mixture, g.family),
                          SupportWorstCase(g.mixture, g.family));
  });

  m.def("run_trial",
        [](const std::string& inst, double eps, double delta, std::uint64_t seed,
           const std::string& mode, std::size_t m_override, double threshold_scale,
           const std::string& rounding, double c_const) {
          std::optional<DerandResult> res;
          const auto r = RunTrial(ParseInstance(inst), {},
                                  MakeDerand(eps, delta, mode, m_override, threshold_scale,
                                             rounding, c_const),
                                  seed, 0, &res);
          Json j{{"opt", r.opt},
                 {"randomized_error", r.randomized_error},
                 {"derandomized_error", r.derandomized_error},
                 {"table_size", r.table_size},
                 {"heavy_coverage", r.heavy_coverage},
                 {"outside_deviation", r.outside_deviation},
                 {"error", r.error}};
          if (res) j["classifier"] = ClassifierToJson(res->classifier);
          return j.dump();
        },
        py::arg("instance"), py::arg("eps") = 0.1, py::arg("delta") = 0.1, py::arg("seed") = 0,
        py::arg("mode") = "theory", py::arg("m") = 0, py::arg("threshold_scale") = 1.0,
        py::arg("rounding") = "explicit", py::arg("c_const") = 4.0);

  m.def("run_campaign",
        [](std::size_t trials, std::uint64_t seed, std::size_t parallelism, double eps,
           double delta, const std::string& mode, std::size_t m_override,
           double threshold_scale, const std::string& rounding,
           const std::vector<std::pair<std::string, double>>& predicates,
           const std::string& instance) {
          CampaignSpec spec;
          if (!instance.empty()) spec.fixed_instance = ParseInstance(instance);
          spec.derand = MakeDerand(eps, delta, mode, m_override, threshold_scale, rounding, 4.0);
          spec.master_seed = seed;
          spec.trials = trials;
          spec.parallelism = parallelism;
          for (const auto& [name, frac] : predicates) {
            spec.predicates.push_back({ParsePredicate(name), frac});
          }
          CampaignResult res;
          {
            py::gil_scoped_release release;
            res = RunCampaign(spec);
          }
          return py::make_tuple(CampaignCsv(res), CampaignSummaryJson(spec, res.summary));
        },
        py::arg("trials"), py::arg("seed") = 0, py::arg("parallelism") = 1,
        py::arg("eps") = 0.1, py::arg("delta") = 0.1, py::arg("mode") = "theory",
        py::arg("m") = 0, py::arg("threshold_scale") = 1.0, py::arg("rounding") = "explicit",
        py::arg("predicates") = std::vector<std::pair<std::string, double>>{},
        py::arg("instance") = "");

  m.def("planted_zero_matrix", [](std::size_t n, double density, std::uint64_t seed) {
    Rng rng(seed);
    auto p = PlantedZeroMatrix(n, density, rng);
    return py::make_tuple(RowsOf(p.matrix), p.coloring);
  });

  m.def("min_discrepancy", [](const Rows& rows) {
    const auto r = BruteforceMinDiscrepancy(BinaryMatrix(rows));
    return py::make_tuple(r.coloring, r.inf_norm, r.two_norm_sq);
  });

  m.def("coloring_error", [](const Rows& rows, const std::vector<Label>& z) {
    const auto e = ColoringError(z, MatrixToFamily(BinaryMatrix(rows)));
    return py::make_tuple(e.numerator(), e.denominator());
  });

  m.def("min_error_labeling",
        [](const Rows& rows) { return MinErrorLabeling(MatrixToFamily(BinaryMatrix(rows))); });

  m.def("distinguish", [](const Rows& rows, const std::vector<Label>& z, double eps) {
    return ToString(Distinguish(BinaryMatrix(rows), z, eps));
  });

  m.def("next_prime", &NextPrime);
  m.def("poly_hash", [](std::uint64_t prime, std::vector<std::uint64_t> coefficients,
                        std::uint64_t x) { return PolyHash(prime, std::move(coefficients))(x); });
  m.def("independence_violations", &IndependenceViolations);
  m.def("tail_check", [](std::size_t n, std::size_t r, std::size_t draws, std::uint64_t seed) {
    TailCheckConfig c;
    c.num_variables = n;
    c.degree = r;
    c.draws = draws;
    c.seed = seed;
    const auto rep = EmpiricalTailBoundCheck(c);
    std::vector<std::tuple<double, double, double>> pts;
    for (const auto& p : rep.points) pts.emplace_back(p.deviation, p.observed, p.bound);
    return py::make_tuple(rep.ok(), pts);
  }, py::arg("n") = 64, py::arg("r") = 4, py::arg("draws") = 100000, py::arg("seed") = 1);
}
