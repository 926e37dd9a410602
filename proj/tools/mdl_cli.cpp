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

// mdl: command-line front end for instance generation, learning,
// derandomization, discrepancy reductions and campaign runs.
//
// Relative output paths are resolved against $MDL_OUTPUT_DIR when it is set.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mdl/derandomizer.hpp"
#include "mdl/discrepancy.hpp"
#include "mdl/generators.hpp"
#include "mdl/harness.hpp"
#include "mdl/hashing.hpp"
#include "mdl/io.hpp"
#include "mdl/learner.hpp"
#include "mdl/metrics.hpp"

namespace fs = std::filesystem;
using namespace mdl;

namespace {

// Raised to exit with status 1 after a failure stanza has been printed.
struct Failed {
  Json stanza;
};

fs::path OutPath(const std::string& p) {
  fs::path path(p);
  if (path.is_absolute()) return path;
  if (const char* dir = std::getenv("MDL_OUTPUT_DIR"); dir && *dir) {
    fs::create_directories(dir);
    return fs::path(dir) / path;
  }
  return path;
}

void WriteOut(const std::string& p, const std::string& content) {
  const auto path = OutPath(p);
  WriteTextFile(path.string(), content);
  std::cerr << "wrote " << path.string() << '\n';
}

Instance LoadInstance(const std::string& path) {
  return InstanceFromJson(Json::parse(ReadTextFile(path)));
}

std::vector<Label> ParseLabelString(const std::string& s) {
  std::vector<Label> z;
  for (char c : s) {
    if (c == '+' || c == '1') z.push_back(1);
    else if (c == '-' || c == '0') z.push_back(-1);
    else throw ContractError("labeling characters must be from {+,-} or {1,0}");
  }
  return z;
}

std::string LabelString(const std::vector<Label>& z) {
  std::string s;
  for (Label l : z) s += l == 1 ? '+' : '-';
  return s;
}

Rational ParseRational(const std::string& s) {
  const auto slash = s.find('/');
  if (slash == std::string::npos) return Rational(std::stoll(s));
  return Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
}

std::string RationalString(const Rational& r) {
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

// Flags shared by the learner-facing subcommands.
struct LearnerFlags {
  std::string oracle = "exact";
  std::size_t rounds = 0;
  double eta = 0;
  std::size_t erm_samples = 200;

  void Add(CLI::App* app) {
    app->add_option("--oracle", oracle,
                    "exact: the learner sees true masses; sampling: draws only")
        ->check(CLI::IsMember({"exact", "sampling"}))
        ->capture_default_str();
    app->add_option("--rounds", rounds,
                    "Hedge rounds T (0 = ceil(8 ln k / eps^2) at the learner's eps)");
    app->add_option("--eta", eta, "Hedge learning rate (0 = sqrt(8 ln k / T))");
    app->add_option("--erm-samples", erm_samples,
                    "samples per round for the empirical best response in sampling mode")
        ->capture_default_str();
  }

  LearnerSettings Settings() const {
    LearnerSettings s;
    s.oracle_mode = oracle == "exact" ? SampleOracle::Mode::kExact : SampleOracle::Mode::kSampling;
    if (rounds) s.rounds = rounds;
    if (eta > 0) s.learning_rate = eta;
    s.erm_sample_size = erm_samples;
    return s;
  }
};

struct DerandFlags {
  DerandConfig cfg;
  std::string mode = "theory";
  std::string rounding = "explicit";

  void Add(CLI::App* app) {
    app->add_option("--c-const", cfg.c_const,
                    "constant C: gamma = C k/(eps delta), m = ceil(C ln^2 gamma / eps^2)")
        ->capture_default_str();
    app->add_option("--c-prime", cfg.c_prime,
                    "constant C' of the hash variant (heavy threshold eps^2/(C' ln^2(4k/delta)))")
        ->capture_default_str();
    app->add_option("--mode", mode,
                    "theory: m from C (and C'); calibrated: m and threshold scale set directly")
        ->check(CLI::IsMember({"theory", "calibrated"}))
        ->capture_default_str();
    app->add_option("--m", cfg.m_override, "samples per distribution in calibrated mode");
    app->add_option("--threshold-scale", cfg.threshold_scale,
                    "calibrated mode: admit x when |rho| > scale sqrt(ln gamma / n_x)")
        ->capture_default_str();
    app->add_option("--rounding", rounding,
                    "explicit: one draw of F per point outside T; hash: r-wise independent "
                    "polynomial hash over F_p")
        ->check(CLI::IsMember({"explicit", "hash"}))
        ->capture_default_str();
  }

  DerandConfig Config(double eps, double delta) const {
    DerandConfig c = cfg;
    c.eps = eps;
    c.delta = delta;
    c.mode = mode == "theory" ? DerandMode::kTheory : DerandMode::kCalibrated;
    c.rounding = rounding == "explicit" ? RoundingMode::kExplicitPerPoint
                                        : RoundingMode::kHashCompact;
    if (c.mode == DerandMode::kCalibrated && c.m_override == 0) {
      throw ContractError("calibrated mode needs --m");
    }
    return c;
  }
};

struct GenFlags {
  GenSpec spec;
  std::string kind = "random_label_consistent";

  void Add(CLI::App* app) {
    app->add_option("--kind", kind,
                    "random_label_consistent | bayes_in_class | gap_example | heavy_point_probe")
        ->capture_default_str();
    app->add_option("--domain", spec.domain_size, "domain size |X|")->capture_default_str();
    app->add_option("--k", spec.k, "number of distributions")->capture_default_str();
    app->add_option("--hypotheses", spec.hypothesis_count, "random hypotheses in H")
        ->capture_default_str();
    app->add_option("--near-det-fraction", spec.bias.near_det_fraction,
                    "share of points with |beta| >= --near-det-min-beta")
        ->capture_default_str();
    app->add_option("--near-det-min-beta", spec.bias.near_det_min_abs_beta,
                    "lower end of |beta| for near-deterministic points")
        ->capture_default_str();
    app->add_option("--fair-fraction", spec.bias.fair_fraction, "share of points with beta = 0")
        ->capture_default_str();
    app->add_option("--other-max-beta", spec.bias.other_max_abs_beta,
                    "upper end of |beta| for the remaining points")
        ->capture_default_str();
  }

  GenSpec Spec(double eps, double delta, std::uint64_t seed) const {
    GenSpec g = spec;
    g.kind = ParseGenKind(kind);
    g.eps = eps;
    g.delta = delta;
    g.seed = seed;
    return g;
  }
};

Json TrialJson(const TrialReport& r) {
  return Json{{"trial_id", r.trial_id},
              {"seed", r.seed},
              {"opt", r.opt},
              {"randomized_error", r.randomized_error},
              {"derandomized_error", r.derandomized_error},
              {"table_size", r.table_size},
              {"heavy_coverage", r.heavy_coverage},
              {"outside_deviation", r.outside_deviation},
              {"error", r.error}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-distribution learning: randomized learner, derandomization, "
               "discrepancy reductions and hash rounding"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "mdl 1.0.0");

  double eps = 0.1;
  double delta = 0.1;
  std::uint64_t seed = 0;
  auto add_eps_delta = [&](CLI::App* c) {
    c->add_option("--eps", eps, "accuracy parameter eps in (0,1)")->capture_default_str();
    c->add_option("--delta", delta, "failure probability delta in (0,1)")->capture_default_str();
  };
  auto add_seed = [&](CLI::App* c) {
    c->add_option("--seed", seed, "master seed; all randomness derives from it")
        ->capture_default_str();
  };

  // gen
  auto* gen = app.add_subcommand("gen", "write an instance file");
  GenFlags gen_flags;
  std::string gen_out = "instance.json";
  gen_flags.Add(gen);
  add_eps_delta(gen);
  add_seed(gen);
  gen->add_option("-o,--out", gen_out, "output instance file")->capture_default_str();

  // learn
  auto* learn = app.add_subcommand("learn", "run Hedge and write the mixture F");
  std::string instance_path;
  std::string learn_out = "mixture.json";
  LearnerFlags learner_flags;
  learn->add_option("-i,--instance", instance_path, "instance file")->required();
  learn->add_option("-o,--out", learn_out, "output mixture file")->capture_default_str();
  add_eps_delta(learn);
  add_seed(learn);
  learner_flags.Add(learn);

  // derand
  auto* derand = app.add_subcommand(
      "derand", "learn F at (eps/2, delta/2), build the bias table and round to one classifier");
  std::string derand_out = "classifier.json";
  std::string derand_csv = "trial.csv";
  DerandFlags derand_flags;
  derand->add_option("-i,--instance", instance_path, "instance file")->required();
  derand->add_option("-o,--out", derand_out, "output classifier file")->capture_default_str();
  derand->add_option("--csv", derand_csv, "trial report CSV (header plus one row)")
      ->capture_default_str();
  add_eps_delta(derand);
  add_seed(derand);
  learner_flags.Add(derand);
  derand_flags.Add(derand);

  // eval
  auto* eval = app.add_subcommand("eval", "per-distribution errors of a classifier or mixture");
  std::string classifier_path;
  eval->add_option("-i,--instance", instance_path, "instance file")->required();
  eval->add_option("-c,--classifier", classifier_path,
                   "classifier file (explicit, compact or randomized)")
      ->required();

  // disc
  auto* disc = app.add_subcommand("disc", "discrepancy instances and the hardness reduction");
  disc->require_subcommand(1);
  std::string matrix_path;
  std::string disc_out;

  auto* disc_gen = disc->add_subcommand("gen", "random matrix with planted or high discrepancy");
  std::string disc_type = "planted";
  std::size_t disc_n = 12;
  double density = 0.4;
  std::size_t max_row_weight = 6;
  std::int64_t min_inf = 2;
  disc_gen->add_option("--type", disc_type,
                       "planted: A z = 0 for a hidden z; high: brute-force certified "
                       "min ||Az||_inf >= --min-inf")
      ->check(CLI::IsMember({"planted", "high"}))
      ->capture_default_str();
  disc_gen->add_option("--n", disc_n, "matrix size")->capture_default_str();
  disc_gen->add_option("--density", density, "planted: expected row density")
      ->capture_default_str();
  disc_gen->add_option("--max-row-weight", max_row_weight, "high: row weights in [2, this]")
      ->capture_default_str();
  disc_gen->add_option("--min-inf", min_inf, "high: required minimum discrepancy")
      ->capture_default_str();
  disc_gen->add_option("-o,--out", disc_out, "matrix file (default: stdout)");
  add_seed(disc_gen);

  auto* disc_solve = disc->add_subcommand("solve", "brute-force minimum discrepancy, n <= 20");
  disc_solve->add_option("-m,--matrix", matrix_path, "matrix file")->required();

  auto* disc_reduce =
      disc->add_subcommand("reduce", "matrix to a 2n-distribution instance file, n <= 16");
  std::string opt_prime;
  disc_reduce->add_option("-m,--matrix", matrix_path, "matrix file")->required();
  disc_reduce->add_option("--opt-prime", opt_prime,
                          "add the dummy point with target error a/b in (0, 1/2]");
  disc_reduce->add_option("-o,--out", disc_out, "output instance file")->required();

  auto* disc_dist = disc->add_subcommand(
      "distinguish", "answer 'zero discrepancy' iff er_P(f) < 1/2 + eps");
  std::string labeling;
  double disc_eps = 0;
  disc_dist->add_option("-m,--matrix", matrix_path, "matrix file")->required();
  disc_dist->add_option("--labeling", labeling,
                        "labeling of the n points as a +/- string (default: exact minimizer "
                        "of er_P by enumeration)");
  disc_dist->add_option("--eps", disc_eps, "margin (default 1/(2 sqrt n))");

  // trial
  auto* trial = app.add_subcommand(
      "trial", "campaign of independent derandomization trials with CSV and summary output");
  std::size_t trials = 1;
  std::size_t parallelism = 1;
  bool timing = false;
  std::vector<std::string> require_specs;
  std::string trial_csv = "trials.csv";
  std::string trial_summary = "summary.json";
  trial->add_option("-i,--instance", instance_path,
                    "fixed instance file (default: a fresh generated instance per trial)");
  trial->add_option("--trials", trials, "number of trials")->capture_default_str();
  trial->add_option("--parallelism", parallelism, "worker threads; results do not depend on it")
      ->capture_default_str();
  trial->add_option("--require", require_specs,
                    "predicate=fraction, e.g. opt_plus_eps=0.79; predicates: opt_plus_eps, "
                    "random_plus_half_eps, heavy_coverage, outside_deviation");
  trial->add_flag("--timing", timing, "append wall_seconds to every CSV row");
  trial->add_option("--csv", trial_csv, "per-trial CSV")->capture_default_str();
  trial->add_option("--summary", trial_summary, "summary JSON")->capture_default_str();
  add_eps_delta(trial);
  add_seed(trial);
  learner_flags.Add(trial);
  derand_flags.Add(trial);
  GenFlags trial_gen;
  trial_gen.Add(trial);

  // hashcheck
  auto* hashcheck = app.add_subcommand("hashcheck", "polynomial hash suites");
  std::string suite = "all";
  std::uint64_t prime = 7;
  std::size_t degree = 3;
  std::size_t draws = 100000;
  TailCheckConfig tail;
  hashcheck->add_option("--suite", suite,
                        "independence: exhaustive r-wise check at (p, r); marginal: Pr[+1] for "
                        "marginals 0, 1/3, 1/2, 2/3, 1; tail: limited-independence tail bound")
      ->check(CLI::IsMember({"independence", "marginal", "tail", "all"}))
      ->capture_default_str();
  hashcheck->add_option("--prime", prime, "p for independence and marginal suites")
      ->capture_default_str();
  hashcheck->add_option("--r", degree, "independence order r")->capture_default_str();
  hashcheck->add_option("--draws", draws, "hash draws for the marginal and tail suites")
      ->capture_default_str();
  hashcheck->add_option("--tail-n", tail.num_variables, "tail suite: number of indicators")
      ->capture_default_str();
  hashcheck->add_option("--tail-r", tail.degree, "tail suite: hash degree r")
      ->capture_default_str();
  hashcheck->add_option("--tail-prime", tail.prime, "tail suite: prime")->capture_default_str();
  add_seed(hashcheck);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      const auto inst = Generate(gen_flags.Spec(eps, delta, seed));
      WriteOut(gen_out, InstanceToJson(inst).dump(1) + "\n");
      std::cout << "domain_size " << inst.family.domain_size << "\nk " << inst.family.k()
                << "\nhypotheses " << inst.hypotheses.size() << '\n';
    } else if (*learn) {
      const auto inst = LoadInstance(instance_path);
      const auto s = learner_flags.Settings();
      SampleOracle oracle(inst.family, s.oracle_mode);
      auto cfg = HedgeConfig::Defaults(inst.family.k(), eps);
      if (s.rounds) cfg.rounds = *s.rounds;
      if (s.learning_rate) cfg.learning_rate = *s.learning_rate;
      cfg.erm_sample_size = s.erm_sample_size;
      cfg.seed = seed;
      const auto f = HedgeLearn(oracle, inst.hypotheses, eps, delta, cfg);
      WriteOut(learn_out, RandomizedToJson(f).dump(1) + "\n");
      const double opt = OptBruteforce(inst.hypotheses, inst.family).value;
      const double err = RandomizedWorstCaseError(f, inst.family);
      std::cout << "opt " << opt << "\nrandomized_error " << err << "\nsupport_size "
                << f.support_size() << '\n';
    } else if (*derand) {
      const auto inst = LoadInstance(instance_path);
      std::optional<DerandResult> res;
      const auto report = RunTrial(inst, learner_flags.Settings(),
                                   derand_flags.Config(eps, delta), seed, 0, &res);
      if (!report.ok()) throw Failed{{{"status", "failed"}, {"trial", TrialJson(report)}}};
      WriteOut(derand_out, ClassifierToJson(res->classifier).dump(1) + "\n");
      WriteOut(derand_csv, TrialCsvHeader() + "\n" + TrialCsvRow(report) + "\n");
      std::cout << TrialCsvHeader() << '\n' << TrialCsvRow(report) << '\n';
    } else if (*eval) {
      const auto inst = LoadInstance(instance_path);
      const auto j = Json::parse(ReadTextFile(classifier_path));
      std::cout << "opt " << OptBruteforce(inst.hypotheses, inst.family).value << '\n';
      if (j.at("kind") == "randomized") {
        const auto f = RandomizedFromJson(j, inst.hypotheses);
        const auto errs = RandomizedErrors(f, inst.family);
        for (std::size_t i = 0; i < errs.size(); ++i) std::cout << "er_" << i << ' ' << errs[i] << '\n';
        std::cout << "randomized_error " << RandomizedWorstCaseError(f, inst.family)
                  << "\nsupport_worst_case " << SupportWorstCase(f, inst.family) << '\n';
      } else {
        const auto c = ClassifierFromJson(j, &inst.hypotheses);
        const auto labels = c.Labels();
        const auto rep = WorstCaseError(labels, inst.family);
        std::cout << ErrorReportCsvHeader(inst.family.k()) << '\n'
                  << ErrorReportCsvRow(instance_path, classifier_path, rep) << '\n';
      }
    } else if (*disc_gen) {
      Rng rng(seed);
      std::string text;
      if (disc_type == "planted") {
        const auto p = PlantedZeroMatrix(disc_n, density, rng);
        text = p.matrix.ToString();
        std::cerr << "planted coloring " << LabelString(p.coloring) << '\n';
      } else {
        text = HighDiscrepancyMatrix(disc_n, max_row_weight, min_inf, rng).ToString();
      }
      if (disc_out.empty()) std::cout << text;
      else WriteOut(disc_out, text);
    } else if (*disc_solve) {
      const auto a = BinaryMatrix::Parse(ReadTextFile(matrix_path));
      const auto r = BruteforceMinDiscrepancy(a);
      std::cout << "coloring " << LabelString(r.coloring) << "\ninf_norm " << r.inf_norm
                << "\ntwo_norm " << r.two_norm() << '\n';
    } else if (*disc_reduce) {
      const auto a = BinaryMatrix::Parse(ReadTextFile(matrix_path));
      const auto rf = MatrixToFamily(a);
      RationalFamily fam = rf.exact;
      if (!opt_prime.empty()) fam = DummyPointVariant(rf, ParseRational(opt_prime));
      if (fam.domain_size > 16) throw ContractError("reduce writes the full class; n <= 16");
      Instance inst{fam.ToFamily(), FullLabelingClass(fam.domain_size), std::nullopt};
      WriteOut(disc_out, InstanceToJson(inst).dump(1) + "\n");
      std::cout << "distributions " << fam.k() << "\ndomain_size " << fam.domain_size << '\n';
    } else if (*disc_dist) {
      const auto a = BinaryMatrix::Parse(ReadTextFile(matrix_path));
      const auto rf = MatrixToFamily(a);
      const auto z = labeling.empty() ? MinErrorLabeling(rf) : ParseLabelString(labeling);
      const double e = disc_eps > 0 ? disc_eps : 1.0 / (2.0 * std::sqrt(double(a.n())));
      const auto err = ColoringError(z, rf);
      std::cout << "labeling " << LabelString(z) << "\ner_P " << RationalString(err) << " ("
                << ToDouble(err) << ")\neps " << e << "\nverdict "
                << ToString(Distinguish(a, z, e)) << '\n';
    } else if (*trial) {
      CampaignSpec spec;
      if (!instance_path.empty()) spec.fixed_instance = LoadInstance(instance_path);
      spec.gen = trial_gen.Spec(eps, delta, 0);
      spec.learner = learner_flags.Settings();
      spec.derand = derand_flags.Config(eps, delta);
      spec.master_seed = seed;
      spec.trials = trials;
      spec.parallelism = parallelism;
      for (const auto& req : require_specs) {
        const auto eq = req.find('=');
        if (eq == std::string::npos) throw ContractError("--require expects predicate=fraction");
        spec.predicates.push_back({ParsePredicate(req.substr(0, eq)), std::stod(req.substr(eq + 1))});
      }
      const auto res = RunCampaign(spec);
      WriteOut(trial_csv, CampaignCsv(res, timing));
      const auto summary = CampaignSummaryJson(spec, res.summary);
      WriteOut(trial_summary, summary + "\n");
      std::cout << summary << '\n';
      if (res.summary.partial() || !res.summary.all_met()) {
        Json failed{{"status", "failed"}, {"errors", res.summary.errors}};
        Json unmet = Json::array();
        for (const auto& p : res.summary.predicates) {
          if (!p.met) unmet.push_back(ToString(p.predicate));
        }
        failed["unmet_predicates"] = std::move(unmet);
        throw Failed{std::move(failed)};
      }
    } else if (*hashcheck) {
      bool ok = true;
      Json out;
      if (suite == "independence" || suite == "all") {
        const auto v = IndependenceViolations(prime, degree);
        out["independence"] = {{"prime", prime}, {"r", degree}, {"violations", v}};
        ok = ok && v == 0;
      }
      if (suite == "marginal" || suite == "all") {
        Rng rng(DeriveSeed(seed, 1));
        Json rows = Json::array();
        for (double m : {0.0, 1.0 / 3, 0.5, 2.0 / 3, 1.0}) {
          const double expect = double(PositiveHashCount(m, prime)) / double(prime);
          const double obs = HashedPlusFrequency(m, prime, 2, draws, rng);
          const double sigma = std::sqrt(expect * (1 - expect) / double(draws));
          const bool within = std::abs(obs - expect) <= 3 * sigma;
          rows.push_back({{"marginal", m}, {"expected", expect}, {"observed", obs},
                          {"within_3_sigma", within}});
          ok = ok && within;
        }
        out["marginal"] = std::move(rows);
      }
      if (suite == "tail" || suite == "all") {
        tail.draws = draws;
        tail.seed = DeriveSeed(seed, 2);
        const auto rep = EmpiricalTailBoundCheck(tail);
        Json pts = Json::array();
        for (const auto& p : rep.points) {
          pts.push_back({{"t", p.deviation}, {"observed", p.observed}, {"bound", p.bound},
                         {"sigma", p.sampling_sigma}, {"violation", p.violation}});
        }
        out["tail"] = {{"mean", rep.mean}, {"variance", rep.variance}, {"points", pts}};
        ok = ok && rep.ok();
      }
      std::cout << out.dump(2) << '\n';
      if (!ok) throw Failed{{{"status", "failed"}, {"suite", suite}}};
    }
  } catch (const Failed& f) {
    std::cerr << f.stanza.dump() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << Json{{"status", "error"}, {"message", e.what()}}.dump() << '\n';
    return 1;
  }
  return 0;
}
