// Copyright 2026 The dirlab Authors
//
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

// Acceptance suite: one pass/fail line per criterion, full-scale parameters.

#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "dirlab/config.hpp"
#include "dirlab/experiments.hpp"
#include "dirlab/report.hpp"

using dirlab::Config;
using dirlab::Json;
using dirlab::RunResult;

namespace {

Config make_config(const std::vector<std::pair<std::string, std::string>>& kv) {
  Config cfg;
  for (const auto& [k, v] : kv) cfg.set(k, v);
  return cfg;
}

bool all_rows_pass(const Json& rows) {
  for (const auto& row : rows)
    if (!row.value("pass", false)) return false;
  return true;
}

struct Criterion {
  int id;
  std::string label;
  std::function<bool(std::string&)> run;
};

}  // namespace

int main() {
  std::vector<Criterion> criteria;

  criteria.push_back({1, "Hermite/Wick suite: exact coefficients to n=20, Gaussian orthogonality 4-sigma at 1e6 samples",
                      [](std::string& detail) {
                        const auto res = dirlab::run_experiment(make_config(
                            {{"experiment", "wick-moments"}, {"nmax", "20"},
                             {"samples", "1000000"}, {"mc_degree", "5"}, {"seed", "20177"}}));
                        double max_z = 0.0;
                        for (const auto& row : res.report["mc"])
                          max_z = std::max(max_z, row["z"].get<double>());
                        std::ostringstream os;
                        os << "exact_match=" << res.report["exact_coefficients_match"]
                           << " max_z=" << max_z;
                        detail = os.str();
                        return res.status == "pass";
                      }});

  criteria.push_back({2, "free-field covariance: unit square, K=16, per-mode variance within 4 sigma of 1/lambda at 1e5 samples",
                      [](std::string& detail) {
                        const auto res = dirlab::run_experiment(make_config(
                            {{"experiment", "covariance"}, {"K", "16"},
                             {"samples", "100000"}, {"seed", "12345"}}));
                        double max_z = 0.0;
                        for (const auto& row : res.report["modes"])
                          max_z = std::max(max_z, row["z"].get<double>());
                        for (const auto& row : res.report["composites"])
                          max_z = std::max(max_z, row["z"].get<double>());
                        std::ostringstream os;
                        os << "max_z=" << max_z << " orth_defect="
                           << res.report["orthonormality_defect"].get<double>();
                        detail = os.str();
                        return res.status == "pass";
                      }});

  criteria.push_back({3, "integration by parts: Gaussian block analytic, quartic coupling 0.1 (integrable orientation of a4=-0.1, see ledger) at 1e5 samples, ESS >= 0.2 N",
                      [](std::string& detail) {
                        const auto res = dirlab::run_experiment(make_config(
                            {{"experiment", "ibp"}, {"K", "16"}, {"samples", "100000"},
                             {"seed", "777"}, {"spec_a", "0,0,0,0,0.1"},
                             {"ess_floor", "0.2"}}));
                        std::ostringstream os;
                        os << "ess=" << res.report["ess"].get<double>() << "/"
                           << res.report["ess_floor"].get<double>()
                           << " gaussian_rows=" << res.report["gaussian"].size()
                           << " quartic_rows=" << res.report["quartic"].size();
                        detail = os.str();
                        return res.status == "pass" &&
                               all_rows_pass(res.report["gaussian"]) &&
                               all_rows_pass(res.report["quartic"]) &&
                               res.report["ess_pass"].get<bool>();
                      }});

  criteria.push_back({4, "drift conditions: c+=0 admissible (closed form), delta-gap strictly decreasing over m={2,4,8,16}, |alpha|_0 L4 stable under K->K/2",
                      [](std::string& detail) {
                        const auto res = dirlab::run_experiment(make_config(
                            {{"experiment", "theorem1-conditions"}, {"K", "32"},
                             {"samples", "20000"}, {"seed", "999"},
                             {"m_schedule", "2,4,8,16"}}));
                        std::ostringstream os;
                        os << "jac_sup=" << res.report["jacobian_form_sup"].get<double>()
                           << " alpha_l4=" << res.report["alpha_l4"].get<double>()
                           << " stable=" << res.report["alpha_l4_stable"];
                        detail = os.str();
                        return res.status == "pass" &&
                               res.report["c_plus_zero_admissible"].get<bool>() &&
                               res.report["delta_gap_strictly_decreasing"].get<bool>() &&
                               res.report["alpha_l4_stable"].get<bool>();
                      }});

  criteria.push_back({5, "gradient bound: OU d=2, R=6, 241^2, sup|grad u|_+ <= e^{-t} sup|grad f|_+ at t={0.25,0.5,1}, Mehler match 1e-3 on the inner half-box",
                      [](std::string& detail) {
                        const auto res = dirlab::run_experiment(make_config(
                            {{"experiment", "gradient-bound"}, {"d", "2"}, {"grid_n", "241"},
                             {"grid_R", "6"}, {"T", "1.0"}, {"times", "0.25,0.5,1.0"},
                             {"mehler_tol", "1e-3"}}));
                        double max_rel = 0.0;
                        for (const auto& row : res.report["mehler"])
                          max_rel = std::max(max_rel, row["relative_sup_error"].get<double>());
                        std::ostringstream os;
                        os << "c_plus=" << res.report["c_plus"].get<double>()
                           << " mehler_max_rel=" << max_rel;
                        detail = os.str();
                        return res.status == "pass" &&
                               all_rows_pass(res.report["gradient_bound"]) &&
                               all_rows_pass(res.report["mehler"]);
                      }});

  criteria.push_back({6, "identity at p=4: both sides balance within the Richardson budget and the imbalance shrinks ~4x under h -> h/2",
                      [](std::string& detail) {
                        const auto res = dirlab::run_experiment(make_config(
                            {{"experiment", "lemma-suite"}, {"d", "2"}, {"grid_n", "161"},
                             {"times", "0.25,0.375,0.5"}}));
                        bool ok = res.status == "pass";
                        double min_ratio = 1e9, max_ratio = 0.0;
                        for (const auto& row : res.report["p4_balance"]) {
                          if (!row.value("pass", false)) ok = false;
                          for (const auto& term : row["terms"].items())
                            if (term.key() == "refinement_ratio") {
                              const double r = term.value().get<double>();
                              min_ratio = std::min(min_ratio, r);
                              max_ratio = std::max(max_ratio, r);
                            }
                        }
                        if (min_ratio < 2.5 || max_ratio > 8.0) ok = false;
                        std::ostringstream os;
                        os << "refinement_ratio in [" << min_ratio << ", " << max_ratio << "]";
                        detail = os.str();
                        return ok;
                      }});

  criteria.push_back({7, "energy estimate and lemma suite: Gaussian measure, d in {1,2}, drifts {0, -x, rotation}: margin >= -budget at every snapshot",
                      [](std::string& detail) {
                        struct Combo {
                          const char* d;
                          const char* drift;
                          const char* measure;
                          const char* basis;
                        };
                        const std::vector<Combo> combos = {
                            {"1", "zero", "gauss_alpha", "power:1"},
                            {"1", "ou", "gauss_delta", "power:1"},
                            {"2", "zero", "gauss_alpha", "power:1"},
                            {"2", "ou", "gauss_delta", "power:1"},
                            {"2", "rotation", "gauss_delta", "list:1,1"},
                        };
                        int passed = 0;
                        for (const auto& c : combos) {
                          const auto energy = dirlab::run_experiment(make_config(
                              {{"experiment", "energy-estimate"}, {"d", c.d},
                               {"drift", c.drift}, {"measure", c.measure},
                               {"basis", c.basis}}));
                          const auto lemmas = dirlab::run_experiment(make_config(
                              {{"experiment", "lemma-suite"}, {"d", c.d}, {"drift", c.drift},
                               {"measure", c.measure}, {"basis", c.basis}}));
                          if (energy.status == "pass" &&
                              all_rows_pass(lemmas.report["lemma1"]) &&
                              all_rows_pass(lemmas.report["lemma3"]))
                            ++passed;
                        }
                        std::ostringstream os;
                        os << passed << "/" << combos.size() << " drift/measure combos";
                        detail = os.str();
                        return passed == static_cast<int>(combos.size());
                      }});

  criteria.push_back({8, "L4 bound: LHS finite and grid-stable (<= 2% under refinement) for the OU preset; empirical C(eps0) reproducible",
                      [](std::string& detail) {
                        const auto cfg = make_config({{"experiment", "l4-estimate"},
                                                      {"d", "2"}, {"grid_n", "161"}});
                        const auto res = dirlab::run_experiment(cfg);
                        const auto res2 = dirlab::run_experiment(cfg);
                        const auto& j = res.report["l4_estimate"];
                        const bool reproducible =
                            dirlab::dump_report(res.report) == dirlab::dump_report(res2.report);
                        std::ostringstream os;
                        os << "lhs=" << j["lhs"].get<double>()
                           << " rel_change=" << j["relative_change"].get<double>()
                           << " C_emp=" << j["c_empirical"].get<double>()
                           << " reproducible=" << reproducible;
                        detail = os.str();
                        return res.status == "pass" && reproducible;
                      }});

  criteria.push_back({9, "Duhamel gaps in L2 and L1: bound holds on every rung, gaps decay monotonically in m, exact rung at zero gap",
                      [](std::string& detail) {
                        const auto l2 = dirlab::run_experiment(make_config(
                            {{"experiment", "duhamel-l2"}, {"grid_n", "121"}}));
                        const auto l1 = dirlab::run_experiment(make_config(
                            {{"experiment", "duhamel-l1"}, {"grid_n", "121"}}));
                        std::ostringstream os;
                        os << "L2 exact_gap=" << l2.report["exact_rung_gap"].get<double>()
                           << " rungs=" << l2.report["rungs"].size()
                           << "; L1 exact_gap=" << l1.report["exact_rung_gap"].get<double>();
                        detail = os.str();
                        return l2.status == "pass" && l1.status == "pass";
                      }});

  criteria.push_back({10, "Lp interval: eps0=1 gives exactly (1.5, inf); 20-point scan is nested",
                      [](std::string& detail) {
                        const auto res = dirlab::run_experiment(make_config(
                            {{"experiment", "lp-interval"}, {"eps0", "1.0"},
                             {"scan_points", "20"}}));
                        const bool exact = res.report["p_lo"] == Json(1.5) &&
                                           res.report["p_hi"] == Json("inf");
                        std::ostringstream os;
                        os << "p_lo=" << res.report["p_lo"].dump()
                           << " p_hi=" << res.report["p_hi"].dump()
                           << " nested=" << res.report["nested"];
                        detail = os.str();
                        return res.status == "pass" && exact &&
                               res.report["nested"].get<bool>();
                      }});

  criteria.push_back({11, "Markov suite: positivity, sup contraction and unit preservation within 1e-6 on the matching-drift preset",
                      [](std::string& detail) {
                        const auto res = dirlab::run_experiment(make_config(
                            {{"experiment", "markov-suite"}, {"grid_n", "161"},
                             {"tol", "1e-6"}}));
                        std::ostringstream os;
                        os << "min_u=" << res.report["positivity"]["min_u"].get<double>()
                           << " sup_ratio=" << res.report["contraction"]["sup_ratio"].get<double>()
                           << " unit_defect="
                           << res.report["conservation"]["unit_defect"].get<double>();
                        detail = os.str();
                        return res.status == "pass";
                      }});

  criteria.push_back({12, "determinism: identical config and seed reproduce report bodies byte for byte",
                      [](std::string& detail) {
                        const std::vector<Config> cfgs = {
                            make_config({{"experiment", "covariance"}, {"K", "8"},
                                         {"samples", "20000"}, {"seed", "7"}}),
                            make_config({{"experiment", "ibp"}, {"K", "8"},
                                         {"samples", "20000"}, {"seed", "11"}}),
                            make_config({{"experiment", "lp-interval"}, {"eps0", "0.5"}}),
                        };
                        int identical = 0;
                        for (const auto& cfg : cfgs) {
                          const auto a = dirlab::run_experiment(cfg);
                          const auto b = dirlab::run_experiment(cfg);
                          bool same = dirlab::dump_report(a.report) ==
                                      dirlab::dump_report(b.report);
                          for (std::size_t i = 0; same && i < a.extra_files.size(); ++i)
                            same = a.extra_files[i].second == b.extra_files[i].second;
                          if (same) ++identical;
                        }
                        std::ostringstream os;
                        os << identical << "/" << cfgs.size() << " reruns byte-identical";
                        detail = os.str();
                        return identical == static_cast<int>(cfgs.size());
                      }});

  int failures = 0;
  for (const auto& criterion : criteria) {
    std::string detail;
    bool ok = false;
    try {
      ok = criterion.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
      ok = false;
    }
    std::printf("[%s] criterion %2d: %s  (%s)\n", ok ? "PASS" : "FAIL", criterion.id,
                criterion.label.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  std::printf("%d/%zu acceptance criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
