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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "dirlab/config.hpp"
#include "dirlab/errors.hpp"
#include "dirlab/experiments.hpp"
#include "dirlab/report.hpp"

using namespace dirlab;

TEST_CASE("flat config parsing with sections") {
  const auto cfg = Config::from_string(
      "experiment = covariance\n"
      "# a comment\n"
      "samples = 1000   # trailing comment\n"
      "[grid]\n"
      "n = 81\n"
      "R = 5.5\n"
      "flag = true\n"
      "times = 0.1, 0.2,0.3\n");
  CHECK(cfg.get_required("experiment") == "covariance");
  CHECK(cfg.get_int("samples", 0) == 1000);
  CHECK(cfg.get_int("grid.n", 0) == 81);
  CHECK(cfg.get_double("grid.R", 0.0) == doctest::Approx(5.5));
  CHECK(cfg.get_bool("grid.flag", false));
  CHECK(cfg.get_doubles("grid.times", {}).size() == 3);
  CHECK(cfg.get("missing", "fallback") == "fallback");
  CHECK_THROWS_AS(cfg.get_required("missing"), ConfigError);
  CHECK_THROWS_AS(Config::from_string("novalue\n"), ConfigError);
  CHECK_THROWS_AS(Config::from_string("[unclosed\n"), ConfigError);
  CHECK_THROWS_AS(Config::from_string("k = v\n").get_int("k", 0), ConfigError);
}

TEST_CASE("unknown experiment names are rejected") {
  Config cfg;
  cfg.set("experiment", "warp-drive");
  CHECK_THROWS_AS(run_experiment(cfg), ConfigError);
  Config empty;
  CHECK_THROWS_AS(run_experiment(empty), ConfigError);
  CHECK(experiment_names().size() == 13);
}

TEST_CASE("json number encoding handles non-finite values") {
  CHECK(json_number(1.5).dump() == "1.5");
  CHECK(json_number(std::numeric_limits<double>::infinity()).dump() == "\"inf\"");
  CHECK(json_number(-std::numeric_limits<double>::infinity()).dump() == "\"-inf\"");
  CHECK(json_number(std::nan("")).dump() == "\"nan\"");
}

TEST_CASE("lp-interval report matches the documented body") {
  Config cfg;
  cfg.set("experiment", "lp-interval");
  cfg.set("eps0", "1.0");
  const auto res = run_experiment(cfg);
  CHECK(res.status == "pass");
  CHECK(res.exit_code == 0);
  CHECK(res.report["p_lo"] == Json(1.5));
  CHECK(res.report["p_hi"] == Json("inf"));
}

TEST_CASE("identical config and seed reproduce the report byte for byte") {
  Config cfg;
  cfg.set("experiment", "covariance");
  cfg.set("K", "8");
  cfg.set("samples", "20000");
  cfg.set("seed", "7");
  const auto a = run_experiment(cfg);
  const auto b = run_experiment(cfg);
  CHECK(dump_report(a.report) == dump_report(b.report));
  REQUIRE(a.extra_files.size() == b.extra_files.size());
  for (std::size_t i = 0; i < a.extra_files.size(); ++i)
    CHECK(a.extra_files[i].second == b.extra_files[i].second);

  // A different seed changes the body.
  cfg.set("seed", "8");
  const auto c = run_experiment(cfg);
  CHECK(dump_report(a.report) != dump_report(c.report));
}

TEST_CASE("write_run emits the report, extras and a manifest echoing the config") {
  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path() / "dirlab_write_run_test";
  fs::remove_all(dir);

  Config cfg;
  cfg.set("experiment", "lp-interval");
  cfg.set("eps0", "0.25");
  const auto res = run_experiment(cfg);
  write_run(res, cfg, dir.string());

  CHECK(fs::exists(dir / "lp-interval_report.json"));
  CHECK(fs::exists(dir / "manifest.json"));
  std::ifstream in(dir / "manifest.json");
  Json manifest = Json::parse(in);
  CHECK(manifest["experiment"] == Json("lp-interval"));
  CHECK(manifest["config"]["eps0"] == Json("0.25"));
  CHECK(manifest.contains("timestamp_unix_ms"));
  // The report body itself carries no timestamp.
  std::ifstream rep(dir / "lp-interval_report.json");
  Json body = Json::parse(rep);
  CHECK_FALSE(body.contains("timestamp_unix_ms"));
  fs::remove_all(dir);
}

TEST_CASE("format_double renders round-trippable cells") {
  CHECK(format_double(0.5) == "0.5");
  const double v = 0.1 + 0.2;
  CHECK(std::stod(format_double(v)) == v);
}
