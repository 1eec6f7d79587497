// Copyright 2026 The qwqkd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qwqkd/cli.hpp"

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  Result r;
  r.code = qwqkd::cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "qwqkd_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write(const std::filesystem::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("cvalue for the BB84 coin") {
    const Result r = invoke({"cvalue", "--P", "1", "--theta", "0.25pi", "--tmax", "1"});
    CHECK(r.code == 0);
    CHECK(r.out == "c=0.500000, t=1, Q_max=0.110028\n");
  }

  TEST_CASE("cvalue JSON and trace") {
    const Result r = invoke({"cvalue", "--P", "3", "--theta", "0.4pi", "--phi", "0.2pi", "--tmax", "30",
                             "--trace", "--format", "json"});
    REQUIRE(r.code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["P"] == 3);
    CHECK(doc["c_trace"].size() == 30);
  }

  TEST_CASE("noise and keyrate") {
    Result r = invoke({"noise", "--c", "0.5", "--P", "1"});
    CHECK(r.code == 0);
    CHECK(r.out == "0.110028\n");
    r = invoke({"keyrate", "--c", "0.5", "--P", "1", "--qber", "0"});
    CHECK(r.code == 0);
    CHECK(r.out.find("1.000000") != std::string::npos);
    r = invoke({"noise", "--P", "1"});
    CHECK(r.code == 1);
  }

  TEST_CASE("walk distribution") {
    const Result r = invoke({"walk", "--P", "3", "--theta", "0.25pi", "--t", "2"});
    REQUIRE(r.code == 0);
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    CHECK(line == "x,s,probability");
    double total = 0.0;
    int rows = 0;
    while (std::getline(in, line)) {
      total += std::stod(line.substr(line.rfind(',') + 1));
      ++rows;
    }
    CHECK(rows == 6);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
  }

  TEST_CASE("validation errors exit with 1 and a single line") {
    for (const std::vector<std::string>& args :
         {std::vector<std::string>{"cvalue", "--P", "4", "--theta", "0.1"},
          std::vector<std::string>{"cvalue", "--P", "3"},
          std::vector<std::string>{"cvalue", "--P", "3", "--theta", "abc"},
          std::vector<std::string>{"walk", "--P", "3", "--init", "7"},
          std::vector<std::string>{"sweep", "--P", "3", "--F", "Z"},
          std::vector<std::string>{"frobnicate"}}) {
      CAPTURE(args[0]);
      const Result r = invoke(args);
      CHECK(r.code == 1);
      CHECK(r.err.rfind("error: ", 0) == 0);
      CHECK(std::count(r.err.begin(), r.err.end(), '\n') == 1);
    }
  }

  TEST_CASE("sweep output does not depend on --jobs") {
    const std::vector<std::string> base{"sweep", "--P", "1,3", "--F", "I,Y", "--denominator", "4",
                                        "--tmax", "40", "--quiet"};
    auto one = base;
    one.insert(one.end(), {"--jobs", "1"});
    auto three = base;
    three.insert(three.end(), {"--jobs", "3"});
    const Result a = invoke(one), b = invoke(three);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.rfind("P,F,theta,phi,t,c,Q_max\n", 0) == 0);
    CHECK(a.err.empty());
  }

  TEST_CASE("reproduce against a custom manifest") {
    const auto path = scratch("manifest.json");
    write(path, R"({"manifest_version": 1, "targets": {"bb84": {
      "runs": [{"id": "a", "type": "series", "P": [1], "F": "I", "theta": "0.25pi", "phi": "0", "T_max": 1}],
      "checks": [{"run": "a", "P": 1, "F": "I", "t": 1, "c": [0.5, 0.001], "Q_max": [0.110, 0.001]}]},
      "wrong": {
      "runs": [{"id": "a", "type": "series", "P": [1], "F": "I", "theta": "0.25pi", "phi": "0", "T_max": 1}],
      "checks": [{"run": "a", "P": 1, "F": "I", "c": [0.4, 0.001]}]}}})");
    Result r = invoke({"reproduce", "bb84", "--manifest", path.string(), "--quiet"});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("run,P,F,theta,phi,t,c,Q_max\n", 0) == 0);
    CHECK(r.err.find("MATCH") != std::string::npos);
    r = invoke({"reproduce", "wrong", "--manifest", path.string(), "--quiet"});
    CHECK(r.code == 3);
    CHECK(r.err.find("MISMATCH") != std::string::npos);
    r = invoke({"reproduce", "missing", "--manifest", path.string()});
    CHECK(r.code == 1);
  }

  TEST_CASE("embedded manifest lists the published targets") {
    const auto doc = nlohmann::json::parse(qwqkd::cli::embedded_manifest());
    for (const char* t : {"table1", "fig3", "fig4", "fig6", "fig7", "best284"}) {
      CHECK(doc["targets"].contains(t));
    }
  }

  TEST_CASE("protocol runs from a config file") {
    const auto cfg = scratch("p2.json");
    write(cfg, R"({"protocol": "one_way", "P": 3, "N": 200, "seed": 5, "t": 3,
                   "channel": {"kind": "pauli", "error_weight": 0.1}})");
    const Result a = invoke({"protocol", "--config", cfg.string(), "--no-records"});
    REQUIRE(a.code == 0);
    const auto doc = nlohmann::json::parse(a.out);
    CHECK(doc["config"]["P"] == 3);
    CHECK_FALSE(doc.contains("records"));
    CHECK(invoke({"protocol", "--config", cfg.string(), "--no-records"}).out == a.out);
    CHECK(invoke({"protocol", "--config", cfg.string(), "--no-records", "--seed", "6"}).out != a.out);

    const Result csv = invoke({"protocol", "--config", cfg.string(), "--format", "csv"});
    CHECK(csv.code == 0);
    CHECK(csv.out.rfind("protocol,P,N,", 0) == 0);

    write(cfg, R"({"protocol": "two_way", "P": 3, "N": 20, "m": 9})");
    const Result two = invoke({"protocol", "--config", cfg.string(), "--no-records"});
    REQUIRE(two.code == 0);
    CHECK(nlohmann::json::parse(two.out)["verification1"]["pass"] == true);

    write(cfg, R"({"protocol": "one_way", "colour": 3})");
    CHECK(invoke({"protocol", "--config", cfg.string()}).code == 1);
    write(cfg, "{not json");
    CHECK(invoke({"protocol", "--config", cfg.string()}).code == 1);
  }

  TEST_CASE("output goes to --out or the output directory") {
    const auto file = scratch("out/c.txt");
    std::filesystem::remove(file);
    Result r = invoke({"noise", "--c", "0.5", "--P", "1", "--out", file.string()});
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    CHECK(slurp(file) == "0.110028\n");

    const auto dir = scratch("envdir");
    std::filesystem::remove_all(dir);
    ::setenv(qwqkd::cli::kOutputDirEnv, dir.string().c_str(), 1);
    r = invoke({"noise", "--c", "0.5", "--P", "1"});
    ::unsetenv(qwqkd::cli::kOutputDirEnv);
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    CHECK(slurp(dir / "noise.text") == "0.110028\n");
  }
}
