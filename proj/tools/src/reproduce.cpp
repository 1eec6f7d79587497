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

#include "reproduce.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <stdexcept>

#include "qwqkd/angle.hpp"
#include "qwqkd/sweep.hpp"

namespace qwqkd::cli {

namespace {

struct Tolerance {
  double value = 0.0;
  double tol = 0.0;
};

std::optional<Tolerance> read_tolerance(const nlohmann::json& check, const char* key) {
  if (!check.contains(key)) return std::nullopt;
  const auto& v = check.at(key);
  if (!v.is_array() || v.size() != 2) {
    throw std::invalid_argument(std::string("manifest check field '") + key +
                                "' must be [value, tolerance]");
  }
  return Tolerance{v[0].get<double>(), v[1].get<double>()};
}

std::vector<SweepRow> execute_run(const nlohmann::json& run, const ReproduceOptions& options) {
  const std::string id = run.at("id").get<std::string>();
  const std::string type = run.at("type").get<std::string>();
  SweepOptions sweep;
  sweep.jobs = options.jobs;
  if (options.progress) {
    sweep.progress = [&](std::size_t done, std::size_t total) { options.progress(id, done, total); };
  }
  const auto positions = run.at("P").get<std::vector<int>>();
  const long t_max = run.at("T_max").get<long>();
  if (type == "series") {
    return fixed_walk_series(parse_angle(run.at("theta").get<std::string>()),
                             parse_angle(run.at("phi").get<std::string>()),
                             parse_flip(run.at("F").get<std::string>()), positions, t_max, sweep);
  }
  if (type == "grid") {
    std::vector<Flip> flips;
    for (const auto& f : run.at("F")) flips.push_back(parse_flip(f.get<std::string>()));
    const SweepGrid grid =
        SweepGrid::pi_fractions(positions, run.at("denominator").get<int>(), flips, t_max);
    return run_sweep(grid, sweep);
  }
  throw std::invalid_argument("unknown manifest run type '" + type + "'");
}

std::string describe(const std::string& target, const nlohmann::json& check) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%s/%s P=%d F=%s%s", target.c_str(),
                check.at("run").get<std::string>().c_str(), check.at("P").get<int>(),
                check.at("F").get<std::string>().c_str(),
                check.value("best", false) ? " (best row)" : "");
  return buf;
}

}  // namespace

std::vector<std::string> manifest_targets(const nlohmann::json& manifest) {
  std::vector<std::string> out;
  for (const auto& [name, value] : manifest.at("targets").items()) out.push_back(name);
  return out;
}

ReproduceOutcome reproduce(const nlohmann::json& manifest, const std::string& target,
                           const ReproduceOptions& options) {
  if (!manifest.contains("targets") || !manifest["targets"].contains(target)) {
    std::string known;
    if (manifest.contains("targets")) {
      for (const auto& name : manifest_targets(manifest)) known += " " + name;
    }
    throw std::invalid_argument("unknown reproduce target '" + target + "' (known:" + known + ")");
  }
  const nlohmann::json& entry = manifest["targets"][target];

  ReproduceOutcome outcome;
  outcome.csv = "run,P,F,theta,phi,t,c,Q_max\n";
  std::map<std::string, std::vector<SweepRow>> results;
  try {
    for (const auto& run : entry.at("runs")) {
      const std::string id = run.at("id").get<std::string>();
      std::vector<SweepRow> rows = execute_run(run, options);
      const std::string csv = rows_to_csv(rows);
      std::size_t pos = csv.find('\n') + 1;
      while (pos < csv.size()) {
        const std::size_t end = csv.find('\n', pos);
        outcome.csv += id + "," + csv.substr(pos, end - pos + 1);
        pos = end + 1;
      }
      results[id] = std::move(rows);
    }

    for (const auto& check : entry.at("checks")) {
      const std::string run = check.at("run").get<std::string>();
      const auto it = results.find(run);
      if (it == results.end()) throw std::invalid_argument("manifest check names unknown run " + run);
      const int p = check.at("P").get<int>();
      const Flip flip = parse_flip(check.at("F").get<std::string>());

      const SweepRow* row = nullptr;
      std::string problems;
      if (check.value("best", false)) {
        for (const SweepRow& r : it->second) {
          if (!row || r.q_max > row->q_max) row = &r;
        }
        if (row && (row->positions != p || row->flip != flip)) {
          char buf[96];
          std::snprintf(buf, sizeof buf, " best at P=%d F=%s", row->positions,
                        std::string(to_string(row->flip)).c_str());
          problems += buf;
        }
      } else {
        for (const SweepRow& r : it->second) {
          if (r.positions == p && r.flip == flip) row = &r;
        }
      }
      if (!row) throw std::invalid_argument("manifest check matches no row: " + describe(target, check));

      char buf[160];
      if (check.contains("t") && check["t"].get<long>() != row->t) {
        std::snprintf(buf, sizeof buf, " t expected %ld got %ld", check["t"].get<long>(), row->t);
        problems += buf;
      }
      if (const auto c = read_tolerance(check, "c"); c && std::abs(row->c - c->value) > c->tol) {
        std::snprintf(buf, sizeof buf, " c expected %.4f+-%.4f got %.6f", c->value, c->tol, row->c);
        problems += buf;
      }
      if (const auto q = read_tolerance(check, "Q_max"); q && std::abs(row->q_max - q->value) > q->tol) {
        std::snprintf(buf, sizeof buf, " Q_max expected %.4f+-%.4f got %.6f", q->value, q->tol,
                      row->q_max);
        problems += buf;
      }
      std::snprintf(buf, sizeof buf, " (t=%ld c=%.6f Q_max=%.6f)", row->t, row->c, row->q_max);
      if (problems.empty()) {
        outcome.report.push_back("MATCH " + describe(target, check) + buf);
      } else {
        outcome.all_match = false;
        outcome.report.push_back("MISMATCH " + describe(target, check) + ":" + problems);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed manifest: ") + e.what());
  }
  return outcome;
}

}  // namespace qwqkd::cli
