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

#pragma once

#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace qwqkd::cli {

struct ReproduceOptions {
  unsigned jobs = 0;
  // Called with (run id, completed cells, total cells).
  std::function<void(const std::string&, std::size_t, std::size_t)> progress;
};

struct ReproduceOutcome {
  std::string csv;                  // "run,P,F,theta,phi,t,c,Q_max"
  std::vector<std::string> report;  // one line per check
  bool all_match = true;
};

std::vector<std::string> manifest_targets(const nlohmann::json& manifest);

// Throws std::invalid_argument for an unknown target or a malformed manifest.
ReproduceOutcome reproduce(const nlohmann::json& manifest, const std::string& target,
                           const ReproduceOptions& options);

}  // namespace qwqkd::cli
