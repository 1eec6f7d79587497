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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qwqkd/walk.hpp"

namespace qwqkd {

struct SweepGrid {
  std::vector<int> positions;  // odd P values
  std::vector<double> thetas;  // radians
  std::vector<double> phis;    // radians
  std::vector<Flip> flips;
  long t_max = 1;

  // Throws std::invalid_argument on empty lists, even P or t_max < 1.
  void validate() const;
  std::size_t cell_count() const;
  // Hash of every grid field; ties a checkpoint file to its grid.
  std::uint64_t fingerprint() const;

  // theta, phi in {k pi / denominator : k = 0..denominator}.
  static SweepGrid pi_fractions(std::vector<int> positions, int denominator,
                                std::vector<Flip> flips, long t_max);
};

// One (P, F, theta, phi) point. Cells are numbered P-major, then F, theta, phi.
struct SweepCell {
  int positions = 1;
  Flip flip = Flip::I;
  double theta = 0.0;
  double phi = 0.0;
};

SweepCell cell_at(const SweepGrid& grid, std::size_t index);

struct CellResult {
  long t = 0;
  double c = 1.0;
};

CellResult evaluate_cell(const SweepCell& cell, long t_max);

struct SweepRow {
  int positions = 1;
  Flip flip = Flip::I;
  double theta = 0.0;
  double phi = 0.0;
  long t = 0;
  double c = 1.0;
  double q_max = 0.0;
};

struct SweepOptions {
  unsigned jobs = 0;  // 0 = hardware concurrency
  // Completed cells are appended here and skipped on restart.
  std::optional<std::filesystem::path> checkpoint;
  // Called after each cell with (completed, total); calls are serialized.
  std::function<void(std::size_t, std::size_t)> progress;
};

// Evaluates every cell and keeps, per (P, F) in grid order, the cell with the
// smallest c. Ties within kOverlapTieTolerance go to the smaller t, then to
// the earlier theta and phi. The result does not depend on `jobs`.
std::vector<SweepRow> run_sweep(const SweepGrid& grid, const SweepOptions& options = {});

// One row per P for a fixed coin; only t is searched.
std::vector<SweepRow> fixed_walk_series(double theta, double phi, Flip flip,
                                        const std::vector<int>& positions,
                                        long t_max,
                                        const SweepOptions& options = {});

// Header "P,F,theta,phi,t,c,Q_max"; angles as multiples of pi.
std::string rows_to_csv(const std::vector<SweepRow>& rows);
nlohmann::json grid_metadata(const SweepGrid& grid);
nlohmann::json rows_to_json(const std::vector<SweepRow>& rows,
                            const nlohmann::json& metadata);

std::string_view library_version();

}  // namespace qwqkd
