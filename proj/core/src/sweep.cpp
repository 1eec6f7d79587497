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

#include "qwqkd/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "qwqkd/angle.hpp"
#include "qwqkd/security.hpp"

#ifndef QWQKD_VERSION
#define QWQKD_VERSION "0.0.0"
#endif

namespace qwqkd {

namespace {

constexpr std::string_view kCheckpointTag = "# qwqkd-sweep";

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string format_fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string checkpoint_header(const SweepGrid& grid) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%s %016llx %zu", kCheckpointTag.data(),
                static_cast<unsigned long long>(grid.fingerprint()), grid.cell_count());
  return buf;
}

// Loads finished cells from an existing checkpoint. A file written for a
// different grid is rejected rather than silently reused.
void load_checkpoint(const std::filesystem::path& path, const SweepGrid& grid,
                     std::vector<std::optional<CellResult>>& results) {
  std::ifstream in(path);
  if (!in) return;
  std::string line;
  if (!std::getline(in, line)) return;
  if (line != checkpoint_header(grid)) {
    throw std::invalid_argument("checkpoint " + path.string() +
                                " was written for a different grid");
  }
  while (std::getline(in, line)) {
    std::size_t cell = 0;
    long t = 0;
    double c = 0.0;
    // A torn final line from an interrupted run is skipped.
    if (std::sscanf(line.c_str(), "%zu,%ld,%lf", &cell, &t, &c) != 3) continue;
    if (cell >= results.size()) continue;
    results[cell] = CellResult{t, c};
  }
}

bool better(const CellResult& candidate, const CellResult& best) {
  if (candidate.c < best.c - kOverlapTieTolerance) return true;
  if (std::abs(candidate.c - best.c) <= kOverlapTieTolerance) return candidate.t < best.t;
  return false;
}

}  // namespace

void SweepGrid::validate() const {
  if (positions.empty() || thetas.empty() || phis.empty() || flips.empty()) {
    throw std::invalid_argument("sweep grid lists must be non-empty");
  }
  for (int p : positions) {
    if (p < 1 || p % 2 == 0) {
      throw std::invalid_argument("sweep P values must be odd and positive, got " +
                                  std::to_string(p));
    }
  }
  if (t_max < 1) throw std::invalid_argument("sweep t_max must be >= 1");
}

std::size_t SweepGrid::cell_count() const {
  return positions.size() * flips.size() * thetas.size() * phis.size();
}

std::uint64_t SweepGrid::fingerprint() const {
  std::ostringstream os;
  os.precision(17);
  os << "P";
  for (int p : positions) os << ' ' << p;
  os << " F";
  for (Flip f : flips) os << ' ' << to_string(f);
  os << " theta";
  for (double v : thetas) os << ' ' << v;
  os << " phi";
  for (double v : phis) os << ' ' << v;
  os << " T " << t_max;
  return fnv1a(os.str());
}

SweepGrid SweepGrid::pi_fractions(std::vector<int> positions, int denominator,
                                  std::vector<Flip> flips, long t_max) {
  if (denominator < 1) throw std::invalid_argument("denominator must be >= 1");
  SweepGrid grid;
  grid.positions = std::move(positions);
  grid.flips = std::move(flips);
  grid.t_max = t_max;
  for (int k = 0; k <= denominator; ++k) {
    grid.thetas.push_back(k * kPi / denominator);
  }
  grid.phis = grid.thetas;
  grid.validate();
  return grid;
}

SweepCell cell_at(const SweepGrid& grid, std::size_t index) {
  if (index >= grid.cell_count()) throw std::out_of_range("sweep cell index out of range");
  const std::size_t n_phi = grid.phis.size();
  const std::size_t n_theta = grid.thetas.size();
  const std::size_t n_flip = grid.flips.size();
  SweepCell cell;
  cell.phi = grid.phis[index % n_phi];
  index /= n_phi;
  cell.theta = grid.thetas[index % n_theta];
  index /= n_theta;
  cell.flip = grid.flips[index % n_flip];
  index /= n_flip;
  cell.positions = grid.positions[index];
  return cell;
}

CellResult evaluate_cell(const SweepCell& cell, long t_max) {
  const WalkParams walk(cell.positions, cell.theta, cell.phi, 0, cell.flip);
  const OverlapReport report = compute_c(walk, t_max);
  return CellResult{report.t_star, report.c};
}

std::vector<SweepRow> run_sweep(const SweepGrid& grid, const SweepOptions& options) {
  grid.validate();
  const std::size_t total = grid.cell_count();
  std::vector<std::optional<CellResult>> results(total);

  std::ofstream checkpoint;
  if (options.checkpoint) {
    load_checkpoint(*options.checkpoint, grid, results);
    const bool resumed = std::any_of(results.begin(), results.end(),
                                     [](const auto& r) { return r.has_value(); });
    if (resumed) {
      checkpoint.open(*options.checkpoint, std::ios::app);
    } else {
      checkpoint.open(*options.checkpoint, std::ios::trunc);
      checkpoint << checkpoint_header(grid) << '\n' << std::flush;
    }
    if (!checkpoint) {
      throw std::runtime_error("cannot write checkpoint " + options.checkpoint->string());
    }
  }

  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < total; ++i) {
    if (!results[i]) pending.push_back(i);
  }

  std::size_t completed = total - pending.size();
  std::mutex mutex;
  std::exception_ptr failure;
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= pending.size()) return;
      {
        std::lock_guard lock(mutex);
        if (failure) return;
      }
      const std::size_t cell = pending[k];
      try {
        const CellResult r = evaluate_cell(cell_at(grid, cell), grid.t_max);
        std::lock_guard lock(mutex);
        results[cell] = r;
        ++completed;
        if (checkpoint.is_open()) {
          char buf[96];
          std::snprintf(buf, sizeof buf, "%zu,%ld,%.17g\n", cell, r.t, r.c);
          checkpoint << buf << std::flush;
        }
        if (options.progress) options.progress(completed, total);
      } catch (...) {
        std::lock_guard lock(mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };

  unsigned jobs = options.jobs != 0 ? options.jobs : std::thread::hardware_concurrency();
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(1, pending.size()))));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> threads;
    threads.reserve(jobs);
    for (unsigned j = 0; j < jobs; ++j) threads.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<SweepRow> rows;
  const std::size_t per_group = grid.thetas.size() * grid.phis.size();
  for (std::size_t group = 0; group * per_group < total; ++group) {
    std::size_t best_cell = group * per_group;
    CellResult best = *results[best_cell];
    for (std::size_t i = best_cell + 1; i < (group + 1) * per_group; ++i) {
      if (better(*results[i], best)) {
        best = *results[i];
        best_cell = i;
      }
    }
    const SweepCell cell = cell_at(grid, best_cell);
    rows.push_back(SweepRow{cell.positions, cell.flip, cell.theta, cell.phi, best.t,
                            best.c, max_tolerated_qber(best.c, cell.positions)});
  }
  return rows;
}

std::vector<SweepRow> fixed_walk_series(double theta, double phi, Flip flip,
                                        const std::vector<int>& positions, long t_max,
                                        const SweepOptions& options) {
  SweepGrid grid;
  grid.positions = positions;
  grid.thetas = {theta};
  grid.phis = {phi};
  grid.flips = {flip};
  grid.t_max = t_max;
  return run_sweep(grid, options);
}

std::string rows_to_csv(const std::vector<SweepRow>& rows) {
  std::string out = "P,F,theta,phi,t,c,Q_max\n";
  for (const SweepRow& r : rows) {
    out += std::to_string(r.positions);
    out += ',';
    out += to_string(r.flip);
    out += ',';
    out += format_pi_multiple(r.theta);
    out += ',';
    out += format_pi_multiple(r.phi);
    out += ',';
    out += std::to_string(r.t);
    out += ',';
    out += format_fixed6(r.c);
    out += ',';
    out += format_fixed6(r.q_max);
    out += '\n';
  }
  return out;
}

nlohmann::json grid_metadata(const SweepGrid& grid) {
  nlohmann::json meta;
  meta["P"] = grid.positions;
  std::vector<std::string> flips;
  for (Flip f : grid.flips) flips.emplace_back(to_string(f));
  meta["F"] = flips;
  std::vector<std::string> thetas;
  for (double v : grid.thetas) thetas.push_back(format_pi_multiple(v));
  std::vector<std::string> phis;
  for (double v : grid.phis) phis.push_back(format_pi_multiple(v));
  meta["theta"] = thetas;
  meta["phi"] = phis;
  meta["T_max"] = grid.t_max;
  meta["cells"] = grid.cell_count();
  return meta;
}

nlohmann::json rows_to_json(const std::vector<SweepRow>& rows, const nlohmann::json& metadata) {
  nlohmann::json doc;
  doc["tool"] = "qwqkd";
  doc["version"] = std::string(library_version());
  doc["grid"] = metadata;
  nlohmann::json arr = nlohmann::json::array();
  for (const SweepRow& r : rows) {
    arr.push_back({{"P", r.positions},
                   {"F", std::string(to_string(r.flip))},
                   {"theta", format_pi_multiple(r.theta)},
                   {"phi", format_pi_multiple(r.phi)},
                   {"t", r.t},
                   {"c", r.c},
                   {"Q_max", r.q_max}});
  }
  doc["rows"] = std::move(arr);
  return doc;
}

std::string_view library_version() { return QWQKD_VERSION; }

}  // namespace qwqkd
