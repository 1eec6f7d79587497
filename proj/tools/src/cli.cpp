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

#include "qwqkd/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qwqkd/angle.hpp"
#include "qwqkd/protocol/one_way.hpp"
#include "qwqkd/protocol/semi_quantum.hpp"
#include "qwqkd/protocol/two_way.hpp"
#include "qwqkd/rng.hpp"
#include "qwqkd/security.hpp"
#include "qwqkd/sweep.hpp"
#include "qwqkd/walk.hpp"
#include "reproduce.hpp"

namespace qwqkd::cli {

namespace {

// Thrown once the result is written but did not match expectations.
struct AcceptanceMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::uint64_t seed = Rng::kDefaultSeed;
  std::string out;
  std::string format;
};

void add_common(CLI::App* sub, Common& common, std::string default_format,
                std::vector<std::string> formats) {
  common.format = std::move(default_format);
  sub->add_option("--seed", common.seed, "RNG seed")->capture_default_str();
  sub->add_option("--out,-o", common.out, "Output file (default: stdout or $QWQKD_OUTPUT_DIR)");
  sub->add_option("--format", common.format, "Output format")
      ->check(CLI::IsMember(formats))
      ->capture_default_str();
}

void emit(const std::string& text, const Common& common, const std::string& default_name,
          std::ostream& out) {
  std::filesystem::path path;
  if (!common.out.empty()) {
    path = common.out;
  } else if (const char* dir = std::getenv(kOutputDirEnv); dir && *dir) {
    path = std::filesystem::path(dir) / (default_name + "." + common.format);
  } else {
    out << text;
    return;
  }
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot write " + path.string());
  file << text;
  if (!file) throw std::runtime_error("write failed for " + path.string());
}

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

void require_odd(int p) {
  require(p >= 1 && p % 2 == 1, "--P must be a positive odd integer");
}

std::pair<int, Coin> parse_init(const std::string& text) {
  const auto comma = text.find(',');
  require(comma != std::string::npos, "--init expects x,R or x,L");
  int x = 0;
  try {
    std::size_t used = 0;
    x = std::stoi(text.substr(0, comma), &used);
    require(used == comma, "--init position is not an integer");
  } catch (const std::logic_error&) {
    throw std::invalid_argument("--init position is not an integer");
  }
  return {x, parse_coin(text.substr(comma + 1))};
}

StepOrder parse_order(const std::string& text) {
  if (text == "coin-shift") return StepOrder::CoinThenShift;
  if (text == "shift-coin") return StepOrder::ShiftThenCoin;
  throw std::invalid_argument("--order must be coin-shift or shift-coin");
}

// Prints "label: done/total cells" whenever the percentage moves.
std::function<void(std::size_t, std::size_t)> progress_printer(std::ostream& err,
                                                               std::string label) {
  auto last = std::make_shared<long>(-1);
  return [&err, label = std::move(label), last](std::size_t done, std::size_t total) {
    const long pct = static_cast<long>(100 * done / std::max<std::size_t>(total, 1));
    if (pct == *last && done != total) return;
    *last = pct;
    err << label << ": " << done << "/" << total << " cells (" << pct << "%)\n" << std::flush;
  };
}

// ---- walk ------------------------------------------------------------------

struct WalkArgs {
  Common common;
  int positions = 0;
  std::string theta = "0.25pi";
  std::string phi = "0";
  long steps = 0;
  std::string flip = "I";
  std::string init = "0,R";
  std::string order = "coin-shift";
};

void run_walk(const WalkArgs& a, std::ostream& out) {
  require(a.positions >= 1, "--P must be >= 1");
  require(a.steps >= 0, "--t must be >= 0");
  const auto [x, coin] = parse_init(a.init);
  require(x >= 0 && x < a.positions, "--init position must lie in [0, P)");
  const WalkParams walk(a.positions, parse_angle(a.theta), parse_angle(a.phi), a.steps,
                        parse_flip(a.flip), parse_order(a.order));
  const StateVector final_state = evolve(basis_state(a.positions, x, coin), walk);
  const std::vector<double> probs = born_distribution(final_state);

  std::string text;
  if (a.common.format == "json") {
    nlohmann::json doc{{"P", a.positions},
                       {"theta", format_pi_multiple(walk.theta())},
                       {"phi", format_pi_multiple(walk.phi())},
                       {"F", a.flip},
                       {"t", a.steps},
                       {"init", a.init},
                       {"probabilities", probs},
                       {"positions", position_distribution(final_state)}};
    text = doc.dump(2) + "\n";
  } else {
    text = "x,s,probability\n";
    for (std::size_t i = 0; i < probs.size(); ++i) {
      text += std::to_string(i / 2) + "," + (i % 2 == 0 ? "R" : "L") + "," +
              fmt("%.12f", probs[i]) + "\n";
    }
  }
  emit(text, a.common, "walk", out);
}

// ---- cvalue ----------------------------------------------------------------

struct CvalueArgs {
  Common common;
  int positions = 0;
  std::string theta;
  std::string phi = "0";
  std::string flip = "I";
  long t_max = 5000;
  bool trace = false;
};

void run_cvalue(const CvalueArgs& a, std::ostream& out) {
  require_odd(a.positions);
  require(a.t_max >= 1, "--tmax must be >= 1");
  const WalkParams walk(a.positions, parse_angle(a.theta), parse_angle(a.phi), 0,
                        parse_flip(a.flip));
  const OverlapReport r = compute_c(walk, a.t_max, a.trace);
  const double q_max = max_tolerated_qber(r.c, a.positions);

  std::string text;
  if (a.common.format == "json") {
    nlohmann::json doc{{"P", a.positions},
                       {"theta", format_pi_multiple(walk.theta())},
                       {"phi", format_pi_multiple(walk.phi())},
                       {"F", a.flip},
                       {"T_max", a.t_max},
                       {"t", r.t_star},
                       {"c", r.c},
                       {"Q_max", q_max}};
    if (a.trace) doc["c_trace"] = r.c_trace;
    text = doc.dump(2) + "\n";
  } else if (a.trace) {
    text = "t,c\n";
    for (std::size_t i = 0; i < r.c_trace.size(); ++i) {
      text += std::to_string(i + 1) + "," + fmt("%.9f", r.c_trace[i]) + "\n";
    }
  } else {
    text = "c=" + fmt("%.6f", r.c) + ", t=" + std::to_string(r.t_star) + ", Q_max=" +
           fmt("%.6f", q_max) + "\n";
  }
  emit(text, a.common, "cvalue", out);
}

// ---- keyrate / noise -------------------------------------------------------

struct KeyrateArgs {
  Common common;
  double c = 0.0;
  int positions = 0;
  double qber_value = 0.0;
  double error_weight = -1.0;
};

void run_keyrate(const KeyrateArgs& a, std::ostream& out) {
  require(a.positions >= 1, "--P must be >= 1");
  require(a.c > 0.0 && a.c <= 1.0, "--c must lie in (0, 1]");
  double q = a.qber_value;
  if (a.error_weight >= 0.0) {
    require(a.error_weight <= 1.0, "--error-weight must lie in [0, 1]");
    q = depolarizing_closed_form(a.error_weight, a.positions).qber;
  }
  require(q >= 0.0 && q <= 1.0, "--qber must lie in [0, 1]");
  const KeyRateReport r = key_rate_report(a.c, a.positions, q);
  std::string text;
  if (a.common.format == "json") {
    text = nlohmann::json{{"c", r.c}, {"P", a.positions}, {"qber", r.qber}, {"H_Z", r.h_z},
                          {"H_W", r.h_w}, {"rate", r.rate}}
               .dump(2) +
           "\n";
  } else {
    text = "rate=" + fmt("%.6f", r.rate) + ", H_Z=" + fmt("%.6f", r.h_z) + ", H_W=" +
           fmt("%.6f", r.h_w) + ", Q=" + fmt("%.6f", r.qber) + "\n";
  }
  emit(text, a.common, "keyrate", out);
}

struct NoiseArgs {
  Common common;
  double c = -1.0;
  int positions = 0;
  double error_weight = -1.0;
};

void run_noise(const NoiseArgs& a, std::ostream& out) {
  require(a.positions >= 1, "--P must be >= 1");
  require((a.c >= 0.0) != (a.error_weight >= 0.0), "give exactly one of --c or --error-weight");
  std::string text;
  if (a.c >= 0.0) {
    require(a.c > 0.0 && a.c <= 1.0, "--c must lie in (0, 1]");
    const double q = max_tolerated_qber(a.c, a.positions);
    text = a.common.format == "json"
               ? nlohmann::json{{"c", a.c}, {"P", a.positions}, {"Q_max", q}}.dump(2) + "\n"
               : fmt("%.6f", q) + "\n";
  } else {
    require(a.error_weight <= 1.0, "--error-weight must lie in [0, 1]");
    const DepolarizingParams d = depolarizing_closed_form(a.error_weight, a.positions);
    text = a.common.format == "json"
               ? nlohmann::json{{"error_weight", a.error_weight}, {"P", a.positions},
                                {"lambda", d.lambda}, {"qber", d.qber}}
                         .dump(2) +
                     "\n"
               : "lambda=" + fmt("%.6f", d.lambda) + ", Q=" + fmt("%.6f", d.qber) + "\n";
  }
  emit(text, a.common, "noise", out);
}

// ---- sweep -----------------------------------------------------------------

struct SweepArgs {
  Common common;
  std::vector<int> positions;
  std::vector<std::string> flips{"I", "X", "Y"};
  int denominator = 10;
  std::vector<std::string> thetas;
  std::vector<std::string> phis;
  long t_max = 5000;
  unsigned jobs = 0;
  std::string checkpoint;
  bool quiet = false;
};

void run_sweep_cmd(const SweepArgs& a, std::ostream& out, std::ostream& err) {
  for (int p : a.positions) require_odd(p);
  require(a.t_max >= 1, "--tmax must be >= 1");
  require(a.denominator >= 1, "--denominator must be >= 1");
  std::vector<Flip> flips;
  for (const auto& f : a.flips) flips.push_back(parse_flip(f));
  SweepGrid grid = SweepGrid::pi_fractions(a.positions, a.denominator, flips, a.t_max);
  if (!a.thetas.empty()) {
    grid.thetas.clear();
    for (const auto& t : a.thetas) grid.thetas.push_back(parse_angle(t));
  }
  if (!a.phis.empty()) {
    grid.phis.clear();
    for (const auto& p : a.phis) grid.phis.push_back(parse_angle(p));
  }
  grid.validate();

  SweepOptions options;
  options.jobs = a.jobs;
  if (!a.checkpoint.empty()) options.checkpoint = a.checkpoint;
  if (!a.quiet) options.progress = progress_printer(err, "sweep");
  const std::vector<SweepRow> rows = run_sweep(grid, options);
  const std::string text = a.common.format == "json"
                               ? rows_to_json(rows, grid_metadata(grid)).dump(2) + "\n"
                               : rows_to_csv(rows);
  emit(text, a.common, "sweep", out);
}

// ---- protocol --------------------------------------------------------------

struct ProtocolArgs {
  Common common;
  std::string config;
  bool no_records = false;
  bool seed_given = false;
};

void run_protocol(ProtocolArgs a, std::ostream& out, std::ostream& err) {
  std::ifstream in(a.config);
  require(static_cast<bool>(in), "cannot read config " + a.config);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
  }
  protocol::ProtocolConfig config = protocol::config_from_json(doc);
  if (a.seed_given) config.seed = a.common.seed;
  const protocol::ChannelModel channel =
      protocol::channel_from_json(doc.value("channel", nlohmann::json()), config.positions);
  for (const auto& w : config.warnings()) err << "warning: " << w << "\n";

  Rng rng(config.seed);
  protocol::ProtocolTranscript transcript;
  nlohmann::json extra;
  switch (config.protocol) {
    case protocol::ProtocolKind::TwoWay: {
      transcript = protocol::protocol1_run(config, channel, rng);
      const auto v1 = protocol::verification1(config, channel, rng);
      const auto v2 = protocol::verification2(config, channel, rng, v1);
      extra["verification1"] = {{"pass", v1.pass}, {"disclosed", v1.disclosed},
                                {"failures", v1.failures}};
      extra["verification2"] = {{"pass", v2.pass}, {"disclosed", v2.disclosed},
                                {"failures", v2.failures}, {"key_bits", v2.key_bits}};
      break;
    }
    case protocol::ProtocolKind::OneWay:
      transcript = protocol::protocol2_run(config, config.one_way_walk(), channel, rng);
      break;
    case protocol::ProtocolKind::SemiQuantum:
      transcript = protocol::protocol3_run(config, protocol::build_q_set(config.positions),
                                           channel, rng);
      break;
  }

  std::string text;
  if (a.common.format == "csv") {
    text = protocol::summary_csv(transcript);
  } else {
    nlohmann::json j = protocol::to_json(transcript, !a.no_records);
    j["config"] = protocol::to_json(config);
    for (const auto& [k, v] : extra.items()) j[k] = v;
    text = j.dump(2) + "\n";
  }
  emit(text, a.common, "protocol", out);
}

// ---- reproduce -------------------------------------------------------------

struct ReproduceArgs {
  Common common;
  std::string target;
  std::string manifest;
  unsigned jobs = 0;
  bool quiet = false;
};

void run_reproduce(const ReproduceArgs& a, std::ostream& out, std::ostream& err) {
  nlohmann::json manifest;
  try {
    if (a.manifest.empty()) {
      manifest = nlohmann::json::parse(embedded_manifest());
    } else {
      std::ifstream in(a.manifest);
      require(static_cast<bool>(in), "cannot read manifest " + a.manifest);
      manifest = nlohmann::json::parse(in);
    }
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("manifest is not valid JSON: ") + e.what());
  }
  ReproduceOptions options;
  options.jobs = a.jobs;
  if (!a.quiet) {
    auto last = std::make_shared<std::pair<std::string, long>>("", -1);
    options.progress = [&err, last](const std::string& run, std::size_t done, std::size_t total) {
      const long pct = static_cast<long>(100 * done / std::max<std::size_t>(total, 1));
      if (last->first == run && last->second == pct && done != total) return;
      *last = {run, pct};
      err << "reproduce " << run << ": " << done << "/" << total << " cells\n" << std::flush;
    };
  }
  const ReproduceOutcome outcome = reproduce(manifest, a.target, options);
  emit(outcome.csv, a.common, a.target, out);
  for (const auto& line : outcome.report) err << line << "\n";
  if (!outcome.all_match) throw AcceptanceMismatch("reproduce " + a.target + ": values differ from the manifest");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum-walk QKD simulation and analysis toolkit", "qwqkd"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(library_version()));

  WalkArgs walk;
  auto* walk_cmd = app.add_subcommand("walk", "Evolve one basis state and print its distribution");
  add_common(walk_cmd, walk.common, "csv", {"csv", "json"});
  walk_cmd->add_option("--P", walk.positions, "Cycle length")->required();
  walk_cmd->add_option("--theta", walk.theta, "Coin angle theta (e.g. 0.25pi)")->capture_default_str();
  walk_cmd->add_option("--phi", walk.phi, "Coin phase phi")->capture_default_str();
  walk_cmd->add_option("--t", walk.steps, "Number of steps")->capture_default_str();
  walk_cmd->add_option("--F", walk.flip, "Initial flip I, X or Y")->capture_default_str();
  walk_cmd->add_option("--init", walk.init, "Initial basis state x,R or x,L")->capture_default_str();
  walk_cmd->add_option("--order", walk.order, "coin-shift or shift-coin")->capture_default_str();

  CvalueArgs cvalue;
  auto* cvalue_cmd = app.add_subcommand("cvalue", "Minimal overlap constant c over 1..T_max steps");
  add_common(cvalue_cmd, cvalue.common, "text", {"text", "csv", "json"});
  cvalue_cmd->add_option("--P", cvalue.positions, "Odd cycle length")->required();
  cvalue_cmd->add_option("--theta", cvalue.theta, "Coin angle theta")->required();
  cvalue_cmd->add_option("--phi", cvalue.phi, "Coin phase phi")->capture_default_str();
  cvalue_cmd->add_option("--F", cvalue.flip, "Initial flip I, X or Y")->capture_default_str();
  cvalue_cmd->add_option("--tmax", cvalue.t_max, "Largest step count")->capture_default_str();
  cvalue_cmd->add_flag("--trace", cvalue.trace, "Emit c(t) for every t");

  KeyrateArgs keyrate;
  auto* keyrate_cmd = app.add_subcommand("keyrate", "Asymptotic key rate for symmetric errors");
  add_common(keyrate_cmd, keyrate.common, "text", {"text", "json"});
  keyrate_cmd->add_option("--c", keyrate.c, "Overlap constant")->required();
  keyrate_cmd->add_option("--P", keyrate.positions, "Cycle length")->required();
  auto* qber_opt = keyrate_cmd->add_option("--qber", keyrate.qber_value, "Error rate in both bases");
  keyrate_cmd->add_option("--error-weight", keyrate.error_weight, "Pauli channel error weight E_r")
      ->excludes(qber_opt);

  NoiseArgs noise;
  auto* noise_cmd = app.add_subcommand("noise", "Maximal tolerated error rate, or a channel's error rate");
  add_common(noise_cmd, noise.common, "text", {"text", "json"});
  noise_cmd->add_option("--c", noise.c, "Overlap constant");
  noise_cmd->add_option("--P", noise.positions, "Cycle length")->required();
  noise_cmd->add_option("--error-weight", noise.error_weight, "Pauli channel error weight E_r");

  SweepArgs sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Grid search minimizing c per (P, F)");
  add_common(sweep_cmd, sweep.common, "csv", {"csv", "json"});
  sweep_cmd->add_option("--P", sweep.positions, "Odd cycle lengths, comma separated")
      ->required()
      ->delimiter(',');
  sweep_cmd->add_option("--F", sweep.flips, "Flips, comma separated")->delimiter(',')->capture_default_str();
  sweep_cmd->add_option("--denominator", sweep.denominator, "Angles k pi / n for k = 0..n")
      ->capture_default_str();
  sweep_cmd->add_option("--theta", sweep.thetas, "Explicit theta values (overrides the grid)")
      ->delimiter(',');
  sweep_cmd->add_option("--phi", sweep.phis, "Explicit phi values (overrides the grid)")->delimiter(',');
  sweep_cmd->add_option("--tmax", sweep.t_max, "Largest step count")->capture_default_str();
  sweep_cmd->add_option("--jobs,-j", sweep.jobs, "Worker threads (0 = all cores)")->capture_default_str();
  sweep_cmd->add_option("--checkpoint", sweep.checkpoint, "Checkpoint file for resumable sweeps");
  sweep_cmd->add_flag("--quiet,-q", sweep.quiet, "No progress on stderr");

  ProtocolArgs proto;
  auto* proto_cmd = app.add_subcommand("protocol", "Simulate a protocol run from a JSON config");
  add_common(proto_cmd, proto.common, "json", {"json", "csv"});
  proto_cmd->add_option("--config", proto.config, "Protocol config JSON")->required();
  proto_cmd->add_flag("--no-records", proto.no_records, "Omit per-iteration records");

  ReproduceArgs repro;
  auto* repro_cmd = app.add_subcommand("reproduce", "Rerun a manifest target and compare against its expected values");
  add_common(repro_cmd, repro.common, "csv", {"csv"});
  repro_cmd->add_option("target", repro.target, "table1, fig3, fig4, fig6, fig7 or best284")->required();
  repro_cmd->add_option("--manifest", repro.manifest, "Manifest overriding the embedded one");
  repro_cmd->add_option("--jobs,-j", repro.jobs, "Worker threads (0 = all cores)")->capture_default_str();
  repro_cmd->add_flag("--quiet,-q", repro.quiet, "No progress on stderr");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << library_version() << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    err << "error: " << msg << "\n";
    return kValidationError;
  }

  try {
    if (walk_cmd->parsed()) run_walk(walk, out);
    if (cvalue_cmd->parsed()) run_cvalue(cvalue, out);
    if (keyrate_cmd->parsed()) run_keyrate(keyrate, out);
    if (noise_cmd->parsed()) run_noise(noise, out);
    if (sweep_cmd->parsed()) run_sweep_cmd(sweep, out, err);
    if (proto_cmd->parsed()) {
      proto.seed_given = proto_cmd->count("--seed") > 0;
      run_protocol(proto, out, err);
    }
    if (repro_cmd->parsed()) run_reproduce(repro, out, err);
  } catch (const AcceptanceMismatch& e) {
    err << "error: " << e.what() << "\n";
    return kAcceptanceMismatch;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kValidationError;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << "\n";
    return kValidationError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kRuntimeError;
  }
  return kOk;
}

}  // namespace qwqkd::cli
