// Copyright 2026 The qtherm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: runs the experiments and writes JSON/CSV results.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <regex>

#include <CLI11.hpp>

#include "qtherm/errors.hpp"
#include "qtherm/experiments.hpp"

namespace {

using namespace qtherm;

// Accepts plain numbers and multiples of pi such as "pi/8", "3pi/8", "-pi".
double parse_angle(const std::string& text) {
  static const std::regex pi_form(R"(^\s*([+-]?\d*\.?\d*)\s*\*?\s*pi\s*(?:/\s*(\d*\.?\d+))?\s*$)");
  std::smatch m;
  if (std::regex_match(text, m, pi_form)) {
    const std::string k = m[1].str();
    double factor = 1.0;
    if (k == "-") {
      factor = -1.0;
    } else if (!k.empty() && k != "+") {
      factor = std::stod(k);
    }
    const double denom = m[2].matched ? std::stod(m[2].str()) : 1.0;
    return factor * std::numbers::pi / denom;
  }
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw ValidationError("cannot parse angle '" + text + "'");
  return v;
}

std::optional<NoiseProfile> resolve_noise(const std::string& spec, std::uint64_t seed) {
  if (spec.empty() || spec == "none") return std::nullopt;
  if (spec == "low" || spec == "medium" || spec == "high" || spec == "ideal") {
    NoiseProfile p = builtin_noise_profile(spec);
    p.seed = seed;
    return p;
  }
  return load_noise_profile_file(spec);
}

Hamiltonian resolve_hamiltonian(const std::string& spec) {
  if (spec == "h1" || spec == "h2") return builtin_hamiltonian(spec);
  return load_hamiltonian_file(spec);
}

std::filesystem::path output_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("QTHERM_OUT_DIR"); env != nullptr && *env != '\0') return env;
  return ".";
}

void write_outputs(const RunResult& r, const std::string& out_flag) {
  const auto dir = output_dir(out_flag);
  std::filesystem::create_directories(dir);
  const auto json_path = dir / (r.experiment + ".json");
  std::ofstream(json_path) << to_json(r);
  std::cout << "wrote " << json_path.string() << "\n";
  if (!r.series.empty()) {
    const auto csv_path = dir / (r.experiment + ".csv");
    std::ofstream(csv_path) << to_csv(r.series);
    std::cout << "wrote " << csv_path.string() << "\n";
  }
}

void print_series(const RunResult& r) {
  std::cout << std::setprecision(10);
  for (const auto& p : r.series) {
    if (p.theta) std::cout << "theta=" << *p.theta << " ";
    std::cout << "T=" << p.applications << " fidelity_sim=" << p.fidelity_sim << " fidelity_pred=" << p.fidelity_pred;
    if (p.q_estimate) std::cout << " q_estimate=" << *p.q_estimate;
    std::cout << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qtherm: post-selection, ancilla thermalisation and fixed-point amplification experiments"};
  app.require_subcommand(1);
  std::string out;
  app.add_option("--out", out, "output directory (default: $QTHERM_OUT_DIR or .)");

  // perceptron
  auto* perc = app.add_subcommand("perceptron", "perceptron activation via ancilla thermalisation");
  std::vector<std::string> theta_grid{"pi/8", "pi/4", "3pi/8"};
  int perc_T = 4, threads = 1;
  std::string perc_mode = "exact", perc_noise = "none";
  std::uint64_t shots = 8192, perc_seed = 1;
  bool no_trailing = false;
  perc->add_option("--theta-grid", theta_grid, "angles, e.g. 0.3,pi/4,3pi/8")->delimiter(',');
  perc->add_option("--iterations", perc_T, "total applications of U (T >= 1)");
  perc->add_option("--mode", perc_mode)->check(CLI::IsMember({"exact", "shots"}));
  auto* shots_opt = perc->add_option("--shots", shots, "shots per point in shots mode");
  perc->add_option("--noise", perc_noise, "none|low|medium|high|ideal|<profile.json>");
  perc->add_option("--seed", perc_seed);
  perc->add_option("--threads", threads, "worker threads for the theta sweep");
  perc->add_flag("--no-trailing-reset", no_trailing, "omit the final conditioned reset");
  perc->add_option("--out", out);

  // groundstate
  auto* gs = app.add_subcommand("groundstate", "groundstate preparation by phase estimation and thermalisation");
  std::string ham = "h1", scramble = "exact", gs_noise = "none";
  std::optional<int> precision;
  int gs_T = 5;
  std::uint64_t gs_seed = 1;
  gs->add_option("--hamiltonian", ham, "h1|h2|<matrix.json>");
  gs->add_option("--precision", precision, "precision qubits m (default: smallest exact m)");
  gs->add_option("--iterations", gs_T, "total applications of U (T >= 1)");
  gs->add_option("--scramble", scramble)->check(CLI::IsMember({"exact", "hadamard"}));
  gs->add_option("--noise", gs_noise, "none|low|medium|high|ideal|<profile.json>");
  gs->add_option("--seed", gs_seed);
  gs->add_option("--out", out);

  // oaa
  auto* oaa = app.add_subcommand("oaa", "pi/3 fixed-point oblivious amplitude amplification");
  OaaOptions oaa_opts;
  oaa->add_option("--p0", oaa_opts.p0, "initial success probability");
  oaa->add_option("--k", oaa_opts.k, "recursion depth");
  oaa->add_option("--delta", oaa_opts.deltas, "phase errors for the sweep")->delimiter(',');
  oaa->add_option("--out", out);

  // scramble
  auto* scr = app.add_subcommand("scramble", "Monte Carlo study of the Hadamard scrambler");
  int scr_n = 2, scr_trials = 1000;
  std::uint64_t scr_seed = 1;
  scr->add_option("--qubits", scr_n)->check(CLI::Range(1, 8));
  scr->add_option("--trials", scr_trials);
  scr->add_option("--seed", scr_seed);
  scr->add_option("--out", out);

  // resources
  auto* res = app.add_subcommand("resources", "resource table rows");
  ResourceQuery query;
  std::vector<std::string> methods;
  std::optional<std::uint64_t> q_u, q_w, q_s;
  res->add_option("--method", methods, "postselect|oaa|thermalise|pea-postselect|pea-thermalise|lcu-thermalise|lcu-oaa")
      ->delimiter(',');
  res->add_option("--n", query.n);
  res->add_option("--m", query.m);
  res->add_option("--epsilon", query.epsilon);
  res->add_option("--p0", query.p0);
  res->add_option("--delta-gap", query.delta_gap);
  res->add_option("--sparsity", query.sparsity);
  res->add_option("--q-u", q_u, "gate count of U");
  res->add_option("--q-w", q_w, "gate count of the reset W");
  res->add_option("--q-s", q_s, "gate count of S(pi/3)");
  res->add_option("--out", out);

  // preactivation
  auto* pre = app.add_subcommand("preactivation", "theta = sum x_i w_i + b");
  std::vector<double> xs, ws;
  double bias = 0.0;
  pre->add_option("--x", xs)->delimiter(',');
  pre->add_option("--w", ws)->delimiter(',');
  pre->add_option("--b", bias);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (perc->parsed()) {
      if (shots_opt->count() > 0 && perc_mode != "shots") throw ValidationError("--shots requires --mode shots");
      PerceptronOptions o;
      for (const auto& t : theta_grid) o.thetas.push_back(parse_angle(t));
      o.max_applications = perc_T;
      o.trailing_reset = !no_trailing;
      o.mode = perc_mode == "shots" ? SampleMode::Shots : SampleMode::Exact;
      o.shots = shots;
      o.seed = perc_seed;
      o.noise = resolve_noise(perc_noise, perc_seed);
      o.threads = threads;
      const RunResult r = run_perceptron(o);
      print_series(r);
      write_outputs(r, out);
    } else if (gs->parsed()) {
      GroundstateOptions o;
      o.hamiltonian = resolve_hamiltonian(ham);
      o.precision = precision;
      o.max_applications = gs_T;
      o.scrambling = scramble == "exact" ? ScramblingMode::Exact : ScramblingMode::Hadamard;
      o.seed = gs_seed;
      o.noise = resolve_noise(gs_noise, gs_seed);
      const RunResult r = run_groundstate(o);
      print_series(r);
      write_outputs(r, out);
    } else if (oaa->parsed()) {
      const RunResult r = run_oaa(oaa_opts);
      std::cout << std::setprecision(12) << r.report.dump(2) << "\n" << r.counts.dump(2) << "\n";
      write_outputs(r, out);
    } else if (scr->parsed()) {
      const RunResult r = run_scramble(scr_n, scr_trials, scr_seed);
      std::cout << r.report.dump(2) << "\n";
      write_outputs(r, out);
    } else if (res->parsed()) {
      query.q_u = q_u;
      query.q_w = q_w;
      query.q_s = q_s;
      const RunResult r = run_resources(query, methods);
      for (const auto& row : r.report.at("rows")) {
        std::cout << std::left << std::setw(16) << row.at("method").get<std::string>();
        for (const char* col : {"measurements", "qubits", "gates"}) {
          const auto& c = row.at(col);
          std::cout << " | " << col << ": ";
          if (!c.at("value").is_null()) std::cout << c.at("value").get<double>() << " = ";
          std::cout << c.at("expression").get<std::string>();
          if (c.at("asymptotic").get<bool>()) std::cout << " (asymptotic)";
        }
        std::cout << "\n";
      }
      write_outputs(r, out);
    } else if (pre->parsed()) {
      std::cout << std::setprecision(17) << preactivation(xs, ws, bias) << "\n";
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << "\n";
    return 3;
  } catch (const UnregisteredComposite& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
