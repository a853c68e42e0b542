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

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qtherm/analysis.hpp"
#include "qtherm/circuits.hpp"
#include "qtherm/hamiltonians.hpp"
#include "qtherm/noise.hpp"

namespace qtherm {

inline constexpr int kSchemaVersion = 1;

struct SeriesPoint {
  std::optional<double> theta;
  int applications = 0;
  double fidelity_sim = 0.0;
  double fidelity_pred = 0.0;
  std::optional<double> q_estimate;
};

struct RunResult {
  std::string experiment;
  nlohmann::json config = nlohmann::json::object();
  std::uint64_t seed = 0;
  /// Sorted by (theta, T).
  std::vector<SeriesPoint> series;
  nlohmann::json counts = nlohmann::json::object();
  std::optional<std::uint64_t> shots;
  double wall_time_s = 0.0;
  /// Experiment-specific extras (OAA report, scrambling statistics).
  nlohmann::json report = nlohmann::json::object();
};

std::string to_json(const RunResult& r);
RunResult run_result_from_json(const std::string& text);

/// Header theta,T,fidelity_sim,fidelity_pred,q_estimate; doubles in shortest
/// round-trip form, absent optionals as empty fields.
std::string to_csv(const std::vector<SeriesPoint>& series);
std::vector<SeriesPoint> series_from_csv(const std::string& text);

/// Stable FNV-1a over the bytes of `key`, for per-point seeds.
std::uint64_t stable_hash(const std::string& key);

enum class SampleMode { Exact, Shots };

struct PerceptronOptions {
  std::vector<double> thetas;
  int max_applications = 4;
  bool trailing_reset = true;
  SampleMode mode = SampleMode::Exact;
  std::uint64_t shots = 8192;
  std::optional<NoiseProfile> noise;
  std::uint64_t seed = 1;
  int threads = 1;
};

/// Input |0>, one point per (theta, T). Shots mode estimates the fidelity by
/// measuring in the basis of the ideal output and q from Z-basis counts.
RunResult run_perceptron(const PerceptronOptions& opts);

struct GroundstateOptions {
  std::optional<Hamiltonian> hamiltonian;
  /// Smallest m giving N* = 1 on the grid when unset.
  std::optional<int> precision;
  int max_applications = 5;
  ScramblingMode scrambling = ScramblingMode::Exact;
  std::optional<NoiseProfile> noise;
  std::uint64_t seed = 1;
};

/// Smallest m in 1..4 whose grid represents every shifted phase with N* = 1;
/// 2 when none does.
int default_precision(const Hamiltonian& h);

RunResult run_groundstate(const GroundstateOptions& opts);

struct OaaOptions {
  double p0 = 0.75;
  int k = 1;
  std::vector<double> deltas = {0.0, 0.01, 0.02, 0.05, 0.1};
};

RunResult run_oaa(const OaaOptions& opts);

struct ScrambleStats {
  double mean = 0.0;
  double stddev = 0.0;
  double stderr_mean = 0.0;
};

struct ScrambleStudy {
  int n_qubits = 0;
  int trials = 0;
  ScrambleStats hadamard;
  ScrambleStats pauli_x;
  /// 1 / 2^n.
  double inverse_dimension = 0.0;
  /// Exact mean for Haar inputs: N / ((N+1)(N-1)).
  double haar_mean = 0.0;
  /// Welch statistic between the two variants.
  double welch_z = 0.0;
};

/// |<l_perp| G |l>|^2 for Haar-random |l> and a Gaussian vector orthogonalised
/// against it, with G = H^{(x)n} and, on an independent stream, X^{(x)n}.
ScrambleStudy scramble_study(int n_qubits, int trials, std::uint64_t seed);
RunResult run_scramble(int n_qubits, int trials, std::uint64_t seed);

RunResult run_resources(const ResourceQuery& query, const std::vector<std::string>& methods);

/// sum_i x_i w_i + b.
double preactivation(const std::vector<double>& x, const std::vector<double>& w, double b);

}  // namespace qtherm
