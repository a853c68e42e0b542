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
#include <random>
#include <string>
#include <vector>

#include "qtherm/gates.hpp"
#include "qtherm/qstate.hpp"

namespace qtherm {

class Circuit;

struct GateDurations {
  double u1 = 0.0;
  double u2 = 50.0;
  double u3 = 100.0;
  double cnot = 300.0;
  double ca = 1600.0;
  double cca = 3000.0;
};

/// Thermal-relaxation parameters. Durations are in ns, relaxation times in
/// microseconds. T1/T2 are drawn per qubit from N(mu, sigma^2).
struct NoiseProfile {
  std::string name = "custom";
  GateDurations durations_ns;
  double mu1_us = 0.0;
  double mu2_us = 0.0;
  double sigma_us = 0.0;
  std::uint64_t seed = 0;

  /// Throws UnregisteredComposite for Composite: those must be expanded first.
  double duration_ns(GateClass c) const;
  void validate() const;
};

/// "low", "medium", "high" carry the benchmark table values; "ideal" has
/// infinite T1/T2.
NoiseProfile builtin_noise_profile(const std::string& name);

/// {"durations_ns": {"U1":..,"U2":..,"U3":..,"CNOT":..,"C-A":..,"CC-A":..},
///  "mu1_us":.., "mu2_us":.., "sigma_us":.., "seed":..}
NoiseProfile noise_profile_from_json(const std::string& text);
NoiseProfile load_noise_profile_file(const std::string& path);
std::string noise_profile_to_json(const NoiseProfile& profile);

struct KrausChannel {
  std::vector<Matrix> operators;

  /// max |sum K^dagger K - I|.
  double completeness_error() const;
};

/// Zero-temperature amplitude damping (gamma = 1 - e^{-t/T1}) followed by pure
/// dephasing sized so coherences decay by exactly e^{-t/T2}. Any consistent
/// time unit; infinite T1/T2 are allowed.
KrausChannel thermal_relaxation_channel(double t1, double t2, double t);

struct QubitRelaxation {
  double t1_us = 0.0;
  double t2_us = 0.0;
};

/// Draws (T1, T2) for one logical qubit from an RNG seeded by
/// (profile.seed, qubit). Non-positive draws are redrawn; T2 is clamped to 2*T1.
QubitRelaxation sample_qubit_params(const NoiseProfile& profile, int qubit);
QubitRelaxation sample_qubit_params(const NoiseProfile& profile, std::mt19937_64& rng);

/// Relaxation noise attached to each gate of a circuit run.
class NoiseModel {
 public:
  explicit NoiseModel(NoiseProfile profile);

  const NoiseProfile& profile() const { return profile_; }
  QubitRelaxation qubit_params(int logical_qubit) const { return sample_qubit_params(profile_, logical_qubit); }
  /// Channel suffered by `logical_qubit` when it takes part in a gate of class `c`.
  KrausChannel channel(int logical_qubit, GateClass c) const;

 private:
  NoiseProfile profile_;
};

/// Runs `circuit` on `input` (all circuit qubits) applying relaxation after
/// every primitive gate to the qubits it touches. Idle qubits are not
/// decohered.
DensityMatrix noisy_execute(const Circuit& circuit, const DensityMatrix& input, const NoiseProfile& profile);

}  // namespace qtherm
