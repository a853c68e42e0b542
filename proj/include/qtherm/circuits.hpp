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
#include <map>
#include <optional>
#include <random>
#include <vector>

#include "qtherm/circuit.hpp"
#include "qtherm/hamiltonians.hpp"
#include "qtherm/noise.hpp"
#include "qtherm/qstate.hpp"

namespace qtherm {

/// A circuit acting on `targets` plus fresh `ancillas`; measuring the
/// ancillas in `success_outcome` heralds the intended transformation.
/// Builders place targets on the low qubits and ancillas above them.
struct PostSelectUnit {
  Circuit circuit;
  std::vector<int> targets;
  std::vector<int> ancillas;
  std::uint64_t success_outcome = 0;
};

/// Ry(2 theta) on the ancilla, C(-iY) onto the target, Ry(-2 theta) on the
/// ancilla. Qubit 0 is the target, qubit 1 the ancilla.
PostSelectUnit build_perceptron_unit(double theta);

/// One ancilla rotated so the success branch (identity on the target) has
/// probability p0; the failure branch applies -iY. 0 < p0 <= 1.
PostSelectUnit build_two_branch_unit(double p0);

/// <outcome|_anc U |0>_anc as an operator on the targets (unnormalized).
Matrix branch_operator(const PostSelectUnit& unit, std::uint64_t outcome);

/// The branch operator rescaled to a unitary. Throws ValidationError when the
/// branch is not proportional to one.
Matrix branch_isometry(const PostSelectUnit& unit, std::uint64_t outcome);

/// Exact inverse of the failure isometry for `outcome`.
Gate derive_reset(const PostSelectUnit& unit, std::uint64_t outcome);

struct RUSResult {
  int trials_used = 0;
  bool succeeded = false;
  PureState final_state;
};

/// Samples the ancillas; on failure undoes the failure branch with the
/// derived reset and retries, up to `max_trials` attempts.
RUSResult run_rus(const PostSelectUnit& unit, const PureState& input, std::mt19937_64& rng, int max_trials);

enum class ScramblingMode { Exact, Hadamard };

struct ThermaliseConfig {
  /// Total applications of U, first one included.
  int applications = 1;
  bool trailing_reset = true;
  ScramblingMode scrambling = ScramblingMode::Exact;
  int precision = 2;
  /// Energy subtracted before phase estimation; the groundstate energy when unset.
  std::optional<double> energy_shift;

  void validate() const;
};

/// Builder output: the circuit, the qubits holding the system, and the
/// checkpoint after each application (label "T=<i>").
struct ThermaliseCircuit {
  Circuit circuit;
  std::vector<int> targets;
};

struct ThermaliseResult {
  /// Reduced target state after all applications.
  DensityMatrix target_state;
  /// Entry i: state and fidelity after i+1 applications.
  std::vector<DensityMatrix> states;
  std::vector<double> fidelity;
  int peak_live_qubits = 0;
  std::map<GateClass, std::uint64_t> class_histogram;
};

/// Target is qubit 0, ancilla i is qubit i+1. Each reapplication and reset is
/// conditioned on the previous ancilla reading 1.
ThermaliseCircuit build_perceptron_thermalise(double theta, const ThermaliseConfig& config);

ThermaliseResult simulate_perceptron_thermalise(double theta, const ThermaliseConfig& config, const PureState& input,
                                                const NoiseProfile* noise = nullptr, bool eager_trace = true);

/// Flags the precision register != 0...0 on a single qubit. Qubits
/// 0..m-1 are the precision register; m..2m-2 are helpers (one copy qubit for
/// m = 1). The last qubit carries the flag.
Circuit build_nor(int m);
int nor_width(int m);

/// exact: V H^{(x)n} V^dagger with V the eigenbasis; hadamard: H^{(x)n}.
Gate build_scrambler(const Hamiltonian& h, ScramblingMode mode);

/// Gate preparing the equal superposition of eigenstates (exact) or of basis
/// states (hadamard) from |0...0>.
Gate build_initialiser(const Hamiltonian& h, ScramblingMode mode);

/// exp(i shift tau) exp(-i H tau): the groundstate phase is 0 when
/// shift = E_G.
Gate shifted_evolution(const Hamiltonian& h, double shift);

/// Targets are qubits 0..n-1 and the precision register n..n+m-1.
Circuit build_pea_unit(const Hamiltonian& h, int m, double shift);

/// Targets 0..n-1; then per application its precision register, NOR helpers
/// and flag, allocated in order of first use.
ThermaliseCircuit build_groundstate_thermalise(const Hamiltonian& h, const ThermaliseConfig& config);

ThermaliseResult simulate_groundstate_thermalise(const Hamiltonian& h, const ThermaliseConfig& config,
                                                 const NoiseProfile* noise = nullptr, bool eager_trace = true);

/// A_0 = U, A_k = -A_{k-1} S A_{k-1}^dagger S A_{k-1} with S = S(pi/3) on
/// the ancillas.
PostSelectUnit build_oaa(const PostSelectUnit& unit, int k);

/// Probability of the success outcome when `unit` acts on input (x) |0...0>.
double success_probability(const PostSelectUnit& unit, const PureState& input);

/// Ancilla-success probability of A_k for the target |0...0>.
double oaa_success_probability(const PostSelectUnit& unit, int k);

/// Uniform: every S(pi/3) becomes S(pi/3 + delta). Mismatched: the reflection
/// right after each A_{k-1} uses pi/3 + delta and the one after each
/// A_{k-1}^dagger uses pi/3 - delta.
enum class AngleErrorMode { Uniform, Mismatched };

PostSelectUnit build_oaa_with_angles(const PostSelectUnit& unit, int k, double after_forward, double after_adjoint);
double oaa_with_angle_error(const PostSelectUnit& unit, int k, double delta,
                            AngleErrorMode mode = AngleErrorMode::Uniform);

}  // namespace qtherm
