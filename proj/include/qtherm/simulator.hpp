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

#include <map>
#include <string>
#include <vector>

#include "qtherm/circuit.hpp"
#include "qtherm/qstate.hpp"

namespace qtherm {

class NoiseModel;

struct ExecutionOptions {
  /// Logical qubits returned in the final state and in snapshots; must be a
  /// subset of the input qubits. Empty keeps every input qubit.
  std::vector<int> keep;
  /// Trace qubits at their trace points and allocate fresh qubits lazily.
  /// When false the whole register is allocated up front and reduced once at
  /// the end.
  bool eager_trace = true;
  const NoiseModel* noise = nullptr;
};

struct Snapshot {
  std::string label;
  DensityMatrix state;
};

struct ExecutionResult {
  DensityMatrix state;
  std::vector<Snapshot> snapshots;
  int peak_live_qubits = 0;
  /// Primitive gates executed per class (composites expanded when a rule exists).
  std::map<GateClass, std::uint64_t> class_histogram;
};

/// Density-matrix run of `circuit`. `input` covers logical qubits
/// 0..input.n_qubits()-1; every other qubit starts in |0>.
ExecutionResult execute(const Circuit& circuit, const DensityMatrix& input, const ExecutionOptions& options = {});

/// Pure-state run over the whole register. Trace points are not allowed;
/// checkpoints are ignored. The global phase is applied.
PureState execute_pure(const Circuit& circuit, PureState input);

}  // namespace qtherm
