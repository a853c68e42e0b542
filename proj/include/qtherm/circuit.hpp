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
#include <span>
#include <string>
#include <vector>

#include "qtherm/gates.hpp"
#include "qtherm/qstate.hpp"

namespace qtherm {

struct Operation {
  Gate gate;
  std::vector<int> targets;
  std::vector<Control> controls;
};

/// Class of a gate application once its controls are taken into account:
/// one control on X is CNOT, other single controls are C-A, two controls on a
/// non-X gate are CC-A; an uncontrolled custom multi-qubit block is also C-A;
/// everything needing a rewrite is Composite.
GateClass op_class(const Operation& op);

struct TracePoint {
  /// Qubits are traced out once the first `position` ops have run.
  std::size_t position = 0;
  std::vector<int> qubits;
};

struct Checkpoint {
  std::size_t position = 0;
  std::string label;
};

/// Ordered gate applications over a fixed set of logical qubits, plus the
/// points where qubits may be traced out early and where the simulator
/// should record the kept register.
class Circuit {
 public:
  explicit Circuit(int n_qubits);

  int n_qubits() const { return n_qubits_; }
  const std::vector<Operation>& ops() const { return ops_; }
  const std::vector<TracePoint>& trace_points() const { return trace_points_; }
  const std::vector<Checkpoint>& checkpoints() const { return checkpoints_; }
  /// Scalar multiplying the whole circuit unitary.
  cplx global_phase() const { return global_phase_; }

  Circuit& add(Gate gate, std::vector<int> targets, std::vector<Control> controls = {});
  Circuit& add(Operation op);
  Circuit& trace_out(std::vector<int> qubits);
  Circuit& checkpoint(std::string label);
  Circuit& scale_phase(cplx factor);

  /// Appends `other` with its qubit q relabelled to qubit_map[q].
  Circuit& append(const Circuit& other, std::span<const int> qubit_map);
  Circuit& append(const Circuit& other);

  /// Reversed, daggered ops. Throws if the circuit traces qubits.
  Circuit adjoint() const;

  /// Throws ValidationError on out-of-range indices or on an op touching a
  /// qubit after it was traced out.
  void validate() const;

  /// Dense unitary including the global phase; at most 10 qubits and no
  /// trace points.
  Matrix unitary() const;

 private:
  void check_op(const Operation& op) const;

  int n_qubits_;
  std::vector<Operation> ops_;
  std::vector<TracePoint> trace_points_;
  std::vector<Checkpoint> checkpoints_;
  cplx global_phase_{1.0, 0.0};
};

/// Controlled A^(2^j), squared out as one matrix and applied as one gate.
Operation controlled_power(const Gate& a, int j, std::vector<int> targets, Control control);

struct GateCount {
  std::uint64_t singles = 0;
  std::uint64_t cnots = 0;
  std::uint64_t total = 0;

  GateCount& operator+=(const GateCount& o) {
    singles += o.singles;
    cnots += o.cnots;
    total += o.total;
    return *this;
  }
  friend GateCount operator+(GateCount a, const GateCount& b) { return a += b; }
  friend GateCount operator*(std::uint64_t k, const GateCount& g) {
    return {k * g.singles, k * g.cnots, k * g.total};
  }
  friend bool operator==(const GateCount&, const GateCount&) = default;
};

inline GateCount make_count(std::uint64_t singles, std::uint64_t cnots) { return {singles, cnots, singles + cnots}; }

struct GateCountReport {
  GateCount count;
  /// Names of the registered rules that were needed, sorted, unique.
  std::vector<std::string> rules;
};

/// Single-qubit and CNOT totals after expanding every op with the registered
/// rules (see docs/decompositions.md). Throws UnregisteredComposite when an op
/// has no rule, e.g. a multi-qubit custom unitary.
GateCount count_gates(const Circuit& circuit);
GateCountReport count_gates_detailed(const Circuit& circuit);
GateCountReport count_op(const Operation& op);

/// One level of rewriting for an op that is not a noise primitive. Returns
/// nullopt for primitives: uncontrolled single-qubit gates, CNOT, uncontrolled
/// custom blocks, and positively controlled custom gates with one or two
/// controls (C-A / CC-A).
/// Throws UnregisteredComposite when no rule applies.
std::optional<std::vector<Operation>> decompose_once(const Operation& op);

/// Recursively expands into noise primitives.
std::vector<Operation> expand_to_primitives(const Operation& op);

}  // namespace qtherm
