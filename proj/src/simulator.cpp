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

#include "qtherm/simulator.hpp"

#include <algorithm>

#include "qtherm/errors.hpp"
#include "qtherm/noise.hpp"

namespace qtherm {
namespace {

// Dense state over the logical qubits currently alive. New qubits join at
// the top of the register; traced qubits leave and the survivors keep their
// relative order.
class LiveRegister {
 public:
  LiveRegister(int n_logical, const DensityMatrix& input)
      : rho_(input), live_of_logical_(static_cast<std::size_t>(n_logical), -1),
        retired_(static_cast<std::size_t>(n_logical), false) {
    for (int q = 0; q < input.n_qubits(); ++q) {
      live_of_logical_[static_cast<std::size_t>(q)] = q;
      logical_of_live_.push_back(q);
    }
    peak_ = input.n_qubits();
  }

  int live_index(int q) {
    if (retired_[static_cast<std::size_t>(q)]) {
      throw ValidationError("qubit " + std::to_string(q) + " used after it was traced out");
    }
    int& slot = live_of_logical_[static_cast<std::size_t>(q)];
    if (slot < 0) {
      rho_ = tensor(rho_, DensityMatrix(1));
      slot = static_cast<int>(logical_of_live_.size());
      logical_of_live_.push_back(q);
      peak_ = std::max(peak_, static_cast<int>(logical_of_live_.size()));
    }
    return slot;
  }

  void retire(const std::vector<int>& qubits) {
    std::vector<int> drop;
    for (int q : qubits) {
      if (retired_[static_cast<std::size_t>(q)]) continue;
      retired_[static_cast<std::size_t>(q)] = true;
      const int live = live_of_logical_[static_cast<std::size_t>(q)];
      if (live >= 0) drop.push_back(live);
    }
    if (drop.empty()) return;
    rho_ = partial_trace(rho_, drop);
    std::vector<int> survivors;
    for (int l = 0; l < static_cast<int>(logical_of_live_.size()); ++l) {
      if (std::find(drop.begin(), drop.end(), l) == drop.end()) survivors.push_back(logical_of_live_[l]);
    }
    std::fill(live_of_logical_.begin(), live_of_logical_.end(), -1);
    logical_of_live_ = std::move(survivors);
    for (int l = 0; l < static_cast<int>(logical_of_live_.size()); ++l) {
      live_of_logical_[static_cast<std::size_t>(logical_of_live_[l])] = l;
    }
  }

  DensityMatrix reduced(const std::vector<int>& keep) const {
    std::vector<int> drop;
    for (int l = 0; l < static_cast<int>(logical_of_live_.size()); ++l) {
      if (std::find(keep.begin(), keep.end(), logical_of_live_[l]) == keep.end()) drop.push_back(l);
    }
    if (drop.empty()) return rho_;
    return partial_trace(rho_, drop);
  }

  DensityMatrix& rho() { return rho_; }
  int peak() const { return peak_; }

 private:
  DensityMatrix rho_;
  std::vector<int> logical_of_live_;
  std::vector<int> live_of_logical_;
  std::vector<bool> retired_;
  int peak_ = 0;
};

void apply_op(LiveRegister& reg, const Operation& op) {
  std::vector<int> targets;
  targets.reserve(op.targets.size());
  for (int t : op.targets) targets.push_back(reg.live_index(t));
  std::vector<Control> controls;
  controls.reserve(op.controls.size());
  for (const auto& c : op.controls) controls.push_back({reg.live_index(c.qubit), c.on_one});
  apply_gate(reg.rho(), op.gate.matrix(), targets, controls);
}

void apply_noisy_op(LiveRegister& reg, const Operation& op, const NoiseModel& noise,
                    std::map<GateClass, std::uint64_t>& histogram) {
  for (const auto& prim : expand_to_primitives(op)) {
    apply_op(reg, prim);
    const GateClass cls = op_class(prim);
    ++histogram[cls];
    std::vector<int> touched = prim.targets;
    for (const auto& c : prim.controls) touched.push_back(c.qubit);
    for (int q : touched) {
      const KrausChannel ch = noise.channel(q, cls);
      const int live = reg.live_index(q);
      apply_kraus(reg.rho(), ch.operators, std::span<const int>(&live, 1));
    }
  }
}

void tally(const Operation& op, std::map<GateClass, std::uint64_t>& histogram) {
  try {
    for (const auto& prim : expand_to_primitives(op)) ++histogram[op_class(prim)];
  } catch (const UnregisteredComposite&) {
    ++histogram[GateClass::Composite];
  }
}

}  // namespace

ExecutionResult execute(const Circuit& circuit, const DensityMatrix& input, const ExecutionOptions& options) {
  circuit.validate();
  if (input.n_qubits() > circuit.n_qubits()) throw ValidationError("input has more qubits than the circuit");
  std::vector<int> keep = options.keep;
  if (keep.empty()) {
    for (int q = 0; q < input.n_qubits(); ++q) keep.push_back(q);
  }
  std::sort(keep.begin(), keep.end());
  for (int q : keep) {
    if (q < 0 || q >= input.n_qubits()) throw ValidationError("kept qubits must be input qubits");
  }
  for (const auto& tp : circuit.trace_points()) {
    for (int q : tp.qubits) {
      if (std::binary_search(keep.begin(), keep.end(), q)) throw ValidationError("a kept qubit is traced out");
    }
  }

  LiveRegister reg(circuit.n_qubits(), input);
  if (!options.eager_trace) {
    for (int q = input.n_qubits(); q < circuit.n_qubits(); ++q) reg.live_index(q);
  }

  ExecutionResult result{input, {}, 0, {}};
  const auto& ops = circuit.ops();
  std::size_t next_trace = 0, next_checkpoint = 0;
  const auto& traces = circuit.trace_points();
  const auto& checkpoints = circuit.checkpoints();
  auto run_events = [&](std::size_t position) {
    for (; next_trace < traces.size() && traces[next_trace].position == position; ++next_trace) {
      if (options.eager_trace) reg.retire(traces[next_trace].qubits);
    }
    for (; next_checkpoint < checkpoints.size() && checkpoints[next_checkpoint].position == position;
         ++next_checkpoint) {
      result.snapshots.push_back({checkpoints[next_checkpoint].label, reg.reduced(keep)});
    }
  };

  for (std::size_t i = 0; i < ops.size(); ++i) {
    run_events(i);
    if (options.noise != nullptr) {
      apply_noisy_op(reg, ops[i], *options.noise, result.class_histogram);
    } else {
      apply_op(reg, ops[i]);
      tally(ops[i], result.class_histogram);
    }
  }
  run_events(ops.size());

  result.state = reg.reduced(keep);
  result.peak_live_qubits = reg.peak();
  return result;
}

PureState execute_pure(const Circuit& circuit, PureState input) {
  if (!circuit.trace_points().empty()) throw ValidationError("pure execution cannot trace qubits out");
  if (input.n_qubits() != circuit.n_qubits()) throw ValidationError("pure input must cover every circuit qubit");
  for (const auto& op : circuit.ops()) apply_gate(input, op.gate.matrix(), op.targets, op.controls);
  input.mutable_amplitudes() *= circuit.global_phase();
  return input;
}

}  // namespace qtherm
