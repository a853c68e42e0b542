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

#include "qtherm/circuit.hpp"

#include <algorithm>
#include <numbers>
#include <set>

#include "qtherm/errors.hpp"

namespace qtherm {
namespace {

using std::numbers::pi;

bool is_phase_family(const Gate& g) {
  return g.arity() == 1 && (g.label() == "Phase" || g.label() == "T" || g.label() == "Tdg" || g.label() == "Z");
}

double phase_angle(const Gate& g) {
  if (g.label() == "Phase") return g.params().at(0);
  if (g.label() == "T") return pi / 4;
  if (g.label() == "Tdg") return -pi / 4;
  return pi;  // Z
}

bool is_rotation_family(const Gate& g) { return g.arity() == 1 && (g.label() == "Ry" || g.label() == "Rz"); }

bool is_library_composite(const Gate& g) {
  const auto& l = g.label();
  if (l == "CNOT" || l == "CCX" || l == "SWAP") return true;
  if ((l == "QFT" || l == "QFT†") && g.arity() >= 2) return true;
  return l == "S(phi)" && g.arity() >= 2;
}

bool has_negative_control(const Operation& op) {
  return std::any_of(op.controls.begin(), op.controls.end(), [](const Control& c) { return !c.on_one; });
}

std::vector<Control> with_controls(std::vector<Control> extra, std::initializer_list<int> more) {
  for (int q : more) extra.push_back({q, true});
  return extra;
}

Operation make_op(const std::string& name, std::vector<int> targets, std::vector<Control> controls,
                  std::vector<double> params = {}) {
  return Operation{standard_gate(name, params), std::move(targets), std::move(controls)};
}

// Nielsen & Chuang Toffoli: 6 CNOT, 2 H, 7 T/Tdg.
std::vector<Operation> toffoli_ops(int a, int b, int c) {
  auto cx = [](int ctl, int tgt) { return make_op("X", {tgt}, {{ctl, true}}); };
  return {make_op("H", {c}, {}),   cx(b, c), make_op("Tdg", {c}, {}), cx(a, c), make_op("T", {c}, {}),
          cx(b, c),                make_op("Tdg", {c}, {}), cx(a, c), make_op("T", {b}, {}),
          make_op("T", {c}, {}),   make_op("H", {c}, {}),   cx(a, b), make_op("T", {a}, {}),
          make_op("Tdg", {b}, {}), cx(a, b)};
}

// QFT on qubits[0..m) (little-endian), built from H, controlled phases and
// final swaps. The inverse is the reversed, negated sequence.
std::vector<Operation> qft_ops(const std::vector<int>& q, const std::vector<Control>& extra, bool inverse) {
  const int m = static_cast<int>(q.size());
  std::vector<Operation> ops;
  for (int hi = m - 1; hi >= 0; --hi) {
    ops.push_back(make_op("H", {q[hi]}, extra));
    for (int lo = hi - 1; lo >= 0; --lo) {
      const double angle = pi / static_cast<double>(std::uint64_t{1} << (hi - lo));
      ops.push_back(make_op("Phase", {q[hi]}, with_controls(extra, {q[lo]}), {angle}));
    }
  }
  for (int i = 0; i < m / 2; ++i) ops.push_back(make_op("SWAP", {q[i], q[m - 1 - i]}, extra));
  if (inverse) {
    std::reverse(ops.begin(), ops.end());
    for (auto& op : ops) op.gate = op.gate.adjoint();
  }
  return ops;
}

}  // namespace

GateClass op_class(const Operation& op) {
  if (has_negative_control(op)) return GateClass::Composite;
  const Gate& g = op.gate;
  const auto nc = op.controls.size();
  if (nc == 0) {
    // Uncontrolled custom blocks run as one noisy step charged like C-A.
    if (g.gate_class() == GateClass::Composite && !is_library_composite(g)) return GateClass::CA;
    return g.gate_class();
  }
  if (is_library_composite(g)) return GateClass::Composite;
  if (g.label() == "X") return nc == 1 ? GateClass::CNOT : GateClass::Composite;
  if (is_phase_family(g) && nc == 1) return GateClass::Composite;
  if (nc == 1) return GateClass::CA;
  if (nc == 2) return GateClass::CCA;
  return GateClass::Composite;
}

Circuit::Circuit(int n_qubits) : n_qubits_(n_qubits) {
  if (n_qubits < 1) throw ValidationError("circuit needs at least one qubit");
}

void Circuit::check_op(const Operation& op) const {
  if (static_cast<int>(op.targets.size()) != op.gate.arity()) {
    throw ValidationError("gate " + op.gate.label() + " expects " + std::to_string(op.gate.arity()) + " targets");
  }
  std::set<int> seen;
  auto claim = [&](int q) {
    if (q < 0 || q >= n_qubits_) throw ValidationError("qubit " + std::to_string(q) + " out of range");
    if (!seen.insert(q).second) throw ValidationError("qubit " + std::to_string(q) + " used twice in one op");
  };
  for (int t : op.targets) claim(t);
  for (const auto& c : op.controls) claim(c.qubit);
}

Circuit& Circuit::add(Gate gate, std::vector<int> targets, std::vector<Control> controls) {
  return add(Operation{std::move(gate), std::move(targets), std::move(controls)});
}

Circuit& Circuit::add(Operation op) {
  check_op(op);
  ops_.push_back(std::move(op));
  return *this;
}

Circuit& Circuit::trace_out(std::vector<int> qubits) {
  for (int q : qubits) {
    if (q < 0 || q >= n_qubits_) throw ValidationError("trace qubit out of range");
  }
  trace_points_.push_back({ops_.size(), std::move(qubits)});
  return *this;
}

Circuit& Circuit::checkpoint(std::string label) {
  checkpoints_.push_back({ops_.size(), std::move(label)});
  return *this;
}

Circuit& Circuit::scale_phase(cplx factor) {
  global_phase_ *= factor;
  return *this;
}

Circuit& Circuit::append(const Circuit& other, std::span<const int> qubit_map) {
  if (static_cast<int>(qubit_map.size()) != other.n_qubits()) {
    throw ValidationError("qubit map size does not match appended circuit");
  }
  const std::size_t offset = ops_.size();
  auto remap = [&](int q) { return qubit_map[static_cast<std::size_t>(q)]; };
  for (const auto& op : other.ops()) {
    Operation copy = op;
    for (auto& t : copy.targets) t = remap(t);
    for (auto& c : copy.controls) c.qubit = remap(c.qubit);
    add(std::move(copy));
  }
  for (const auto& tp : other.trace_points()) {
    TracePoint copy{tp.position + offset, {}};
    for (int q : tp.qubits) copy.qubits.push_back(remap(q));
    trace_points_.push_back(std::move(copy));
  }
  for (const auto& cp : other.checkpoints()) checkpoints_.push_back({cp.position + offset, cp.label});
  global_phase_ *= other.global_phase();
  return *this;
}

Circuit& Circuit::append(const Circuit& other) {
  std::vector<int> identity(static_cast<std::size_t>(other.n_qubits()));
  for (int q = 0; q < other.n_qubits(); ++q) identity[static_cast<std::size_t>(q)] = q;
  return append(other, identity);
}

Circuit Circuit::adjoint() const {
  if (!trace_points_.empty()) throw ValidationError("cannot take the adjoint of a circuit with trace points");
  Circuit out(n_qubits_);
  for (auto it = ops_.rbegin(); it != ops_.rend(); ++it) {
    out.add(Operation{it->gate.adjoint(), it->targets, it->controls});
  }
  out.global_phase_ = std::conj(global_phase_);
  return out;
}

void Circuit::validate() const {
  std::vector<std::size_t> traced_at(static_cast<std::size_t>(n_qubits_), ops_.size() + 1);
  for (const auto& tp : trace_points_) {
    for (int q : tp.qubits) {
      if (q < 0 || q >= n_qubits_) throw ValidationError("trace qubit out of range");
      auto& slot = traced_at[static_cast<std::size_t>(q)];
      if (slot != ops_.size() + 1) throw ValidationError("qubit " + std::to_string(q) + " traced twice");
      slot = tp.position;
    }
  }
  for (std::size_t i = 0; i < ops_.size(); ++i) {
    check_op(ops_[i]);
    auto touched = ops_[i].targets;
    for (const auto& c : ops_[i].controls) touched.push_back(c.qubit);
    for (int q : touched) {
      if (traced_at[static_cast<std::size_t>(q)] <= i) {
        throw ValidationError("op " + std::to_string(i) + " touches qubit " + std::to_string(q) +
                              " after it was traced out");
      }
    }
  }
}

Matrix Circuit::unitary() const {
  if (n_qubits_ > 10) throw CapacityError("dense circuit unitary is limited to 10 qubits");
  if (!trace_points_.empty()) throw ValidationError("circuit with trace points has no unitary");
  const auto dim = static_cast<Eigen::Index>(1) << n_qubits_;
  Matrix u(dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col) {
    PureState s = PureState::basis(n_qubits_, static_cast<std::uint64_t>(col));
    for (const auto& op : ops_) apply_gate(s, op.gate.matrix(), op.targets, op.controls);
    u.col(col) = s.amplitudes();
  }
  return global_phase_ * u;
}

Operation controlled_power(const Gate& a, int j, std::vector<int> targets, Control control) {
  return Operation{gate_power_of_two(a, j), std::move(targets), {control}};
}

std::optional<std::vector<Operation>> decompose_once(const Operation& op) {
  const Gate& g = op.gate;
  const auto& ctl = op.controls;

  if (has_negative_control(op)) {
    std::vector<Operation> out;
    Operation positive = op;
    for (auto& c : positive.controls) {
      if (!c.on_one) {
        out.push_back(make_op("X", {c.qubit}, {}));
        c.on_one = true;
      }
    }
    const std::vector<Operation> flips = out;
    out.push_back(std::move(positive));
    out.insert(out.end(), flips.begin(), flips.end());
    return out;
  }

  if (g.label() == "CNOT") {
    if (ctl.empty()) return std::nullopt;
    return std::vector<Operation>{make_op("X", {op.targets[1]}, with_controls(ctl, {op.targets[0]}))};
  }
  if (g.label() == "CCX") {
    return std::vector<Operation>{make_op("X", {op.targets[2]}, with_controls(ctl, {op.targets[0], op.targets[1]}))};
  }
  if (g.label() == "SWAP") {
    const int a = op.targets[0], b = op.targets[1];
    return std::vector<Operation>{make_op("X", {b}, with_controls(ctl, {a})), make_op("X", {a}, with_controls(ctl, {b})),
                                  make_op("X", {b}, with_controls(ctl, {a}))};
  }
  if ((g.label() == "QFT" || g.label() == "QFT†") && g.arity() >= 2) {
    return qft_ops(op.targets, ctl, g.label() == "QFT†");
  }
  if (g.label() == "S(phi)" && g.arity() >= 2) {
    const double phi = g.params().at(1);
    std::vector<Operation> out;
    for (int q : op.targets) out.push_back(make_op("X", {q}, ctl));
    std::vector<Control> inner = ctl;
    for (std::size_t i = 0; i + 1 < op.targets.size(); ++i) inner.push_back({op.targets[i], true});
    out.push_back(make_op("Phase", {op.targets.back()}, std::move(inner), {phi}));
    for (int q : op.targets) out.push_back(make_op("X", {q}, ctl));
    return out;
  }
  if (g.label() == "X" && g.arity() == 1) {
    if (ctl.size() <= 1) return std::nullopt;
    if (ctl.size() == 2) return toffoli_ops(ctl[0].qubit, ctl[1].qubit, op.targets[0]);
    throw UnregisteredComposite("X with " + std::to_string(ctl.size()) +
                                " controls needs borrowed ancillae; build it with explicit Toffolis");
  }
  if (is_phase_family(g) && ctl.size() == 1) {
    const double phi = phase_angle(g);
    const int c = ctl[0].qubit, t = op.targets[0];
    return std::vector<Operation>{make_op("Phase", {c}, {}, {phi / 2}), make_op("X", {t}, {{c, true}}),
                                  make_op("Phase", {t}, {}, {-phi / 2}), make_op("X", {t}, {{c, true}}),
                                  make_op("Phase", {t}, {}, {phi / 2})};
  }
  if (ctl.empty()) return std::nullopt;
  if (ctl.size() <= 2) return std::nullopt;  // C-A / CC-A keep custom durations
  throw UnregisteredComposite("no rule for '" + g.label() + "' with " + std::to_string(ctl.size()) + " controls");
}

std::vector<Operation> expand_to_primitives(const Operation& op) {
  auto parts = decompose_once(op);
  if (!parts) return {op};
  std::vector<Operation> out;
  for (const auto& p : *parts) {
    auto sub = expand_to_primitives(p);
    out.insert(out.end(), std::make_move_iterator(sub.begin()), std::make_move_iterator(sub.end()));
  }
  return out;
}

namespace {

// Count of a positively, singly controlled single-qubit gate.
GateCount single_control_count(const Gate& g, std::set<std::string>& rules) {
  if (g.label() == "X") return make_count(0, 1);
  if (is_rotation_family(g)) {
    rules.insert("c-rotation:2u+2cx");
    return make_count(2, 2);
  }
  if (is_phase_family(g)) {
    rules.insert("c-phase:3u1+2cx");
    return make_count(3, 2);
  }
  rules.insert("c-u-abc:4u+2cx");
  return make_count(4, 2);
}

void count_into(const Operation& op, GateCount& total, std::set<std::string>& rules) {
  const Gate& g = op.gate;
  const auto nc = static_cast<std::uint64_t>(op.controls.size());

  if (has_negative_control(op)) {
    rules.insert("negative-control:x-conjugation");
  } else if (g.arity() == 1 && nc == 0) {
    total += make_count(1, 0);
    return;
  } else if ((g.label() == "CNOT" && nc == 0) || (g.label() == "X" && nc == 1)) {
    total += make_count(0, 1);
    return;
  } else if (g.label() == "X" && nc == 2) {
    rules.insert("toffoli:9u+6cx");
    total += make_count(9, 6);
    return;
  } else if (g.label() == "X" && nc >= 3) {
    // (c-2) borrowed ancillae, compute + target + uncompute Toffolis.
    rules.insert("mcx:ancilla-toffoli-chain");
    total += (2 * nc - 3) * make_count(9, 6);
    return;
  } else if (g.arity() == 1 && !(is_phase_family(g) && nc == 1) && g.label() != "X") {
    const GateCount one = single_control_count(g, rules);
    if (nc == 1) {
      total += one;
    } else if (nc == 2) {
      // Barenco: three controlled square roots and two CNOTs.
      rules.insert("cc-u:barenco-sqrt");
      total += 3 * one + make_count(0, 2);
    } else {
      // AND of the controls into a borrowed ancilla and back.
      rules.insert("mc-u:ancilla-and");
      total += (2 * (nc - 1)) * make_count(9, 6) + one;
    }
    return;
  }

  auto parts = decompose_once(op);
  if (!parts) {
    throw UnregisteredComposite("no counting rule for '" + g.label() + "' with " + std::to_string(nc) +
                                " controls");
  }
  if (g.label() == "SWAP") rules.insert("swap:3cx");
  if (g.label() == "QFT" || g.label() == "QFT†") rules.insert("qft:h+cp+swap");
  if (g.label() == "S(phi)") rules.insert("phase-shift:x-conjugated-mc-phase");
  if (is_phase_family(g) && nc == 1) rules.insert("c-phase:3u1+2cx");
  for (const auto& p : *parts) count_into(p, total, rules);
}

}  // namespace

GateCountReport count_op(const Operation& op) {
  GateCountReport report;
  std::set<std::string> rules;
  count_into(op, report.count, rules);
  report.rules.assign(rules.begin(), rules.end());
  return report;
}

GateCountReport count_gates_detailed(const Circuit& circuit) {
  GateCountReport report;
  std::set<std::string> rules;
  for (const auto& op : circuit.ops()) count_into(op, report.count, rules);
  report.rules.assign(rules.begin(), rules.end());
  return report;
}

GateCount count_gates(const Circuit& circuit) { return count_gates_detailed(circuit).count; }

}  // namespace qtherm
