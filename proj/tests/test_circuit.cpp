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

#include <doctest.h>

#include <numbers>

#include "oracle.hpp"
#include "qtherm/circuit.hpp"
#include "qtherm/circuits.hpp"
#include "qtherm/errors.hpp"
#include "qtherm/simulator.hpp"

using namespace qtherm;
using std::numbers::pi;

namespace {

Matrix expanded_unitary(const Operation& op, int n) {
  Circuit c(n);
  for (const auto& p : expand_to_primitives(op)) c.add(p);
  return c.unitary();
}

Matrix direct_unitary(const Operation& op, int n) {
  return oracle::full_operator(n, op.gate.matrix(), op.targets, op.controls);
}

}  // namespace

TEST_CASE("counting basics") {
  Circuit c(2);
  c.add(standard_gate("H"), {0}).add(standard_gate("T"), {1}).add(standard_gate("Ry", {0.3}), {0});
  c.add(standard_gate("CNOT"), {0, 1}).add(standard_gate("X"), {0}, {{1, true}});
  CHECK(count_gates(c) == make_count(3, 2));
  CHECK(count_gates(c).total == 5);

  Circuit t(3);
  t.add(standard_gate("CCX"), {0, 1, 2});
  CHECK(count_gates(t) == make_count(9, 6));
  CHECK(count_gates(t).total == 15);
  const auto report = count_gates_detailed(t);
  CHECK(std::find(report.rules.begin(), report.rules.end(), "toffoli:9u+6cx") != report.rules.end());

  Circuit s(2);
  s.add(standard_gate("SWAP"), {0, 1});
  CHECK(count_gates(s) == make_count(0, 3));
}

TEST_CASE("counting is additive over concatenation") {
  const PostSelectUnit u = build_perceptron_unit(0.4);
  Circuit nor = build_nor(3);
  Circuit both(nor.n_qubits());
  const std::vector<int> map{0, 1};
  both.append(u.circuit, map).append(nor);
  CHECK(count_gates(both) == count_gates(u.circuit) + count_gates(nor));
}

TEST_CASE("A_1 counts three U and two S") {
  const PostSelectUnit u = build_perceptron_unit(pi / 8);
  Circuit s(1);
  s.add(phase_shift_on_zero(1, pi / 3), {0});
  const auto qu = count_gates(u.circuit).total;
  const auto qs = count_gates(s).total;
  CHECK(qu == 6);
  CHECK(qs == 1);
  CHECK(count_gates(build_oaa(u, 1).circuit).total == 3 * qu + 2 * qs);
  CHECK(count_gates(build_oaa(u, 1).circuit).total == 20);
}

TEST_CASE("registered decompositions reproduce their matrices") {
  CHECK(oracle::max_abs(expanded_unitary({standard_gate("CCX"), {0, 1, 2}, {}}, 3) -
                        standard_gate("CCX").matrix()) < 1e-12);
  CHECK(oracle::max_abs(expanded_unitary({standard_gate("SWAP"), {0, 1}, {}}, 2) -
                        standard_gate("SWAP").matrix()) < 1e-12);
  for (double phi : {0.3, pi / 3, -2.0}) {
    const Operation cp{standard_gate("Phase", {phi}), {1}, {{0, true}}};
    CHECK(oracle::max_abs(expanded_unitary(cp, 2) - direct_unitary(cp, 2)) < 1e-12);
  }
  for (const char* name : {"T", "Tdg", "Z"}) {
    const Operation ct{standard_gate(name), {0}, {{1, true}}};
    CHECK(oracle::max_abs(expanded_unitary(ct, 2) - direct_unitary(ct, 2)) < 1e-12);
  }
  for (int m : {2, 3}) {
    const Gate s = phase_shift_on_zero(m, pi / 3);
    std::vector<int> q;
    for (int i = 0; i < m; ++i) q.push_back(i);
    CHECK(oracle::max_abs(expanded_unitary({s, q, {}}, m) - s.matrix()) < 1e-12);
  }
  // Negative controls.
  const Operation neg{standard_gate("Ry", {0.7}), {0}, {{1, false}, {2, true}}};
  CHECK(oracle::max_abs(expanded_unitary(neg, 3) - direct_unitary(neg, 3)) < 1e-12);
  const Operation negx{standard_gate("X"), {2}, {{0, false}, {1, false}}};
  CHECK(oracle::max_abs(expanded_unitary(negx, 3) - direct_unitary(negx, 3)) < 1e-12);
}

TEST_CASE("primitive classes") {
  CHECK(op_class({standard_gate("T"), {0}, {}}) == GateClass::U1);
  CHECK(op_class({standard_gate("H"), {0}, {}}) == GateClass::U2);
  CHECK(op_class({standard_gate("Ry", {0.1}), {0}, {}}) == GateClass::U3);
  CHECK(op_class({standard_gate("X"), {0}, {{1, true}}}) == GateClass::CNOT);
  CHECK(op_class({standard_gate("Ry", {0.1}), {0}, {{1, true}}}) == GateClass::CA);
  CHECK(op_class({standard_gate("Ry", {0.1}), {0}, {{1, true}, {2, true}}}) == GateClass::CCA);
  CHECK(op_class({standard_gate("CCX"), {0, 1, 2}, {}}) == GateClass::Composite);
  CHECK(op_class({standard_gate("Ry", {0.1}), {0}, {{1, false}}}) == GateClass::Composite);

  for (const auto& p : expand_to_primitives({standard_gate("CCX"), {0, 1, 2}, {}})) {
    CHECK(op_class(p) != GateClass::Composite);
  }
}

TEST_CASE("unregistered composites are reported") {
  std::mt19937_64 rng(2);
  Circuit c(2);
  c.add(custom_gate("U", oracle::random_unitary(2, rng)), {0, 1});
  CHECK_THROWS_AS(count_gates(c), UnregisteredComposite);
  // Without a rule the block is simulated whole and charged the C-A duration.
  CHECK(expand_to_primitives(c.ops().front()).size() == 1);
  CHECK(op_class(c.ops().front()) == GateClass::CA);
}

TEST_CASE("circuit validation") {
  Circuit c(2);
  CHECK_THROWS_AS(c.add(standard_gate("X"), {2}), ValidationError);
  CHECK_THROWS_AS(c.add(standard_gate("X"), {0}, {{0, true}}), ValidationError);
  c.add(standard_gate("H"), {1}).trace_out({1}).add(standard_gate("X"), {1});
  CHECK_THROWS_AS(c.validate(), ValidationError);
  CHECK_THROWS_AS(c.adjoint(), ValidationError);

  Circuit p(1);
  p.add(standard_gate("X"), {0}).scale_phase(-1.0);
  CHECK(std::abs(p.unitary()(1, 0) + 1.0) < 1e-15);
  CHECK(oracle::max_abs(p.adjoint().unitary() * p.unitary() - Matrix::Identity(2, 2)) < 1e-15);
}

TEST_CASE("eager tracing matches a single final trace") {
  std::mt19937_64 rng(13);
  Circuit c(4);
  c.add(standard_gate("H"), {1}).add(standard_gate("X"), {0}, {{1, true}});
  c.add(standard_gate("Ry", {0.8}), {2}).add(standard_gate("Ry", {0.5}), {0}, {{2, true}});
  c.trace_out({1});
  c.checkpoint("mid");
  c.add(standard_gate("H"), {3}).add(standard_gate("Ry", {1.1}), {0}, {{3, true}, {2, false}});
  c.trace_out({2, 3});

  const DensityMatrix in(1, oracle::random_density(1, rng));
  ExecutionOptions eager, full;
  full.eager_trace = false;
  const auto a = execute(c, in, eager);
  const auto b = execute(c, in, full);
  CHECK(oracle::max_abs(a.state.entries() - b.state.entries()) < 1e-12);
  REQUIRE(a.snapshots.size() == 1);
  CHECK(oracle::max_abs(a.snapshots[0].state.entries() - b.snapshots[0].state.entries()) < 1e-12);
  CHECK(a.peak_live_qubits == 3);
  CHECK(b.peak_live_qubits == 4);

  // Same result from the dense unitary.
  Circuit plain(4);
  for (const auto& op : c.ops()) plain.add(op);
  Matrix rho_full = Eigen::kroneckerProduct(Matrix(DensityMatrix(3).entries()), in.entries()).eval();
  const Matrix u = plain.unitary();
  rho_full = u * rho_full * u.adjoint();
  CHECK(oracle::max_abs(oracle::partial_trace(rho_full, 4, {1, 2, 3}) - a.state.entries()) < 1e-12);
}

TEST_CASE("pure execution applies the global phase") {
  Circuit c(1);
  c.add(standard_gate("H"), {0}).scale_phase(cplx(0, 1));
  const PureState out = execute_pure(c, PureState(1));
  CHECK(std::abs(out.amplitude(0) - cplx(0, 1) / std::sqrt(2.0)) < 1e-15);
  c.trace_out({0});
  CHECK_THROWS_AS(execute_pure(c, PureState(1)), ValidationError);
}
