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

#include "qtherm/circuits.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>

#include "qtherm/errors.hpp"
#include "qtherm/simulator.hpp"

namespace qtherm {
namespace {

using std::numbers::pi;
constexpr cplx kI{0.0, 1.0};

std::uint64_t embed(std::uint64_t target_bits, std::uint64_t ancilla_bits, const PostSelectUnit& unit) {
  std::uint64_t idx = 0;
  for (std::size_t j = 0; j < unit.targets.size(); ++j) {
    if ((target_bits >> j) & 1U) idx |= std::uint64_t{1} << unit.targets[j];
  }
  for (std::size_t j = 0; j < unit.ancillas.size(); ++j) {
    if ((ancilla_bits >> j) & 1U) idx |= std::uint64_t{1} << unit.ancillas[j];
  }
  return idx;
}

// Targets must sit below the ancillas so a product input is tensor(psi, |0>).
void require_low_targets(const PostSelectUnit& unit) {
  for (std::size_t j = 0; j < unit.targets.size(); ++j) {
    if (unit.targets[j] != static_cast<int>(j)) throw ValidationError("unit targets must be qubits 0..k-1");
  }
  if (unit.targets.size() + unit.ancillas.size() != static_cast<std::size_t>(unit.circuit.n_qubits())) {
    throw ValidationError("unit qubits must be exactly its targets and ancillas");
  }
}

std::vector<int> range(int first, int count) {
  std::vector<int> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = first + i;
  return out;
}

Matrix hadamard_power(int n) {
  const Matrix h = standard_gate("H").matrix();
  Matrix out = Matrix::Identity(1, 1);
  for (int i = 0; i < n; ++i) out = Eigen::kroneckerProduct(h, out).eval();
  return out;
}

// Eigenvectors relabelled so eigenstate k is the one closest to basis state
// k, with that component made real and positive. A diagonal H gets V = I.
Matrix labelled_eigenbasis(const Hamiltonian& h) {
  const Matrix& v = h.eigenvectors();
  const auto dim = v.rows();
  Matrix out(dim, dim);
  std::vector<bool> used(static_cast<std::size_t>(dim), false);
  for (Eigen::Index col = 0; col < dim; ++col) {
    Eigen::Index best;
    v.col(col).cwiseAbs2().maxCoeff(&best);
    if (used[static_cast<std::size_t>(best)]) return v;  // no clean labelling
    used[static_cast<std::size_t>(best)] = true;
    const cplx lead = v(best, col);
    out.col(best) = v.col(col) * (std::abs(lead) / lead);
  }
  return out;
}

Gate reset_for_perceptron(double theta) {
  PostSelectUnit unit = build_perceptron_unit(theta);
  if (branch_operator(unit, 1).norm() < 1e-6) unit = build_perceptron_unit(pi / 4);
  const Gate w = derive_reset(unit, 1);
  const Gate ry = standard_gate("Ry", {pi / 2});
  const cplx overlap = (ry.matrix().adjoint() * w.matrix()).trace() / 2.0;
  if (std::abs(std::abs(overlap) - 1.0) < 1e-10) return ry;
  return w;
}

}  // namespace

PostSelectUnit build_perceptron_unit(double theta) {
  Circuit c(2);
  c.add(standard_gate("Ry", {2 * theta}), {1});
  c.add(standard_gate("Ry", {pi}), {0}, {{1, true}});
  c.add(standard_gate("Ry", {-2 * theta}), {1});
  return {std::move(c), {0}, {1}, 0};
}

PostSelectUnit build_two_branch_unit(double p0) {
  if (!(p0 > 0.0 && p0 <= 1.0)) throw ValidationError("p0 must lie in (0, 1]");
  Circuit c(2);
  c.add(standard_gate("Ry", {2 * std::acos(std::sqrt(p0))}), {1});
  c.add(standard_gate("Ry", {pi}), {0}, {{1, true}});
  return {std::move(c), {0}, {1}, 0};
}

Matrix branch_operator(const PostSelectUnit& unit, std::uint64_t outcome) {
  const Matrix u = unit.circuit.unitary();
  const auto dim = static_cast<Eigen::Index>(1) << unit.targets.size();
  Matrix e(dim, dim);
  for (Eigen::Index y = 0; y < dim; ++y) {
    for (Eigen::Index x = 0; x < dim; ++x) {
      e(y, x) = u(static_cast<Eigen::Index>(embed(static_cast<std::uint64_t>(y), outcome, unit)),
                  static_cast<Eigen::Index>(embed(static_cast<std::uint64_t>(x), 0, unit)));
    }
  }
  return e;
}

Matrix branch_isometry(const PostSelectUnit& unit, std::uint64_t outcome) {
  const Matrix e = branch_operator(unit, outcome);
  const Matrix gram = e.adjoint() * e;
  const double p = gram.trace().real() / static_cast<double>(gram.rows());
  if (p < 1e-14) throw ValidationError("branch " + std::to_string(outcome) + " has zero weight");
  if ((gram - p * Matrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff() > 1e-10) {
    throw ValidationError("branch " + std::to_string(outcome) + " is not proportional to a unitary");
  }
  return e / std::sqrt(p);
}

Gate derive_reset(const PostSelectUnit& unit, std::uint64_t outcome) {
  return custom_gate("W", branch_isometry(unit, outcome).adjoint());
}

RUSResult run_rus(const PostSelectUnit& unit, const PureState& input, std::mt19937_64& rng, int max_trials) {
  if (max_trials < 1) throw ValidationError("max_trials must be >= 1");
  require_low_targets(unit);
  if (input.n_qubits() != static_cast<int>(unit.targets.size())) throw ValidationError("input/target size mismatch");
  const int k = static_cast<int>(unit.targets.size());
  const int m = static_cast<int>(unit.ancillas.size());
  std::map<std::uint64_t, Gate> resets;

  PureState psi = input;
  for (int trial = 1; trial <= max_trials; ++trial) {
    const PureState out = execute_pure(unit.circuit, tensor(psi, PureState(m)));
    const std::vector<double> probs = outcome_probabilities(out, unit.ancillas);
    std::discrete_distribution<std::uint64_t> pick(probs.begin(), probs.end());
    const std::uint64_t outcome = pick(rng);

    Vector amps(Eigen::Index{1} << k);
    for (Eigen::Index t = 0; t < amps.size(); ++t) {
      amps(t) = out.amplitude(static_cast<std::uint64_t>(t) | (outcome << k));
    }
    amps /= amps.norm();
    psi = PureState(k, amps);
    if (outcome == unit.success_outcome) return {trial, true, psi};

    auto it = resets.find(outcome);
    if (it == resets.end()) it = resets.emplace(outcome, derive_reset(unit, outcome)).first;
    apply_gate(psi, it->second.matrix(), unit.targets);
  }
  return {max_trials, false, psi};
}

void ThermaliseConfig::validate() const {
  if (applications < 1) throw ValidationError("applications T must be >= 1");
  if (applications > 12) throw CapacityError("T > 12 exceeds the supported live-register budget");
  if (precision < 1) throw ValidationError("precision m must be >= 1");
}

namespace {

ThermaliseResult run_thermalise(const ThermaliseCircuit& tc, const DensityMatrix& input, const PureState& ideal,
                                const NoiseProfile* noise, bool eager_trace) {
  std::optional<NoiseModel> model;
  if (noise != nullptr) model.emplace(*noise);
  ExecutionOptions opts;
  opts.keep = tc.targets;
  opts.eager_trace = eager_trace;
  opts.noise = model ? &*model : nullptr;
  ExecutionResult run = execute(tc.circuit, input, opts);

  ThermaliseResult out{run.state, {}, {}, run.peak_live_qubits, std::move(run.class_histogram)};
  for (auto& snap : run.snapshots) {
    out.fidelity.push_back(fidelity_with_pure(snap.state, ideal));
    out.states.push_back(std::move(snap.state));
  }
  return out;
}

}  // namespace

ThermaliseCircuit build_perceptron_thermalise(double theta, const ThermaliseConfig& config) {
  config.validate();
  const int t_count = config.applications;
  Circuit c(1 + t_count);
  const Gate reset = reset_for_perceptron(theta);
  const Gate up = standard_gate("Ry", {2 * theta});
  const Gate down = standard_gate("Ry", {-2 * theta});
  const Gate flip = standard_gate("Ry", {pi});

  c.add(up, {1}).add(flip, {0}, {{1, true}}).add(down, {1});
  if (!config.trailing_reset) c.checkpoint("T=1");
  for (int i = 1; i < t_count; ++i) {
    const int prev = i, anc = i + 1;
    c.add(reset, {0}, {{prev, true}});
    if (config.trailing_reset) c.checkpoint("T=" + std::to_string(i));
    // A fresh ancilla returns to |0> when the flip is skipped, so only the
    // target-acting gate needs the extra control.
    c.add(up, {anc}).add(flip, {0}, {{anc, true}, {prev, true}}).add(down, {anc});
    c.trace_out({prev});
    if (!config.trailing_reset) c.checkpoint("T=" + std::to_string(i + 1));
  }
  if (config.trailing_reset) {
    c.add(reset, {0}, {{t_count, true}});
    c.checkpoint("T=" + std::to_string(t_count));
  }
  c.trace_out({t_count});
  return {std::move(c), {0}};
}

ThermaliseResult simulate_perceptron_thermalise(double theta, const ThermaliseConfig& config, const PureState& input,
                                                const NoiseProfile* noise, bool eager_trace) {
  if (input.n_qubits() != 1) throw ValidationError("perceptron input must be a single qubit");
  const ThermaliseCircuit tc = build_perceptron_thermalise(theta, config);
  PureState ideal = input;
  apply_gate(ideal, standard_gate("Ry", {2 * std::atan2(std::pow(std::sin(theta), 2), std::pow(std::cos(theta), 2))})
                        .matrix(),
             std::vector<int>{0});
  return run_thermalise(tc, DensityMatrix(input), ideal, noise, eager_trace);
}

int nor_width(int m) {
  if (m < 1) throw ValidationError("NOR needs m >= 1");
  return m == 1 ? 2 : 2 * m - 1;
}

Circuit build_nor(int m) {
  const int width = nor_width(m);
  Circuit c(width);
  const Gate x = standard_gate("X");
  for (int q = 0; q < width; ++q) c.add(x, {q});
  if (m == 1) {
    c.add(standard_gate("CNOT"), {0, 1});
    return c;
  }
  // Helper j ends holding OR(p_0..p_{j+1}); all but the last are flipped back
  // to NOR so they can feed the next Toffoli as a positive control.
  for (int j = 0; j + 1 < m; ++j) {
    const int a = j == 0 ? 0 : m + j - 1;
    c.add(standard_gate("CCX"), {a, j + 1, m + j});
    if (j + 2 < m) c.add(x, {m + j});
  }
  return c;
}

Gate build_scrambler(const Hamiltonian& h, ScramblingMode mode) {
  const Matrix hn = hadamard_power(h.n_qubits());
  if (mode == ScramblingMode::Hadamard) return h.n_qubits() == 1 ? standard_gate("H") : custom_gate("H^n", hn);
  const Matrix v = labelled_eigenbasis(h);
  return custom_gate("scramble", v * hn * v.adjoint());
}

Gate build_initialiser(const Hamiltonian& h, ScramblingMode mode) {
  const Matrix hn = hadamard_power(h.n_qubits());
  if (mode == ScramblingMode::Hadamard) return h.n_qubits() == 1 ? standard_gate("H") : custom_gate("H^n", hn);
  return custom_gate("init", labelled_eigenbasis(h) * hn);
}

namespace {

Gate shifted_evolution_for(const Hamiltonian& h, double shift, double tau) {
  const Eigen::VectorXd& e = h.eigenvalues();
  Vector phases(e.size());
  for (Eigen::Index i = 0; i < e.size(); ++i) phases(i) = std::exp(-kI * ((e(i) - shift) * tau));
  const Matrix& v = h.eigenvectors();
  return custom_gate("U_H", v * phases.asDiagonal() * v.adjoint());
}

void add_pea(Circuit& c, const Hamiltonian& h, const std::vector<int>& targets, const std::vector<int>& precision,
             double shift, std::optional<int> flag) {
  const Gate hadamard = standard_gate("H");
  for (int p : precision) c.add(hadamard, {p});
  for (std::size_t j = 0; j < precision.size(); ++j) {
    std::vector<Control> controls{{precision[j], true}};
    if (flag) controls.push_back({*flag, true});
    const double tau = h.tau() * static_cast<double>(std::uint64_t{1} << j);
    c.add(shifted_evolution_for(h, shift, tau), targets, std::move(controls));
  }
  c.add(inverse_qft(static_cast<int>(precision.size())), precision);
}

}  // namespace

Gate shifted_evolution(const Hamiltonian& h, double shift) { return shifted_evolution_for(h, shift, h.tau()); }

Circuit build_pea_unit(const Hamiltonian& h, int m, double shift) {
  if (m < 1) throw ValidationError("precision m must be >= 1");
  const int n = h.n_qubits();
  Circuit c(n + m);
  add_pea(c, h, range(0, n), range(n, m), shift, std::nullopt);
  return c;
}

ThermaliseCircuit build_groundstate_thermalise(const Hamiltonian& h, const ThermaliseConfig& config) {
  config.validate();
  const int n = h.n_qubits();
  const int m = config.precision;
  const int t_count = config.applications;
  const int helpers = nor_width(m) - m;
  const double shift = config.energy_shift.value_or(h.ground_energy());
  const std::vector<int> targets = range(0, n);

  Circuit c(n + t_count * m + (t_count - 1) * helpers);
  int next = n;
  auto alloc = [&](int count) {
    std::vector<int> q = range(next, count);
    next += count;
    return q;
  };

  c.add(build_initialiser(h, config.scrambling), targets);
  std::vector<int> precision = alloc(m);
  add_pea(c, h, targets, precision, shift, std::nullopt);
  c.checkpoint("T=1");

  const Gate scrambler = build_scrambler(h, config.scrambling);
  const Gate hadamard = standard_gate("H");
  for (int i = 1; i < t_count; ++i) {
    const std::vector<int> nor_helpers = alloc(helpers);
    std::vector<int> nor_map = precision;
    nor_map.insert(nor_map.end(), nor_helpers.begin(), nor_helpers.end());
    c.append(build_nor(m), nor_map);
    const int flag = nor_helpers.back();
    std::vector<int> spent = precision;
    spent.insert(spent.end(), nor_helpers.begin(), nor_helpers.end() - 1);
    c.trace_out(spent);

    if (config.scrambling == ScramblingMode::Exact) {
      c.add(scrambler, targets, {{flag, true}});
    } else {
      for (int q : targets) c.add(hadamard, {q}, {{flag, true}});
    }
    precision = alloc(m);
    add_pea(c, h, targets, precision, shift, flag);
    c.checkpoint("T=" + std::to_string(i + 1));
    c.trace_out({flag});
  }
  return {std::move(c), targets};
}

ThermaliseResult simulate_groundstate_thermalise(const Hamiltonian& h, const ThermaliseConfig& config,
                                                 const NoiseProfile* noise, bool eager_trace) {
  const ThermaliseCircuit tc = build_groundstate_thermalise(h, config);
  return run_thermalise(tc, DensityMatrix(h.n_qubits()), h.ground_state(), noise, eager_trace);
}

PostSelectUnit build_oaa_with_angles(const PostSelectUnit& unit, int k, double after_forward, double after_adjoint) {
  if (k < 0) throw ValidationError("OAA depth k must be >= 0");
  if (k == 0) return unit;
  const PostSelectUnit prev = build_oaa_with_angles(unit, k - 1, after_forward, after_adjoint);
  const int m = static_cast<int>(unit.ancillas.size());
  Circuit c(prev.circuit.n_qubits());
  c.append(prev.circuit);
  c.add(phase_shift_on_zero(m, after_forward), unit.ancillas);
  c.append(prev.circuit.adjoint());
  c.add(phase_shift_on_zero(m, after_adjoint), unit.ancillas);
  c.append(prev.circuit);
  c.scale_phase(-1.0);
  return {std::move(c), unit.targets, unit.ancillas, unit.success_outcome};
}

PostSelectUnit build_oaa(const PostSelectUnit& unit, int k) { return build_oaa_with_angles(unit, k, pi / 3, pi / 3); }

double success_probability(const PostSelectUnit& unit, const PureState& input) {
  require_low_targets(unit);
  const PureState out =
      execute_pure(unit.circuit, tensor(input, PureState(static_cast<int>(unit.ancillas.size()))));
  return outcome_probabilities(out, unit.ancillas)[unit.success_outcome];
}

double oaa_success_probability(const PostSelectUnit& unit, int k) {
  return success_probability(build_oaa(unit, k), PureState(static_cast<int>(unit.targets.size())));
}

double oaa_with_angle_error(const PostSelectUnit& unit, int k, double delta, AngleErrorMode mode) {
  if (!(std::abs(delta) < pi / 6)) throw ValidationError("|delta| must be below pi/6");
  const double fwd = pi / 3 + delta;
  const double adj = mode == AngleErrorMode::Uniform ? pi / 3 + delta : pi / 3 - delta;
  return success_probability(build_oaa_with_angles(unit, k, fwd, adj),
                             PureState(static_cast<int>(unit.targets.size())));
}

}  // namespace qtherm
