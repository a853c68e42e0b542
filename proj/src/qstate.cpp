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

#include "qtherm/qstate.hpp"

#include <algorithm>
#include <random>

#include "qtherm/errors.hpp"

namespace qtherm {
namespace {

std::uint64_t dim_of(int n) { return std::uint64_t{1} << n; }

void check_pure_capacity(int n) {
  if (n < 0) throw ValidationError("negative qubit count");
  if (n > kMaxPureQubits) {
    throw CapacityError("pure state of " + std::to_string(n) + " qubits exceeds the " +
                        std::to_string(kMaxPureQubits) + "-qubit cap");
  }
}

void check_density_capacity(int n) {
  if (n < 0) throw ValidationError("negative qubit count");
  if (n > kMaxDensityQubits) {
    throw CapacityError("density matrix of " + std::to_string(n) + " qubits exceeds the " +
                        std::to_string(kMaxDensityQubits) + "-qubit cap");
  }
}

void check_operands(int n, const Matrix& gate, std::span<const int> targets,
                    std::span<const Control> controls) {
  if (targets.empty()) throw ValidationError("gate needs at least one target");
  const auto sub = static_cast<Eigen::Index>(dim_of(static_cast<int>(targets.size())));
  if (gate.rows() != sub || gate.cols() != sub) {
    throw ValidationError("gate dimension " + std::to_string(gate.rows()) + " does not match " +
                          std::to_string(targets.size()) + " targets");
  }
  std::uint64_t seen = 0;
  auto claim = [&](int q) {
    if (q < 0 || q >= n) throw ValidationError("qubit index " + std::to_string(q) + " out of range");
    if (seen & (std::uint64_t{1} << q)) {
      throw ValidationError("qubit index " + std::to_string(q) + " used twice");
    }
    seen |= std::uint64_t{1} << q;
  };
  for (int t : targets) claim(t);
  for (const auto& c : controls) claim(c.qubit);
}

// Applies `gate` to every sub-block of a length-`dim` vector exposed through
// `at`. Works for non-unitary matrices as well (Kraus operators).
template <class Access>
void apply_kernel(Access&& at, std::uint64_t dim, const Matrix& gate, std::span<const int> targets,
                  std::span<const Control> controls) {
  const std::size_t sub = std::size_t{1} << targets.size();
  std::uint64_t tmask = 0;
  for (int t : targets) tmask |= std::uint64_t{1} << t;
  std::uint64_t cmask = 0, cval = 0;
  for (const auto& c : controls) {
    cmask |= std::uint64_t{1} << c.qubit;
    if (c.on_one) cval |= std::uint64_t{1} << c.qubit;
  }
  std::vector<std::uint64_t> offsets(sub, 0);
  for (std::size_t s = 0; s < sub; ++s) {
    for (std::size_t j = 0; j < targets.size(); ++j) {
      if ((s >> j) & 1U) offsets[s] |= std::uint64_t{1} << targets[j];
    }
  }
  std::vector<cplx> in(sub);
  for (std::uint64_t base = 0; base < dim; ++base) {
    if ((base & tmask) != 0 || (base & cmask) != cval) continue;
    for (std::size_t s = 0; s < sub; ++s) in[s] = at(base | offsets[s]);
    for (std::size_t r = 0; r < sub; ++r) {
      cplx acc = 0.0;
      for (std::size_t s = 0; s < sub; ++s) {
        acc += gate(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(s)) * in[s];
      }
      at(base | offsets[r]) = acc;
    }
  }
}

// U rho V^dagger, with both sides sharing targets and controls.
void sandwich(Matrix& m, std::uint64_t dim, const Matrix& left, const Matrix& right,
              std::span<const int> targets, std::span<const Control> controls) {
  for (std::uint64_t c = 0; c < dim; ++c) {
    const auto col = static_cast<Eigen::Index>(c);
    apply_kernel([&](std::uint64_t i) -> cplx& { return m(static_cast<Eigen::Index>(i), col); }, dim,
                 left, targets, controls);
  }
  const Matrix right_conj = right.conjugate();
  for (std::uint64_t r = 0; r < dim; ++r) {
    const auto row = static_cast<Eigen::Index>(r);
    apply_kernel([&](std::uint64_t i) -> cplx& { return m(row, static_cast<Eigen::Index>(i)); }, dim,
                 right_conj, targets, controls);
  }
}

std::uint64_t gather_bits(std::uint64_t index, std::span<const int> qubits) {
  std::uint64_t out = 0;
  for (std::size_t j = 0; j < qubits.size(); ++j) {
    if ((index >> qubits[j]) & 1U) out |= std::uint64_t{1} << j;
  }
  return out;
}

void check_qubit_list(int n, std::span<const int> qubits) {
  std::uint64_t seen = 0;
  for (int q : qubits) {
    if (q < 0 || q >= n) throw ValidationError("qubit index " + std::to_string(q) + " out of range");
    if (seen & (std::uint64_t{1} << q)) throw ValidationError("qubit listed twice");
    seen |= std::uint64_t{1} << q;
  }
}

}  // namespace

std::string to_bitstring(std::uint64_t value, int width) {
  std::string s(static_cast<std::size_t>(width), '0');
  for (int q = 0; q < width; ++q) {
    if ((value >> q) & 1U) s[static_cast<std::size_t>(width - 1 - q)] = '1';
  }
  return s;
}

PureState::PureState(int n_qubits) : n_qubits_(n_qubits) {
  check_pure_capacity(n_qubits);
  amplitudes_ = Vector::Zero(static_cast<Eigen::Index>(dim_of(n_qubits)));
  amplitudes_(0) = 1.0;
}

PureState::PureState(int n_qubits, Vector amplitudes)
    : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)) {
  check_pure_capacity(n_qubits);
  if (static_cast<std::uint64_t>(amplitudes_.size()) != dim_of(n_qubits)) {
    throw ValidationError("amplitude vector length does not equal 2^" + std::to_string(n_qubits));
  }
  if (std::abs(amplitudes_.norm() - 1.0) > kStructuralTol) {
    throw ValidationError("state is not normalized");
  }
}

PureState PureState::basis(int n_qubits, std::uint64_t index) {
  PureState s(n_qubits);
  if (index >= s.dim()) throw ValidationError("basis index out of range");
  s.amplitudes_(0) = 0.0;
  s.amplitudes_(static_cast<Eigen::Index>(index)) = 1.0;
  return s;
}

DensityMatrix::DensityMatrix(int n_qubits) : n_qubits_(n_qubits) {
  check_density_capacity(n_qubits);
  const auto d = static_cast<Eigen::Index>(dim_of(n_qubits));
  entries_ = Matrix::Zero(d, d);
  entries_(0, 0) = 1.0;
}

DensityMatrix::DensityMatrix(int n_qubits, Matrix entries)
    : n_qubits_(n_qubits), entries_(std::move(entries)) {
  check_density_capacity(n_qubits);
  const auto d = static_cast<Eigen::Index>(dim_of(n_qubits));
  if (entries_.rows() != d || entries_.cols() != d) {
    throw ValidationError("density matrix is not 2^n x 2^n");
  }
  if (!is_valid()) throw ValidationError("matrix is not a valid density matrix");
}

DensityMatrix::DensityMatrix(const PureState& psi) : n_qubits_(psi.n_qubits()) {
  check_density_capacity(n_qubits_);
  entries_ = psi.amplitudes() * psi.amplitudes().adjoint();
}

DensityMatrix DensityMatrix::unchecked(int n_qubits, Matrix entries) {
  check_density_capacity(n_qubits);
  DensityMatrix rho;
  rho.n_qubits_ = n_qubits;
  rho.entries_ = std::move(entries);
  return rho;
}

double DensityMatrix::trace() const { return entries_.trace().real(); }

double DensityMatrix::min_eigenvalue() const {
  const Matrix herm = 0.5 * (entries_ + entries_.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(herm, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

bool DensityMatrix::is_valid(double tol) const {
  if ((entries_ - entries_.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
  if (std::abs(trace() - 1.0) > tol) return false;
  return min_eigenvalue() >= kPsdFloor;
}

PureState tensor(const PureState& a, const PureState& b) {
  const int n = a.n_qubits() + b.n_qubits();
  check_pure_capacity(n);
  Vector out(static_cast<Eigen::Index>(dim_of(n)));
  const auto da = static_cast<Eigen::Index>(a.dim());
  for (Eigen::Index ib = 0; ib < static_cast<Eigen::Index>(b.dim()); ++ib) {
    out.segment(ib * da, da) = b.amplitudes()(ib) * a.amplitudes();
  }
  return PureState(n, std::move(out));
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  const int n = a.n_qubits() + b.n_qubits();
  check_density_capacity(n);
  const auto da = static_cast<Eigen::Index>(a.dim());
  const auto db = static_cast<Eigen::Index>(b.dim());
  Matrix out(da * db, da * db);
  for (Eigen::Index r = 0; r < db; ++r) {
    for (Eigen::Index c = 0; c < db; ++c) {
      out.block(r * da, c * da, da, da) = b.entries()(r, c) * a.entries();
    }
  }
  return DensityMatrix::unchecked(n, std::move(out));
}

void apply_gate(PureState& state, const Matrix& gate, std::span<const int> targets,
                std::span<const Control> controls) {
  check_operands(state.n_qubits(), gate, targets, controls);
  Vector& amps = state.mutable_amplitudes();
  apply_kernel([&](std::uint64_t i) -> cplx& { return amps(static_cast<Eigen::Index>(i)); }, state.dim(),
               gate, targets, controls);
}

void apply_gate(DensityMatrix& rho, const Matrix& gate, std::span<const int> targets,
                std::span<const Control> controls) {
  check_operands(rho.n_qubits(), gate, targets, controls);
  sandwich(rho.mutable_entries(), rho.dim(), gate, gate, targets, controls);
}

void apply_kraus(DensityMatrix& rho, std::span<const Matrix> kraus, std::span<const int> targets) {
  if (kraus.empty()) throw ValidationError("empty Kraus set");
  Matrix acc = Matrix::Zero(static_cast<Eigen::Index>(rho.dim()), static_cast<Eigen::Index>(rho.dim()));
  for (const auto& k : kraus) {
    check_operands(rho.n_qubits(), k, targets, {});
    Matrix term = rho.entries();
    sandwich(term, rho.dim(), k, k, targets, {});
    acc += term;
  }
  rho.mutable_entries() = std::move(acc);
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> drop) {
  const int n = rho.n_qubits();
  if (drop.empty()) throw ValidationError("partial trace needs at least one qubit to drop");
  check_qubit_list(n, drop);
  if (static_cast<int>(drop.size()) == n) throw ValidationError("cannot trace out every qubit");

  std::vector<int> keep;
  for (int q = 0; q < n; ++q) {
    if (std::find(drop.begin(), drop.end(), q) == drop.end()) keep.push_back(q);
  }
  auto scatter = [](std::uint64_t v, const std::vector<int>& qubits) {
    std::uint64_t out = 0;
    for (std::size_t j = 0; j < qubits.size(); ++j) {
      if ((v >> j) & 1U) out |= std::uint64_t{1} << qubits[j];
    }
    return out;
  };
  const std::vector<int> dropped(drop.begin(), drop.end());
  const std::uint64_t dk = dim_of(static_cast<int>(keep.size()));
  const std::uint64_t dd = dim_of(static_cast<int>(dropped.size()));
  std::vector<Eigen::Index> ki(dk), di(dd);
  for (std::uint64_t i = 0; i < dk; ++i) ki[i] = static_cast<Eigen::Index>(scatter(i, keep));
  for (std::uint64_t i = 0; i < dd; ++i) di[i] = static_cast<Eigen::Index>(scatter(i, dropped));

  const Matrix& m = rho.entries();
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(dk), static_cast<Eigen::Index>(dk));
  for (std::uint64_t c = 0; c < dk; ++c) {
    for (std::uint64_t r = 0; r < dk; ++r) {
      cplx acc = 0.0;
      for (std::uint64_t d = 0; d < dd; ++d) acc += m(ki[r] | di[d], ki[c] | di[d]);
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = acc;
    }
  }
  return DensityMatrix::unchecked(static_cast<int>(keep.size()), std::move(out));
}

MeasurementRecord project(const PureState& state, std::span<const int> qubits, std::uint64_t outcome) {
  check_qubit_list(state.n_qubits(), qubits);
  MeasurementRecord rec;
  rec.outcome = to_bitstring(outcome, static_cast<int>(qubits.size()));
  Vector projected = state.amplitudes();
  for (std::uint64_t i = 0; i < state.dim(); ++i) {
    if (gather_bits(i, qubits) != outcome) projected(static_cast<Eigen::Index>(i)) = 0.0;
  }
  rec.probability = std::clamp(projected.squaredNorm(), 0.0, 1.0);
  if (rec.probability > 0.0) {
    projected /= std::sqrt(projected.squaredNorm());
    rec.post_state = PureState(state.n_qubits(), std::move(projected));
  }
  return rec;
}

MeasurementRecord project(const DensityMatrix& rho, std::span<const int> qubits, std::uint64_t outcome) {
  check_qubit_list(rho.n_qubits(), qubits);
  MeasurementRecord rec;
  rec.outcome = to_bitstring(outcome, static_cast<int>(qubits.size()));
  Matrix projected = rho.entries();
  for (std::uint64_t i = 0; i < rho.dim(); ++i) {
    if (gather_bits(i, qubits) != outcome) {
      projected.row(static_cast<Eigen::Index>(i)).setZero();
      projected.col(static_cast<Eigen::Index>(i)).setZero();
    }
  }
  const double p = projected.trace().real();
  rec.probability = std::clamp(p, 0.0, 1.0);
  if (p > 0.0) {
    projected /= p;
    rec.post_state = DensityMatrix::unchecked(rho.n_qubits(), std::move(projected));
  }
  return rec;
}

std::vector<double> outcome_probabilities(const PureState& state, std::span<const int> qubits) {
  check_qubit_list(state.n_qubits(), qubits);
  std::vector<double> probs(std::size_t{1} << qubits.size(), 0.0);
  for (std::uint64_t i = 0; i < state.dim(); ++i) {
    probs[gather_bits(i, qubits)] += std::norm(state.amplitude(i));
  }
  return probs;
}

std::vector<double> outcome_probabilities(const DensityMatrix& rho, std::span<const int> qubits) {
  check_qubit_list(rho.n_qubits(), qubits);
  std::vector<double> probs(std::size_t{1} << qubits.size(), 0.0);
  for (std::uint64_t i = 0; i < rho.dim(); ++i) probs[gather_bits(i, qubits)] += rho(i, i).real();
  return probs;
}

double fidelity_with_pure(const DensityMatrix& rho, const PureState& psi) {
  if (rho.dim() != psi.dim()) throw ValidationError("fidelity operands differ in dimension");
  const cplx f = psi.amplitudes().dot(rho.entries() * psi.amplitudes());
  return std::clamp(f.real(), 0.0, 1.0);
}

std::map<std::string, std::uint64_t> sample_counts(const DensityMatrix& rho, std::uint64_t shots,
                                                   std::uint64_t seed) {
  if (shots == 0) throw ValidationError("shots must be at least 1");
  std::vector<double> weights(rho.dim());
  for (std::uint64_t i = 0; i < rho.dim(); ++i) weights[i] = std::max(0.0, rho(i, i).real());
  std::mt19937_64 rng(seed);
  std::discrete_distribution<std::uint64_t> dist(weights.begin(), weights.end());
  std::vector<std::uint64_t> tally(rho.dim(), 0);
  for (std::uint64_t s = 0; s < shots; ++s) ++tally[dist(rng)];
  std::map<std::string, std::uint64_t> counts;
  for (std::uint64_t i = 0; i < rho.dim(); ++i) {
    if (tally[i] > 0) counts[to_bitstring(i, rho.n_qubits())] = tally[i];
  }
  return counts;
}

}  // namespace qtherm
