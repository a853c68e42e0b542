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

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace qtherm {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Qubit ordering is little-endian throughout: qubit q is bit q of the basis
// index. Bit strings printed for humans put the highest qubit first.

inline constexpr int kMaxPureQubits = 20;
inline constexpr int kMaxDensityQubits = 12;

inline constexpr double kStructuralTol = 1e-10;
inline constexpr double kPsdFloor = -1e-9;

/// Formats `value` as `width` bits, most-significant qubit first.
std::string to_bitstring(std::uint64_t value, int width);

/// Polarity-tagged control qubit. `on_one` false means the control fires on |0>.
struct Control {
  int qubit = 0;
  bool on_one = true;
  friend bool operator==(const Control&, const Control&) = default;
};

class PureState {
 public:
  /// |0...0> on n qubits.
  explicit PureState(int n_qubits);
  /// Validates length 2^n and unit norm.
  PureState(int n_qubits, Vector amplitudes);

  static PureState basis(int n_qubits, std::uint64_t index);

  int n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return static_cast<std::size_t>(amplitudes_.size()); }
  const Vector& amplitudes() const { return amplitudes_; }
  cplx amplitude(std::uint64_t index) const { return amplitudes_(static_cast<Eigen::Index>(index)); }

  /// Mutable access for kernels; callers keep the norm invariant.
  Vector& mutable_amplitudes() { return amplitudes_; }

 private:
  int n_qubits_;
  Vector amplitudes_;
};

class DensityMatrix {
 public:
  /// |0...0><0...0| on n qubits.
  explicit DensityMatrix(int n_qubits);
  /// Validates Hermiticity, unit trace and the PSD floor.
  DensityMatrix(int n_qubits, Matrix entries);
  explicit DensityMatrix(const PureState& psi);

  int n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return static_cast<std::size_t>(entries_.rows()); }
  const Matrix& entries() const { return entries_; }
  cplx operator()(std::uint64_t r, std::uint64_t c) const {
    return entries_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  }
  Matrix& mutable_entries() { return entries_; }

  double trace() const;
  double min_eigenvalue() const;
  /// True if Hermitian, trace one and PSD within the structural tolerances.
  bool is_valid(double tol = kStructuralTol) const;

  /// Skips validation; for kernels whose output is valid by construction.
  static DensityMatrix unchecked(int n_qubits, Matrix entries);

 private:
  DensityMatrix() = default;

  int n_qubits_ = 0;
  Matrix entries_;
};

/// Kronecker product with `b` occupying the qubits above `a`.
PureState tensor(const PureState& a, const PureState& b);
DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);

/// Applies `gate` (dimension 2^|targets|) to `targets`, conditioned on every
/// control. Gate row/column bit j corresponds to targets[j].
void apply_gate(PureState& state, const Matrix& gate, std::span<const int> targets,
                std::span<const Control> controls = {});
/// rho -> U rho U^dagger with U the controlled gate.
void apply_gate(DensityMatrix& rho, const Matrix& gate, std::span<const int> targets,
                std::span<const Control> controls = {});

/// Applies a Kraus channel on `targets`: rho -> sum_k K rho K^dagger.
void apply_kraus(DensityMatrix& rho, std::span<const Matrix> kraus, std::span<const int> targets);

/// Reduced density matrix over the qubits not in `drop`; survivors keep
/// their relative order.
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> drop);

using AnyState = std::variant<PureState, DensityMatrix>;

struct MeasurementRecord {
  /// Outcome bits, highest listed qubit first.
  std::string outcome;
  double probability = 0.0;
  /// Renormalized, collapsed full-register state; empty when probability is 0.
  std::optional<AnyState> post_state;
};

/// Projects `qubits` onto `outcome`, where bit j of `outcome` is the value
/// required of qubits[j].
MeasurementRecord project(const PureState& state, std::span<const int> qubits, std::uint64_t outcome);
MeasurementRecord project(const DensityMatrix& rho, std::span<const int> qubits, std::uint64_t outcome);

/// Probability of each outcome of `qubits`, indexed like `project`.
std::vector<double> outcome_probabilities(const PureState& state, std::span<const int> qubits);
std::vector<double> outcome_probabilities(const DensityMatrix& rho, std::span<const int> qubits);

/// <psi|rho|psi>, clamped to [0, 1].
double fidelity_with_pure(const DensityMatrix& rho, const PureState& psi);

/// Multinomial sample of the computational-basis diagonal; keys are
/// MSB-first bit strings. Deterministic per seed.
std::map<std::string, std::uint64_t> sample_counts(const DensityMatrix& rho, std::uint64_t shots,
                                                   std::uint64_t seed);

}  // namespace qtherm
