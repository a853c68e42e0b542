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
#include <string>
#include <vector>

#include "qtherm/qstate.hpp"

namespace qtherm {

/// Dense Hermitian operator with its eigensystem cached at construction.
/// Eigenvalues are ascending; column i of eigenvectors() belongs to eigenvalue i.
class Hamiltonian {
 public:
  /// Throws ValidationError when `matrix` is not Hermitian within `herm_tol`.
  /// The stored matrix is symmetrized.
  Hamiltonian(std::string name, Matrix matrix, double tau = 1.0, double herm_tol = kStructuralTol);

  const std::string& name() const { return name_; }
  int n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }
  const Matrix& matrix() const { return matrix_; }
  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
  const Matrix& eigenvectors() const { return eigenvectors_; }
  double ground_energy() const { return eigenvalues_(0); }
  PureState eigenstate(std::size_t i) const;
  PureState ground_state() const { return eigenstate(0); }
  /// Evolution time used when building exp(-i H tau).
  double tau() const { return tau_; }

 private:
  std::string name_;
  int n_qubits_;
  Matrix matrix_;
  Eigen::VectorXd eigenvalues_;
  Matrix eigenvectors_;
  double tau_;
};

/// "h1": diag(0, -3pi/2). "h2": the 4x4 benchmark with entries as printed
/// (five decimals). Anything else throws ValidationError.
Hamiltonian builtin_hamiltonian(const std::string& name);

/// Random Hamiltonian whose evolution exp(-iH) has eigenphases e^{ik pi/2}
/// (k cycled mod 4) in the eigenbasis V = GramSchmidt(I + eps * B) with real
/// B_ij ~ N(0, 0.5^2). n must be 1..3. Deterministic per seed.
Hamiltonian generate_h2_style(int n_qubits, double eps_perturbation, std::uint64_t seed);

struct PhaseTable {
  /// Phases in [0, 1) in eigenvalue order; the groundstate is first and 0.
  std::vector<double> phases;
  /// Nearest m-bit pattern (ties to even), reduced mod 2^m.
  std::vector<std::uint64_t> patterns;
  /// Eigenstates sharing the groundstate's all-zero pattern.
  int n_star = 0;
  /// Every phase lies on the m-bit grid within 1e-6 of its pattern.
  bool exactly_representable = false;
};

/// theta_i = frac((E_G - E_i) tau / 2 pi).
PhaseTable shifted_phases(const Hamiltonian& h, int precision_bits);

/// Parses a Hamiltonian JSON document: {"matrix": [[[re, im], ...], ...]},
/// optional "name" and "tau". Rejects non-Hermitian input beyond 1e-8.
Hamiltonian hamiltonian_from_json(const std::string& text);
Hamiltonian load_hamiltonian_file(const std::string& path);

}  // namespace qtherm
