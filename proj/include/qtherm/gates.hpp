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

#include <string>
#include <vector>

#include "qtherm/hamiltonians.hpp"
#include "qtherm/qstate.hpp"

namespace qtherm {

/// Timing/counting class. U1 are virtual phase gates, U2 single-pulse gates
/// (H), U3 general single-qubit rotations. CA / CCA mark controlled custom
/// unitaries that keep their own duration instead of being decomposed.
enum class GateClass { U1, U2, U3, CNOT, CA, CCA, Composite };

std::string to_string(GateClass c);
GateClass gate_class_from_string(const std::string& s);

class Gate {
 public:
  /// Throws ValidationError if `matrix` is not unitary within 1e-10 or not
  /// of power-of-two size.
  Gate(std::string label, Matrix matrix, GateClass gate_class, std::vector<double> params = {});

  const std::string& label() const { return label_; }
  const std::vector<double>& params() const { return params_; }
  const Matrix& matrix() const { return matrix_; }
  int arity() const { return arity_; }
  GateClass gate_class() const { return class_; }

  Gate adjoint() const;

 private:
  std::string label_;
  std::vector<double> params_;
  Matrix matrix_;
  int arity_;
  GateClass class_;
};

/// Library gates: I, X, Y, Z, H, T, Tdg, Ry(a), Rz(a), Phase(a), CNOT, CCX,
/// SWAP and "S(pi/3)" with params {m} (an m-qubit phase shift on |0...0>).
/// Unknown names throw ValidationError.
Gate standard_gate(const std::string& name, const std::vector<double>& params = {});

/// S_m(phi) = I - (1 - e^{i phi}) |0^m><0^m|.
Gate phase_shift_on_zero(int m, double phi);

/// Wraps an arbitrary unitary; multi-qubit gates are Composite, single-qubit
/// ones U3.
Gate custom_gate(std::string label, Matrix matrix);

/// Exact QFT on m qubits, F_{kx} = e^{2 pi i kx / 2^m} / sqrt(2^m) on
/// little-endian indices. 1 <= m <= 10.
Gate qft(int m);
Gate inverse_qft(int m);

/// exp(-i H tau) from the eigendecomposition.
Gate hamiltonian_evolution(const Matrix& h, double tau);
Gate hamiltonian_evolution(const Hamiltonian& h, double tau);

/// Repeated squaring: A^(2^j).
Gate gate_power_of_two(const Gate& a, int j);

struct PauliTerm {
  double coefficient = 0.0;
  /// One of I/X/Y/Z per qubit, highest qubit first (same order as printed
  /// bit strings).
  std::string paulis;
};

Matrix pauli_string_matrix(const std::string& paulis);
Matrix pauli_sum_matrix(const std::vector<PauliTerm>& terms);

/// First-order product formula (prod_a exp(-i h_a s_a tau/steps))^steps,
/// terms applied in list order within each step.
Gate trotterize(const std::vector<PauliTerm>& terms, double tau, int steps);

/// Max-entry deviation of G^dagger G from the identity.
double unitarity_error(const Matrix& g);

}  // namespace qtherm
