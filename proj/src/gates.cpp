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

#include "qtherm/gates.hpp"

#include <bit>
#include <cmath>
#include <numbers>

#include "qtherm/errors.hpp"

namespace qtherm {
namespace {

using std::numbers::pi;

const cplx kI{0.0, 1.0};

Matrix mat2(cplx a, cplx b, cplx c, cplx d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

Matrix ry_matrix(double a) {
  const double c = std::cos(a / 2), s = std::sin(a / 2);
  return mat2(c, -s, s, c);
}

Matrix rz_matrix(double a) { return mat2(std::exp(-kI * (a / 2)), 0.0, 0.0, std::exp(kI * (a / 2))); }

Matrix phase_matrix(double a) { return mat2(1.0, 0.0, 0.0, std::exp(kI * a)); }

Matrix permutation_matrix(std::size_t dim, auto&& map) {
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < dim; ++i) m(static_cast<Eigen::Index>(map(i)), static_cast<Eigen::Index>(i)) = 1.0;
  return m;
}

void require_params(const std::string& name, const std::vector<double>& params, std::size_t n) {
  if (params.size() != n) {
    throw ValidationError("gate " + name + " expects " + std::to_string(n) + " parameter(s)");
  }
}

std::string toggle_dagger(const std::string& label) {
  static const std::string dag = "†";
  if (label.size() >= dag.size() && label.compare(label.size() - dag.size(), dag.size(), dag) == 0) {
    return label.substr(0, label.size() - dag.size());
  }
  return label + dag;
}

}  // namespace

std::string to_string(GateClass c) {
  switch (c) {
    case GateClass::U1: return "U1";
    case GateClass::U2: return "U2";
    case GateClass::U3: return "U3";
    case GateClass::CNOT: return "CNOT";
    case GateClass::CA: return "C-A";
    case GateClass::CCA: return "CC-A";
    case GateClass::Composite: return "COMPOSITE";
  }
  return "?";
}

GateClass gate_class_from_string(const std::string& s) {
  for (auto c : {GateClass::U1, GateClass::U2, GateClass::U3, GateClass::CNOT, GateClass::CA, GateClass::CCA,
                 GateClass::Composite}) {
    if (to_string(c) == s) return c;
  }
  throw ValidationError("unknown gate class '" + s + "'");
}

double unitarity_error(const Matrix& g) {
  const Matrix id = Matrix::Identity(g.rows(), g.cols());
  return (g.adjoint() * g - id).cwiseAbs().maxCoeff();
}

Gate::Gate(std::string label, Matrix matrix, GateClass gate_class, std::vector<double> params)
    : label_(std::move(label)), params_(std::move(params)), matrix_(std::move(matrix)), class_(gate_class) {
  const auto n = static_cast<std::uint64_t>(matrix_.rows());
  if (matrix_.rows() != matrix_.cols() || n < 2 || !std::has_single_bit(n)) {
    throw ValidationError("gate " + label_ + " must be a 2^k x 2^k matrix");
  }
  arity_ = std::countr_zero(n);
  if (unitarity_error(matrix_) >= 1e-10) throw ValidationError("gate " + label_ + " is not unitary");
}

Gate Gate::adjoint() const {
  std::string label = label_;
  std::vector<double> params = params_;
  if (label_ == "T") {
    label = "Tdg";
  } else if (label_ == "Tdg") {
    label = "T";
  } else if (label_ == "Ry" || label_ == "Rz" || label_ == "Phase") {
    for (auto& p : params) p = -p;
  } else if (label_ == "S(phi)") {
    params[1] = -params[1];
  } else if (label_ == "QFT") {
    label = "QFT†";
  } else if (label_ == "QFT†") {
    label = "QFT";
  } else if (label_ == "I" || label_ == "X" || label_ == "Y" || label_ == "Z" || label_ == "H" ||
             label_ == "CNOT" || label_ == "CCX" || label_ == "SWAP") {
    // self-inverse
  } else {
    label = toggle_dagger(label_);
  }
  return Gate(std::move(label), matrix_.adjoint(), class_, std::move(params));
}

Gate standard_gate(const std::string& name, const std::vector<double>& params) {
  const double r = 1.0 / std::sqrt(2.0);
  if (name == "I") return Gate("I", Matrix::Identity(2, 2), GateClass::U1);
  if (name == "X") return Gate("X", mat2(0.0, 1.0, 1.0, 0.0), GateClass::U3);
  if (name == "Y") return Gate("Y", mat2(0.0, -kI, kI, 0.0), GateClass::U3);
  if (name == "Z") return Gate("Z", mat2(1.0, 0.0, 0.0, -1.0), GateClass::U1);
  if (name == "H") return Gate("H", mat2(r, r, r, -r), GateClass::U2);
  if (name == "T") return Gate("T", phase_matrix(pi / 4), GateClass::U1);
  if (name == "Tdg") return Gate("Tdg", phase_matrix(-pi / 4), GateClass::U1);
  if (name == "Ry") {
    require_params(name, params, 1);
    return Gate("Ry", ry_matrix(params[0]), GateClass::U3, params);
  }
  if (name == "Rz") {
    require_params(name, params, 1);
    return Gate("Rz", rz_matrix(params[0]), GateClass::U1, params);
  }
  if (name == "Phase") {
    require_params(name, params, 1);
    return Gate("Phase", phase_matrix(params[0]), GateClass::U1, params);
  }
  if (name == "CNOT") {
    // targets {control, target}
    return Gate("CNOT", permutation_matrix(4, [](std::size_t i) { return (i & 1U) ? i ^ 2U : i; }),
                GateClass::CNOT);
  }
  if (name == "CCX") {
    // targets {control0, control1, target}
    return Gate("CCX", permutation_matrix(8, [](std::size_t i) { return (i & 3U) == 3U ? i ^ 4U : i; }),
                GateClass::Composite);
  }
  if (name == "SWAP") {
    return Gate("SWAP", permutation_matrix(4, [](std::size_t i) { return ((i & 1U) << 1) | ((i >> 1) & 1U); }),
                GateClass::Composite);
  }
  if (name == "S(pi/3)") {
    require_params(name, params, 1);
    return phase_shift_on_zero(static_cast<int>(params[0]), pi / 3);
  }
  throw ValidationError("unknown gate '" + name + "'");
}

Gate phase_shift_on_zero(int m, double phi) {
  if (m < 1 || m > 10) throw ValidationError("phase shift needs 1 <= m <= 10");
  const auto dim = static_cast<Eigen::Index>(1) << m;
  Matrix s = Matrix::Identity(dim, dim);
  s(0, 0) = std::exp(kI * phi);
  return Gate("S(phi)", std::move(s), m == 1 ? GateClass::U1 : GateClass::Composite,
              {static_cast<double>(m), phi});
}

Gate custom_gate(std::string label, Matrix matrix) {
  const GateClass cls = matrix.rows() == 2 ? GateClass::U3 : GateClass::Composite;
  return Gate(std::move(label), std::move(matrix), cls);
}

Gate qft(int m) {
  if (m < 1 || m > 10) throw ValidationError("QFT needs 1 <= m <= 10");
  const auto dim = static_cast<Eigen::Index>(1) << m;
  const double norm = 1.0 / std::sqrt(static_cast<double>(dim));
  Matrix f(dim, dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    for (Eigen::Index x = 0; x < dim; ++x) {
      // Reduce k*x mod dim before scaling to keep the phase exact.
      const auto kx = static_cast<double>((k * x) % dim);
      f(k, x) = norm * std::exp(kI * (2.0 * pi * kx / static_cast<double>(dim)));
    }
  }
  return Gate("QFT", std::move(f), m == 1 ? GateClass::U2 : GateClass::Composite, {static_cast<double>(m)});
}

Gate inverse_qft(int m) { return qft(m).adjoint(); }

Gate hamiltonian_evolution(const Matrix& h, double tau) {
  if (h.rows() != h.cols()) throw ValidationError("Hamiltonian must be square");
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() > kStructuralTol) {
    throw ValidationError("Hamiltonian is not Hermitian");
  }
  const Matrix herm = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(herm);
  const Eigen::VectorXd& e = solver.eigenvalues();
  Vector phases(e.size());
  for (Eigen::Index i = 0; i < e.size(); ++i) phases(i) = std::exp(-kI * (e(i) * tau));
  const Matrix& v = solver.eigenvectors();
  Matrix a = v * phases.asDiagonal() * v.adjoint();
  return custom_gate("exp(-iHt)", std::move(a));
}

Gate hamiltonian_evolution(const Hamiltonian& h, double tau) {
  const Eigen::VectorXd& e = h.eigenvalues();
  Vector phases(e.size());
  for (Eigen::Index i = 0; i < e.size(); ++i) phases(i) = std::exp(-kI * (e(i) * tau));
  const Matrix& v = h.eigenvectors();
  return custom_gate("exp(-iHt)", v * phases.asDiagonal() * v.adjoint());
}

Gate gate_power_of_two(const Gate& a, int j) {
  if (j < 0) throw ValidationError("power exponent must be non-negative");
  Matrix m = a.matrix();
  for (int i = 0; i < j; ++i) m = m * m;
  if (j == 0) return a;
  return Gate(a.label() + "^" + std::to_string(std::uint64_t{1} << j), std::move(m), a.gate_class(), a.params());
}

Matrix pauli_string_matrix(const std::string& paulis) {
  if (paulis.empty()) throw ValidationError("empty Pauli string");
  Matrix out = Matrix::Identity(1, 1);
  // Highest qubit first: the leftmost character is the most significant factor.
  for (char c : paulis) {
    Matrix p;
    switch (c) {
      case 'I': p = Matrix::Identity(2, 2); break;
      case 'X': p = mat2(0.0, 1.0, 1.0, 0.0); break;
      case 'Y': p = mat2(0.0, -kI, kI, 0.0); break;
      case 'Z': p = mat2(1.0, 0.0, 0.0, -1.0); break;
      default: throw ValidationError(std::string("invalid Pauli label '") + c + "'");
    }
    Matrix next(out.rows() * 2, out.cols() * 2);
    for (Eigen::Index r = 0; r < out.rows(); ++r) {
      for (Eigen::Index c2 = 0; c2 < out.cols(); ++c2) next.block(r * 2, c2 * 2, 2, 2) = out(r, c2) * p;
    }
    out = std::move(next);
  }
  return out;
}

Matrix pauli_sum_matrix(const std::vector<PauliTerm>& terms) {
  if (terms.empty()) throw ValidationError("empty Pauli sum");
  Matrix h = Matrix::Zero(static_cast<Eigen::Index>(1) << terms.front().paulis.size(),
                          static_cast<Eigen::Index>(1) << terms.front().paulis.size());
  for (const auto& t : terms) {
    if (t.paulis.size() != terms.front().paulis.size()) throw ValidationError("Pauli strings differ in length");
    h += t.coefficient * pauli_string_matrix(t.paulis);
  }
  return h;
}

Gate trotterize(const std::vector<PauliTerm>& terms, double tau, int steps) {
  if (steps < 1) throw ValidationError("trotterize needs at least one step");
  if (terms.empty()) throw ValidationError("trotterize needs at least one term");
  const auto dim = static_cast<Eigen::Index>(1) << terms.front().paulis.size();
  Matrix step = Matrix::Identity(dim, dim);
  for (const auto& t : terms) {
    if (t.paulis.size() != terms.front().paulis.size()) throw ValidationError("Pauli strings differ in length");
    // A Pauli string squares to I, so its exponential is cos/sin closed form.
    const double angle = t.coefficient * tau / steps;
    const Matrix factor = std::cos(angle) * Matrix::Identity(dim, dim) -
                          kI * std::sin(angle) * pauli_string_matrix(t.paulis);
    step = factor * step;
  }
  Matrix total = Matrix::Identity(dim, dim);
  for (int s = 0; s < steps; ++s) total = step * total;
  return custom_gate("trotter", std::move(total));
}

}  // namespace qtherm
