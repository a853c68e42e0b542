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

#include "qtherm/hamiltonians.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include <json.hpp>

#include "qtherm/errors.hpp"

namespace qtherm {
namespace {

using std::numbers::pi;

constexpr int kGramSchmidtRetries = 16;

}  // namespace

Hamiltonian::Hamiltonian(std::string name, Matrix matrix, double tau, double herm_tol)
    : name_(std::move(name)), tau_(tau) {
  const auto n = static_cast<std::uint64_t>(matrix.rows());
  if (matrix.rows() != matrix.cols() || n < 2 || !std::has_single_bit(n)) {
    throw ValidationError("Hamiltonian must be a 2^n x 2^n matrix");
  }
  if ((matrix - matrix.adjoint()).cwiseAbs().maxCoeff() > herm_tol) {
    throw ValidationError("Hamiltonian '" + name_ + "' is not Hermitian");
  }
  n_qubits_ = std::countr_zero(n);
  matrix_ = 0.5 * (matrix + matrix.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(matrix_);
  eigenvalues_ = solver.eigenvalues();
  eigenvectors_ = solver.eigenvectors();
}

PureState Hamiltonian::eigenstate(std::size_t i) const {
  if (i >= dim()) throw ValidationError("eigenstate index out of range");
  Vector v = eigenvectors_.col(static_cast<Eigen::Index>(i));
  return PureState(n_qubits_, v / v.norm());
}

Hamiltonian builtin_hamiltonian(const std::string& name) {
  if (name == "h1") {
    Matrix h = Matrix::Zero(2, 2);
    h(1, 1) = -3.0 * pi / 2.0;
    return Hamiltonian("h1", std::move(h));
  }
  if (name == "h2") {
    Eigen::Matrix4d a;
    a << -0.08609, -0.22467, -0.41822, -0.10511,  //
        -0.22467, -1.40667, -0.16506, -0.67003,   //
        -0.41822, -0.16506, -3.06202, 0.09996,    //
        -0.10511, -0.67003, 0.09996, 1.41319;
    return Hamiltonian("h2", a.cast<cplx>());
  }
  throw ValidationError("unknown built-in Hamiltonian '" + name + "'");
}

Hamiltonian generate_h2_style(int n_qubits, double eps_perturbation, std::uint64_t seed) {
  if (n_qubits < 1 || n_qubits > 3) throw ValidationError("generate_h2_style supports 1..3 qubits");
  if (eps_perturbation < 0.0) throw ValidationError("perturbation must be non-negative");
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 0.5);

  for (int attempt = 0; attempt < kGramSchmidtRetries; ++attempt) {
    Eigen::MatrixXd v = Eigen::MatrixXd::Identity(dim, dim);
    for (Eigen::Index c = 0; c < dim; ++c) {
      for (Eigen::Index r = 0; r < dim; ++r) v(r, c) += eps_perturbation * normal(rng);
    }
    bool breakdown = false;
    for (Eigen::Index c = 0; c < dim && !breakdown; ++c) {
      for (Eigen::Index p = 0; p < c; ++p) v.col(c) -= v.col(p).dot(v.col(c)) * v.col(p);
      const double norm = v.col(c).norm();
      if (norm < 1e-8) {
        breakdown = true;
      } else {
        v.col(c) /= norm;
      }
    }
    if (breakdown) continue;

    // exp(-iH) = V D V^T with D_k = e^{i k pi/2}; the principal logarithm
    // maps phase k pi/2 (wrapped to (-pi, pi]) to energy -phase.
    Eigen::VectorXd energies(dim);
    for (Eigen::Index k = 0; k < dim; ++k) {
      static constexpr double kPrincipal[4] = {0.0, pi / 2.0, pi, -pi / 2.0};
      energies(k) = -kPrincipal[k % 4];
    }
    const Eigen::MatrixXd h = v * energies.asDiagonal() * v.transpose();
    return Hamiltonian("h2-style(seed=" + std::to_string(seed) + ")", h.cast<cplx>());
  }
  throw ValidationError("Gram-Schmidt broke down on every redraw");
}

PhaseTable shifted_phases(const Hamiltonian& h, int precision_bits) {
  if (precision_bits < 1 || precision_bits > 10) throw ValidationError("precision must be 1..10 bits");
  PhaseTable table;
  const double grid = std::ldexp(1.0, precision_bits);
  const auto modulus = static_cast<std::uint64_t>(grid);
  table.exactly_representable = true;
  for (Eigen::Index i = 0; i < h.eigenvalues().size(); ++i) {
    double theta = (h.ground_energy() - h.eigenvalues()(i)) * h.tau() / (2.0 * pi);
    theta -= std::floor(theta);
    if (theta >= 1.0) theta = 0.0;
    const double scaled = theta * grid;
    const double nearest = std::nearbyint(scaled);
    if (std::abs(scaled - nearest) > 1e-6 * grid) table.exactly_representable = false;
    const auto pattern = static_cast<std::uint64_t>(nearest) % modulus;
    table.phases.push_back(theta);
    table.patterns.push_back(pattern);
    if (pattern == 0) ++table.n_star;
  }
  return table;
}

Hamiltonian hamiltonian_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("Hamiltonian file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("matrix") || !doc["matrix"].is_array()) {
    throw ValidationError("Hamiltonian file needs a 'matrix' array");
  }
  const auto& rows = doc["matrix"];
  const auto dim = static_cast<Eigen::Index>(rows.size());
  Matrix m(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    const auto& row = rows[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != dim) {
      throw ValidationError("Hamiltonian matrix must be square");
    }
    for (Eigen::Index c = 0; c < dim; ++c) {
      const auto& entry = row[static_cast<std::size_t>(c)];
      if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() || !entry[1].is_number()) {
        throw ValidationError("matrix entries must be [re, im] pairs");
      }
      m(r, c) = cplx(entry[0].get<double>(), entry[1].get<double>());
    }
  }
  const std::string name = doc.value("name", std::string("file"));
  const double tau = doc.value("tau", 1.0);
  return Hamiltonian(name, std::move(m), tau, 1e-8);
}

Hamiltonian load_hamiltonian_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open Hamiltonian file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return hamiltonian_from_json(buf.str());
}

}  // namespace qtherm
