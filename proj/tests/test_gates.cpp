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

#include <cmath>
#include <numbers>

#include "oracle.hpp"
#include "qtherm/circuit.hpp"
#include "qtherm/errors.hpp"
#include "qtherm/gates.hpp"
#include "qtherm/hamiltonians.hpp"

using namespace qtherm;
using std::numbers::pi;

TEST_CASE("library gates are unitary") {
  for (const char* name : {"I", "X", "Y", "Z", "H", "T", "Tdg", "CNOT", "CCX", "SWAP"}) {
    CHECK(unitarity_error(standard_gate(name).matrix()) < 1e-10);
  }
  for (double a : {0.0, 0.3, -1.7, pi}) {
    CHECK(unitarity_error(standard_gate("Ry", {a}).matrix()) < 1e-10);
    CHECK(unitarity_error(standard_gate("Rz", {a}).matrix()) < 1e-10);
    CHECK(unitarity_error(standard_gate("Phase", {a}).matrix()) < 1e-10);
  }
  CHECK_THROWS_AS(standard_gate("Q"), ValidationError);
  Matrix bad = Matrix::Identity(2, 2) * 2.0;
  CHECK_THROWS_AS(custom_gate("bad", bad), ValidationError);
  CHECK_THROWS_AS(custom_gate("bad", Matrix::Identity(3, 3)), ValidationError);
}

TEST_CASE("standard gate examples") {
  PureState s(1);
  apply_gate(s, standard_gate("Ry", {pi / 2}).matrix(), std::vector<int>{0});
  CHECK(std::abs(s.amplitude(0) - 1.0 / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(s.amplitude(1) - 1.0 / std::sqrt(2.0)) < 1e-15);

  for (int m : {1, 2, 3}) {
    const Matrix sm = standard_gate("S(pi/3)", {static_cast<double>(m)}).matrix();
    CHECK(std::abs(sm(0, 0) - std::exp(cplx(0, pi / 3))) < 1e-15);
    for (Eigen::Index i = 1; i < sm.rows(); ++i) CHECK(std::abs(sm(i, i) - 1.0) < 1e-15);
    CHECK(oracle::max_abs(sm - phase_shift_on_zero(m, pi / 3).matrix()) < 1e-15);
  }
  for (double t : {0.2, 1.1}) {
    const Matrix prod = standard_gate("Ry", {2 * t}).matrix() * standard_gate("Ry", {-2 * t}).matrix();
    CHECK(oracle::max_abs(prod - Matrix::Identity(2, 2)) < 1e-15);
  }
  // Ry(pi) is -iY.
  Matrix minus_iy(2, 2);
  minus_iy << 0, -1, 1, 0;
  CHECK(oracle::max_abs(standard_gate("Ry", {pi}).matrix() - minus_iy) < 1e-15);
}

TEST_CASE("QFT") {
  CHECK(oracle::max_abs(inverse_qft(1).matrix() - standard_gate("H").matrix()) < 1e-15);
  for (int m = 1; m <= 6; ++m) {
    CHECK(oracle::max_abs(inverse_qft(m).matrix() * qft(m).matrix() - Matrix::Identity(1 << m, 1 << m)) < 1e-10);
  }
  // (1/2) sum_k e^{2 pi i (3/4) k}|k> -> |3>, binary 0.11.
  Vector v(4);
  for (int k = 0; k < 4; ++k) v(k) = std::exp(cplx(0, 2 * pi * 0.75 * k)) / 2.0;
  const Vector out = inverse_qft(2).matrix() * v;
  CHECK(std::norm(out(3)) == doctest::Approx(1.0).epsilon(1e-12));

  // Every grid phase on up to 5 bits.
  for (int m = 1; m <= 5; ++m) {
    const int dim = 1 << m;
    const Matrix iq = inverse_qft(m).matrix();
    for (int j = 0; j < dim; ++j) {
      Vector phase(dim);
      for (int k = 0; k < dim; ++k) phase(k) = std::exp(cplx(0, 2 * pi * j * k / dim)) / std::sqrt(dim);
      CHECK(std::abs(std::norm((iq * phase)(j)) - 1.0) < 1e-10);
    }
  }
  CHECK_THROWS_AS(qft(0), ValidationError);
  CHECK_THROWS_AS(qft(11), ValidationError);
}

TEST_CASE("QFT gate decomposition reproduces the matrix") {
  for (int m = 2; m <= 4; ++m) {
    for (const Gate& g : {qft(m), inverse_qft(m)}) {
      std::vector<int> q(static_cast<std::size_t>(m));
      for (int i = 0; i < m; ++i) q[static_cast<std::size_t>(i)] = i;
      Circuit c(m);
      for (const auto& op : expand_to_primitives(Operation{g, q, {}})) c.add(op);
      CHECK(oracle::max_abs(c.unitary() - g.matrix()) < 1e-12);
    }
  }
}

TEST_CASE("Hamiltonian evolution") {
  CHECK(oracle::max_abs(hamiltonian_evolution(Matrix::Zero(2, 2), 1.0).matrix() - Matrix::Identity(2, 2)) < 1e-15);
  const Matrix a1 = hamiltonian_evolution(builtin_hamiltonian("h1"), 1.0).matrix();
  CHECK(std::abs(a1(0, 0) - 1.0) < 1e-12);
  CHECK(std::abs(a1(1, 1) - cplx(0, -1)) < 1e-12);
  CHECK(std::abs(a1(0, 1)) < 1e-12);

  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 5; ++trial) {
    const Matrix u = oracle::random_density(2, rng) * 4.0;  // Hermitian
    for (double tau : {0.3, 1.0, 2.5}) {
      const Matrix g = hamiltonian_evolution(u, tau).matrix();
      CHECK(unitarity_error(g) < 1e-10);
      CHECK(oracle::max_abs(g - oracle::expm_hermitian(u, tau)) < 1e-10);
    }
  }
  Matrix nonherm = Matrix::Zero(2, 2);
  nonherm(0, 1) = 1.0;
  CHECK_THROWS_AS(hamiltonian_evolution(nonherm, 1.0), ValidationError);
}

TEST_CASE("controlled powers square the matrix") {
  Matrix a(2, 2);
  a << 1, 0, 0, cplx(0, -1);
  const Gate ga = custom_gate("A", a);
  const Operation op = controlled_power(ga, 1, {0}, {1, true});
  CHECK(std::abs(op.gate.matrix()(1, 1) + 1.0) < 1e-15);
  CHECK(op_class(op) == GateClass::CA);
  CHECK(oracle::max_abs(controlled_power(ga, 0, {0}, {1, true}).gate.matrix() - a) < 1e-15);

  // Squared evolution doubles the eigenphases.
  const Hamiltonian h2 = builtin_hamiltonian("h2");
  const Gate a2 = hamiltonian_evolution(h2, 1.0);
  const Matrix sq = gate_power_of_two(a2, 1).matrix();
  CHECK(oracle::max_abs(sq - hamiltonian_evolution(h2, 2.0).matrix()) < 1e-12);
  for (std::size_t i = 0; i < h2.dim(); ++i) {
    const Vector v = h2.eigenstate(i).amplitudes();
    const cplx lam = v.dot(sq * v);
    CHECK(std::abs(lam - std::exp(cplx(0, -2.0 * h2.eigenvalues()(static_cast<Eigen::Index>(i))))) < 1e-10);
  }
}

TEST_CASE("Pauli strings order the highest qubit first") {
  const Matrix zi = pauli_string_matrix("ZI");
  // Z acts on qubit 1: index 2 (qubit 1 set) gets -1.
  CHECK(std::abs(zi(2, 2) + 1.0) < 1e-15);
  CHECK(std::abs(zi(1, 1) - 1.0) < 1e-15);
  CHECK_THROWS_AS(pauli_string_matrix("ZQ"), ValidationError);
}

TEST_CASE("trotterisation") {
  const std::vector<PauliTerm> single{{0.7, "XY"}};
  CHECK(oracle::max_abs(trotterize(single, 0.9, 1).matrix() -
                        hamiltonian_evolution(pauli_sum_matrix(single), 0.9).matrix()) < 1e-12);

  const std::vector<PauliTerm> commuting{{0.4, "ZI"}, {-1.3, "IZ"}};
  CHECK(oracle::max_abs(trotterize(commuting, 1.0, 1).matrix() -
                        hamiltonian_evolution(pauli_sum_matrix(commuting), 1.0).matrix()) < 1e-12);

  const std::vector<PauliTerm> xz{{1.0, "X"}, {1.0, "Z"}};
  const Matrix exact = oracle::expm_hermitian(pauli_sum_matrix(xz), 0.1);
  const double e1 = (trotterize(xz, 0.1, 1).matrix() - exact).operatorNorm();
  const double e10 = (trotterize(xz, 0.1, 10).matrix() - exact).operatorNorm();
  CHECK(e1 / e10 == doctest::Approx(10.0).epsilon(0.05));

  std::mt19937_64 rng(17);
  const char labels[] = {'I', 'X', 'Y', 'Z'};
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<PauliTerm> terms;
    for (int t = 0; t < 4; ++t) {
      std::string p{labels[rng() % 4], labels[rng() % 4]};
      terms.push_back({std::normal_distribution<double>(0, 1)(rng), p});
    }
    const Matrix ex = oracle::expm_hermitian(pauli_sum_matrix(terms), 0.5);
    double prev = 1e9;
    for (int steps : {1, 2, 4, 8, 16}) {
      const double err = oracle::max_abs(trotterize(terms, 0.5, steps).matrix() - ex);
      CHECK(err <= prev + 1e-14);
      prev = err;
    }
  }
  CHECK_THROWS_AS(trotterize(xz, 0.1, 0), ValidationError);
}

TEST_CASE("gate adjoints") {
  CHECK(standard_gate("T").adjoint().label() == "Tdg");
  const Gate ry = standard_gate("Ry", {0.4});
  CHECK(oracle::max_abs(ry.adjoint().matrix() - ry.matrix().adjoint()) < 1e-15);
  CHECK(ry.adjoint().params().at(0) == doctest::Approx(-0.4));
  const Gate s = phase_shift_on_zero(2, pi / 3);
  CHECK(oracle::max_abs(s.adjoint().matrix() - s.matrix().adjoint()) < 1e-15);
  CHECK(qft(3).adjoint().label() == inverse_qft(3).label());
}
