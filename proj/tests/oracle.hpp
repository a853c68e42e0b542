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

// Slow reference implementations used to cross-check the kernels.

#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "qtherm/qstate.hpp"

namespace oracle {

using qtherm::cplx;
using qtherm::Matrix;
using qtherm::Vector;

inline int bit(std::uint64_t x, int q) { return static_cast<int>((x >> q) & 1U); }

// Full 2^n operator of a controlled gate, element by element.
inline Matrix full_operator(int n, const Matrix& g, const std::vector<int>& targets,
                            const std::vector<qtherm::Control>& controls = {}) {
  const std::uint64_t dim = std::uint64_t{1} << n;
  Matrix u = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::uint64_t col = 0; col < dim; ++col) {
    bool fire = true;
    for (const auto& c : controls) fire = fire && (bit(col, c.qubit) == (c.on_one ? 1 : 0));
    if (!fire) {
      u(static_cast<Eigen::Index>(col), static_cast<Eigen::Index>(col)) = 1.0;
      continue;
    }
    std::uint64_t in = 0;
    for (std::size_t j = 0; j < targets.size(); ++j) in |= static_cast<std::uint64_t>(bit(col, targets[j])) << j;
    for (std::uint64_t out = 0; out < (std::uint64_t{1} << targets.size()); ++out) {
      std::uint64_t row = col;
      for (std::size_t j = 0; j < targets.size(); ++j) {
        row &= ~(std::uint64_t{1} << targets[j]);
        row |= static_cast<std::uint64_t>(bit(out, static_cast<int>(j))) << targets[j];
      }
      u(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) +=
          g(static_cast<Eigen::Index>(out), static_cast<Eigen::Index>(in));
    }
  }
  return u;
}

// Reduced matrix by explicit index sums.
inline Matrix partial_trace(const Matrix& rho, int n, const std::vector<int>& drop) {
  std::vector<int> keep;
  for (int q = 0; q < n; ++q) {
    if (std::find(drop.begin(), drop.end(), q) == drop.end()) keep.push_back(q);
  }
  const std::uint64_t dk = std::uint64_t{1} << keep.size();
  const std::uint64_t dd = std::uint64_t{1} << drop.size();
  auto compose = [&](std::uint64_t k, std::uint64_t d) {
    std::uint64_t idx = 0;
    for (std::size_t j = 0; j < keep.size(); ++j) idx |= static_cast<std::uint64_t>(bit(k, static_cast<int>(j))) << keep[j];
    for (std::size_t j = 0; j < drop.size(); ++j) idx |= static_cast<std::uint64_t>(bit(d, static_cast<int>(j))) << drop[j];
    return static_cast<Eigen::Index>(idx);
  };
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(dk), static_cast<Eigen::Index>(dk));
  for (std::uint64_t r = 0; r < dk; ++r) {
    for (std::uint64_t c = 0; c < dk; ++c) {
      for (std::uint64_t d = 0; d < dd; ++d) {
        out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) += rho(compose(r, d), compose(c, d));
      }
    }
  }
  return out;
}

inline Matrix expm_hermitian(const Matrix& h, double tau) {
  const Matrix a = cplx(0.0, -tau) * h;
  return a.exp();
}

inline Vector random_state(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vector v(Eigen::Index{1} << n);
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double re = g(rng);
    const double im = g(rng);
    v(i) = cplx(re, im);
  }
  return v / v.norm();
}

inline Matrix random_density(int n, std::mt19937_64& rng) {
  Matrix a(Eigen::Index{1} << n, Eigen::Index{1} << n);
  std::normal_distribution<double> g;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      const double re = g(rng);
      const double im = g(rng);
      a(i, j) = cplx(re, im);
    }
  }
  Matrix rho = a * a.adjoint();
  return rho / rho.trace();
}

inline Matrix random_unitary(int n, std::mt19937_64& rng) {
  Matrix a(Eigen::Index{1} << n, Eigen::Index{1} << n);
  std::normal_distribution<double> g;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      const double re = g(rng);
      const double im = g(rng);
      a(i, j) = cplx(re, im);
    }
  }
  Eigen::HouseholderQR<Matrix> qr(a);
  return qr.householderQ();
}

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace oracle
