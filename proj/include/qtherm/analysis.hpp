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
#include <optional>
#include <string>
#include <vector>

#include "qtherm/qstate.hpp"

namespace qtherm {

/// arctan(tan^2 theta), extended continuously to pi/2 at theta = +-pi/2.
double q_activation(double theta);

/// cos^4 theta + sin^4 theta.
double p_success(double theta);

/// 1 - (1 - p(theta))^T (1 - overlap_sq).
double predicted_perceptron_fidelity(double theta, int applications, double overlap_sq);

/// (1/N*) (1 - ((N - N*)/N)^T).
double predicted_groundstate_fidelity(int n_states, int n_star, int applications);

struct IterationEstimate {
  /// log(1/eps) / log(1/(1-p0)) - 1: extra applications beyond the first.
  double real_value = 0.0;
  /// Smallest T with (1-p0)^T <= eps, counting every application.
  int applications = 0;
};
IterationEstimate iterations_for_epsilon(double eps, double p0);

struct OaaDepth {
  /// Smallest k >= 0 with (1-p)^{3^k} <= eps.
  int k = 0;
  /// log3(log(eps) / log(1-p)).
  double real_value = 0.0;
};
OaaDepth oaa_depth(double eps, double p);

/// (Q_U + Q_S) 3^k - Q_S.
std::uint64_t oaa_gate_count(std::uint64_t q_u, std::uint64_t q_s, int k);

struct ResourceQuery {
  int n = 1;
  int m = 1;
  double epsilon = 1e-3;
  double p0 = 0.5;
  double delta_gap = 0.1;
  int sparsity = 1;
  std::optional<std::uint64_t> q_u;
  std::optional<std::uint64_t> q_w;
  std::optional<std::uint64_t> q_s;

  void validate() const;
};

/// A table cell: numeric when an exact formula exists, otherwise a scaling
/// expression with unit leading constant.
struct ResourceCell {
  std::optional<double> value;
  std::string expression;
  bool asymptotic = false;
};

struct ResourceRow {
  std::string method;
  ResourceCell measurements;
  ResourceCell qubits;
  ResourceCell gates;
};

const std::vector<std::string>& resource_methods();
ResourceRow resource_row(const ResourceQuery& query, const std::string& method);

/// arcsin(sqrt(<1|rho|1>)) for a single-qubit state.
double estimate_q_angle(const DensityMatrix& rho);

}  // namespace qtherm
