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

#include "qtherm/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "qtherm/errors.hpp"

namespace qtherm {

double q_activation(double theta) {
  const double s = std::sin(theta), c = std::cos(theta);
  // atan2 keeps the endpoints finite where tan diverges.
  return std::atan2(s * s, c * c);
}

double p_success(double theta) { return std::pow(std::cos(theta), 4) + std::pow(std::sin(theta), 4); }

double predicted_perceptron_fidelity(double theta, int applications, double overlap_sq) {
  if (applications < 1) throw ValidationError("T must be >= 1");
  if (!(overlap_sq >= 0.0 && overlap_sq <= 1.0)) throw ValidationError("overlap_sq must lie in [0, 1]");
  return 1.0 - std::pow(1.0 - p_success(theta), applications) * (1.0 - overlap_sq);
}

double predicted_groundstate_fidelity(int n_states, int n_star, int applications) {
  if (n_star < 1 || n_star > n_states) throw ValidationError("need 1 <= N* <= N");
  if (applications < 1) throw ValidationError("T must be >= 1");
  const double j = static_cast<double>(n_states - n_star) / n_states;
  return (1.0 - std::pow(j, applications)) / n_star;
}

IterationEstimate iterations_for_epsilon(double eps, double p0) {
  if (!(eps > 0.0 && eps < 1.0)) throw ValidationError("epsilon must lie in (0, 1)");
  if (!(p0 > 0.0 && p0 <= 1.0)) throw ValidationError("p0 must lie in (0, 1]");
  IterationEstimate out;
  if (p0 == 1.0) {
    out.applications = 1;
    return out;
  }
  const double fail = 1.0 - p0;
  out.real_value = std::log(1.0 / eps) / std::log(1.0 / fail) - 1.0;
  int t = std::max(1, static_cast<int>(std::ceil(std::log(eps) / std::log(fail))));
  // Settle rounding at the boundary against the defining inequality.
  while (std::pow(fail, t) > eps) ++t;
  while (t > 1 && std::pow(fail, t - 1) <= eps) --t;
  out.applications = t;
  return out;
}

OaaDepth oaa_depth(double eps, double p) {
  if (!(eps > 0.0 && eps < 1.0)) throw ValidationError("epsilon must lie in (0, 1)");
  if (!(p > 0.0 && p < 1.0)) throw ValidationError("p must lie in (0, 1)");
  OaaDepth out;
  const double fail = 1.0 - p;
  out.real_value = (std::log(std::log(1.0 / eps)) - std::log(std::log(1.0 / fail))) / std::log(3.0);
  while (std::pow(fail, std::pow(3.0, out.k)) > eps) ++out.k;
  return out;
}

std::uint64_t oaa_gate_count(std::uint64_t q_u, std::uint64_t q_s, int k) {
  if (k < 0) throw ValidationError("k must be >= 0");
  std::uint64_t pow3 = 1;
  for (int i = 0; i < k; ++i) pow3 *= 3;
  return (q_u + q_s) * pow3 - q_s;
}

void ResourceQuery::validate() const {
  if (n < 1 || m < 1) throw ValidationError("n and m must be >= 1");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ValidationError("epsilon must lie in (0, 1)");
  if (!(p0 > 0.0 && p0 <= 1.0)) throw ValidationError("p0 must lie in (0, 1]");
  if (!(delta_gap > 0.0)) throw ValidationError("spectral gap must be positive");
  if (sparsity < 1) throw ValidationError("sparsity must be >= 1");
}

const std::vector<std::string>& resource_methods() {
  static const std::vector<std::string> methods = {"postselect",     "oaa",          "thermalise",   "pea-postselect",
                                                   "pea-thermalise", "lcu-thermalise", "lcu-oaa"};
  return methods;
}

namespace {

ResourceCell exact(double v, std::string expr) { return {v, std::move(expr), false}; }
ResourceCell scaling(std::string expr) { return {std::nullopt, "O(" + expr + ")", true}; }

}  // namespace

ResourceRow resource_row(const ResourceQuery& q, const std::string& method) {
  q.validate();
  ResourceRow row;
  row.method = method;
  if (method == "postselect") {
    row.measurements = exact(1.0 / q.p0, "1/p0");
    row.qubits = exact(q.n + q.m, "n + m");
    if (q.q_u && q.q_w) {
      row.gates = exact(static_cast<double>(*q.q_u + *q.q_w), "Q(U) + Q(W)");
    } else {
      row.gates = {std::nullopt, "Q(U_{n+m}) + Q(W_n)", false};
    }
  } else if (method == "oaa") {
    row.measurements = exact(0, "0");
    row.qubits = scaling("n + m");
    if (q.p0 >= 1.0) throw ValidationError("OAA depth needs p0 < 1");
    const OaaDepth depth = oaa_depth(q.epsilon, q.p0);
    if (q.q_u && q.q_s) {
      row.gates = exact(static_cast<double>(oaa_gate_count(*q.q_u, *q.q_s, depth.k)),
                        "(Q(U) + Q(S)) 3^k - Q(S), k = " + std::to_string(depth.k));
    } else {
      row.gates = scaling("log(eps)/log(1-p0) [m + Q(U_{n+m})]");
    }
  } else if (method == "thermalise") {
    const int t = iterations_for_epsilon(q.epsilon, q.p0).applications;
    row.measurements = exact(0, "0");
    row.qubits = exact(q.n + t * (2 * q.m - 1), "n + T(2m - 1), T = " + std::to_string(t));
    row.gates = scaling(std::to_string(t) + " [m + Q(C-U_{n+m}) + Q(W_n)]");
  } else if (method == "pea-postselect") {
    row.measurements = scaling("2^n");
    row.qubits = scaling("n + log(1/Delta) + log(1/eps)");
    row.gates = scaling("2^{n/2} Delta^-1 eps^-1 d polylog(1/eps, 1/Delta)");
  } else if (method == "pea-thermalise") {
    row.measurements = exact(0, "0");
    row.qubits = scaling("2^n polylog(1/eps, 1/Delta)");
    row.gates = scaling("2^{3n/2} Delta^-1 eps^-1 d polylog(1/eps, 1/Delta)");
  } else if (method == "lcu-thermalise") {
    row.measurements = exact(0, "0");
    row.qubits = scaling("2^{n/2} polylog(1/eps, 1/Delta)");
    row.gates = scaling("2^{n/2} Delta^-1 d polylog(1/eps, 1/Delta)");
  } else if (method == "lcu-oaa") {
    row.measurements = exact(0, "0");
    row.qubits = scaling("n + log(1/Delta) + loglog(1/eps)");
    row.gates = scaling("2^{n/2} Delta^-1 d polylog(1/eps, 1/Delta)");
  } else {
    throw ValidationError("unknown method '" + method + "'");
  }
  return row;
}

double estimate_q_angle(const DensityMatrix& rho) {
  if (rho.n_qubits() != 1) throw ValidationError("q estimate needs a single-qubit state");
  const double p1 = std::clamp(rho(1, 1).real(), 0.0, 1.0);
  return std::asin(std::sqrt(p1));
}

}  // namespace qtherm
