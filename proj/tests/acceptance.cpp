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

// One PASS/FAIL line per acceptance criterion. Exits non-zero if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <unsupported/Eigen/KroneckerProduct>

#include "qtherm/analysis.hpp"
#include "qtherm/circuits.hpp"
#include "qtherm/experiments.hpp"
#include "qtherm/noise.hpp"
#include "qtherm/simulator.hpp"

using namespace qtherm;
using std::numbers::pi;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

Outcome perceptron_closed_form() {
  Outcome o;
  ThermaliseConfig cfg;
  cfg.applications = 5;
  double worst = 0.0;
  for (double theta : {pi / 8, pi / 4, 3 * pi / 8}) {
    const auto r = simulate_perceptron_thermalise(theta, cfg, PureState(1));
    const double overlap = std::pow(std::cos(q_activation(theta)), 2);
    for (int t = 1; t <= 5; ++t) {
      const double want = 1 - std::pow(1 - p_success(theta), t) * (1 - overlap);
      worst = std::max(worst, std::abs(r.fidelity[static_cast<std::size_t>(t - 1)] - want));
    }
  }
  o.require(worst < 1e-9, fmt("max error %.3g", worst));
  if (o.pass) o.detail = fmt("max error %.3g", worst);
  return o;
}

Outcome success_probability_grid() {
  Outcome o;
  double worst = 0.0;
  const std::vector<int> anc{1};
  for (int i = 0; i < 20; ++i) {
    const double theta = -pi / 2 + pi * (i + 0.5) / 20.0;
    const PureState out = execute_pure(build_perceptron_unit(theta).circuit, PureState(2));
    const double c = std::cos(theta), s = std::sin(theta);
    worst = std::max(worst, std::abs(project(out, anc, 0).probability - (c * c * c * c + s * s * s * s)));
  }
  o.require(worst < 1e-10, fmt("max error %.3g", worst));
  if (o.pass) o.detail = fmt("max error %.3g", worst);
  return o;
}

Outcome groundstate_h1() {
  Outcome o;
  ThermaliseConfig cfg;
  cfg.applications = 5;
  cfg.precision = 2;
  const auto r = simulate_groundstate_thermalise(builtin_hamiltonian("h1"), cfg);
  double worst = 0.0;
  for (int t = 1; t <= 5; ++t) {
    worst = std::max(worst, std::abs(r.fidelity[static_cast<std::size_t>(t - 1)] - (1 - std::pow(0.5, t))));
  }
  o.require(worst < 1e-9, fmt("max error %.3g", worst));
  if (o.pass) o.detail = fmt("max error %.3g", worst);
  return o;
}

Outcome groundstate_h2() {
  Outcome o;
  const Hamiltonian h2 = builtin_hamiltonian("h2");
  ThermaliseConfig cfg;
  cfg.applications = 4;
  cfg.precision = 2;
  const auto exact = simulate_groundstate_thermalise(h2, cfg);
  cfg.scrambling = ScramblingMode::Hadamard;
  const auto had = simulate_groundstate_thermalise(h2, cfg);
  double worst = 0.0, excess = 0.0;
  bool monotone = true;
  for (int t = 1; t <= 4; ++t) {
    const auto i = static_cast<std::size_t>(t - 1);
    worst = std::max(worst, std::abs(exact.fidelity[i] - (1 - std::pow(0.75, t))));
    excess = std::max(excess, had.fidelity[i] - exact.fidelity[i]);
    if (i > 0 && had.fidelity[i] < had.fidelity[i - 1]) monotone = false;
  }
  o.require(worst < 1e-9, fmt("exact-mode max error %.3g", worst));
  o.require(excess <= 0.0, fmt("hadamard exceeds exact by up to %.4f", excess));
  o.require(monotone, "hadamard series not monotone");
  if (o.pass) o.detail = fmt("exact error %.3g, hadamard-exact max %.4f", worst, excess);
  return o;
}

Outcome precision_cap() {
  Outcome o;
  const Hamiltonian h1 = builtin_hamiltonian("h1");
  o.require(shifted_phases(h1, 1).n_star == 2, "N* is not 2 at m = 1");
  ThermaliseConfig cfg;
  cfg.applications = 5;
  cfg.precision = 1;
  const auto r = simulate_groundstate_thermalise(h1, cfg);
  double worst = 0.0;
  std::string series;
  for (double f : r.fidelity) {
    worst = std::max(worst, std::abs(f - 0.5));
    series += fmt("%.6f ", f);
  }
  o.require(worst < 1e-9, fmt("max deviation from 0.5 is %.4g", worst));
  o.detail += "; series " + series;
  return o;
}

Outcome amplification() {
  Outcome o;
  double worst = 0.0;
  for (double p0 : {0.5, 0.75}) {
    for (int k = 0; k <= 2; ++k) {
      const double want = 1 - std::pow(1 - p0, std::pow(3, k));
      worst = std::max(worst, std::abs(oaa_success_probability(build_two_branch_unit(p0), k) - want));
    }
  }
  o.require(worst < 1e-9, fmt("success max error %.3g", worst));
  Circuit s(1);
  s.add(phase_shift_on_zero(1, pi / 3), {0});
  const std::uint64_t qs = count_gates(s).total;
  for (const PostSelectUnit& u : {build_two_branch_unit(0.5), build_perceptron_unit(pi / 8)}) {
    const std::uint64_t qu = count_gates(u.circuit).total;
    for (int k = 0; k <= 3; ++k) {
      const std::uint64_t counted = count_gates(build_oaa(u, k).circuit).total;
      o.require(counted == oaa_gate_count(qu, qs, k),
                fmt("k=%g: counted %g, formula %g", k, static_cast<double>(counted),
                    static_cast<double>(oaa_gate_count(qu, qs, k))));
    }
  }
  if (o.pass) o.detail = fmt("success max error %.3g, counts exact for k<=3", worst);
  return o;
}

Outcome rus_cost() {
  Outcome o;
  const PostSelectUnit u = build_two_branch_unit(0.5);
  const int runs = 10000;
  double sum = 0.0;
  for (int s = 0; s < runs; ++s) {
    std::mt19937_64 rng(static_cast<std::uint64_t>(s));
    sum += run_rus(u, PureState(1), rng, 10000).trials_used;
  }
  const double mean = sum / runs;
  const double sigma = std::sqrt((1 - 0.5) / (0.5 * 0.5) / runs);
  o.require(std::abs(mean - 2.0) < 3 * sigma, "mean outside 3 sigma");
  o.detail += (o.detail.empty() ? "" : ": ") + fmt("mean %.4f, 3 sigma %.4f", mean, 3 * sigma);
  return o;
}

Outcome scrambling() {
  Outcome o;
  for (int n = 2; n <= 6; ++n) {
    const ScrambleStudy s = scramble_study(n, 1000, 1);
    const double z = (s.hadamard.mean - s.inverse_dimension) / s.hadamard.stderr_mean;
    o.require(std::abs(z) < 3.0, fmt("n=%g: mean %.5f is %.2f sigma from 1/2^n", n, s.hadamard.mean, z));
    o.require(std::abs(s.welch_z) < 3.0, fmt("n=%g: H and X variants differ, Welch z %.2f", n, s.welch_z));
    if (o.pass) o.detail += fmt("n=%g z=%.2f welch=%.2f ", n, z, s.welch_z);
  }
  return o;
}

Outcome noise_sanity() {
  Outcome o;
  const Hamiltonian h1 = builtin_hamiltonian("h1");
  ThermaliseConfig cfg;
  cfg.applications = 3;
  const auto clean = simulate_groundstate_thermalise(h1, cfg);
  const NoiseProfile ideal = builtin_noise_profile("ideal");
  const auto same = simulate_groundstate_thermalise(h1, cfg, &ideal);
  double diff = 0.0;
  for (std::size_t t = 0; t < 3; ++t) diff = std::max(diff, std::abs(same.fidelity[t] - clean.fidelity[t]));
  diff = std::max(diff, max_abs(same.target_state.entries() - clean.target_state.entries()));
  const auto pclean = simulate_perceptron_thermalise(pi / 4, cfg, PureState(1));
  const auto pideal = simulate_perceptron_thermalise(pi / 4, cfg, PureState(1), &ideal);
  diff = std::max(diff, max_abs(pclean.target_state.entries() - pideal.target_state.entries()));
  o.require(diff < 1e-12, fmt("ideal profile deviates by %.3g", diff));

  double f[3];
  const char* names[3] = {"low", "medium", "high"};
  for (int i = 0; i < 3; ++i) {
    const NoiseProfile p = builtin_noise_profile(names[i]);
    f[i] = simulate_groundstate_thermalise(h1, cfg, &p).fidelity.back();
  }
  o.require(f[0] > f[1] && f[1] > f[2], fmt("T=3 fidelities %.5f %.5f %.5f", f[0], f[1], f[2]));

  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  double semigroup = 0.0;
  for (int i = 0; i < 10; ++i) {
    Matrix a(2, 2);
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) {
        const double re = g(rng);
        const double im = g(rng);
        a(r, c) = cplx(re, im);
      }
    }
    Matrix rho = a * a.adjoint();
    rho /= rho.trace();
    const double t1 = 1.0 + i, t2 = 0.5 + i, s = 0.3 * (i + 1), u = 0.9;
    const std::vector<int> q{0};
    DensityMatrix two(1, rho), one(1, rho);
    apply_kraus(two, thermal_relaxation_channel(t1, t2, s).operators, q);
    apply_kraus(two, thermal_relaxation_channel(t1, t2, u).operators, q);
    apply_kraus(one, thermal_relaxation_channel(t1, t2, s + u).operators, q);
    semigroup = std::max(semigroup, max_abs(two.entries() - one.entries()));
  }
  o.require(semigroup < 1e-10, fmt("semigroup error %.3g", semigroup));
  if (o.pass) {
    o.detail = fmt("ideal dev %.3g, T=3 low/med/high %.4f/%.4f/", diff, f[0], f[1]) +
               fmt("%.4f, semigroup %.3g", f[2], semigroup);
  }
  return o;
}

Outcome oracle_equivalence() {
  Outcome o;
  double worst = 0.0;
  std::mt19937_64 rng(10);
  std::normal_distribution<double> g;
  for (int t = 1; t <= 3; ++t) {
    ThermaliseConfig cfg;
    cfg.applications = t;
    const Hamiltonian h1 = builtin_hamiltonian("h1");
    const auto a = simulate_groundstate_thermalise(h1, cfg, nullptr, true);
    const auto b = simulate_groundstate_thermalise(h1, cfg, nullptr, false);
    worst = std::max(worst, max_abs(a.target_state.entries() - b.target_state.entries()));
    Vector v(2);
    for (int i = 0; i < 2; ++i) {
      const double re = g(rng);
      const double im = g(rng);
      v(i) = cplx(re, im);
    }
    const PureState psi(1, v / v.norm());
    const auto c = simulate_perceptron_thermalise(0.6, cfg, psi, nullptr, true);
    const auto d = simulate_perceptron_thermalise(0.6, cfg, psi, nullptr, false);
    worst = std::max(worst, max_abs(c.target_state.entries() - d.target_state.entries()));
  }
  o.require(worst < 1e-12, fmt("max entry difference %.3g", worst));
  if (o.pass) o.detail = fmt("max entry difference %.3g", worst);
  return o;
}

Outcome iteration_formulas() {
  Outcome o;
  const IterationEstimate it = iterations_for_epsilon(1e-3, 0.5);
  const OaaDepth d = oaa_depth(1e-3, 0.5);
  o.require(std::abs(it.real_value - 8.97) < 0.005, fmt("iterations real value %.4f", it.real_value));
  o.require(d.k == 3, fmt("depth k = %g", d.k));
  for (double eps : {0.5, 1e-1, 1e-3, 1e-6}) {
    for (double p : {0.1, 0.25, 0.5, 0.75, 0.9}) {
      const int t = iterations_for_epsilon(eps, p).applications;
      o.require(std::pow(1 - p, t) <= eps && eps < std::pow(1 - p, t - 1),
                fmt("T inequality fails at eps=%g p=%g", eps, p));
      const int k = oaa_depth(eps, p).k;
      o.require(std::pow(1 - p, std::pow(3, k)) <= eps && (k == 0 || eps < std::pow(1 - p, std::pow(3, k - 1))),
                fmt("k inequality fails at eps=%g p=%g", eps, p));
    }
  }
  if (o.pass) o.detail = fmt("real %.4f, applications %g, k %g", it.real_value, it.applications, d.k);
  return o;
}

Outcome h2_provenance() {
  Outcome o;
  Eigen::Matrix4d printed;
  printed << -0.08609, -0.22467, -0.41822, -0.10511,  //
      -0.22467, -1.40667, -0.16506, -0.67003,         //
      -0.41822, -0.16506, -3.06202, 0.09996,          //
      -0.10511, -0.67003, 0.09996, 1.41319;
  const Hamiltonian h2 = builtin_hamiltonian("h2");
  const double herm = max_abs(h2.matrix() - h2.matrix().adjoint());
  const double stored = max_abs(h2.matrix() - printed.cast<cplx>());
  const double tr = h2.matrix().trace().real();
  o.require(herm < 1e-10, fmt("hermiticity error %.3g", herm));
  o.require(stored == 0.0, fmt("stored matrix differs from the printed one by %.3g", stored));
  o.require(std::abs(tr + pi) < 1e-4, fmt("trace %.6f", tr));
  double worst = 0.0;
  for (Eigen::Index i = 0; i < 4; ++i) {
    double best = 10.0;
    for (double e : {0.0, -pi / 2, -pi, pi / 2}) best = std::min(best, std::abs(h2.eigenvalues()(i) - e));
    worst = std::max(worst, best);
  }
  o.require(worst < 1e-3, fmt("eigenvalue error %.3g", worst));
  if (o.pass) o.detail = fmt("trace %.6f, eigenvalue error %.3g", tr, worst);
  return o;
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "perceptron closed form", 5.0, perceptron_closed_form},
      {2, "perceptron success probability", 1.0, success_probability_grid},
      {3, "groundstate H1", 10.0, groundstate_h1},
      {4, "groundstate H2 and hadamard scrambling", 60.0, groundstate_h2},
      {5, "precision cap m=1 on H1", 0.0, precision_cap},
      {6, "fixed-point amplification", 0.0, amplification},
      {7, "repeat-until-success cost", 0.0, rus_cost},
      {8, "scrambling Monte Carlo", 30.0, scrambling},
      {9, "noise sanity", 0.0, noise_sanity},
      {10, "eager trace oracle equivalence", 0.0, oracle_equivalence},
      {11, "iteration and depth formulas", 0.0, iteration_formulas},
      {12, "H2 provenance", 0.0, h2_provenance},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_s > 0.0 && secs >= c.budget_s) o.require(false, fmt("runtime %.2f s over %.0f s budget", secs, c.budget_s));
    if (!o.pass) ++failures;
    std::printf("%s criterion %d: %s (%s) [%.3f s]\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
