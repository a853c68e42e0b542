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

#include "qtherm/noise.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "qtherm/circuit.hpp"
#include "qtherm/errors.hpp"
#include "qtherm/simulator.hpp"

namespace qtherm {

using nlohmann::json;

double NoiseProfile::duration_ns(GateClass c) const {
  switch (c) {
    case GateClass::U1: return durations_ns.u1;
    case GateClass::U2: return durations_ns.u2;
    case GateClass::U3: return durations_ns.u3;
    case GateClass::CNOT: return durations_ns.cnot;
    case GateClass::CA: return durations_ns.ca;
    case GateClass::CCA: return durations_ns.cca;
    case GateClass::Composite: break;
  }
  throw UnregisteredComposite("composite gates have no duration; expand them first");
}

void NoiseProfile::validate() const {
  for (double d : {durations_ns.u1, durations_ns.u2, durations_ns.u3, durations_ns.cnot, durations_ns.ca,
                   durations_ns.cca}) {
    if (!(d >= 0.0) || !std::isfinite(d)) throw ValidationError("gate durations must be finite and >= 0");
  }
  if (!(mu1_us > 0.0) || !(mu2_us > 0.0)) throw ValidationError("mu1_us and mu2_us must be positive");
  if (!(sigma_us >= 0.0) || !std::isfinite(sigma_us)) throw ValidationError("sigma_us must be finite and >= 0");
}

NoiseProfile builtin_noise_profile(const std::string& name) {
  NoiseProfile p;
  p.name = name;
  if (name == "low") {
    p.mu1_us = 1800.0, p.mu2_us = 2000.0, p.sigma_us = 10.0;
  } else if (name == "medium") {
    p.mu1_us = 180.0, p.mu2_us = 200.0, p.sigma_us = 10.0;
  } else if (name == "high") {
    p.mu1_us = 50.0, p.mu2_us = 70.0, p.sigma_us = 10.0;
  } else if (name == "ideal") {
    p.mu1_us = p.mu2_us = std::numeric_limits<double>::infinity();
  } else {
    throw ValidationError("unknown noise profile '" + name + "'");
  }
  return p;
}

namespace {

const char* const kClassKeys[] = {"U1", "U2", "U3", "CNOT", "C-A", "CC-A"};

double* duration_slot(GateDurations& d, const std::string& key) {
  if (key == "U1") return &d.u1;
  if (key == "U2") return &d.u2;
  if (key == "U3") return &d.u3;
  if (key == "CNOT") return &d.cnot;
  if (key == "C-A") return &d.ca;
  if (key == "CC-A") return &d.cca;
  return nullptr;
}

}  // namespace

NoiseProfile noise_profile_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("noise profile is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ValidationError("noise profile must be a JSON object");
  NoiseProfile p;
  try {
    p.name = doc.value("name", std::string("file"));
    if (doc.contains("durations_ns")) {
      const json& d = doc.at("durations_ns");
      if (!d.is_object()) throw ValidationError("durations_ns must be an object");
      for (const auto& [key, value] : d.items()) {
        double* slot = duration_slot(p.durations_ns, key);
        if (slot == nullptr) throw ValidationError("unknown gate class '" + key + "' in durations_ns");
        *slot = value.get<double>();
      }
    }
    p.mu1_us = doc.at("mu1_us").get<double>();
    p.mu2_us = doc.at("mu2_us").get<double>();
    p.sigma_us = doc.value("sigma_us", 0.0);
    p.seed = doc.value("seed", std::uint64_t{0});
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed noise profile: ") + e.what());
  }
  p.validate();
  return p;
}

NoiseProfile load_noise_profile_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open noise profile '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return noise_profile_from_json(buf.str());
}

std::string noise_profile_to_json(const NoiseProfile& profile) {
  json d = json::object();
  GateDurations durations = profile.durations_ns;
  for (const char* key : kClassKeys) d[key] = *duration_slot(durations, key);
  json doc = {{"name", profile.name},         {"durations_ns", d},
              {"mu1_us", profile.mu1_us},     {"mu2_us", profile.mu2_us},
              {"sigma_us", profile.sigma_us}, {"seed", profile.seed}};
  return doc.dump(2);
}

double KrausChannel::completeness_error() const {
  if (operators.empty()) return std::numeric_limits<double>::infinity();
  Matrix sum = Matrix::Zero(operators.front().rows(), operators.front().cols());
  for (const auto& k : operators) sum += k.adjoint() * k;
  return (sum - Matrix::Identity(sum.rows(), sum.cols())).cwiseAbs().maxCoeff();
}

KrausChannel thermal_relaxation_channel(double t1, double t2, double t) {
  if (!(t1 > 0.0) || !(t2 > 0.0)) throw ValidationError("T1 and T2 must be positive");
  if (!(t >= 0.0)) throw ValidationError("duration must be >= 0");
  if (t2 > 2.0 * t1 * (1.0 + 1e-12)) throw ValidationError("T2 must not exceed 2*T1");

  const double gamma = -std::expm1(-t / t1);
  // Amplitude damping leaves coherences at e^{-t/(2 T1)}; dephasing supplies the rest.
  const double lambda = std::min(1.0, std::exp(-t / t2 + t / (2.0 * t1)));

  Matrix a0(2, 2), a1(2, 2);
  a0 << 1.0, 0.0, 0.0, std::sqrt(1.0 - gamma);
  a1 << 0.0, std::sqrt(gamma), 0.0, 0.0;
  const Matrix id = Matrix::Identity(2, 2);
  Matrix z(2, 2);
  z << 1.0, 0.0, 0.0, -1.0;
  const double keep = std::sqrt((1.0 + lambda) / 2.0);
  const double flip = std::sqrt((1.0 - lambda) / 2.0);

  KrausChannel ch;
  for (const Matrix* a : {&a0, &a1}) {
    ch.operators.push_back(keep * (*a));
    if (flip > 0.0) ch.operators.push_back(flip * (z * (*a)));
  }
  return ch;
}

namespace {

double draw_positive(std::normal_distribution<double>& dist, std::mt19937_64& rng) {
  for (int attempt = 0; attempt < 10000; ++attempt) {
    const double v = dist(rng);
    if (v > 0.0) return v;
  }
  throw ValidationError("relaxation-time distribution produced no positive draw");
}

}  // namespace

QubitRelaxation sample_qubit_params(const NoiseProfile& profile, std::mt19937_64& rng) {
  QubitRelaxation r;
  if (profile.sigma_us == 0.0 || !std::isfinite(profile.mu1_us) || !std::isfinite(profile.mu2_us)) {
    r.t1_us = profile.mu1_us;
    r.t2_us = profile.mu2_us;
  } else {
    std::normal_distribution<double> d1(profile.mu1_us, profile.sigma_us);
    std::normal_distribution<double> d2(profile.mu2_us, profile.sigma_us);
    r.t1_us = draw_positive(d1, rng);
    r.t2_us = draw_positive(d2, rng);
  }
  r.t2_us = std::min(r.t2_us, 2.0 * r.t1_us);
  return r;
}

QubitRelaxation sample_qubit_params(const NoiseProfile& profile, int qubit) {
  std::seed_seq seq{static_cast<std::uint32_t>(profile.seed), static_cast<std::uint32_t>(profile.seed >> 32),
                    static_cast<std::uint32_t>(qubit)};
  std::mt19937_64 rng(seq);
  return sample_qubit_params(profile, rng);
}

NoiseModel::NoiseModel(NoiseProfile profile) : profile_(std::move(profile)) { profile_.validate(); }

KrausChannel NoiseModel::channel(int logical_qubit, GateClass c) const {
  const QubitRelaxation r = qubit_params(logical_qubit);
  return thermal_relaxation_channel(r.t1_us, r.t2_us, profile_.duration_ns(c) / 1000.0);
}

DensityMatrix noisy_execute(const Circuit& circuit, const DensityMatrix& input, const NoiseProfile& profile) {
  if (input.n_qubits() != circuit.n_qubits()) throw ValidationError("input must cover every circuit qubit");
  const NoiseModel model(profile);
  ExecutionOptions opts;
  opts.noise = &model;
  return execute(circuit, input, opts).state;
}

}  // namespace qtherm
