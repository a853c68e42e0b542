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

#include "qtherm/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <mutex>
#include <thread>

#include <unsupported/Eigen/KroneckerProduct>

#include "qtherm/errors.hpp"

namespace qtherm {

using nlohmann::json;
using std::numbers::pi;

namespace {

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> read_optional(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& field) {
  double v = 0.0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
    throw ValidationError("bad number '" + field + "' in CSV");
  }
  return v;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

json gate_count_json(const GateCountReport& r) {
  return {{"single_qubit", r.count.singles}, {"cnot", r.count.cnots}, {"total", r.count.total}, {"rules", r.rules}};
}

json count_or_note(const Circuit& c) {
  try {
    return gate_count_json(count_gates_detailed(c));
  } catch (const UnregisteredComposite& e) {
    return {{"unregistered", e.what()}};
  }
}

json histogram_json(const std::map<GateClass, std::uint64_t>& h) {
  json out = json::object();
  for (const auto& [cls, n] : h) out[to_string(cls)] = n;
  return out;
}

// Runs body(i) for i in [0, n) on up to `threads` workers.
template <typename F>
void parallel_for(std::size_t n, int threads, F body) {
  const auto workers = static_cast<std::size_t>(std::clamp(threads, 1, 64));
  if (workers == 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < std::min(workers, n); ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

std::string to_json(const RunResult& r) {
  json series = json::array();
  for (const auto& p : r.series) {
    series.push_back({{"theta", optional_number(p.theta)},
                      {"T", p.applications},
                      {"fidelity_sim", p.fidelity_sim},
                      {"fidelity_pred", p.fidelity_pred},
                      {"q_estimate", optional_number(p.q_estimate)}});
  }
  json doc = {{"schema_version", kSchemaVersion},
              {"experiment", r.experiment},
              {"config", r.config},
              {"seed", r.seed},
              {"series", series},
              {"counts", r.counts},
              {"shots", r.shots ? json(*r.shots) : json(nullptr)},
              {"wall_time_s", r.wall_time_s},
              {"report", r.report}};
  return doc.dump(2) + "\n";
}

RunResult run_result_from_json(const std::string& text) {
  RunResult r;
  try {
    const json doc = json::parse(text);
    if (doc.at("schema_version").get<int>() != kSchemaVersion) throw ValidationError("unsupported schema_version");
    r.experiment = doc.at("experiment").get<std::string>();
    r.config = doc.at("config");
    r.seed = doc.at("seed").get<std::uint64_t>();
    for (const auto& p : doc.at("series")) {
      r.series.push_back({read_optional(p, "theta"), p.at("T").get<int>(), p.at("fidelity_sim").get<double>(),
                          p.at("fidelity_pred").get<double>(), read_optional(p, "q_estimate")});
    }
    r.counts = doc.at("counts");
    if (!doc.at("shots").is_null()) r.shots = doc.at("shots").get<std::uint64_t>();
    r.wall_time_s = doc.at("wall_time_s").get<double>();
    r.report = doc.value("report", json::object());
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed run result: ") + e.what());
  }
  return r;
}

std::string to_csv(const std::vector<SeriesPoint>& series) {
  std::string out = "theta,T,fidelity_sim,fidelity_pred,q_estimate\n";
  for (const auto& p : series) {
    out += (p.theta ? format_double(*p.theta) : "") + "," + std::to_string(p.applications) + "," +
           format_double(p.fidelity_sim) + "," + format_double(p.fidelity_pred) + "," +
           (p.q_estimate ? format_double(*p.q_estimate) : "") + "\n";
  }
  return out;
}

std::vector<SeriesPoint> series_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "theta,T,fidelity_sim,fidelity_pred,q_estimate") {
    throw ValidationError("unexpected CSV header");
  }
  std::vector<SeriesPoint> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::size_t start = 0;
    for (std::size_t pos; (pos = line.find(',', start)) != std::string::npos; start = pos + 1) {
      f.push_back(line.substr(start, pos - start));
    }
    f.push_back(line.substr(start));
    if (f.size() != 5) throw ValidationError("CSV row needs 5 fields");
    SeriesPoint p;
    if (!f[0].empty()) p.theta = parse_double(f[0]);
    p.applications = static_cast<int>(parse_double(f[1]));
    p.fidelity_sim = parse_double(f[2]);
    p.fidelity_pred = parse_double(f[3]);
    if (!f[4].empty()) p.q_estimate = parse_double(f[4]);
    out.push_back(p);
  }
  return out;
}

std::uint64_t stable_hash(const std::string& key) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : key) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

RunResult run_perceptron(const PerceptronOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  if (opts.thetas.empty()) throw ValidationError("theta grid is empty");
  if (opts.mode == SampleMode::Shots && opts.shots == 0) throw ValidationError("shots must be positive");
  ThermaliseConfig config;
  config.applications = opts.max_applications;
  config.trailing_reset = opts.trailing_reset;
  config.validate();

  std::vector<std::vector<SeriesPoint>> per_theta(opts.thetas.size());
  std::vector<json> measured(opts.thetas.size(), json::object());
  parallel_for(opts.thetas.size(), opts.threads, [&](std::size_t i) {
    const double theta = opts.thetas[i];
    const double q = q_activation(theta);
    const ThermaliseResult run =
        simulate_perceptron_thermalise(theta, config, PureState(1), opts.noise ? &*opts.noise : nullptr);
    const Matrix undo = standard_gate("Ry", {-2 * q}).matrix();
    for (int t = 1; t <= opts.max_applications; ++t) {
      const DensityMatrix& rho = run.states[static_cast<std::size_t>(t - 1)];
      SeriesPoint p{theta, t, 0.0, predicted_perceptron_fidelity(theta, t, std::pow(std::cos(q), 2)), std::nullopt};
      if (opts.mode == SampleMode::Exact) {
        p.fidelity_sim = run.fidelity[static_cast<std::size_t>(t - 1)];
        p.q_estimate = estimate_q_angle(rho);
      } else {
        const std::string key = "perceptron|" + format_double(theta) + "|" + std::to_string(t);
        const std::uint64_t point_seed = opts.seed + stable_hash(key);
        DensityMatrix rotated = rho;
        apply_gate(rotated, undo, std::vector<int>{0});
        const auto fid_counts = sample_counts(rotated, opts.shots, point_seed);
        const auto z_counts = sample_counts(rho, opts.shots, point_seed ^ 0x9e3779b97f4a7c15ULL);
        auto get = [](const std::map<std::string, std::uint64_t>& m, const char* k) {
          auto it = m.find(k);
          return it == m.end() ? std::uint64_t{0} : it->second;
        };
        const double shots = static_cast<double>(opts.shots);
        p.fidelity_sim = static_cast<double>(get(fid_counts, "0")) / shots;
        p.q_estimate = std::asin(std::sqrt(static_cast<double>(get(z_counts, "1")) / shots));
        measured[i]["theta=" + format_double(theta) + ",T=" + std::to_string(t)] = {
            {"ideal_basis", fid_counts}, {"z_basis", z_counts}};
      }
      per_theta[i].push_back(p);
    }
  });

  RunResult r;
  r.experiment = "perceptron";
  r.seed = opts.seed;
  r.config = {{"thetas", opts.thetas},
              {"max_applications", opts.max_applications},
              {"trailing_reset", opts.trailing_reset},
              {"mode", opts.mode == SampleMode::Exact ? "exact" : "shots"},
              {"noise", opts.noise ? json::parse(noise_profile_to_json(*opts.noise)) : json(nullptr)}};
  std::vector<std::size_t> order(opts.thetas.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return opts.thetas[a] < opts.thetas[b]; });
  json measurements = json::object();
  for (std::size_t i : order) {
    r.series.insert(r.series.end(), per_theta[i].begin(), per_theta[i].end());
    measurements.update(measured[i]);
  }
  if (opts.mode == SampleMode::Shots) {
    r.shots = opts.shots;
    r.counts["measurements"] = measurements;
  }
  r.counts["unit"] = count_or_note(build_perceptron_unit(opts.thetas.front()).circuit);
  r.counts["thermalise_circuit"] = count_or_note(build_perceptron_thermalise(opts.thetas.front(), config).circuit);
  r.wall_time_s = seconds_since(start);
  return r;
}

int default_precision(const Hamiltonian& h) {
  for (int m = 1; m <= 4; ++m) {
    const PhaseTable t = shifted_phases(h, m);
    if (t.n_star == 1 && t.exactly_representable) return m;
  }
  for (int m = 1; m <= 4; ++m) {
    if (shifted_phases(h, m).n_star == 1) return m;
  }
  return 2;
}

RunResult run_groundstate(const GroundstateOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  if (!opts.hamiltonian) throw ValidationError("no Hamiltonian given");
  const Hamiltonian& h = *opts.hamiltonian;
  ThermaliseConfig config;
  config.applications = opts.max_applications;
  config.scrambling = opts.scrambling;
  config.precision = opts.precision.value_or(default_precision(h));
  config.validate();
  if (h.n_qubits() + 2 * config.precision + 1 > kMaxDensityQubits) {
    throw CapacityError("n + 2m + 1 exceeds the " + std::to_string(kMaxDensityQubits) + "-qubit live register");
  }
  const PhaseTable table = shifted_phases(h, config.precision);
  const int n_states = static_cast<int>(h.dim());

  const ThermaliseResult run = simulate_groundstate_thermalise(h, config, opts.noise ? &*opts.noise : nullptr);
  RunResult r;
  r.experiment = "groundstate";
  r.seed = opts.seed;
  for (int t = 1; t <= config.applications; ++t) {
    r.series.push_back({std::nullopt, t, run.fidelity[static_cast<std::size_t>(t - 1)],
                        predicted_groundstate_fidelity(n_states, table.n_star, t), std::nullopt});
  }
  r.config = {{"hamiltonian", h.name()},
              {"precision", config.precision},
              {"max_applications", config.applications},
              {"scramble", config.scrambling == ScramblingMode::Exact ? "exact" : "hadamard"},
              {"noise", opts.noise ? json::parse(noise_profile_to_json(*opts.noise)) : json(nullptr)}};
  r.report = {{"phases", table.phases},
              {"patterns", table.patterns},
              {"n_states", n_states},
              {"n_star", table.n_star},
              {"exactly_representable", table.exactly_representable},
              {"peak_live_qubits", run.peak_live_qubits}};
  r.counts["pea_unit"] = count_or_note(build_pea_unit(h, config.precision, h.ground_energy()));
  r.counts["primitive_classes"] = histogram_json(run.class_histogram);
  r.wall_time_s = seconds_since(start);
  return r;
}

RunResult run_oaa(const OaaOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  if (!(opts.p0 > 0.0 && opts.p0 < 1.0)) throw ValidationError("p0 must lie in (0, 1)");
  if (opts.k < 0 || opts.k > 6) throw ValidationError("k must lie in 0..6");
  const PostSelectUnit unit = build_two_branch_unit(opts.p0);
  const PostSelectUnit amplified = build_oaa(unit, opts.k);
  Circuit s_only(1);
  s_only.add(phase_shift_on_zero(1, pi / 3), {0});
  const std::uint64_t q_u = count_gates(unit.circuit).total;
  const std::uint64_t q_s = count_gates(s_only).total;

  json sweep = json::array();
  for (double d : opts.deltas) {
    sweep.push_back({{"delta", d},
                     {"failure_uniform", 1.0 - oaa_with_angle_error(unit, opts.k, d, AngleErrorMode::Uniform)},
                     {"failure_mismatched", 1.0 - oaa_with_angle_error(unit, opts.k, d, AngleErrorMode::Mismatched)}});
  }
  RunResult r;
  r.experiment = "oaa";
  r.config = {{"p0", opts.p0}, {"k", opts.k}, {"deltas", opts.deltas}};
  r.report = {{"success_simulated", success_probability(amplified, PureState(1))},
              {"success_closed_form", 1.0 - std::pow(1.0 - opts.p0, std::pow(3.0, opts.k))},
              {"angle_error_sweep", sweep}};
  r.counts = {{"Q_U", q_u},
              {"Q_S", q_s},
              {"Q_A_counted", count_gates(amplified.circuit).total},
              {"Q_A_formula", oaa_gate_count(q_u, q_s, opts.k)}};
  r.wall_time_s = seconds_since(start);
  return r;
}

namespace {

Vector gaussian_vector(std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vector v(static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double re = g(rng);
    const double im = g(rng);
    v(i) = cplx(re, im);
  }
  return v;
}

ScrambleStats summarise(const std::vector<double>& xs) {
  ScrambleStats s;
  const double n = static_cast<double>(xs.size());
  for (double x : xs) s.mean += x;
  s.mean /= n;
  double ss = 0.0;
  for (double x : xs) ss += (x - s.mean) * (x - s.mean);
  s.stddev = xs.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  s.stderr_mean = s.stddev / std::sqrt(n);
  return s;
}

std::vector<double> overlap_samples(int n_qubits, int trials, std::mt19937_64& rng, bool hadamard) {
  const std::size_t dim = std::size_t{1} << n_qubits;
  Matrix hn;
  if (hadamard) {
    const Matrix h = standard_gate("H").matrix();
    hn = Matrix::Identity(1, 1);
    for (int i = 0; i < n_qubits; ++i) hn = Eigen::kroneckerProduct(h, hn).eval();
  }
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(trials));
  for (int t = 0; t < trials; ++t) {
    Vector lam = gaussian_vector(dim, rng);
    lam.normalize();
    Vector perp = gaussian_vector(dim, rng);
    perp -= lam * lam.dot(perp);
    perp.normalize();
    Vector moved(static_cast<Eigen::Index>(dim));
    if (hadamard) {
      moved = hn * lam;
    } else {
      for (std::size_t i = 0; i < dim; ++i) moved(static_cast<Eigen::Index>(i ^ (dim - 1))) = lam(static_cast<Eigen::Index>(i));
    }
    out.push_back(std::norm(perp.dot(moved)));
  }
  return out;
}

}  // namespace

ScrambleStudy scramble_study(int n_qubits, int trials, std::uint64_t seed) {
  if (n_qubits < 1 || n_qubits > 8) throw ValidationError("scramble study supports 1..8 qubits");
  if (trials < 2) throw ValidationError("need at least 2 trials");
  std::seed_seq h_seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 0U};
  std::seed_seq x_seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 1U};
  std::mt19937_64 h_rng(h_seq), x_rng(x_seq);

  ScrambleStudy s;
  s.n_qubits = n_qubits;
  s.trials = trials;
  s.hadamard = summarise(overlap_samples(n_qubits, trials, h_rng, true));
  s.pauli_x = summarise(overlap_samples(n_qubits, trials, x_rng, false));
  const double dim = std::ldexp(1.0, n_qubits);
  s.inverse_dimension = 1.0 / dim;
  s.haar_mean = dim / ((dim + 1.0) * (dim - 1.0));
  s.welch_z = (s.hadamard.mean - s.pauli_x.mean) /
              std::sqrt(s.hadamard.stderr_mean * s.hadamard.stderr_mean + s.pauli_x.stderr_mean * s.pauli_x.stderr_mean);
  return s;
}

RunResult run_scramble(int n_qubits, int trials, std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  const ScrambleStudy s = scramble_study(n_qubits, trials, seed);
  auto stats = [](const ScrambleStats& st) {
    return json{{"mean", st.mean}, {"std", st.stddev}, {"stderr", st.stderr_mean}};
  };
  RunResult r;
  r.experiment = "scramble";
  r.seed = seed;
  r.config = {{"qubits", n_qubits}, {"trials", trials}};
  r.report = {{"hadamard", stats(s.hadamard)},
              {"pauli_x", stats(s.pauli_x)},
              {"inverse_dimension", s.inverse_dimension},
              {"haar_mean", s.haar_mean},
              {"z_vs_inverse_dimension", (s.hadamard.mean - s.inverse_dimension) / s.hadamard.stderr_mean},
              {"welch_z", s.welch_z}};
  r.wall_time_s = seconds_since(start);
  return r;
}

RunResult run_resources(const ResourceQuery& query, const std::vector<std::string>& methods) {
  const auto start = std::chrono::steady_clock::now();
  auto cell = [](const ResourceCell& c) {
    return json{{"value", c.value ? json(*c.value) : json(nullptr)},
                {"expression", c.expression},
                {"asymptotic", c.asymptotic}};
  };
  RunResult r;
  r.experiment = "resources";
  r.config = {{"n", query.n},         {"m", query.m},         {"epsilon", query.epsilon},
              {"p0", query.p0},       {"delta_gap", query.delta_gap}, {"sparsity", query.sparsity}};
  json rows = json::array();
  for (const auto& m : methods.empty() ? resource_methods() : methods) {
    const ResourceRow row = resource_row(query, m);
    rows.push_back({{"method", row.method},
                    {"measurements", cell(row.measurements)},
                    {"qubits", cell(row.qubits)},
                    {"gates", cell(row.gates)}});
  }
  r.report = {{"rows", rows}};
  r.wall_time_s = seconds_since(start);
  return r;
}

double preactivation(const std::vector<double>& x, const std::vector<double>& w, double b) {
  if (x.size() != w.size()) throw ValidationError("inputs and weights differ in length");
  double theta = b;
  for (std::size_t i = 0; i < x.size(); ++i) theta += x[i] * w[i];
  return theta;
}

}  // namespace qtherm
