// Copyright 2026 The adiaerr Authors
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

#include "adiaerr/models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <regex>
#include <sstream>
#include <stdexcept>

#include "adiaerr/errors.hpp"

namespace adiaerr {

std::string_view to_string(Family f) {
  switch (f) {
    case Family::ZZXZ:
      return "zzxz";
    case Family::HeisenbergX:
      return "heisenberg";
  }
  return "?";
}

std::string_view to_string(Axis a) {
  switch (a) {
    case Axis::X:
      return "X";
    case Axis::Y:
      return "Y";
    case Axis::Z:
      return "Z";
  }
  return "?";
}

std::optional<Family> family_from_string(std::string_view s) {
  if (s == "zzxz" || s == "ZZXZ" || s == "tfim") return Family::ZZXZ;
  if (s == "heisenberg" || s == "HeisenbergX" || s == "heisenberg_x") return Family::HeisenbergX;
  return std::nullopt;
}

std::optional<Axis> axis_from_string(std::string_view s) {
  if (s == "X" || s == "x") return Axis::X;
  if (s == "Y" || s == "y") return Axis::Y;
  if (s == "Z" || s == "z") return Axis::Z;
  return std::nullopt;
}

std::string_view to_string(Engine e) {
  switch (e) {
    case Engine::Exact:
      return "exact";
    case Engine::MPS:
      return "mps";
    case Engine::FreeFermion:
      return "freefermion";
  }
  return "?";
}

std::optional<Engine> engine_from_string(std::string_view s) {
  if (s == "exact") return Engine::Exact;
  if (s == "mps") return Engine::MPS;
  if (s == "freefermion" || s == "free_fermion") return Engine::FreeFermion;
  return std::nullopt;
}

Params lerp(const Params& a, const Params& b, double s) {
  // (1-s) a + s b hits both endpoints exactly.
  auto mix = [s](double x, double y) { return (1.0 - s) * x + s * y; };
  return {mix(a.J, b.J), mix(a.Bx, b.Bx), mix(a.Bz, b.Bz), mix(a.Jz, b.Jz)};
}

std::vector<SiteTerm> ModelSpec::site_terms() const {
  std::vector<SiteTerm> terms;
  for (int i = 0; i < n; ++i) {
    if (params.Bx != 0.0) terms.push_back({params.Bx, i, Axis::X});
    if (family == Family::ZZXZ && params.Bz != 0.0) terms.push_back({params.Bz, i, Axis::Z});
  }
  return terms;
}

std::vector<BondTerm> ModelSpec::bond_terms() const {
  std::vector<BondTerm> terms;
  for (int i = 0; i + 1 < n; ++i) {
    if (family == Family::ZZXZ) {
      if (params.J != 0.0) terms.push_back({params.J, i, Axis::Z, Axis::Z});
    } else {
      if (params.J != 0.0) {
        terms.push_back({0.5 * params.J, i, Axis::X, Axis::X});
        terms.push_back({0.5 * params.J, i, Axis::Y, Axis::Y});
      }
      if (params.Jz != 0.0) terms.push_back({0.5 * params.Jz, i, Axis::Z, Axis::Z});
    }
  }
  return terms;
}

double ModelSpec::norm_bound() const {
  double total = 0.0;
  for (const auto& t : site_terms()) total += std::abs(t.coeff);
  for (const auto& t : bond_terms()) total += std::abs(t.coeff);
  return total;
}

void check_model(const ModelSpec& model) {
  if (model.n < 2) throw InputError("model needs n >= 2, got " + std::to_string(model.n));
  const auto& p = model.params;
  for (double v : {p.J, p.Bx, p.Bz, p.Jz}) {
    if (!std::isfinite(v)) throw InputError("model parameters must be finite");
  }
}

int SweepSchedule::steps_between(double t0, double t1) const {
  const double window = t1 - t0;
  if (window < 0.0) throw InputError("time window is reversed");
  const auto steps = static_cast<long long>(std::llround(window / dt));
  if (std::abs(static_cast<double>(steps) * dt - window) > 1e-9 * std::max(1.0, window)) {
    std::ostringstream msg;
    msg << "dt = " << dt << " does not divide the window [" << t0 << ", " << t1 << "]";
    throw InputError(msg.str());
  }
  return static_cast<int>(steps);
}

void check_schedule(const SweepSchedule& schedule) {
  if (schedule.vertices.size() < 2) throw InputError("schedule needs at least two vertices");
  if (!(schedule.leg_duration > 0.0)) throw InputError("leg duration must be positive");
  if (!(schedule.dt > 0.0)) throw InputError("dt must be positive");
  for (const auto& v : schedule.vertices) check_model({schedule.family, schedule.n, v});
}

ModelSpec params_at(const SweepSchedule& schedule, double t) {
  const double total = schedule.total_duration();
  const double slack = 1e-12 * std::max(1.0, total);
  if (!(t >= -slack && t <= total + slack)) {
    std::ostringstream msg;
    msg << "time " << t << " outside schedule [0, " << total << "]";
    throw std::out_of_range(msg.str());
  }
  t = std::clamp(t, 0.0, total);
  const int legs = schedule.num_legs();
  int leg = static_cast<int>(std::floor(t / schedule.leg_duration));
  leg = std::clamp(leg, 0, legs - 1);
  double s = (t - leg * schedule.leg_duration) / schedule.leg_duration;
  s = std::clamp(s, 0.0, 1.0);
  return {schedule.family, schedule.n, lerp(schedule.vertices[leg], schedule.vertices[leg + 1], s)};
}

SweepSchedule default_tfim_sweep(int n, double T, double dt) {
  if (n < 2) throw InputError("TFIM sweep needs n >= 2");
  return {Family::ZZXZ, n, paths::tfim_sweep(), T, dt};
}

std::optional<int> noise_step(const NoiseEvent& noise, double t0, double t1, double dt) {
  if (!noise.enabled) return std::nullopt;
  const double k = std::round((noise.t_apply - t0) / dt);
  const double steps = std::round((t1 - t0) / dt);
  if (k < 0.0 || k > steps) return std::nullopt;
  return static_cast<int>(k);
}

void ProductBasis::check_orthonormal(double tol) const {
  for (std::size_t i = 0; i < local.size(); ++i) {
    const Eigen::Matrix2cd g = local[i].adjoint() * local[i];
    if ((g - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() > tol) {
      throw InputError("local basis at site " + std::to_string(i) + " is not orthonormal");
    }
  }
}

namespace {

Eigen::Matrix2cd basis_from(const Eigen::Vector2cd& same, const Eigen::Vector2cd& flip) {
  Eigen::Matrix2cd m;
  m.col(0) = same;
  m.col(1) = flip;
  return m;
}

}  // namespace

ProductBasis ProductBasis::x_minus(int n) {
  const double r = 1.0 / std::numbers::sqrt2;
  const Eigen::Vector2cd minus(r, -r);
  const Eigen::Vector2cd plus(r, r);
  return {std::vector<Eigen::Matrix2cd>(n, basis_from(minus, plus))};
}

ProductBasis ProductBasis::z_up(int n) {
  return {std::vector<Eigen::Matrix2cd>(n, Eigen::Matrix2cd::Identity())};
}

ProductBasis ProductBasis::neel(int n) {
  const Eigen::Vector2cd up(1, 0);
  const Eigen::Vector2cd down(0, 1);
  ProductBasis b;
  for (int i = 0; i < n; ++i) {
    b.local.push_back(i % 2 == 0 ? basis_from(up, down) : basis_from(down, up));
  }
  return b;
}

ProductBasis ProductBasis::anti_neel(int n) {
  const Eigen::Vector2cd up(1, 0);
  const Eigen::Vector2cd down(0, 1);
  ProductBasis b;
  for (int i = 0; i < n; ++i) {
    b.local.push_back(i % 2 == 0 ? basis_from(down, up) : basis_from(up, down));
  }
  return b;
}

std::optional<ProductBasis> ProductBasis::named(std::string_view name, int n) {
  if (name == "x_minus") return x_minus(n);
  if (name == "z_up") return z_up(n);
  if (name == "neel") return neel(n);
  if (name == "anti_neel") return anti_neel(n);
  return std::nullopt;
}

double ExcitationPopulations::total() const {
  double s = rest;
  for (double v : p) s += v;
  return s;
}

ExcitationPopulations populations_from_generating_function(
    const std::vector<std::complex<double>>& values, int k_max) {
  const int m = static_cast<int>(values.size());
  if (m < 1) throw InputError("generating function needs at least one sample");
  ExcitationPopulations out;
  out.p.assign(k_max + 1, 0.0);
  for (int k = 0; k < m; ++k) {
    std::complex<double> acc = 0.0;
    for (int j = 0; j < m; ++j) {
      const double theta = -2.0 * std::numbers::pi * static_cast<double>(k) * j / m;
      acc += values[j] * std::polar(1.0, theta);
    }
    const double pk = acc.real() / m;
    if (k <= k_max) {
      out.p[k] = pk;
    } else {
      out.rest += pk;
    }
  }
  return out;
}

Eigen::Matrix2cd pauli(Axis a) {
  using C = std::complex<double>;
  Eigen::Matrix2cd m;
  switch (a) {
    case Axis::X:
      m << 0, 1, 1, 0;
      break;
    case Axis::Y:
      m << 0, C(0, -1), C(0, 1), 0;
      break;
    case Axis::Z:
      m << 1, 0, 0, -1;
      break;
  }
  return m;
}

double DurationRule::operator()(int n) const {
  return scale * std::pow(static_cast<double>(n), power);
}

std::optional<DurationRule> DurationRule::parse(std::string_view text) {
  static const std::regex kNumber(R"(^\s*([0-9]*\.?[0-9]+(?:[eE][-+]?[0-9]+)?)\s*$)");
  static const std::regex kRule(
      R"(^\s*(?:([0-9]*\.?[0-9]+(?:[eE][-+]?[0-9]+)?)\s*\*\s*)?n(?:\s*\^\s*([0-9]*\.?[0-9]+))?\s*(?:([*/])\s*([0-9]*\.?[0-9]+(?:[eE][-+]?[0-9]+)?))?\s*$)");
  const std::string s(text);
  std::smatch m;
  if (std::regex_match(s, m, kNumber)) {
    return DurationRule{std::stod(m[1]), 0.0, s};
  }
  if (std::regex_match(s, m, kRule)) {
    DurationRule rule{1.0, 1.0, s};
    if (m[1].matched) rule.scale = std::stod(m[1]);
    if (m[2].matched) rule.power = std::stod(m[2]);
    if (m[3].matched) {
      const double c = std::stod(m[4]);
      if (m[3] == "/") {
        if (c == 0.0) return std::nullopt;
        rule.scale /= c;
      } else {
        rule.scale *= c;
      }
    }
    return rule;
  }
  return std::nullopt;
}

SweepSchedule ExperimentConfig::schedule_for(int n) const {
  const int legs = std::max<int>(1, static_cast<int>(vertices.size()) - 1);
  return {family, n, vertices, duration(n) / legs, dt};
}

NoiseEvent ExperimentConfig::noise_for(int n) const {
  NoiseEvent e;
  e.enabled = noise.enabled;
  e.axis = noise.axis;
  e.site = noise.site.value_or(n / 2);
  const double total = schedule_for(n).total_duration();
  e.t_apply = noise.time.value_or(noise.time_fraction * total);
  return e;
}

std::vector<std::string> validate(const ExperimentConfig& config) {
  std::vector<std::string> out;
  auto report = [&out](std::string msg) { out.push_back(std::move(msg)); };

  if (!config.engine) report("unknown engine '" + config.engine_name + "'");
  if (config.sizes.empty()) report("no system sizes given");
  for (int n : config.sizes) {
    if (n < 2) report("system size " + std::to_string(n) + " below 2");
  }
  if (config.vertices.size() < 2) report("schedule needs at least two vertices");
  for (const auto& v : config.vertices) {
    if (!std::isfinite(v.J) || !std::isfinite(v.Bx) || !std::isfinite(v.Bz) ||
        !std::isfinite(v.Jz)) {
      report("non-finite parameter in schedule vertex");
    }
    if (config.family == Family::ZZXZ && v.Jz != 0.0) report("Jz is not a ZZXZ parameter");
    if (config.family == Family::HeisenbergX && v.Bz != 0.0) {
      report("Bz is not a HeisenbergX parameter");
    }
  }
  if (config.engine == Engine::FreeFermion) {
    if (config.family != Family::ZZXZ) report("free-fermion engine requires the ZZXZ family");
    for (const auto& v : config.vertices) {
      if (v.Bz != 0.0 || v.Jz != 0.0) {
        report("free-fermion engine requires Bz=0");
        break;
      }
    }
    if (config.initial_state != "x_minus" && config.initial_state != "ground") {
      report("free-fermion engine starts from x_minus or ground only");
    }
  }
  if (!(config.dt > 0.0)) report("dt must be positive");
  if (config.trotter_order != 2 && config.trotter_order != 4) report("trotter order must be 2 or 4");
  if (!(config.mps_cutoff > 0.0)) report("mps cutoff must be positive");
  if (config.mps_max_bond < 1) report("mps bond cap must be positive");
  if (config.mps_checkpoint && config.engine != Engine::MPS) report("checkpoints need the mps engine");
  if (config.k_max < 0) report("k_max must be nonnegative");
  if (config.record_every < 1) report("record_every must be at least 1");
  if (config.initial_state != "ground" && !ProductBasis::named(config.initial_state, 2)) {
    report("unknown initial state '" + config.initial_state + "'");
  }
  if (!ProductBasis::named(config.reference_state, 2)) {
    report("unknown reference state '" + config.reference_state + "'");
  }
  if (config.output_format != "csv" && config.output_format != "json") {
    report("output format must be csv or json");
  }
  if (config.noise.time_fraction < 0.0 || config.noise.time_fraction > 1.0) {
    report("noise time fraction outside [0, 1]");
  }
  if (config.vertices.size() >= 2 && config.dt > 0.0) {
    for (int n : config.sizes) {
      if (n < 2) continue;
      const double T = config.duration(n);
      if (!(T > 0.0) || !std::isfinite(T)) {
        report("duration for n=" + std::to_string(n) + " is not positive");
        continue;
      }
      const SweepSchedule sched = config.schedule_for(n);
      try {
        (void)sched.steps_between(0.0, sched.total_duration());
      } catch (const InputError& e) {
        report(e.what());
      }
      const NoiseEvent ev = config.noise_for(n);
      if (config.noise.enabled) {
        if (ev.site < 0 || ev.site >= n) {
          report("noise site " + std::to_string(ev.site) + " out of range for n=" +
                 std::to_string(n));
        }
        if (ev.t_apply < 0.0 || ev.t_apply > sched.total_duration() + 1e-12) {
          report("noise time outside schedule for n=" + std::to_string(n));
        }
      }
      if (config.engine == Engine::Exact && n > config.exact_max_sites) {
        report("n=" + std::to_string(n) + " exceeds the exact-engine cap of " +
               std::to_string(config.exact_max_sites));
      }
    }
  }
  return out;
}

namespace paths {

std::vector<Params> zzxz_sweep() { return {{0.0, 1.0, 0.0, 0.0}, {3.0, 1.0, 1.0, 0.0}}; }

std::vector<Params> tfim_sweep() { return {{0.0, 1.0, 0.0, 0.0}, {3.0, 1.0, 0.0, 0.0}}; }

std::vector<Params> disordered_loop() {
  return {{0.0, 1.0, 0.0, 0.0}, {0.95, 1.0, 0.0, 0.0}, {0.95, 1.0, 1.5, 0.0}, {0.0, 1.0, 0.0, 0.0}};
}

std::vector<Params> critical_loop() {
  return {{0.0, 1.0, 0.0, 0.0}, {1.6, 1.0, 0.0, 0.0}, {0.95, 1.0, 1.5, 0.0}, {0.0, 1.0, 0.0, 0.0}};
}

std::vector<Params> afm_loop() {
  return {{1.0, 0.0, 0.0, 0.0}, {1.0, 0.5, 0.5, 0.0}, {1.0, 0.5, 0.0, 0.0}, {1.0, 0.0, 0.0, 0.0}};
}

std::vector<Params> heisenberg_loop() {
  return {{0.0, 1.0, 0.0, 0.0}, {0.4, 1.0, 0.0, 0.2}, {0.2, 1.0, 0.0, 0.6}, {0.0, 1.0, 0.0, 0.0}};
}

std::optional<std::vector<Params>> named(std::string_view name) {
  if (name == "zzxz_sweep") return zzxz_sweep();
  if (name == "tfim_sweep") return tfim_sweep();
  if (name == "disordered_loop") return disordered_loop();
  if (name == "critical_loop") return critical_loop();
  if (name == "afm_loop") return afm_loop();
  if (name == "heisenberg_loop") return heisenberg_loop();
  return std::nullopt;
}

}  // namespace paths

}  // namespace adiaerr
