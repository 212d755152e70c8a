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

#include "adiaerr/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <thread>

#include "adiaerr/errors.hpp"
#include "adiaerr/freefermion.hpp"
#include "adiaerr/mps.hpp"

namespace adiaerr {

namespace {

using Clock = std::chrono::steady_clock;

ProductBasis basis_or_throw(const std::string& name, int n) {
  auto b = ProductBasis::named(name, n);
  if (!b) throw InputError("unknown product state '" + name + "'");
  return *b;
}

struct Extras {
  std::vector<std::optional<double>> fidelity;
  std::vector<std::optional<ExcitationPopulations>> populations;
};

void fill_rows(ResultRecord& rec, const std::vector<Sample>& samples, const Extras& extras) {
  for (std::size_t i = 0; i < samples.size(); ++i) {
    Row row;
    row.t = samples[i].t;
    row.params = samples[i].params;
    row.energy = samples[i].energy;
    if (i < extras.fidelity.size()) row.fidelity = extras.fidelity[i];
    if (i < extras.populations.size() && extras.populations[i]) {
      row.p = extras.populations[i]->p;
      row.p_rest = extras.populations[i]->rest;
    }
    rec.rows.push_back(std::move(row));
  }
}

void run_exact(const ExperimentConfig& config, const SweepSchedule& sched,
               const std::optional<NoiseEvent>& noise, ResultRecord& rec) {
  const int n = sched.n;
  const double T = sched.total_duration();
  exact::DenseState psi;
  if (config.initial_state == "ground") {
    const exact::Diagonalization d = exact::diagonalize(params_at(sched, 0.0), config.exact_max_sites);
    psi = {n, d.vectors.col(0).cast<std::complex<double>>()};
  } else {
    psi = exact::product_state(basis_or_throw(config.initial_state, n));
  }
  const ProductBasis ref = basis_or_throw(config.reference_state, n);
  Extras extras;
  exact::EvolveOptions opt;
  opt.record_every = config.record_every;
  opt.max_sites = config.exact_max_sites;
  opt.observer = [&](double, const exact::DenseState& s, const ModelSpec& model) {
    extras.fidelity.push_back(config.observe_fidelity
                                  ? std::optional<double>(exact::fidelity(s, model))
                                  : std::nullopt);
    extras.populations.push_back(config.observe_populations
                                     ? std::optional(exact::excitation_populations(s, ref, config.k_max))
                                     : std::nullopt);
  };
  const exact::Trajectory traj = exact::evolve_dense(std::move(psi), sched, 0.0, T, noise, opt);
  fill_rows(rec, traj.samples, extras);
  if (config.observe_spectrum) {
    rec.final_spectrum = exact::eigen_populations(traj.final_state, params_at(sched, T), T);
  }
}

void run_mps(const ExperimentConfig& config, const SweepSchedule& sched,
             const std::optional<NoiseEvent>& noise, ResultRecord& rec) {
  const int n = sched.n;
  const double T = sched.total_duration();
  mps::Mps psi;
  if (config.initial_state == "ground") {
    mps::GroundOptions g;
    g.max_bond = config.mps_max_bond;
    psi = mps::ground_state_imaginary_tebd(params_at(sched, 0.0), config.mps_cutoff, 1e-9, g).state;
  } else {
    psi = mps::Mps::product(basis_or_throw(config.initial_state, n));
  }
  const ProductBasis ref = basis_or_throw(config.reference_state, n);
  Extras extras;
  mps::TebdOptions opt;
  opt.truncation = {config.mps_cutoff, config.mps_max_bond};
  opt.order = config.trotter_order;
  opt.record_every = config.record_every;
  opt.observer = [&](double, const mps::Mps& s, const ModelSpec&) {
    extras.populations.push_back(config.observe_populations
                                     ? std::optional(mps::hamming_populations(s, ref, config.k_max))
                                     : std::nullopt);
  };
  const mps::TebdTrajectory traj = mps::tebd_evolve(std::move(psi), sched, 0.0, T, noise, opt);
  fill_rows(rec, traj.samples, extras);
  for (std::size_t i = 0; i < rec.rows.size() && i < traj.bond_log.size(); ++i) {
    rec.rows[i].max_chi = traj.bond_log[i].max_chi;
    rec.rows[i].trunc_weight = traj.bond_log[i].cumulative_truncation;
  }
  rec.info.truncation_flagged = traj.cumulative_truncation >= kTruncationFlag;
  if (config.mps_checkpoint) {
    rec.final_checkpoint = std::make_shared<const mps::Checkpoint>(
        mps::Checkpoint{traj.final_state, config.mps_cutoff, T});
  }
}

void run_freefermion(const ExperimentConfig& config, const SweepSchedule& sched,
                     const std::optional<NoiseEvent>& noise, ResultRecord& rec) {
  const int n = sched.n;
  const double T = sched.total_duration();
  freefermion::CovarianceState gamma;
  if (config.initial_state == "ground") {
    gamma = freefermion::ground_covariance(freefermion::jw_tfim(params_at(sched, 0.0))).state;
  } else if (config.initial_state == "x_minus") {
    gamma = freefermion::vacuum(n);
  } else {
    throw UnsupportedModel("free-fermion engine starts from x_minus or ground only");
  }
  freefermion::EvolveOptions opt;
  opt.record_every = config.record_every;
  const freefermion::Trajectory traj =
      freefermion::evolve_covariance(std::move(gamma), sched, 0.0, T, noise, opt);
  fill_rows(rec, traj.samples, {});
}

bool same_grid(const ResultRecord& a, const ResultRecord& b) {
  if (a.rows.size() != b.rows.size()) return false;
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    if (a.rows[i].t != b.rows[i].t) return false;
  }
  return true;
}

}  // namespace

std::string version() { return ADIAERR_VERSION; }

const Row& ResultRecord::final_row() const {
  if (rows.empty()) throw InputError("record has no rows");
  return rows.back();
}

void require_valid(const ExperimentConfig& config) {
  const auto problems = validate(config);
  if (problems.empty()) return;
  std::string msg = "invalid configuration:";
  for (const auto& p : problems) msg += "\n  " + p;
  throw InputError(msg);
}

ResultRecord run_trajectory(const ExperimentConfig& config, int n,
                            const std::optional<NoiseEvent>& noise, const std::string& label) {
  if (!config.engine) throw InputError("unknown engine '" + config.engine_name + "'");
  const SweepSchedule sched = config.schedule_for(n);
  check_schedule(sched);
  ResultRecord rec;
  rec.config_name = config.name;
  rec.family = config.family;
  rec.k_max = config.k_max;
  rec.info.engine = std::string(to_string(*config.engine));
  rec.info.label = label;
  rec.info.n = n;
  rec.info.duration = sched.total_duration();
  rec.info.dt = sched.dt;
  rec.info.seed = config.seed;
  rec.info.version = version();
  if (noise && noise->enabled) rec.info.noise = noise;
  const std::optional<NoiseEvent> active = rec.info.noise;

  const auto start = Clock::now();
  switch (*config.engine) {
    case Engine::Exact:
      run_exact(config, sched, active, rec);
      break;
    case Engine::MPS:
      run_mps(config, sched, active, rec);
      break;
    case Engine::FreeFermion:
      run_freefermion(config, sched, active, rec);
      break;
  }
  rec.info.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return rec;
}

std::vector<double> excess_energy(const ResultRecord& noisy, const ResultRecord& clean) {
  const RunInfo& a = noisy.info;
  const RunInfo& b = clean.info;
  if (a.engine != b.engine || a.n != b.n || a.duration != b.duration || a.dt != b.dt ||
      noisy.family != clean.family) {
    throw InputError("excess energy needs runs with the same engine, size, duration and dt");
  }
  if (!same_grid(noisy, clean)) throw InputError("excess energy needs runs on the same time grid");
  std::vector<double> out;
  out.reserve(noisy.rows.size());
  for (std::size_t i = 0; i < noisy.rows.size(); ++i) {
    if (!(noisy.rows[i].params == clean.rows[i].params)) {
      throw InputError("excess energy needs runs on the same schedule");
    }
    out.push_back(noisy.rows[i].energy - clean.rows[i].energy);
  }
  return out;
}

void attach_excess_energy(ResultRecord& noisy, const ResultRecord& clean) {
  const std::vector<double> d = excess_energy(noisy, clean);
  for (std::size_t i = 0; i < d.size(); ++i) noisy.rows[i].delta_e = d[i];
}

std::vector<ResultRecord> run_experiment(const ExperimentConfig& config) {
  require_valid(config);
  struct Job {
    int n;
    bool noisy;
  };
  std::vector<Job> jobs;
  for (int n : config.sizes) {
    if (config.observe_delta_e || !config.noise.enabled) jobs.push_back({n, false});
    if (config.noise.enabled) jobs.push_back({n, true});
  }
  auto run = [&](const Job& j) {
    return j.noisy ? run_trajectory(config, j.n, config.noise_for(j.n), "noisy")
                   : run_trajectory(config, j.n, std::nullopt, "clean");
  };
  std::vector<ResultRecord> records(jobs.size());
  if (std::thread::hardware_concurrency() > 1 && jobs.size() > 1) {
    std::vector<std::future<ResultRecord>> futures;
    for (const auto& j : jobs) futures.push_back(std::async(std::launch::async, run, j));
    for (std::size_t i = 0; i < jobs.size(); ++i) records[i] = futures[i].get();
  } else {
    for (std::size_t i = 0; i < jobs.size(); ++i) records[i] = run(jobs[i]);
  }
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (!jobs[i].noisy) continue;
    for (std::size_t k = 0; k < jobs.size(); ++k) {
      if (!jobs[k].noisy && jobs[k].n == jobs[i].n) attach_excess_energy(records[i], records[k]);
    }
  }
  return records;
}

ResultRecord depolarizing_average(const ExperimentConfig& config, int n, double p) {
  require_valid(config);
  if (!(p >= 0.0 && p <= 1.0)) throw InputError("depolarizing probability outside [0, 1]");
  ResultRecord clean = run_trajectory(config, n, std::nullopt, "clean");
  std::vector<ResultRecord> axes;
  for (Axis a : {Axis::X, Axis::Y, Axis::Z}) {
    NoiseEvent ev = config.noise_for(n);
    ev.enabled = true;
    ev.axis = a;
    axes.push_back(run_trajectory(config, n, ev, std::string(to_string(a))));
  }
  ResultRecord avg = clean;
  avg.info.label = "depolarizing";
  avg.final_spectrum.reset();
  for (const auto& r : axes) {
    if (!same_grid(r, clean)) throw InputError("Pauli trajectories disagree on the time grid");
  }
  for (std::size_t i = 0; i < avg.rows.size(); ++i) {
    Row& row = avg.rows[i];
    double e = (1.0 - p) * clean.rows[i].energy;
    for (const auto& r : axes) e += (p / 3.0) * r.rows[i].energy;
    row.energy = e;
    row.delta_e = e - clean.rows[i].energy;
    // Populations and fidelities average linearly over trajectories too.
    if (row.fidelity) {
      double f = (1.0 - p) * *clean.rows[i].fidelity;
      for (const auto& r : axes) f += (p / 3.0) * r.rows[i].fidelity.value_or(0.0);
      row.fidelity = f;
    }
    for (std::size_t k = 0; k < row.p.size(); ++k) {
      double v = (1.0 - p) * clean.rows[i].p[k];
      for (const auto& r : axes) v += (p / 3.0) * r.rows[i].p[k];
      row.p[k] = v;
    }
    if (row.p_rest) {
      double v = (1.0 - p) * *clean.rows[i].p_rest;
      for (const auto& r : axes) v += (p / 3.0) * r.rows[i].p_rest.value_or(0.0);
      row.p_rest = v;
    }
  }
  return avg;
}

BoundResult concentration_bound(const BoundQuery& q) {
  if (!(q.sigma > 0.0)) throw InputError("correlation length must be positive");
  if (!(q.m >= 1.0)) throw InputError("number of terms must be at least 1");
  if (q.D < 1) throw InputError("lattice dimension must be at least 1");
  const double gap = q.lambda + q.c - q.f;
  const double root = 1.0 / (q.D + 1);
  const double exponent = -std::pow(gap * gap * q.sigma, root) / (std::pow(q.m, root) * q.D * q.sigma);
  BoundResult r;
  r.bound = std::exp(exponent);
  r.valid = std::abs(gap) > std::ldexp(1.0, q.D) * std::sqrt(q.m * q.sigma);
  return r;
}

ExcitationPopulations level_populations(const exact::SpectrumSnapshot& snapshot, int k_max) {
  ExcitationPopulations out;
  out.p.assign(k_max + 1, 0.0);
  for (std::size_t k = 0; k < snapshot.groups.size(); ++k) {
    if (static_cast<int>(k) <= k_max) {
      out.p[k] = snapshot.groups[k].population;
    } else {
      out.rest += snapshot.groups[k].population;
    }
  }
  return out;
}

AfmStudy afm_parity_study(const ExperimentConfig& config, int n) {
  require_valid(config);
  if (n < 4) throw InputError("parity study needs n >= 4");
  ExperimentConfig cfg = config;
  cfg.observe_spectrum = cfg.engine == Engine::Exact;
  AfmStudy study;
  study.clean = run_trajectory(cfg, n, std::nullopt, "clean");
  auto noisy_at = [&](int site) {
    NoiseEvent ev = cfg.noise_for(n);
    ev.enabled = true;
    ev.site = site;
    ResultRecord r = run_trajectory(cfg, n, ev, "site=" + std::to_string(site));
    attach_excess_energy(r, study.clean);
    return r;
  };
  study.left_site = noisy_at(n / 2 - 1);
  study.right_site = noisy_at(n / 2);
  if (study.left_site.final_spectrum) {
    study.left_levels = level_populations(*study.left_site.final_spectrum, cfg.k_max);
    study.right_levels = level_populations(*study.right_site.final_spectrum, cfg.k_max);
  }
  return study;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t m = x.size();
  if (m != y.size() || m < 2) throw InputError("line fit needs two or more matching points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw InputError("line fit needs distinct x values");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (m > 2) {
    double ss = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double r = y[i] - fit.intercept - fit.slope * x[i];
      ss += r * r;
    }
    fit.slope_error = std::sqrt(ss / (m - 2) / sxx);
  }
  return fit;
}

double loglog_exponent(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw InputError("log-log fit needs positive values");
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  return fit_line(lx, ly).slope;
}

bool CrossCheck::passed() const {
  return std::isfinite(value) && std::abs(difference()) <= tolerance;
}

std::vector<CrossCheck> cross_validate(int n, double T, double dt) {
  if (n < 2 || n > 12) throw InputError("cross validation runs at 2 <= n <= 12");
  std::vector<CrossCheck> out;
  const std::string size = "n=" + std::to_string(n);
  for (Family f : {Family::ZZXZ, Family::HeisenbergX}) {
    const std::vector<Params> path = f == Family::ZZXZ
                                         ? paths::zzxz_sweep()
                                         : std::vector<Params>{paths::heisenberg_loop()[0],
                                                               paths::heisenberg_loop()[1]};
    const SweepSchedule sched{f, n, path, T, dt};
    const ProductBasis start = ProductBasis::x_minus(n);
    exact::EvolveOptions eo;
    eo.record_every = 1 << 30;
    const double e_exact =
        exact::evolve_dense(exact::product_state(start), sched, 0.0, T, std::nullopt, eo).samples.back().energy;
    mps::TebdOptions mo;
    mo.order = 4;
    mo.truncation = {0.0, 1 << 12};
    mo.record_every = 1 << 30;
    const double e_mps =
        mps::tebd_evolve(mps::Mps::product(start), sched, 0.0, T, std::nullopt, mo).samples.back().energy;
    out.push_back({std::string(to_string(f)) + " sweep exact vs mps " + size, e_exact, e_mps, 1e-6});
  }
  const ModelSpec tfim{Family::ZZXZ, n, {1.0, 1.0, 0.0, 0.0}};
  out.push_back({"tfim ground exact vs freefermion " + size, exact::diagonalize(tfim).values(0),
                 freefermion::ground_covariance(freefermion::jw_tfim(tfim)).energy, 1e-9});
  const SweepSchedule sweep = default_tfim_sweep(n, T, dt);
  exact::EvolveOptions eo;
  eo.record_every = 1 << 30;
  const double e_exact = exact::evolve_dense(exact::product_state(ProductBasis::x_minus(n)), sweep,
                                             0.0, T, std::nullopt, eo)
                             .samples.back()
                             .energy;
  freefermion::EvolveOptions fo;
  fo.record_every = 1 << 30;
  const double e_ff =
      freefermion::evolve_covariance(freefermion::vacuum(n), sweep, 0.0, T, std::nullopt, fo)
          .samples.back()
          .energy;
  out.push_back({"tfim sweep exact vs freefermion " + size, e_exact, e_ff, 1e-6});
  return out;
}

}  // namespace adiaerr
