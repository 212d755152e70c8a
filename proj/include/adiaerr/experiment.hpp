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

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "adiaerr/exact.hpp"
#include "adiaerr/models.hpp"

namespace adiaerr::mps {
struct Checkpoint;
}  // namespace adiaerr::mps

/// Paired clean / noisy runs on any engine and the observables built on them.
namespace adiaerr {

/// Cumulative discarded weight above which an MPS run is flagged.
inline constexpr double kTruncationFlag = 1e-4;

/// One recorded time step. Unavailable observables stay empty.
struct Row {
  double t = 0.0;
  Params params;
  double energy = 0.0;
  std::optional<double> delta_e;
  std::optional<double> fidelity;
  /// p_0..p_kMax; empty when populations were not observed.
  std::vector<double> p;
  std::optional<double> p_rest;
  std::optional<int> max_chi;
  std::optional<double> trunc_weight;
};

struct RunInfo {
  std::string engine;
  /// "clean", "noisy", "X", "site=4" and so on.
  std::string label;
  int n = 0;
  double duration = 0.0;
  double dt = 0.0;
  std::uint64_t seed = 0;
  double wall_seconds = 0.0;
  std::string version;
  std::optional<NoiseEvent> noise;
  bool truncation_flagged = false;
};

struct ResultRecord {
  std::string config_name;
  Family family = Family::ZZXZ;
  int k_max = 0;
  RunInfo info;
  std::vector<Row> rows;
  /// Populations of the distinct levels of the final Hamiltonian (exact engine).
  std::optional<exact::SpectrumSnapshot> final_spectrum;
  /// Final MPS when the config asked for checkpoints.
  std::shared_ptr<const mps::Checkpoint> final_checkpoint;

  const Row& final_row() const;
  std::optional<double> final_delta_e() const { return final_row().delta_e; }
};

/// Throws InputError listing every problem found by validate(config).
void require_valid(const ExperimentConfig& config);

/// A single trajectory at size n. No noise is applied when `noise` is empty
/// or disabled.
ResultRecord run_trajectory(const ExperimentConfig& config, int n,
                            const std::optional<NoiseEvent>& noise, const std::string& label);

/// E_noisy(t) - E_clean(t) per row. Throws InputError unless both runs share
/// engine, n, duration, dt and time grid.
std::vector<double> excess_energy(const ResultRecord& noisy, const ResultRecord& clean);

/// Writes excess_energy into noisy.rows[*].delta_e.
void attach_excess_energy(ResultRecord& noisy, const ResultRecord& clean);

/// For every size: the clean run and, when noise is enabled, the noisy run
/// carrying delta_e. Records are ordered by size, clean before noisy.
std::vector<ResultRecord> run_experiment(const ExperimentConfig& config);

/// Energy averaged over the no-error, X, Y and Z trajectories with weights
/// (1 - p, p/3, p/3, p/3); delta_e is measured against the clean run.
ResultRecord depolarizing_average(const ExperimentConfig& config, int n, double p);

struct BoundQuery {
  /// Energy of the state just before the error.
  double lambda = 0.0;
  /// Largest energy change a single-qubit error can cause.
  double c = 0.0;
  /// Energy of the target eigenspace.
  double f = 0.0;
  int D = 1;
  double sigma = 1.0;
  double m = 1.0;
};

struct BoundResult {
  /// Upper bound on the square root of the overlap with the target eigenspace.
  double bound = 1.0;
  /// Whether the gap condition |lambda + c - f| > 2^D sqrt(m sigma) holds.
  bool valid = false;
};

BoundResult concentration_bound(const BoundQuery& q);

struct AfmStudy {
  ResultRecord clean;
  /// Error on site n/2 - 1 (0-indexed), the first of the two central sites.
  ResultRecord left_site;
  /// Error on site n/2.
  ResultRecord right_site;
  /// Final populations of the lowest distinct levels, k_max + 1 entries plus
  /// the rest; exact engine only.
  std::optional<ExcitationPopulations> left_levels;
  std::optional<ExcitationPopulations> right_levels;
};

/// Two noisy runs differing only in the parity of the error site.
AfmStudy afm_parity_study(const ExperimentConfig& config, int n);

/// Level populations p_k = weight of the k-th distinct eigenvalue.
ExcitationPopulations level_populations(const exact::SpectrumSnapshot& snapshot, int k_max);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_error = 0.0;
};

/// Ordinary least squares y = slope x + intercept with the slope's standard error.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// Exponent of y ~ x^a from a least-squares fit in log-log space.
double loglog_exponent(const std::vector<double>& x, const std::vector<double>& y);

struct CrossCheck {
  std::string name;
  double reference = 0.0;
  double value = 0.0;
  double tolerance = 0.0;

  double difference() const { return value - reference; }
  bool passed() const;
};

/// Agreement between engines at size n: exact vs MPS final energies after a
/// sweep of length T for each family, and exact vs free-fermion ground and
/// sweep energies on the transverse-field line. The MPS runs use fourth-order
/// Trotter steps without truncation, which is exact in bond dimension at
/// these sizes.
std::vector<CrossCheck> cross_validate(int n, double T = 10.0, double dt = 0.01);

std::string version();

}  // namespace adiaerr
