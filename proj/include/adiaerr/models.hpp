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

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace adiaerr {

enum class Family { ZZXZ, HeisenbergX };
enum class Axis { X, Y, Z };

std::string_view to_string(Family f);
std::string_view to_string(Axis a);
std::optional<Family> family_from_string(std::string_view s);
std::optional<Axis> axis_from_string(std::string_view s);

/// Coupling values of one point on a path. ZZXZ reads (J, Bx, Bz);
/// HeisenbergX reads (J, Jz, Bx). Unused fields stay zero.
struct Params {
  double J = 0.0;
  double Bx = 0.0;
  double Bz = 0.0;
  double Jz = 0.0;

  friend bool operator==(const Params&, const Params&) = default;
};

Params lerp(const Params& a, const Params& b, double s);

/// c * sigma^a on `site`.
struct SiteTerm {
  double coeff;
  int site;
  Axis axis;
};

/// c * sigma^a_site sigma^b_{site+1}.
struct BondTerm {
  double coeff;
  int site;
  Axis left;
  Axis right;
};

/// One Hamiltonian of an open chain.
///
///   ZZXZ:        J sum Z_i Z_{i+1} + Bx sum X_i + Bz sum Z_i
///   HeisenbergX: 1/2 sum (J X_i X_{i+1} + J Y_i Y_{i+1} + Jz Z_i Z_{i+1}) + Bx sum X_i
struct ModelSpec {
  Family family = Family::ZZXZ;
  int n = 2;
  Params params;

  std::vector<SiteTerm> site_terms() const;
  std::vector<BondTerm> bond_terms() const;
  /// Sum of |coefficients|; bounds the operator norm.
  double norm_bound() const;

  friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

/// Throws InputError when n < 2 or a parameter is not finite.
void check_model(const ModelSpec& model);

/// Piecewise-linear path through parameter vertices, each leg lasting T.
struct SweepSchedule {
  Family family = Family::ZZXZ;
  int n = 2;
  std::vector<Params> vertices;
  double leg_duration = 1.0;
  double dt = 0.01;

  int num_legs() const { return static_cast<int>(vertices.size()) - 1; }
  double total_duration() const { return num_legs() * leg_duration; }
  bool is_closed_loop() const { return vertices.size() >= 2 && vertices.front() == vertices.back(); }
  /// Number of integrator steps covering [t0, t1]; throws InputError when dt
  /// does not divide the window.
  int steps_between(double t0, double t1) const;

  friend bool operator==(const SweepSchedule&, const SweepSchedule&) = default;
};

void check_schedule(const SweepSchedule& schedule);

/// Parameters at global time t. Throws std::out_of_range outside [0, total].
ModelSpec params_at(const SweepSchedule& schedule, double t);

/// Transverse-field Ising sweep J: 0 -> 3 at Bx = 1, Bz = 0.
SweepSchedule default_tfim_sweep(int n, double T, double dt);

/// One recorded point of a trajectory.
struct Sample {
  double t = 0.0;
  Params params;
  double energy = 0.0;
};

/// Single instantaneous Pauli error.
struct NoiseEvent {
  double t_apply = 0.0;
  int site = 0;
  Axis axis = Axis::Y;
  bool enabled = true;
};

/// Grid index at which an engine applies the event: the step boundary nearest
/// to t_apply, counted from t0. Returns nullopt when disabled or outside window.
std::optional<int> noise_step(const NoiseEvent& noise, double t0, double t1, double dt);

/// Local orthonormal basis per site: column 0 is the reference state, column 1
/// its flip. Basis index 0 on every site is the reference product state.
struct ProductBasis {
  std::vector<Eigen::Matrix2cd> local;

  int size() const { return static_cast<int>(local.size()); }
  Eigen::Vector2cd reference(int site) const { return local[site].col(0); }
  /// Throws InputError when some local basis is not orthonormal.
  void check_orthonormal(double tol = 1e-10) const;

  /// |-> on every site (Bx-only ground state); flip is |+>.
  static ProductBasis x_minus(int n);
  /// |0> = spin up on every site.
  static ProductBasis z_up(int n);
  /// Up on even sites, down on odd sites (up-down-...).
  static ProductBasis neel(int n);
  /// Down on even sites, up on odd sites.
  static ProductBasis anti_neel(int n);
  static std::optional<ProductBasis> named(std::string_view name, int n);
};

/// p_k for k = 0..kMax and the remaining weight above kMax.
struct ExcitationPopulations {
  std::vector<double> p;
  double rest = 0.0;

  double total() const;
};

/// Recovers p_0..p_n from evaluations G(theta_j) = sum_k p_k exp(i k theta_j)
/// at theta_j = 2 pi j / (n + 1).
ExcitationPopulations populations_from_generating_function(
    const std::vector<std::complex<double>>& values, int k_max);

Eigen::Matrix2cd pauli(Axis a);

enum class Engine { Exact, MPS, FreeFermion };
std::string_view to_string(Engine e);
std::optional<Engine> engine_from_string(std::string_view s);

/// T as a function of n: T = scale * n^power. Parsed from "n^2/40", "n^2*0.05",
/// "0.5*n^2" or a plain number.
struct DurationRule {
  double scale = 1.0;
  double power = 0.0;
  std::string text;

  double operator()(int n) const;
  static std::optional<DurationRule> parse(std::string_view text);
};

struct NoiseTemplate {
  bool enabled = true;
  Axis axis = Axis::Y;
  /// Site index; nullopt means floor(n / 2).
  std::optional<int> site;
  /// Fraction of the total duration; overridden by `time` when set.
  double time_fraction = 0.05;
  std::optional<double> time;
};

struct ExperimentConfig {
  std::string name = "experiment";
  Family family = Family::ZZXZ;
  std::vector<int> sizes{10};
  std::vector<Params> vertices;
  /// Total schedule duration T as a function of n, split evenly across legs.
  DurationRule duration{1.0, 0.0, "1"};
  double dt = 0.01;
  NoiseTemplate noise;
  /// nullopt when the config named an engine we do not know.
  std::optional<Engine> engine = Engine::Exact;
  std::string engine_name = "exact";
  int exact_max_sites = 14;
  double mps_cutoff = 1e-8;
  int mps_max_bond = 512;
  int trotter_order = 2;
  /// Keep the final MPS of every run; exported as <stem>.mps.
  bool mps_checkpoint = false;
  /// Initial product state name ("x_minus", "neel", ...) or "ground".
  std::string initial_state = "x_minus";
  /// Product state the k-excitation populations refer to.
  std::string reference_state = "x_minus";
  int k_max = 3;
  bool observe_delta_e = true;
  bool observe_fidelity = false;
  bool observe_populations = false;
  bool observe_spectrum = false;
  int record_every = 10;
  std::uint64_t seed = 1;
  std::string output_dir = "out";
  std::string output_format = "csv";

  SweepSchedule schedule_for(int n) const;
  NoiseEvent noise_for(int n) const;
};

/// Every violated invariant, one message each. Never throws.
std::vector<std::string> validate(const ExperimentConfig& config);

/// Parameter vertices of the documented default paths.
namespace paths {
/// (J=0, Bx=1, Bz=0) -> (J=3, Bx=1, Bz=1).
std::vector<Params> zzxz_sweep();
/// (J=0, Bx=1) -> (J=3, Bx=1) at Bz = 0.
std::vector<Params> tfim_sweep();
/// Closed triangle inside the disordered phase (J/Bx < 1 throughout).
std::vector<Params> disordered_loop();
/// Closed triangle whose middle vertex lies beyond the critical line.
std::vector<Params> critical_loop();
/// Closed triangle in the antiferromagnetic phase starting at pure ZZ.
std::vector<Params> afm_loop();
/// Closed triangle in the disordered phase of the Heisenberg chain.
std::vector<Params> heisenberg_loop();
std::optional<std::vector<Params>> named(std::string_view name);
}  // namespace paths

}  // namespace adiaerr
