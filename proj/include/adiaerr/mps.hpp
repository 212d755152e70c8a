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
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "adiaerr/models.hpp"

/// Matrix product states and TEBD on open chains with physical dimension 2.
namespace adiaerr::mps {

/// A[s] for s = 0 (up) and 1 (down); each is chi_left x chi_right.
using SiteTensor = std::array<Eigen::MatrixXcd, 2>;

struct Truncation {
  /// Largest discarded weight (sum of squared singular values over the
  /// total) allowed per bond update.
  double cutoff = 1e-8;
  int max_bond = 512;
};

enum class CenterMoves { Left, Right };

class Mps {
 public:
  Mps() = default;

  static Mps product(const std::vector<Eigen::Vector2cd>& local);
  /// Reference state (column 0) of every local basis.
  static Mps product(const ProductBasis& basis);
  /// Random complex tensors with bond dimensions capped at max_bond,
  /// normalized with the center on site 0.
  static Mps random(int n, int max_bond, std::uint64_t seed);

  int size() const { return static_cast<int>(sites_.size()); }
  int center() const { return center_; }
  const SiteTensor& site(int i) const { return sites_.at(i); }
  /// Bond between sites b and b + 1.
  int bond_dimension(int b) const { return static_cast<int>(sites_.at(b)[0].cols()); }
  std::vector<int> bond_dimensions() const;
  int max_bond_dimension() const;

  /// QR / LQ moves until the orthogonality center sits on `target`.
  void move_center(int target);
  /// <psi|psi> by full contraction (no canonical form assumed).
  double norm() const;
  void normalize();
  /// Deviation from the isometry condition of `i` on its side of the center
  /// (left-normalized below, right-normalized above). Zero on the center.
  double isometry_defect(int i) const;

  /// op acting on the physical index of one site. op must be unitary to keep
  /// the canonical form.
  void apply_single_site(int i, const Eigen::Matrix2cd& op);
  /// 4x4 gate on sites (b, b+1), basis index 2 s_b + s_{b+1}. Moves the center
  /// to b or b+1 first, splits by SVD, truncates, and leaves the center on the
  /// side given by `moves`. Returns the discarded weight. The kept singular
  /// values are rescaled to unit norm when `renormalize` is set.
  double apply_two_site(int b, const Eigen::Matrix4cd& gate, const Truncation& trunc,
                        CenterMoves moves, bool renormalize = true);

  /// Amplitudes in the exact-engine ordering (bit i = site i); n <= 20.
  Eigen::VectorXcd to_dense() const;
  /// <this|other>.
  std::complex<double> overlap(const Mps& other) const;
  /// <psi| prod_i ops[i] |psi> without normalization.
  std::complex<double> expect_product(const std::vector<Eigen::Matrix2cd>& ops) const;

  /// Needed by the checkpoint reader; center must be consistent with tensors.
  static Mps from_tensors(std::vector<SiteTensor> sites, int center);

 private:
  std::vector<SiteTensor> sites_;
  int center_ = 0;
};

/// <psi|H|psi> / <psi|psi> by a nearest-neighbour MPO contraction.
double energy_mps(const Mps& state, const ModelSpec& model);

/// p_k from the generating function G(theta) = <psi| prod_i (P_same + e^{i theta} P_flip) |psi>
/// evaluated at n + 1 phases and inverted by a discrete Fourier transform.
/// Throws InputError when the reference basis is not orthonormal.
ExcitationPopulations hamming_populations(const Mps& state, const ProductBasis& reference,
                                          int k_max);

/// Parity and length fraction of one layer of bond gates within a step.
struct TrotterLayer {
  bool odd = false;
  double fraction = 1.0;
};

/// Gate layers of one Trotter step: order 2 is even(1/2) odd(1) even(1/2);
/// order 4 is the five-fold Suzuki composition of order-2 steps.
struct TrotterPlan {
  int order = 2;
  std::vector<TrotterLayer> layers;

  static TrotterPlan make(int n, int order);
};

/// Two-site generator on bond b: bond terms plus single-site terms shared
/// evenly between the bonds touching each site.
Eigen::Matrix4cd bond_hamiltonian(const ModelSpec& model, int b);

/// Dense product of the plan's layer exponentials, exp(-i H tau) up to
/// Trotter error (exp(-H tau) when imaginary). For tests at small n.
Eigen::MatrixXcd trotter_step_dense(const ModelSpec& model, const TrotterPlan& plan, double tau,
                                    bool imaginary = false);

struct TebdOptions {
  Truncation truncation;
  int order = 2;
  /// Trotter steps per grid step, all using the grid step's midpoint H.
  int substeps = 1;
  int record_every = 1;
  /// Called at t0, every record_every steps and at t1.
  std::function<void(double t, const Mps&, const ModelSpec&)> observer;
};

struct BondLogEntry {
  double t = 0.0;
  int max_chi = 1;
  double step_truncation = 0.0;
  double cumulative_truncation = 0.0;
};

struct TebdTrajectory {
  std::vector<Sample> samples;
  std::vector<BondLogEntry> bond_log;
  Mps final_state;
  double cumulative_truncation = 0.0;
  int max_chi = 1;
};

/// Real-time TEBD across [t0, t1] with H sampled at each step midpoint. The
/// noise Pauli is a single-site gate at its grid time. Throws CapacityError
/// (carrying t) when a bond would need more than max_bond states.
TebdTrajectory tebd_evolve(Mps state, const SweepSchedule& schedule, double t0, double t1,
                           const std::optional<NoiseEvent>& noise = std::nullopt,
                           const TebdOptions& options = {});

struct GroundOptions {
  std::vector<double> dtau{0.1, 0.05, 0.02, 0.01, 0.005};
  int order = 4;
  int max_steps_per_stage = 4000;
  int check_every = 5;
  int max_bond = 512;
  std::optional<Mps> initial;
};

struct GroundResult {
  Mps state;
  double energy = 0.0;
  int steps = 0;
  double final_slope = 0.0;
};

/// Imaginary-time TEBD through a decreasing dtau ladder. Each stage runs until
/// |dE| per unit imaginary time drops below convergence_tol; the last stage
/// failing to do so throws ConvergenceError with the last slope.
GroundResult ground_state_imaginary_tebd(const ModelSpec& model, double cutoff,
                                         double convergence_tol, const GroundOptions& options = {});

/// Binary checkpoint: "ADIAMPS1", u32 version, i32 n, i32 center, f64 cutoff,
/// f64 time, i32 chi[n + 1], then per site and physical index the chi_l x chi_r
/// block column-major as (re, im) f64 pairs. Little-endian.
struct Checkpoint {
  Mps state;
  double cutoff = 1e-8;
  double time = 0.0;
};

void save_checkpoint(const std::string& path, const Checkpoint& checkpoint);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace adiaerr::mps
