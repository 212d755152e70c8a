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

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "adiaerr/models.hpp"

/// Dense state-vector engine. Basis index bit i holds site i, 0 = spin up.
namespace adiaerr::exact {

inline constexpr int kDefaultMaxSites = 14;

struct DenseState {
  int n = 0;
  Eigen::VectorXcd amplitudes;

  double norm() const { return amplitudes.norm(); }
};

DenseState product_state(const ProductBasis& basis);
DenseState apply_pauli(const DenseState& state, int site, Axis axis);

/// H as a real symmetric matrix (every supported family is real in the Z basis).
/// Throws CapacityError when n exceeds max_sites.
Eigen::MatrixXd build_dense(const ModelSpec& model, int max_sites = kDefaultMaxSites);

/// Matrix-free H|psi>, grouped by the X/Y flip pattern of each Pauli string.
class HamiltonianAction {
 public:
  explicit HamiltonianAction(const ModelSpec& model);

  void apply(const Eigen::VectorXcd& in, Eigen::VectorXcd& out) const;
  double norm_bound() const { return norm_bound_; }

 private:
  struct FlipGroup {
    std::uint32_t flip_mask;
    std::vector<std::pair<std::complex<double>, std::uint32_t>> terms;  // (coeff, sign mask)
  };
  int n_;
  Eigen::VectorXd diagonal_;
  std::vector<FlipGroup> groups_;
  double norm_bound_;
};

double energy(const DenseState& state, const ModelSpec& model);

/// exp(factor * H) psi by a Taylor series, sub-stepped so each factor*H has
/// norm bound below one and summed until terms fall under machine precision.
Eigen::VectorXcd expm_apply(const HamiltonianAction& h, const Eigen::VectorXcd& psi,
                            std::complex<double> factor);

struct EvolveOptions {
  int record_every = 1;
  int max_sites = kDefaultMaxSites;
  /// Called at t0, every record_every steps and at t1.
  std::function<void(double t, const DenseState&, const ModelSpec&)> observer;
};

struct Trajectory {
  std::vector<Sample> samples;
  DenseState final_state;
  double max_norm_drift = 0.0;
};

/// Steps exp(-i H(t_mid) dt) across [t0, t1]. The noise Pauli acts on the
/// state at its grid time, before the step that starts there.
Trajectory evolve_dense(DenseState state, const SweepSchedule& schedule, double t0, double t1,
                        const std::optional<NoiseEvent>& noise = std::nullopt,
                        const EvolveOptions& options = {});

struct EigenGroup {
  double energy = 0.0;
  int degeneracy = 0;
  double population = 0.0;
};

/// Eigenvalues within rel_tol * max(1, |E|) of their neighbour share a group.
std::vector<EigenGroup> group_levels(const Eigen::VectorXd& sorted_values, double rel_tol = 1e-9);

struct SpectrumSnapshot {
  double time = 0.0;
  std::vector<double> eigenvalues;
  std::vector<EigenGroup> groups;

  double total_population() const;
};

struct Diagonalization {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};

Diagonalization diagonalize(const ModelSpec& model, int max_sites = kDefaultMaxSites);

SpectrumSnapshot eigen_populations(const DenseState& state, const Diagonalization& diag,
                                   double time = 0.0);
SpectrumSnapshot eigen_populations(const DenseState& state, const ModelSpec& model,
                                   double time = 0.0);

/// p_k is the weight on basis states that differ from the reference product at
/// exactly k sites, measured in each site's reference basis.
ExcitationPopulations excitation_populations(const DenseState& state, const ProductBasis& reference,
                                             int k_max);

/// Squared projection onto the (possibly degenerate) ground space.
double fidelity(const DenseState& state, const Diagonalization& diag);
double fidelity(const DenseState& state, const ModelSpec& model);

}  // namespace adiaerr::exact
