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

#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "adiaerr/models.hpp"

/// Gaussian (free-fermion) engine for the transverse-field Ising line.
///
/// Jordan-Wigner with an X string, so that both X_i and Z_i Z_{i+1} are
/// quadratic:
///
///   c_{2i}   = (prod_{j<i} X_j) Z_i
///   c_{2i+1} = (prod_{j<i} X_j) Y_i
///
/// which gives X_i = i c_{2i} c_{2i+1} and Z_i Z_{i+1} = i c_{2i+1} c_{2i+2}.
/// H = (i/4) sum_{kl} h_{kl} c_k c_l with h real antisymmetric, and the
/// covariance matrix is Gamma_{kl} = (i/2) <[c_k, c_l]>. The Fock vacuum
/// (a_i = (c_{2i} + i c_{2i+1}) / 2) is |-> on every site.
namespace adiaerr::freefermion {

struct MajoranaHamiltonian {
  int n = 0;
  Eigen::MatrixXd h;
  Eigen::SparseMatrix<double, Eigen::RowMajor> sparse;
  /// h_{k,k+1}; the nearest-neighbour chain makes h tridiagonal in this ordering.
  Eigen::VectorXd superdiag;
};

struct CovarianceState {
  int n = 0;
  Eigen::MatrixXd gamma;
};

/// Throws UnsupportedModel unless the model is ZZXZ with Bz = 0.
MajoranaHamiltonian jw_tfim(const ModelSpec& model);

/// h = O (+)_k [[0, eps_k], [-eps_k, 0]] O^T with eps ascending and O orthogonal.
struct CanonicalForm {
  Eigen::MatrixXd O;
  Eigen::VectorXd eps;
  int zero_modes = 0;
};

CanonicalForm canonical_form(const Eigen::MatrixXd& h);

struct GroundState {
  CovarianceState state;
  double energy = 0.0;
  /// Exact zero modes were present; the even-parity state was chosen.
  bool zero_mode_degenerate = false;
};

GroundState ground_covariance(const MajoranaHamiltonian& h);

/// Nonnegative single-particle energies omega_k, ascending, n values.
std::vector<double> single_particle_energies(const MajoranaHamiltonian& h);

/// <H> = (1/4) sum_{kl} h_{kl} Gamma_{kl}.
double energy_cov(const CovarianceState& state, const MajoranaHamiltonian& h);

/// Product of X eigenstates; sign[i] = <X_i> = +-1. All -1 is the vacuum.
CovarianceState x_product_covariance(const std::vector<int>& x_signs);
CovarianceState vacuum(int n);

/// Conjugation by sigma^axis_site maps every Majorana to +- itself:
///   X_i flips c_{2i}, c_{2i+1};
///   Z_i flips c_{2i+1} and every c_k with k >= 2i+2;
///   Y_i flips c_{2i} and every c_k with k >= 2i+2.
CovarianceState apply_pauli_error_cov(const CovarianceState& state, int site, Axis axis);

/// Pfaffian of a real antisymmetric matrix (Parlett-Reid with pivoting).
double pfaffian(Eigen::MatrixXd a);

/// +1 for even fermion number, -1 for odd: (-1)^n sign Pf(Gamma).
int fermion_parity(const CovarianceState& state);

/// max |Gamma Gamma^T - 1|; zero for a pure state.
double purity_defect(const CovarianceState& state);
/// max |Gamma + Gamma^T|.
double antisymmetry_defect(const CovarianceState& state);

/// Applies exp(scale * h) to the columns of m, h tridiagonal antisymmetric with
/// the given superdiagonal. Taylor series, sub-stepped so each piece has norm
/// below 1/2.
Eigen::MatrixXd expm_apply(const Eigen::VectorXd& superdiag, const Eigen::MatrixXd& m,
                           double scale);

struct EvolveOptions {
  int record_every = 1;
  std::function<void(double t, const CovarianceState&, const MajoranaHamiltonian&)> observer;
};

struct Trajectory {
  std::vector<Sample> samples;
  CovarianceState final_state;
  double max_antisymmetry_defect = 0.0;
};

/// Gamma <- R Gamma R^T per step with R = exp(h(t_mid) dt), the Heisenberg
/// flow dc/dt = h c of the Majorana operators.
Trajectory evolve_covariance(CovarianceState state, const SweepSchedule& schedule, double t0,
                             double t1, const std::optional<NoiseEvent>& noise = std::nullopt,
                             const EvolveOptions& options = {});

}  // namespace adiaerr::freefermion
