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

#include "adiaerr/exact.hpp"

#include <bit>
#include <cmath>

#include "gtest/gtest.h"

#include "adiaerr/errors.hpp"
#include "oracle.hpp"

using namespace adiaerr;
using namespace adiaerr::exact;
using cd = std::complex<double>;

namespace {

std::vector<Eigen::Vector2cd> reference_vectors(const ProductBasis& b) {
  std::vector<Eigen::Vector2cd> v;
  for (int i = 0; i < b.size(); ++i) v.push_back(b.reference(i));
  return v;
}

}  // namespace

TEST(exact, dense_hamiltonian_matches_oracle) {
  for (Family f : {Family::ZZXZ, Family::HeisenbergX}) {
    const ModelSpec m{f, 5, {0.8, 1.1, f == Family::ZZXZ ? -0.6 : 0.0, f == Family::ZZXZ ? 0.0 : 0.3}};
    const Eigen::MatrixXd h = build_dense(m);
    EXPECT_LT((h.cast<cd>() - oracle::hamiltonian(m)).norm(), 1e-12) << to_string(f);
  }
}

TEST(exact, matrix_free_action_matches_dense) {
  const ModelSpec m{Family::HeisenbergX, 6, {0.9, 0.7, 0.0, -0.4}};
  const HamiltonianAction action(m);
  const Eigen::VectorXcd psi = oracle::random_state(6, 3);
  Eigen::VectorXcd out;
  action.apply(psi, out);
  EXPECT_LT((out - oracle::hamiltonian(m) * psi).norm(), 1e-12);
}

TEST(exact, product_state_energies) {
  const int n = 7;
  EXPECT_NEAR(energy(product_state(ProductBasis::x_minus(n)), {Family::ZZXZ, n, {0, 1, 0, 0}}),
              -n, 1e-12);
  EXPECT_NEAR(energy(product_state(ProductBasis::neel(n)), {Family::ZZXZ, n, {1, 0, 0, 0}}),
              -(n - 1), 1e-12);
  EXPECT_NEAR(energy(product_state(ProductBasis::z_up(n)), {Family::ZZXZ, n, {1, 0, 0, 0}}), n - 1,
              1e-12);
}

TEST(exact, product_state_matches_oracle) {
  const ProductBasis b = ProductBasis::x_minus(4);
  const DenseState s = product_state(b);
  EXPECT_LT((s.amplitudes - oracle::product(reference_vectors(b))).norm(), 1e-14);
  EXPECT_NEAR(s.norm(), 1.0, 1e-14);
}

TEST(exact, pauli_application_matches_oracle_and_is_involutive) {
  const int n = 5;
  DenseState s{n, oracle::random_state(n, 11)};
  for (Axis a : {Axis::X, Axis::Y, Axis::Z}) {
    for (int site = 0; site < n; ++site) {
      const DenseState once = apply_pauli(s, site, a);
      EXPECT_LT((once.amplitudes - oracle::pauli_on(n, site, a) * s.amplitudes).norm(), 1e-14);
      const DenseState twice = apply_pauli(once, site, a);
      EXPECT_EQ(twice.amplitudes, s.amplitudes);
    }
  }
}

TEST(exact, taylor_action_matches_eigendecomposition) {
  const ModelSpec m{Family::ZZXZ, 6, {1.3, 0.9, 0.5, 0.0}};
  const Eigen::VectorXcd psi = oracle::random_state(6, 5);
  for (double t : {0.01, 0.3, 2.0}) {
    const Eigen::VectorXcd got = expm_apply(HamiltonianAction(m), psi, cd(0, -t));
    const Eigen::VectorXcd want = oracle::propagator(oracle::hamiltonian(m), t) * psi;
    EXPECT_LT((got - want).norm(), 1e-12) << "t=" << t;
  }
}

TEST(exact, constant_schedule_is_exact_propagation) {
  const Params p{0.7, 1.0, 0.4, 0.0};
  const SweepSchedule s{Family::ZZXZ, 5, {p, p}, 2.0, 0.05};
  const DenseState s0{5, oracle::random_state(5, 8)};
  const Trajectory traj = evolve_dense(s0, s, 0.0, 2.0);
  const Eigen::VectorXcd want =
      oracle::propagator(oracle::hamiltonian({Family::ZZXZ, 5, p}), 2.0) * s0.amplitudes;
  EXPECT_LT((traj.final_state.amplitudes - want).norm(), 1e-11);
  for (const auto& sample : traj.samples) EXPECT_NEAR(sample.energy, traj.samples[0].energy, 1e-11);
}

TEST(exact, evolution_preserves_norm) {
  const SweepSchedule s{Family::ZZXZ, 8, paths::zzxz_sweep(), 5.0, 0.01};
  const Trajectory traj = evolve_dense(product_state(ProductBasis::x_minus(8)), s, 0.0, 5.0);
  EXPECT_LT(traj.max_norm_drift, 1e-10);
  EXPECT_NEAR(traj.final_state.norm(), 1.0, 1e-10);
  EXPECT_EQ(traj.samples.size(), 501u);
}

TEST(exact, midpoint_rule_converges_quadratically) {
  std::vector<double> finals;
  for (double dt : {0.08, 0.04, 0.02}) {
    const SweepSchedule s{Family::ZZXZ, 6, paths::zzxz_sweep(), 4.0, dt};
    finals.push_back(evolve_dense(product_state(ProductBasis::x_minus(6)), s, 0.0, 4.0)
                         .samples.back()
                         .energy);
  }
  const double ratio = std::abs(finals[0] - finals[1]) / std::abs(finals[1] - finals[2]);
  EXPECT_GT(ratio, 3.5);
  EXPECT_LT(ratio, 4.5);
}

TEST(exact, noise_is_applied_on_the_time_grid) {
  const SweepSchedule s{Family::ZZXZ, 6, paths::zzxz_sweep(), 2.0, 0.01};
  const DenseState s0 = product_state(ProductBasis::x_minus(6));
  const NoiseEvent e{0.5, 3, Axis::Y, true};
  const Trajectory clean = evolve_dense(s0, s, 0.0, 2.0);
  const Trajectory noisy = evolve_dense(s0, s, 0.0, 2.0, e);
  ASSERT_EQ(clean.samples.size(), noisy.samples.size());
  for (size_t k = 0; k < clean.samples.size(); ++k) {
    const double de = noisy.samples[k].energy - clean.samples[k].energy;
    if (clean.samples[k].t < 0.5 - 1e-9) {
      EXPECT_EQ(de, 0.0) << "t=" << clean.samples[k].t;
    } else {
      EXPECT_GT(de, 0.1) << "t=" << clean.samples[k].t;
    }
  }
}

TEST(exact, single_x_basis_flip_costs_two_field_units) {
  // H = sum X_i from its ground state: Y or Z on any site raises E by 2, X leaves it.
  const Params p{0.0, 1.0, 0.0, 0.0};
  const SweepSchedule s{Family::ZZXZ, 8, {p, p}, 1.0, 0.01};
  const DenseState s0 = product_state(ProductBasis::x_minus(8));
  const double e0 = -8.0;
  for (Axis a : {Axis::X, Axis::Y, Axis::Z}) {
    const Trajectory t = evolve_dense(s0, s, 0.0, 1.0, NoiseEvent{0.0, 4, a, true});
    const double want = a == Axis::X ? 0.0 : 2.0;
    EXPECT_NEAR(t.samples.front().energy - e0, want, 1e-12);
    EXPECT_NEAR(t.samples.back().energy - e0, want, 1e-10);
  }
}

TEST(exact, neel_flip_costs_four_couplings_in_the_bulk) {
  const int n = 8;
  const ModelSpec m{Family::ZZXZ, n, {1.0, 0.0, 0.0, 0.0}};
  const DenseState neel = product_state(ProductBasis::neel(n));
  const double e0 = energy(neel, m);
  for (int site = 1; site + 1 < n; ++site) {
    EXPECT_NEAR(energy(apply_pauli(neel, site, Axis::X), m) - e0, 4.0, 1e-12);
  }
  EXPECT_NEAR(energy(apply_pauli(neel, 0, Axis::X), m) - e0, 2.0, 1e-12);
}

TEST(exact, excitation_populations_match_rotated_popcount_oracle) {
  const int n = 6;
  const ProductBasis b = ProductBasis::x_minus(n);
  const DenseState s{n, oracle::random_state(n, 21)};
  // Oracle: rotate into the reference basis site by site, then bin |amp|^2 by
  // the number of flipped sites.
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(1 << n, 1 << n);
  for (int i = 0; i < n; ++i) u = oracle::embed(n, i, b.local[i].adjoint()) * u;
  const Eigen::VectorXcd r = u * s.amplitudes;
  std::vector<double> want(n + 1, 0.0);
  for (int idx = 0; idx < (1 << n); ++idx) want[std::popcount(static_cast<unsigned>(idx))] += std::norm(r(idx));

  const ExcitationPopulations got = excitation_populations(s, b, 3);
  for (int k = 0; k <= 3; ++k) EXPECT_NEAR(got.p[k], want[k], 1e-12);
  EXPECT_NEAR(got.rest, want[4] + want[5] + want[6], 1e-12);
  EXPECT_NEAR(got.total(), 1.0, 1e-12);
}

TEST(exact, excitation_populations_of_reference_and_single_flip) {
  const ProductBasis b = ProductBasis::neel(6);
  const DenseState s = product_state(b);
  EXPECT_NEAR(excitation_populations(s, b, 2).p[0], 1.0, 1e-14);
  EXPECT_NEAR(excitation_populations(apply_pauli(s, 2, Axis::X), b, 2).p[1], 1.0, 1e-14);
  ProductBasis bad = b;
  bad.local[0](1, 0) = 0.3;
  EXPECT_THROW(excitation_populations(s, bad, 2), InputError);
}

TEST(exact, ground_state_fidelity_and_spectrum) {
  const ModelSpec m{Family::ZZXZ, 6, {1.0, 0.8, 0.3, 0.0}};
  const Diagonalization d = diagonalize(m);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(oracle::hamiltonian(m));
  EXPECT_LT((d.values - es.eigenvalues()).cwiseAbs().maxCoeff(), 1e-11);
  const DenseState ground{6, d.vectors.col(0).cast<cd>()};
  EXPECT_NEAR(fidelity(ground, d), 1.0, 1e-12);
  const SpectrumSnapshot snap = eigen_populations(ground, d);
  EXPECT_NEAR(snap.total_population(), 1.0, 1e-12);
  EXPECT_NEAR(snap.groups.front().population, 1.0, 1e-12);
}

TEST(exact, level_grouping_counts_degeneracy) {
  // Pure ZZ on 4 sites: levels -3 (x2), -1 (x6), 1 (x6), 3 (x2).
  const Diagonalization d = diagonalize({Family::ZZXZ, 4, {1.0, 0.0, 0.0, 0.0}});
  const auto groups = group_levels(d.values);
  ASSERT_EQ(groups.size(), 4u);
  const std::vector<int> deg{2, 6, 6, 2};
  for (int g = 0; g < 4; ++g) {
    EXPECT_EQ(groups[g].degeneracy, deg[g]);
    EXPECT_NEAR(groups[g].energy, -3.0 + 2.0 * g, 1e-12);
  }
}

TEST(exact, size_cap_raises_capacity_error) {
  EXPECT_THROW(build_dense({Family::ZZXZ, 12, {1, 1, 0, 0}}, 10), CapacityError);
  const SweepSchedule s{Family::ZZXZ, 12, paths::zzxz_sweep(), 1.0, 0.1};
  EvolveOptions o;
  o.max_sites = 10;
  EXPECT_THROW(evolve_dense(product_state(ProductBasis::x_minus(12)), s, 0.0, 1.0, std::nullopt, o),
               CapacityError);
}
