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

#include "adiaerr/freefermion.hpp"

#include <cmath>
#include <functional>
#include <numeric>

#include "gtest/gtest.h"

#include "adiaerr/errors.hpp"
#include "adiaerr/exact.hpp"
#include "oracle.hpp"

using namespace adiaerr;
using namespace adiaerr::freefermion;
using cd = std::complex<double>;

namespace {

// Dense Majorana operators from the string definition:
// c_{2i} = X_0 ... X_{i-1} Z_i and c_{2i+1} = X_0 ... X_{i-1} Y_i.
std::vector<Eigen::MatrixXcd> majoranas(int n) {
  std::vector<Eigen::MatrixXcd> c;
  for (int i = 0; i < n; ++i) {
    Eigen::MatrixXcd string = Eigen::MatrixXcd::Identity(1 << n, 1 << n);
    for (int j = 0; j < i; ++j) string = string * oracle::pauli_on(n, j, Axis::X);
    c.push_back(string * oracle::pauli_on(n, i, Axis::Z));
    c.push_back(string * oracle::pauli_on(n, i, Axis::Y));
  }
  return c;
}

Eigen::MatrixXd covariance_of(const Eigen::VectorXcd& psi, const std::vector<Eigen::MatrixXcd>& c) {
  const int dim = static_cast<int>(c.size());
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) {
    for (int l = 0; l < dim; ++l) {
      if (k == l) continue;
      const cd v = cd(0, 0.5) * psi.dot((c[k] * c[l] - c[l] * c[k]) * psi);
      EXPECT_LT(std::abs(v.imag()), 1e-12);
      g(k, l) = v.real();
    }
  }
  return g;
}

Eigen::MatrixXd random_antisymmetric(int dim, unsigned seed) {
  std::srand(seed);
  const Eigen::MatrixXd a = Eigen::MatrixXd::Random(dim, dim);
  return a - a.transpose();
}

}  // namespace

TEST(freefermion, majorana_oracle_satisfies_clifford_algebra) {
  const auto c = majoranas(3);
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(8, 8);
  for (size_t k = 0; k < c.size(); ++k) {
    for (size_t l = 0; l < c.size(); ++l) {
      const Eigen::MatrixXcd anti = c[k] * c[l] + c[l] * c[k];
      EXPECT_LT((anti - (k == l ? 2.0 : 0.0) * id).norm(), 1e-13);
    }
  }
}

TEST(freefermion, quadratic_form_reproduces_spin_hamiltonian) {
  const int n = 4;
  const auto c = majoranas(n);
  for (const Params& p : {Params{0.0, 1.0, 0, 0}, Params{1.7, -0.6, 0, 0}, Params{1.0, 1.0, 0, 0}}) {
    const ModelSpec m{Family::ZZXZ, n, p};
    const MajoranaHamiltonian h = jw_tfim(m);
    Eigen::MatrixXcd dense = Eigen::MatrixXcd::Zero(1 << n, 1 << n);
    for (int k = 0; k < 2 * n; ++k) {
      for (int l = 0; l < 2 * n; ++l) dense += cd(0, 0.25) * h.h(k, l) * c[k] * c[l];
    }
    EXPECT_LT((dense - oracle::hamiltonian(m)).norm(), 1e-12);
    EXPECT_LT((h.h + h.h.transpose()).norm(), 1e-15);
    EXPECT_LT((Eigen::MatrixXd(h.sparse) - h.h).norm(), 1e-15);
  }
}

TEST(freefermion, vacuum_is_x_minus_product) {
  const int n = 4;
  const auto c = majoranas(n);
  const Eigen::VectorXcd psi = exact::product_state(ProductBasis::x_minus(n)).amplitudes;
  EXPECT_LT((vacuum(n).gamma - covariance_of(psi, c)).norm(), 1e-12);
}

TEST(freefermion, pauli_errors_match_dense_conjugation) {
  const int n = 4;
  const auto c = majoranas(n);
  const SweepSchedule s = default_tfim_sweep(n, 2.0, 0.01);
  const auto dense = exact::evolve_dense(exact::product_state(ProductBasis::x_minus(n)), s, 0, 2.0);
  const auto cov = evolve_covariance(vacuum(n), s, 0, 2.0);
  const Eigen::VectorXcd psi = dense.final_state.amplitudes;
  EXPECT_LT((cov.final_state.gamma - covariance_of(psi, c)).norm(), 1e-10);
  for (int site = 0; site < n; ++site) {
    for (Axis a : {Axis::X, Axis::Y, Axis::Z}) {
      const Eigen::VectorXcd flipped = oracle::pauli_on(n, site, a) * psi;
      const CovarianceState got = apply_pauli_error_cov(cov.final_state, site, a);
      EXPECT_LT((got.gamma - covariance_of(flipped, c)).norm(), 1e-10)
          << "site " << site << " axis " << to_string(a);
    }
  }
}

TEST(freefermion, ground_energy_matches_exact_diagonalization) {
  for (int n : {4, 6, 8}) {
    for (double J : {0.0, 0.5, 1.0, 3.0}) {
      const ModelSpec m{Family::ZZXZ, n, {J, 1.0, 0.0, 0.0}};
      const GroundState g = ground_covariance(jw_tfim(m));
      const double want = exact::diagonalize(m).values(0);
      EXPECT_NEAR(g.energy, want, 1e-10) << "n=" << n << " J=" << J;
      EXPECT_LT(purity_defect(g.state), 1e-10);
    }
  }
  EXPECT_NEAR(ground_covariance(jw_tfim({Family::ZZXZ, 30, {0.0, 1.0, 0.0, 0.0}})).energy, -30.0,
              1e-10);
}

TEST(freefermion, canonical_form_is_orthogonal_block_diagonalization) {
  const MajoranaHamiltonian h = jw_tfim({Family::ZZXZ, 6, {1.3, 0.8, 0.0, 0.0}});
  const CanonicalForm cf = canonical_form(h.h);
  const int dim = 12;
  EXPECT_LT((cf.O.transpose() * cf.O - Eigen::MatrixXd::Identity(dim, dim)).norm(), 1e-12);
  Eigen::MatrixXd blocks = Eigen::MatrixXd::Zero(dim, dim);
  for (int k = 0; k < 6; ++k) {
    blocks(2 * k, 2 * k + 1) = cf.eps(k);
    blocks(2 * k + 1, 2 * k) = -cf.eps(k);
    if (k > 0) {
      EXPECT_LE(cf.eps(k - 1), cf.eps(k) + 1e-14);
    }
  }
  EXPECT_LT((cf.O * blocks * cf.O.transpose() - h.h).norm(), 1e-11);
  EXPECT_THROW(canonical_form(Eigen::MatrixXd::Ones(4, 4)), InputError);
}

TEST(freefermion, decoupled_modes_have_twice_the_field) {
  const auto w = single_particle_energies(jw_tfim({Family::ZZXZ, 10, {0.0, 1.5, 0.0, 0.0}}));
  ASSERT_EQ(w.size(), 10u);
  for (double e : w) EXPECT_NEAR(e, 3.0, 1e-12);
}

TEST(freefermion, ground_energy_is_minus_half_mode_sum) {
  const MajoranaHamiltonian h = jw_tfim({Family::ZZXZ, 12, {0.9, 1.0, 0.0, 0.0}});
  const auto w = single_particle_energies(h);
  EXPECT_NEAR(ground_covariance(h).energy, -0.5 * std::accumulate(w.begin(), w.end(), 0.0), 1e-11);
}

TEST(freefermion, propagator_action_matches_eigendecomposition) {
  const MajoranaHamiltonian h = jw_tfim({Family::ZZXZ, 5, {1.2, 0.7, 0.0, 0.0}});
  std::srand(4);
  const Eigen::MatrixXd m = Eigen::MatrixXd::Random(10, 3);
  for (double s : {0.01, 0.5}) {
    // exp(h s) = exp(-i (i h) s) with i h Hermitian.
    const Eigen::MatrixXcd want =
        oracle::propagator(cd(0, 1) * h.h.cast<cd>(), s) * m.cast<cd>();
    EXPECT_LT((expm_apply(h.superdiag, m, s).cast<cd>() - want).norm(), 1e-12);
  }
}

TEST(freefermion, sweep_energies_match_exact_engine) {
  const int n = 8;
  const SweepSchedule s = default_tfim_sweep(n, 6.0, 0.01);
  exact::EvolveOptions eo;
  eo.record_every = 25;
  EvolveOptions fo;
  fo.record_every = 25;
  const NoiseEvent noise{0.3, 4, Axis::Y, true};
  const auto want = exact::evolve_dense(exact::product_state(ProductBasis::x_minus(n)), s, 0, 6.0,
                                        noise, eo);
  const auto got = evolve_covariance(vacuum(n), s, 0, 6.0, noise, fo);
  ASSERT_EQ(want.samples.size(), got.samples.size());
  for (size_t k = 0; k < got.samples.size(); ++k) {
    EXPECT_DOUBLE_EQ(got.samples[k].t, want.samples[k].t);
    EXPECT_NEAR(got.samples[k].energy, want.samples[k].energy, 1e-9);
  }
}

TEST(freefermion, evolution_keeps_a_pure_antisymmetric_state) {
  const SweepSchedule s = default_tfim_sweep(24, 12.0, 0.01);
  EvolveOptions o;
  o.record_every = 50;
  double worst = 0.0;
  o.observer = [&](double, const CovarianceState& st, const MajoranaHamiltonian&) {
    worst = std::max({worst, purity_defect(st), antisymmetry_defect(st)});
  };
  const auto traj = evolve_covariance(vacuum(24), s, 0, 12.0, NoiseEvent{0.6, 12, Axis::Y, true}, o);
  EXPECT_LT(worst, 1e-10);
  EXPECT_LT(traj.max_antisymmetry_defect, 1e-10);
}

TEST(freefermion, parity_flips_under_y_and_z_only) {
  const int n = 10;
  const SweepSchedule s = default_tfim_sweep(n, 3.0, 0.01);
  const CovarianceState st = evolve_covariance(vacuum(n), s, 0, 3.0).final_state;
  const int p0 = fermion_parity(vacuum(n));
  EXPECT_EQ(fermion_parity(st), p0);  // the evolution is parity preserving
  for (int site : {0, 4, 9}) {
    EXPECT_EQ(fermion_parity(apply_pauli_error_cov(st, site, Axis::X)), p0);
    EXPECT_EQ(fermion_parity(apply_pauli_error_cov(st, site, Axis::Y)), -p0);
    EXPECT_EQ(fermion_parity(apply_pauli_error_cov(st, site, Axis::Z)), -p0);
  }
}

TEST(freefermion, parity_agrees_with_dense_string_operator) {
  // P = prod_i X_i is the fermion parity for this string convention.
  const int n = 4;
  const SweepSchedule s = default_tfim_sweep(n, 1.0, 0.01);
  const Eigen::VectorXcd psi =
      oracle::pauli_on(n, 1, Axis::Z) *
      exact::evolve_dense(exact::product_state(ProductBasis::x_minus(n)), s, 0, 1.0)
          .final_state.amplitudes;
  Eigen::MatrixXcd parity = Eigen::MatrixXcd::Identity(1 << n, 1 << n);
  for (int i = 0; i < n; ++i) parity = parity * oracle::pauli_on(n, i, Axis::X);
  const double dense_parity = psi.dot(parity * psi).real();
  const auto c = majoranas(n);
  const int got = fermion_parity({n, covariance_of(psi, c)});
  // The vacuum (all |->) has X-product (-1)^n; parity is reported relative to it.
  const int vac = fermion_parity(vacuum(n));
  EXPECT_NEAR(dense_parity * (n % 2 == 0 ? 1 : -1), static_cast<double>(got * vac), 1e-10);
}

TEST(freefermion, pfaffian_matches_closed_forms) {
  Eigen::MatrixXd a = random_antisymmetric(4, 7);
  const double want = a(0, 1) * a(2, 3) - a(0, 2) * a(1, 3) + a(0, 3) * a(1, 2);
  EXPECT_NEAR(pfaffian(a), want, 1e-13);
  for (unsigned seed : {1u, 2u, 3u}) {
    const Eigen::MatrixXd b = random_antisymmetric(10, seed);
    const double pf = pfaffian(b);
    EXPECT_NEAR(pf * pf, b.determinant(), 1e-9 * std::max(1.0, std::abs(b.determinant())));
  }
  Eigen::MatrixXd blocks = Eigen::MatrixXd::Zero(6, 6);
  const double v[3] = {2.0, -0.5, 3.0};
  for (int k = 0; k < 3; ++k) {
    blocks(2 * k, 2 * k + 1) = v[k];
    blocks(2 * k + 1, 2 * k) = -v[k];
  }
  EXPECT_NEAR(pfaffian(blocks), -3.0, 1e-14);
}

TEST(freefermion, brute_force_pfaffian_expansion) {
  // Recursive expansion along the first row as an independent oracle.
  std::function<double(const Eigen::MatrixXd&)> expand = [&](const Eigen::MatrixXd& m) -> double {
    const Eigen::Index d = m.rows();
    if (d == 0) return 1.0;
    double total = 0.0;
    for (Eigen::Index j = 1; j < d; ++j) {
      std::vector<Eigen::Index> keep;
      for (Eigen::Index k = 1; k < d; ++k) {
        if (k != j) keep.push_back(k);
      }
      Eigen::MatrixXd minor(d - 2, d - 2);
      for (size_t r = 0; r < keep.size(); ++r) {
        for (size_t c = 0; c < keep.size(); ++c) minor(r, c) = m(keep[r], keep[c]);
      }
      total += ((j % 2 == 1) ? 1.0 : -1.0) * m(0, j) * expand(minor);
    }
    return total;
  };
  const Eigen::MatrixXd a = random_antisymmetric(8, 42);
  EXPECT_NEAR(pfaffian(a), expand(a), 1e-11);
}

TEST(freefermion, unsupported_models_are_rejected) {
  EXPECT_THROW(jw_tfim({Family::ZZXZ, 6, {1.0, 1.0, 0.5, 0.0}}), UnsupportedModel);
  EXPECT_THROW(jw_tfim({Family::HeisenbergX, 6, {1.0, 1.0, 0.0, 0.0}}), UnsupportedModel);
  const SweepSchedule s{Family::ZZXZ, 6, paths::zzxz_sweep(), 1.0, 0.01};
  EXPECT_THROW(evolve_covariance(vacuum(6), s, 0, 1.0), UnsupportedModel);
  EXPECT_THROW(apply_pauli_error_cov(vacuum(6), 6, Axis::X), InputError);
}
