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

#include <cmath>
#include <numbers>

#include "gtest/gtest.h"

#include "adiaerr/errors.hpp"
#include "oracle.hpp"

using namespace adiaerr;

TEST(models, lerp_hits_endpoints_and_midpoint) {
  const Params a{0.0, 1.0, 0.0, 0.0};
  const Params b{3.0, 1.0, 1.0, 0.5};
  EXPECT_EQ(lerp(a, b, 0.0), a);
  EXPECT_EQ(lerp(a, b, 1.0), b);
  const Params mid = lerp(a, b, 0.5);
  EXPECT_DOUBLE_EQ(mid.J, 1.5);
  EXPECT_DOUBLE_EQ(mid.Bz, 0.5);
  EXPECT_DOUBLE_EQ(mid.Jz, 0.25);
}

TEST(models, params_at_walks_the_legs) {
  SweepSchedule s{Family::ZZXZ, 4, paths::disordered_loop(), 2.0, 0.01};
  EXPECT_EQ(s.num_legs(), 3);
  EXPECT_DOUBLE_EQ(s.total_duration(), 6.0);
  EXPECT_TRUE(s.is_closed_loop());
  EXPECT_EQ(params_at(s, 0.0).params, s.vertices[0]);
  EXPECT_EQ(params_at(s, 2.0).params, s.vertices[1]);
  EXPECT_EQ(params_at(s, 4.0).params, s.vertices[2]);
  EXPECT_EQ(params_at(s, 6.0).params, s.vertices[3]);
  EXPECT_NEAR(params_at(s, 3.0).params.Bz, 0.75, 1e-15);
  EXPECT_THROW(params_at(s, 6.5), std::out_of_range);
  EXPECT_THROW(params_at(s, -0.1), std::out_of_range);
}

TEST(models, steps_between_requires_divisible_window) {
  SweepSchedule s{Family::ZZXZ, 4, paths::zzxz_sweep(), 1.0, 0.01};
  EXPECT_EQ(s.steps_between(0.0, 1.0), 100);
  EXPECT_EQ(s.steps_between(0.25, 0.75), 50);
  s.dt = 0.3;
  EXPECT_THROW(s.steps_between(0.0, 1.0), InputError);
}

TEST(models, term_lists_reproduce_dense_oracle) {
  for (Family f : {Family::ZZXZ, Family::HeisenbergX}) {
    const ModelSpec m{f, 4, {0.7, -1.3, 0.4, 0.9}};
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(16, 16);
    for (const auto& t : m.site_terms()) h += t.coeff * oracle::pauli_on(4, t.site, t.axis);
    for (const auto& t : m.bond_terms()) {
      h += t.coeff * oracle::pauli_on(4, t.site, t.left) * oracle::pauli_on(4, t.site + 1, t.right);
    }
    EXPECT_LT((h - oracle::hamiltonian(m)).norm(), 1e-13) << to_string(f);
  }
}

TEST(models, norm_bound_dominates_spectral_radius) {
  for (Family f : {Family::ZZXZ, Family::HeisenbergX}) {
    for (int trial = 0; trial < 5; ++trial) {
      const ModelSpec m{f, 5, {0.3 * trial - 0.5, 1.0 - 0.2 * trial, 0.1 * trial, 0.4 - 0.2 * trial}};
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(oracle::hamiltonian(m));
      const double radius = es.eigenvalues().cwiseAbs().maxCoeff();
      EXPECT_LE(radius, m.norm_bound() + 1e-12);
    }
  }
}

TEST(models, check_model_rejects_small_or_nonfinite) {
  EXPECT_THROW(check_model({Family::ZZXZ, 1, {}}), InputError);
  EXPECT_THROW(check_model({Family::ZZXZ, 4, {NAN, 1.0, 0.0, 0.0}}), InputError);
  EXPECT_NO_THROW(check_model({Family::ZZXZ, 2, {1.0, 1.0, 0.0, 0.0}}));
}

TEST(models, pauli_algebra) {
  const Eigen::Matrix2cd x = pauli(Axis::X), y = pauli(Axis::Y), z = pauli(Axis::Z);
  const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
  const std::complex<double> i(0, 1);
  for (const auto& p : {x, y, z}) EXPECT_LT((p * p - id).norm(), 1e-15);
  EXPECT_LT((x * y - i * z).norm(), 1e-15);
  EXPECT_LT((y * z - i * x).norm(), 1e-15);
  EXPECT_LT((z * x - i * y).norm(), 1e-15);
  for (Axis a : {Axis::X, Axis::Y, Axis::Z}) {
    EXPECT_LT((pauli(a) - oracle::pauli_matrix(a)).norm(), 1e-15);
  }
}

TEST(models, named_bases_are_orthonormal) {
  for (const char* name : {"x_minus", "z_up", "neel", "anti_neel"}) {
    const auto b = ProductBasis::named(name, 5);
    ASSERT_TRUE(b.has_value()) << name;
    EXPECT_EQ(b->size(), 5);
    EXPECT_NO_THROW(b->check_orthonormal());
  }
  EXPECT_FALSE(ProductBasis::named("x_sideways", 5).has_value());
  const auto x = ProductBasis::x_minus(3);
  // The reference state of x_minus is the -1 eigenvector of X.
  EXPECT_LT((pauli(Axis::X) * x.reference(1) + x.reference(1)).norm(), 1e-15);
  const auto neel = ProductBasis::neel(4);
  EXPECT_NEAR(std::abs(neel.reference(0)(0)), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(neel.reference(1)(1)), 1.0, 1e-15);
}

TEST(models, non_orthonormal_basis_is_rejected) {
  ProductBasis b = ProductBasis::z_up(3);
  b.local[1](0, 1) = 0.5;
  EXPECT_THROW(b.check_orthonormal(), InputError);
}

TEST(models, populations_recovered_from_generating_function) {
  // A known distribution over 0..6 sampled on m = 7 roots of unity.
  const std::vector<double> p{0.3, 0.25, 0.2, 0.1, 0.08, 0.05, 0.02};
  const int m = static_cast<int>(p.size());
  std::vector<std::complex<double>> values(m);
  for (int j = 0; j < m; ++j) {
    const double theta = 2.0 * std::numbers::pi * j / m;
    for (int k = 0; k < m; ++k) values[j] += p[k] * std::polar(1.0, k * theta);
  }
  const auto pops = populations_from_generating_function(values, 3);
  ASSERT_EQ(pops.p.size(), 4u);
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(pops.p[k], p[k], 1e-14);
  EXPECT_NEAR(pops.rest, 0.08 + 0.05 + 0.02, 1e-14);
  EXPECT_NEAR(pops.total(), 1.0, 1e-14);
}

TEST(models, duration_rule_parsing) {
  const auto quad = DurationRule::parse("n^2/40");
  ASSERT_TRUE(quad);
  EXPECT_DOUBLE_EQ((*quad)(20), 10.0);
  EXPECT_DOUBLE_EQ((*quad)(160), 640.0);
  const auto scaled = DurationRule::parse("0.05*n^2");
  ASSERT_TRUE(scaled);
  EXPECT_DOUBLE_EQ((*scaled)(20), 20.0);
  const auto linear = DurationRule::parse("n");
  ASSERT_TRUE(linear);
  EXPECT_DOUBLE_EQ((*linear)(12), 12.0);
  const auto constant = DurationRule::parse("12.5");
  ASSERT_TRUE(constant);
  EXPECT_DOUBLE_EQ((*constant)(7), 12.5);
  EXPECT_FALSE(DurationRule::parse("n^^2"));
  EXPECT_FALSE(DurationRule::parse("m^2"));
  EXPECT_FALSE(DurationRule::parse(""));
}

TEST(models, schedule_splits_total_duration_across_legs) {
  ExperimentConfig c;
  c.vertices = paths::disordered_loop();
  c.duration = *DurationRule::parse("30");
  const SweepSchedule s = c.schedule_for(6);
  EXPECT_DOUBLE_EQ(s.total_duration(), 30.0);
  EXPECT_DOUBLE_EQ(s.leg_duration, 10.0);
}

TEST(models, noise_defaults_and_step_rounding) {
  ExperimentConfig c;
  c.vertices = paths::zzxz_sweep();
  c.duration = *DurationRule::parse("10");
  const NoiseEvent e = c.noise_for(10);
  EXPECT_EQ(e.site, 5);
  EXPECT_DOUBLE_EQ(e.t_apply, 0.5);
  EXPECT_EQ(noise_step(e, 0.0, 10.0, 0.01), 50);
  EXPECT_EQ(noise_step(e, 1.0, 10.0, 0.01), std::nullopt);
  NoiseEvent off = e;
  off.enabled = false;
  EXPECT_EQ(noise_step(off, 0.0, 10.0, 0.01), std::nullopt);
}

TEST(models, validate_reports_each_problem) {
  ExperimentConfig good;
  good.vertices = paths::zzxz_sweep();
  good.duration = *DurationRule::parse("10");
  EXPECT_TRUE(validate(good).empty());

  auto has = [](const std::vector<std::string>& problems, const std::string& needle) {
    for (const auto& p : problems) {
      if (p.find(needle) != std::string::npos) return true;
    }
    return false;
  };
  ExperimentConfig c = good;
  c.engine = std::nullopt;
  c.engine_name = "quantum_annealer";
  EXPECT_TRUE(has(validate(c), "quantum_annealer"));

  c = good;
  c.engine = Engine::FreeFermion;
  EXPECT_FALSE(validate(c).empty());  // Bz != 0 on the sweep path

  c = good;
  c.noise.site = 40;
  EXPECT_FALSE(validate(c).empty());

  c = good;
  c.sizes = {20};
  EXPECT_FALSE(validate(c).empty());  // exact engine cap

  c = good;
  c.dt = 0.3;
  EXPECT_FALSE(validate(c).empty());

  c = good;
  c.vertices = {paths::zzxz_sweep()[0]};
  EXPECT_FALSE(validate(c).empty());
}

TEST(models, enum_names_round_trip) {
  for (Family f : {Family::ZZXZ, Family::HeisenbergX}) EXPECT_EQ(family_from_string(to_string(f)), f);
  for (Axis a : {Axis::X, Axis::Y, Axis::Z}) EXPECT_EQ(axis_from_string(to_string(a)), a);
  for (Engine e : {Engine::Exact, Engine::MPS, Engine::FreeFermion}) {
    EXPECT_EQ(engine_from_string(to_string(e)), e);
  }
  EXPECT_FALSE(engine_from_string("dmrg"));
  EXPECT_TRUE(paths::named("afm_loop"));
  EXPECT_FALSE(paths::named("spiral"));
}
