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

#include <algorithm>
#include <cmath>

#include "adiaerr/errors.hpp"
#include "adiaerr/mps.hpp"

namespace adiaerr::mps {

using cd = std::complex<double>;

namespace {

Eigen::Matrix4cd kron(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
  Eigen::Matrix4cd k;
  for (int r1 = 0; r1 < 2; ++r1)
    for (int r2 = 0; r2 < 2; ++r2)
      for (int c1 = 0; c1 < 2; ++c1)
        for (int c2 = 0; c2 < 2; ++c2) k(2 * r1 + r2, 2 * c1 + c2) = a(r1, c1) * b(r2, c2);
  return k;
}

int degree(int site, int n) { return (site > 0 ? 1 : 0) + (site + 1 < n ? 1 : 0); }

// exp(-i h tau) for real time, exp(-h tau) for imaginary time.
struct BondExponential {
  Eigen::Matrix4cd vectors;
  Eigen::Vector4d values;

  explicit BondExponential(const Eigen::Matrix4cd& h) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver(h);
    vectors = solver.eigenvectors();
    values = solver.eigenvalues();
  }

  Eigen::Matrix4cd gate(double tau, bool imaginary) const {
    Eigen::Vector4cd d;
    for (int k = 0; k < 4; ++k) {
      d(k) = imaginary ? cd(std::exp(-tau * values(k)), 0.0) : std::polar(1.0, -tau * values(k));
    }
    return vectors * d.asDiagonal() * vectors.adjoint();
  }
};

std::vector<int> layer_bonds(int n, bool odd) {
  std::vector<int> out;
  for (int b = odd ? 1 : 0; b + 1 < n; b += 2) out.push_back(b);
  return out;
}

void append_second_order(std::vector<TrotterLayer>& layers, double weight) {
  layers.push_back({false, 0.5 * weight});
  layers.push_back({true, weight});
  layers.push_back({false, 0.5 * weight});
}

// One Trotter step on the MPS. Returns the summed discarded weight.
double apply_step(Mps& state, const ModelSpec& model, const TrotterPlan& plan, double tau,
                  bool imaginary, const Truncation& trunc) {
  const int n = state.size();
  std::vector<BondExponential> bonds;
  bonds.reserve(std::max(0, n - 1));
  for (int b = 0; b + 1 < n; ++b) bonds.emplace_back(bond_hamiltonian(model, b));
  double discarded = 0.0;
  for (const auto& layer : plan.layers) {
    std::vector<int> order = layer_bonds(n, layer.odd);
    // Sweep away from the nearer end so the center walks one site per gate.
    const bool ascending = state.center() <= n / 2;
    if (!ascending) std::reverse(order.begin(), order.end());
    for (int b : order) {
      const Eigen::Matrix4cd g = bonds[b].gate(layer.fraction * tau, imaginary);
      discarded += state.apply_two_site(b, g, trunc,
                                        ascending ? CenterMoves::Right : CenterMoves::Left);
    }
  }
  return discarded;
}

// Dense action of a 4x4 gate on sites (b, b + 1) of a state vector.
void apply_gate_dense(Eigen::VectorXcd& psi, int b, const Eigen::Matrix4cd& g) {
  const Eigen::Index dim = psi.size();
  const Eigen::Index lo = Eigen::Index{1} << b;
  const Eigen::Index hi = Eigen::Index{1} << (b + 1);
  for (Eigen::Index base = 0; base < dim; ++base) {
    if (base & (lo | hi)) continue;
    const Eigen::Index idx[4] = {base, base | hi, base | lo, base | lo | hi};
    Eigen::Vector4cd v;
    for (int k = 0; k < 4; ++k) v(k) = psi(idx[k]);
    const Eigen::Vector4cd w = g * v;
    for (int k = 0; k < 4; ++k) psi(idx[k]) = w(k);
  }
}

}  // namespace

TrotterPlan TrotterPlan::make(int n, int order) {
  std::vector<TrotterLayer> raw;
  if (order == 2) {
    append_second_order(raw, 1.0);
  } else if (order == 4) {
    const double p = 1.0 / (4.0 - std::cbrt(4.0));
    for (double w : {p, p, 1.0 - 4.0 * p, p, p}) append_second_order(raw, w);
  } else {
    throw InputError("Trotter order must be 2 or 4");
  }
  TrotterPlan plan;
  plan.order = order;
  for (const auto& layer : raw) {
    if (layer_bonds(n, layer.odd).empty()) continue;
    if (!plan.layers.empty() && plan.layers.back().odd == layer.odd) {
      plan.layers.back().fraction += layer.fraction;
    } else {
      plan.layers.push_back(layer);
    }
  }
  return plan;
}

Eigen::Matrix4cd bond_hamiltonian(const ModelSpec& model, int b) {
  const int n = model.n;
  if (b < 0 || b + 1 >= n) throw InputError("bond out of range");
  const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
  Eigen::Matrix4cd h = Eigen::Matrix4cd::Zero();
  for (const auto& t : model.bond_terms()) {
    if (t.site == b) h += t.coeff * kron(pauli(t.left), pauli(t.right));
  }
  for (const auto& t : model.site_terms()) {
    if (t.site == b) h += (t.coeff / degree(b, n)) * kron(pauli(t.axis), id);
    if (t.site == b + 1) h += (t.coeff / degree(b + 1, n)) * kron(id, pauli(t.axis));
  }
  return h;
}

Eigen::MatrixXcd trotter_step_dense(const ModelSpec& model, const TrotterPlan& plan, double tau,
                                    bool imaginary) {
  const int n = model.n;
  if (n > 12) throw CapacityError("dense Trotter step is limited to 12 sites");
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim, dim);
  for (const auto& layer : plan.layers) {
    for (int b : layer_bonds(n, layer.odd)) {
      const Eigen::Matrix4cd g = BondExponential(bond_hamiltonian(model, b)).gate(layer.fraction * tau, imaginary);
      for (Eigen::Index c = 0; c < dim; ++c) {
        Eigen::VectorXcd col = u.col(c);
        apply_gate_dense(col, b, g);
        u.col(c) = col;
      }
    }
  }
  return u;
}

TebdTrajectory tebd_evolve(Mps state, const SweepSchedule& schedule, double t0, double t1,
                           const std::optional<NoiseEvent>& noise, const TebdOptions& options) {
  check_schedule(schedule);
  if (state.size() != schedule.n) throw InputError("state and schedule disagree on n");
  if (options.truncation.cutoff < 0.0 || options.truncation.max_bond < 1) {
    throw InputError("invalid truncation settings");
  }
  const double dt = schedule.dt;
  const int steps = schedule.steps_between(t0, t1);
  const int noise_at = noise ? noise_step(*noise, t0, t1, dt).value_or(-1) : -1;
  if (noise_at >= 0 && (noise->site < 0 || noise->site >= state.size())) {
    throw InputError("noise site out of range");
  }
  const int every = std::max(1, options.record_every);
  if (options.substeps < 1) throw InputError("substeps must be at least 1");
  const int substeps = options.substeps;
  const TrotterPlan plan = TrotterPlan::make(schedule.n, options.order);

  TebdTrajectory traj;
  double last_step_truncation = 0.0;
  auto record = [&](int k) {
    const double t = (k == steps) ? t1 : t0 + k * dt;
    const ModelSpec model = params_at(schedule, t);
    traj.samples.push_back({t, model.params, energy_mps(state, model)});
    traj.bond_log.push_back({t, state.max_bond_dimension(), last_step_truncation,
                             traj.cumulative_truncation});
    if (options.observer) options.observer(t, state, model);
  };
  auto apply_noise = [&](int k) {
    if (noise_at == k) state.apply_single_site(noise->site, pauli(noise->axis));
  };

  for (int k = 0; k < steps; ++k) {
    apply_noise(k);
    if (k % every == 0) record(k);
    const double tmid = t0 + (k + 0.5) * dt;
    try {
      const ModelSpec model = params_at(schedule, tmid);
      last_step_truncation = 0.0;
      for (int j = 0; j < substeps; ++j) {
        last_step_truncation +=
            apply_step(state, model, plan, dt / substeps, false, options.truncation);
      }
    } catch (const CapacityError& e) {
      throw CapacityError(e.what(), tmid);
    }
    traj.cumulative_truncation += last_step_truncation;
    traj.max_chi = std::max(traj.max_chi, state.max_bond_dimension());
  }
  apply_noise(steps);
  record(steps);
  traj.final_state = std::move(state);
  return traj;
}

GroundResult ground_state_imaginary_tebd(const ModelSpec& model, double cutoff,
                                         double convergence_tol, const GroundOptions& options) {
  check_model(model);
  if (options.dtau.empty()) throw InputError("imaginary-time ladder is empty");
  if (convergence_tol <= 0.0) throw InputError("convergence tolerance must be positive");
  const int n = model.n;
  Mps state;
  if (options.initial) {
    state = *options.initial;
    if (state.size() != n) throw InputError("initial state and model disagree on n");
  } else {
    // Uniform product state: reflection symmetric, so a near-degenerate
    // reflection-odd partner of the ground state is never populated, while both
    // X-parity sectors and every Z-sign configuration keep nonzero weight.
    Eigen::Vector2cd v;
    v << 0.8, -0.6;
    state = Mps::product(std::vector<Eigen::Vector2cd>(n, v));
  }
  const TrotterPlan plan = TrotterPlan::make(n, options.order);
  const Truncation trunc{cutoff, options.max_bond};
  const int check = std::max(1, options.check_every);

  GroundResult result;
  double energy = energy_mps(state, model);
  for (std::size_t stage = 0; stage < options.dtau.size(); ++stage) {
    const double dtau = options.dtau[stage];
    bool converged = false;
    for (int k = 0; k < options.max_steps_per_stage; k += check) {
      for (int j = 0; j < check; ++j) apply_step(state, model, plan, dtau, true, trunc);
      result.steps += check;
      const double next = energy_mps(state, model);
      if (!std::isfinite(next)) throw NumericalError("imaginary-time energy is not finite");
      result.final_slope = std::abs(next - energy) / (check * dtau);
      energy = next;
      if (result.final_slope < convergence_tol) {
        converged = true;
        break;
      }
    }
    if (!converged && stage + 1 == options.dtau.size()) {
      throw ConvergenceError("imaginary-time TEBD did not converge", result.final_slope);
    }
  }
  state.normalize();
  result.energy = energy_mps(state, model);
  result.state = std::move(state);
  return result;
}

}  // namespace adiaerr::mps
