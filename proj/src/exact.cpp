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

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <string>

#include "adiaerr/errors.hpp"

namespace adiaerr::exact {

namespace {

using cd = std::complex<double>;

struct PauliString {
  cd coeff;
  std::uint32_t flip = 0;  // X or Y
  std::uint32_t sign = 0;  // Y or Z
};

// sigma^a on one site: X flips, Z signs, Y = i * X * Z on |b> gives i (-1)^b |1-b>.
void add_factor(PauliString& p, int site, Axis a) {
  const std::uint32_t bit = 1u << site;
  switch (a) {
    case Axis::X:
      p.flip |= bit;
      break;
    case Axis::Y:
      p.flip |= bit;
      p.sign |= bit;
      p.coeff *= cd(0, 1);
      break;
    case Axis::Z:
      p.sign |= bit;
      break;
  }
}

std::vector<PauliString> pauli_strings(const ModelSpec& model) {
  std::vector<PauliString> out;
  for (const auto& t : model.site_terms()) {
    PauliString p{t.coeff};
    add_factor(p, t.site, t.axis);
    out.push_back(p);
  }
  for (const auto& t : model.bond_terms()) {
    PauliString p{t.coeff};
    add_factor(p, t.site, t.left);
    add_factor(p, t.site + 1, t.right);
    out.push_back(p);
  }
  return out;
}

double parity_sign(std::uint32_t x) { return (std::popcount(x) & 1) ? -1.0 : 1.0; }

void check_capacity(int n, int max_sites) {
  if (n > max_sites) {
    throw CapacityError("exact engine: n=" + std::to_string(n) + " exceeds cap " +
                        std::to_string(max_sites));
  }
  if (n > 30) throw CapacityError("exact engine: n=" + std::to_string(n) + " cannot be indexed");
}

void check_finite(const Eigen::VectorXcd& v, double t) {
  if (!v.allFinite()) {
    throw NumericalError("exact engine: non-finite amplitudes at t=" + std::to_string(t));
  }
}

}  // namespace

DenseState product_state(const ProductBasis& basis) {
  const int n = basis.size();
  check_capacity(n, 30);
  const std::size_t dim = std::size_t{1} << n;
  DenseState s{n, Eigen::VectorXcd::Ones(static_cast<Eigen::Index>(dim))};
  for (std::size_t b = 0; b < dim; ++b) {
    cd amp = 1.0;
    for (int i = 0; i < n; ++i) amp *= basis.reference(i)((b >> i) & 1u);
    s.amplitudes(static_cast<Eigen::Index>(b)) = amp;
  }
  return s;
}

DenseState apply_pauli(const DenseState& state, int site, Axis axis) {
  if (site < 0 || site >= state.n) throw InputError("pauli site out of range");
  PauliString p{1.0};
  add_factor(p, site, axis);
  DenseState out{state.n, Eigen::VectorXcd::Zero(state.amplitudes.size())};
  for (Eigen::Index b = 0; b < state.amplitudes.size(); ++b) {
    const auto ub = static_cast<std::uint32_t>(b);
    out.amplitudes(ub ^ p.flip) = p.coeff * parity_sign(ub & p.sign) * state.amplitudes(b);
  }
  return out;
}

Eigen::MatrixXd build_dense(const ModelSpec& model, int max_sites) {
  check_model(model);
  check_capacity(model.n, max_sites);
  const Eigen::Index dim = Eigen::Index{1} << model.n;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& p : pauli_strings(model)) {
    for (Eigen::Index b = 0; b < dim; ++b) {
      const auto ub = static_cast<std::uint32_t>(b);
      h(ub ^ p.flip, b) += p.coeff * parity_sign(ub & p.sign);
    }
  }
  if (h.imag().cwiseAbs().maxCoeff() > 1e-14) {
    throw NumericalError("build_dense: Hamiltonian is not real");
  }
  return h.real();
}

HamiltonianAction::HamiltonianAction(const ModelSpec& model) : n_(model.n) {
  check_model(model);
  check_capacity(model.n, 30);
  const Eigen::Index dim = Eigen::Index{1} << model.n;
  diagonal_ = Eigen::VectorXd::Zero(dim);
  std::map<std::uint32_t, std::size_t> index;
  norm_bound_ = 0.0;
  for (const auto& p : pauli_strings(model)) {
    norm_bound_ += std::abs(p.coeff);
    if (p.flip == 0) {
      for (Eigen::Index b = 0; b < dim; ++b) {
        diagonal_(b) += p.coeff.real() * parity_sign(static_cast<std::uint32_t>(b) & p.sign);
      }
      continue;
    }
    auto [it, inserted] = index.try_emplace(p.flip, groups_.size());
    if (inserted) groups_.push_back({p.flip, {}});
    groups_[it->second].terms.emplace_back(p.coeff, p.sign);
  }
}

void HamiltonianAction::apply(const Eigen::VectorXcd& in, Eigen::VectorXcd& out) const {
  out = diagonal_.cwiseProduct(in);
  const Eigen::Index dim = in.size();
  for (const auto& g : groups_) {
    if (g.terms.size() == 1 && g.terms[0].second == 0) {
      const cd c = g.terms[0].first;
      for (Eigen::Index b = 0; b < dim; ++b) out(static_cast<std::uint32_t>(b) ^ g.flip_mask) += c * in(b);
      continue;
    }
    for (Eigen::Index b = 0; b < dim; ++b) {
      const auto ub = static_cast<std::uint32_t>(b);
      cd c = 0.0;
      for (const auto& [coeff, mask] : g.terms) c += coeff * parity_sign(ub & mask);
      out(ub ^ g.flip_mask) += c * in(b);
    }
  }
}

double energy(const DenseState& state, const ModelSpec& model) {
  HamiltonianAction h(model);
  Eigen::VectorXcd hpsi;
  h.apply(state.amplitudes, hpsi);
  return state.amplitudes.dot(hpsi).real() / state.amplitudes.squaredNorm();
}

Eigen::VectorXcd expm_apply(const HamiltonianAction& h, const Eigen::VectorXcd& psi, cd factor) {
  const double scale = std::abs(factor) * h.norm_bound();
  const int substeps = std::max(1, static_cast<int>(std::ceil(scale)));
  const cd z = factor / static_cast<double>(substeps);
  Eigen::VectorXcd result = psi;
  Eigen::VectorXcd term;
  Eigen::VectorXcd next;
  for (int s = 0; s < substeps; ++s) {
    term = result;
    const double ref = result.norm();
    for (int k = 1; k <= 60; ++k) {
      h.apply(term, next);
      term = next * (z / static_cast<double>(k));
      result += term;
      if (term.norm() <= 1e-17 * ref) break;
    }
  }
  return result;
}

Trajectory evolve_dense(DenseState state, const SweepSchedule& schedule, double t0, double t1,
                        const std::optional<NoiseEvent>& noise, const EvolveOptions& options) {
  check_schedule(schedule);
  check_capacity(state.n, options.max_sites);
  if (state.n != schedule.n) throw InputError("state and schedule disagree on n");
  const double dt = schedule.dt;
  const int steps = schedule.steps_between(t0, t1);
  const int noise_at = noise ? noise_step(*noise, t0, t1, dt).value_or(-1) : -1;
  const int every = std::max(1, options.record_every);

  Trajectory traj;
  const double norm0 = state.norm();
  auto record = [&](int k) {
    const double t = (k == steps) ? t1 : t0 + k * dt;
    const ModelSpec model = params_at(schedule, t);
    traj.samples.push_back({t, model.params, energy(state, model)});
    if (options.observer) options.observer(t, state, model);
  };

  for (int k = 0; k < steps; ++k) {
    if (noise_at == k) state = apply_pauli(state, noise->site, noise->axis);
    if (k % every == 0) record(k);
    const double tmid = t0 + (k + 0.5) * dt;
    const HamiltonianAction h(params_at(schedule, tmid));
    state.amplitudes = expm_apply(h, state.amplitudes, cd(0.0, -dt));
    check_finite(state.amplitudes, tmid);
    traj.max_norm_drift = std::max(traj.max_norm_drift, std::abs(state.norm() - norm0));
  }
  if (noise_at == steps) state = apply_pauli(state, noise->site, noise->axis);
  record(steps);
  traj.final_state = std::move(state);
  return traj;
}

std::vector<EigenGroup> group_levels(const Eigen::VectorXd& values, double rel_tol) {
  std::vector<EigenGroup> groups;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    const double e = values(i);
    if (!groups.empty()) {
      auto& g = groups.back();
      if (std::abs(e - g.energy) <= rel_tol * std::max(1.0, std::abs(e))) {
        ++g.degeneracy;
        continue;
      }
    }
    groups.push_back({e, 1, 0.0});
  }
  return groups;
}

double SpectrumSnapshot::total_population() const {
  double s = 0.0;
  for (const auto& g : groups) s += g.population;
  return s;
}

Diagonalization diagonalize(const ModelSpec& model, int max_sites) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(build_dense(model, max_sites));
  if (solver.info() != Eigen::Success) throw NumericalError("diagonalization failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

SpectrumSnapshot eigen_populations(const DenseState& state, const Diagonalization& diag,
                                   double time) {
  if (state.amplitudes.size() != diag.values.size()) throw InputError("dimension mismatch");
  const Eigen::VectorXcd overlaps = diag.vectors.transpose().cast<cd>() * state.amplitudes;
  const double norm2 = state.amplitudes.squaredNorm();
  SpectrumSnapshot snap;
  snap.time = time;
  snap.eigenvalues.assign(diag.values.data(), diag.values.data() + diag.values.size());
  snap.groups = group_levels(diag.values);
  Eigen::Index i = 0;
  for (auto& g : snap.groups) {
    for (int d = 0; d < g.degeneracy; ++d, ++i) g.population += std::norm(overlaps(i)) / norm2;
  }
  return snap;
}

SpectrumSnapshot eigen_populations(const DenseState& state, const ModelSpec& model, double time) {
  return eigen_populations(state, diagonalize(model), time);
}

ExcitationPopulations excitation_populations(const DenseState& state, const ProductBasis& reference,
                                             int k_max) {
  if (reference.size() != state.n) throw InputError("reference size differs from state");
  reference.check_orthonormal();
  Eigen::VectorXcd psi = state.amplitudes;
  const Eigen::Index dim = psi.size();
  for (int i = 0; i < state.n; ++i) {
    const Eigen::Matrix2cd u = reference.local[i].adjoint();
    const Eigen::Index bit = Eigen::Index{1} << i;
    for (Eigen::Index b = 0; b < dim; ++b) {
      if (b & bit) continue;
      const cd a0 = psi(b);
      const cd a1 = psi(b | bit);
      psi(b) = u(0, 0) * a0 + u(0, 1) * a1;
      psi(b | bit) = u(1, 0) * a0 + u(1, 1) * a1;
    }
  }
  const double norm2 = psi.squaredNorm();
  ExcitationPopulations out;
  out.p.assign(k_max + 1, 0.0);
  for (Eigen::Index b = 0; b < dim; ++b) {
    const int k = std::popcount(static_cast<std::uint32_t>(b));
    const double w = std::norm(psi(b)) / norm2;
    if (k <= k_max) {
      out.p[k] += w;
    } else {
      out.rest += w;
    }
  }
  return out;
}

double fidelity(const DenseState& state, const Diagonalization& diag) {
  return eigen_populations(state, diag).groups.front().population;
}

double fidelity(const DenseState& state, const ModelSpec& model) {
  return fidelity(state, diagonalize(model));
}

}  // namespace adiaerr::exact
