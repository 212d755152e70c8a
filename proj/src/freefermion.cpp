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

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include "adiaerr/errors.hpp"

namespace adiaerr::freefermion {

MajoranaHamiltonian jw_tfim(const ModelSpec& model) {
  check_model(model);
  if (model.family != Family::ZZXZ || model.params.Bz != 0.0 || model.params.Jz != 0.0) {
    throw UnsupportedModel("free-fermion engine supports ZZXZ with Bz=0 only");
  }
  const int n = model.n;
  MajoranaHamiltonian out{n, Eigen::MatrixXd::Zero(2 * n, 2 * n), {}, {}};
  std::vector<Eigen::Triplet<double>> entries;
  auto set = [&](int k, int l, double v) {
    out.h(k, l) = v;
    out.h(l, k) = -v;
    entries.emplace_back(k, l, v);
    entries.emplace_back(l, k, -v);
  };
  // Bx X_i = (i/2) (2 Bx) c_{2i} c_{2i+1}, J Z_i Z_{i+1} = (i/2) (2 J) c_{2i+1} c_{2i+2}.
  for (int i = 0; i < n; ++i) {
    if (model.params.Bx != 0.0) set(2 * i, 2 * i + 1, 2.0 * model.params.Bx);
    if (i + 1 < n && model.params.J != 0.0) set(2 * i + 1, 2 * i + 2, 2.0 * model.params.J);
  }
  out.sparse.resize(2 * n, 2 * n);
  out.sparse.setFromTriplets(entries.begin(), entries.end());
  out.superdiag = out.h.diagonal(1);
  return out;
}

CanonicalForm canonical_form(const Eigen::MatrixXd& h) {
  const Eigen::Index dim = h.rows();
  if (dim % 2 != 0 || h.cols() != dim) throw InputError("canonical_form needs an even square matrix");
  if ((h + h.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, h.cwiseAbs().maxCoeff())) {
    throw InputError("canonical_form needs an antisymmetric matrix");
  }
  const int n = static_cast<int>(dim / 2);
  const Eigen::MatrixXcd a = std::complex<double>(0.0, 1.0) * h.cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(a);
  if (solver.info() != Eigen::Success) throw NumericalError("canonical_form: eigensolver failed");
  const Eigen::VectorXd& lam = solver.eigenvalues();
  const Eigen::MatrixXcd& vec = solver.eigenvectors();

  const double tol = 1e-10 * std::max(1.0, lam.cwiseAbs().maxCoeff());
  int null_count = 0;
  for (Eigen::Index i = 0; i < dim; ++i) {
    if (std::abs(lam(i)) <= tol) ++null_count;
  }
  // Spectrum is symmetric, so the near-null count is even.
  null_count += null_count % 2;
  const int zero_modes = null_count / 2;

  CanonicalForm out;
  out.O = Eigen::MatrixXd::Zero(dim, dim);
  out.eps = Eigen::VectorXd::Zero(n);
  out.zero_modes = zero_modes;

  if (zero_modes > 0) {
    // Real orthonormal basis of the near-null space, paired consecutively.
    const Eigen::Index first = n - zero_modes;
    Eigen::MatrixXd span(dim, 2 * null_count);
    for (int j = 0; j < null_count; ++j) {
      span.col(2 * j) = vec.col(first + j).real();
      span.col(2 * j + 1) = vec.col(first + j).imag();
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(span, Eigen::ComputeThinU);
    for (int j = 0; j < null_count; ++j) out.O.col(j) = svd.matrixU().col(j);
  }
  // Positive eigenvalue eps with eigenvector v = (u + i w)/sqrt(2): h u = eps w,
  // h w = -eps u, so the ordered pair (w, u) carries the block [[0, eps], [-eps, 0]].
  for (int k = zero_modes; k < n; ++k) {
    const Eigen::Index idx = n + k;
    const Eigen::VectorXcd v = vec.col(idx) * std::sqrt(2.0);
    out.O.col(2 * k) = v.imag();
    out.O.col(2 * k + 1) = v.real();
    out.eps(k) = lam(idx);
  }
  return out;
}

namespace {

Eigen::MatrixXd standard_occupation(int n) {
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (int k = 0; k < n; ++k) {
    g(2 * k, 2 * k + 1) = -1.0;
    g(2 * k + 1, 2 * k) = 1.0;
  }
  return g;
}

}  // namespace

GroundState ground_covariance(const MajoranaHamiltonian& h) {
  CanonicalForm cf = canonical_form(h.h);
  // Block occupation <i b_{2k} b_{2k+1}> = -1 minimises (eps_k / 2) i b b. The
  // fermion parity of O Gamma_0 O^T is det(O); zero modes get the orientation
  // that makes it even.
  if (cf.zero_modes > 0 && Eigen::PartialPivLU<Eigen::MatrixXd>(cf.O).determinant() < 0.0) {
    cf.O.col(0).swap(cf.O.col(1));
  }
  GroundState gs;
  gs.state = {h.n, cf.O * standard_occupation(h.n) * cf.O.transpose()};
  gs.state.gamma = 0.5 * (gs.state.gamma - gs.state.gamma.transpose()).eval();
  gs.energy = energy_cov(gs.state, h);
  gs.zero_mode_degenerate = cf.zero_modes > 0;
  return gs;
}

std::vector<double> single_particle_energies(const MajoranaHamiltonian& h) {
  const CanonicalForm cf = canonical_form(h.h);
  std::vector<double> out(cf.eps.data(), cf.eps.data() + cf.eps.size());
  std::sort(out.begin(), out.end());
  return out;
}

double energy_cov(const CovarianceState& state, const MajoranaHamiltonian& h) {
  if (state.n != h.n) throw InputError("covariance and Hamiltonian sizes differ");
  double e = 0.0;
  for (int k = 0; k < h.sparse.outerSize(); ++k) {
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(h.sparse, k); it; ++it) {
      e += it.value() * state.gamma(it.row(), it.col());
    }
  }
  return 0.25 * e;
}

CovarianceState x_product_covariance(const std::vector<int>& x_signs) {
  const int n = static_cast<int>(x_signs.size());
  CovarianceState s{n, Eigen::MatrixXd::Zero(2 * n, 2 * n)};
  for (int i = 0; i < n; ++i) {
    const double v = x_signs[i] >= 0 ? 1.0 : -1.0;
    s.gamma(2 * i, 2 * i + 1) = v;
    s.gamma(2 * i + 1, 2 * i) = -v;
  }
  return s;
}

CovarianceState vacuum(int n) { return x_product_covariance(std::vector<int>(n, -1)); }

CovarianceState apply_pauli_error_cov(const CovarianceState& state, int site, Axis axis) {
  if (site < 0 || site >= state.n) throw InputError("pauli site out of range");
  const int dim = 2 * state.n;
  Eigen::VectorXd d = Eigen::VectorXd::Ones(dim);
  switch (axis) {
    case Axis::X:
      d(2 * site) = -1.0;
      d(2 * site + 1) = -1.0;
      break;
    case Axis::Z:
      d(2 * site + 1) = -1.0;
      for (int k = 2 * site + 2; k < dim; ++k) d(k) = -1.0;
      break;
    case Axis::Y:
      d(2 * site) = -1.0;
      for (int k = 2 * site + 2; k < dim; ++k) d(k) = -1.0;
      break;
  }
  return {state.n, d.asDiagonal() * state.gamma * d.asDiagonal()};
}

double pfaffian(Eigen::MatrixXd a) {
  const Eigen::Index n = a.rows();
  if (n != a.cols()) throw InputError("pfaffian needs a square matrix");
  if (n % 2 != 0) return 0.0;
  double pf = 1.0;
  for (Eigen::Index k = 0; k + 1 < n; k += 2) {
    Eigen::Index kp;
    a.col(k).tail(n - k - 1).cwiseAbs().maxCoeff(&kp);
    kp += k + 1;
    if (kp != k + 1) {
      a.row(k + 1).swap(a.row(kp));
      a.col(k + 1).swap(a.col(kp));
      pf = -pf;
    }
    if (a(k + 1, k) == 0.0) return 0.0;
    pf *= a(k, k + 1);
    if (k + 2 < n) {
      const Eigen::Index rest = n - k - 2;
      const Eigen::VectorXd tau = a.row(k).tail(rest).transpose() / a(k, k + 1);
      const Eigen::VectorXd col = a.col(k + 1).tail(rest);
      a.bottomRightCorner(rest, rest) += tau * col.transpose() - col * tau.transpose();
    }
  }
  return pf;
}

int fermion_parity(const CovarianceState& state) {
  const double pf = pfaffian(state.gamma);
  const int sign = pf >= 0.0 ? 1 : -1;
  return (state.n % 2 == 0) ? sign : -sign;
}

double purity_defect(const CovarianceState& state) {
  const Eigen::MatrixXd g = state.gamma * state.gamma.transpose();
  return (g - Eigen::MatrixXd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
}

double antisymmetry_defect(const CovarianceState& state) {
  return (state.gamma + state.gamma.transpose()).cwiseAbs().maxCoeff();
}

Eigen::MatrixXd expm_apply(const Eigen::VectorXd& superdiag, const Eigen::MatrixXd& m,
                           double scale) {
  const Eigen::Index dim = m.rows();
  if (superdiag.size() != dim - 1) throw InputError("expm_apply: generator size mismatch");
  double row_sum = 0.0;
  for (Eigen::Index k = 0; k < dim; ++k) {
    const double up = k + 1 < dim ? std::abs(superdiag(k)) : 0.0;
    const double down = k > 0 ? std::abs(superdiag(k - 1)) : 0.0;
    row_sum = std::max(row_sum, up + down);
  }
  const double bound = std::abs(scale) * row_sum;
  const int substeps = std::max(1, static_cast<int>(std::ceil(2.0 * bound)));
  const double z = scale / substeps;
  const Eigen::Index inner = dim - 1;
  Eigen::MatrixXd result = m;
  Eigen::MatrixXd term(dim, m.cols());
  Eigen::MatrixXd next(dim, m.cols());
  for (int s = 0; s < substeps; ++s) {
    term = result;
    const double ref = result.cwiseAbs().maxCoeff();
    for (int k = 1; k <= 40; ++k) {
      // (h t)_r = h_{r,r+1} t_{r+1} - h_{r-1,r} t_{r-1}
      const double c = z / k;
      next.topRows(inner).noalias() = (c * superdiag).asDiagonal() * term.bottomRows(inner);
      next.row(inner).setZero();
      next.bottomRows(inner).noalias() -= (c * superdiag).asDiagonal() * term.topRows(inner);
      term.swap(next);
      result += term;
      if (term.cwiseAbs().maxCoeff() <= 1e-18 * ref) break;
    }
  }
  return result;
}

Trajectory evolve_covariance(CovarianceState state, const SweepSchedule& schedule, double t0,
                             double t1, const std::optional<NoiseEvent>& noise,
                             const EvolveOptions& options) {
  check_schedule(schedule);
  if (state.n != schedule.n) throw InputError("state and schedule disagree on n");
  const double dt = schedule.dt;
  const int steps = schedule.steps_between(t0, t1);
  const int noise_at = noise ? noise_step(*noise, t0, t1, dt).value_or(-1) : -1;
  const int every = std::max(1, options.record_every);

  // The propagator W is evolved instead of the covariance, so each step costs one banded
  // action; the covariance W gamma W^T is only formed at records and noise events.
  const int dim = 2 * state.n;
  Eigen::MatrixXd w = Eigen::MatrixXd::Identity(dim, dim);
  bool pending = false;
  Trajectory traj;
  auto materialize = [&](double t) {
    if (!pending) return;
    state.gamma = w * state.gamma * w.transpose();
    if (!state.gamma.allFinite()) {
      throw NumericalError("free-fermion engine: non-finite covariance at t=" + std::to_string(t));
    }
    const double defect = antisymmetry_defect(state);
    traj.max_antisymmetry_defect = std::max(traj.max_antisymmetry_defect, defect);
    if (defect > 1e-6) {
      throw NumericalError("free-fermion engine: covariance lost antisymmetry at t=" +
                           std::to_string(t));
    }
    state.gamma = 0.5 * (state.gamma - state.gamma.transpose()).eval();
    w.setIdentity();
    pending = false;
  };
  auto record = [&](int k) {
    const double t = (k == steps) ? t1 : t0 + k * dt;
    materialize(t);
    const ModelSpec model = params_at(schedule, t);
    const MajoranaHamiltonian h = jw_tfim(model);
    traj.samples.push_back({t, model.params, energy_cov(state, h)});
    if (options.observer) options.observer(t, state, h);
  };

  for (int k = 0; k < steps; ++k) {
    if (noise_at == k) {
      materialize(t0 + k * dt);
      state = apply_pauli_error_cov(state, noise->site, noise->axis);
    }
    if (k % every == 0) record(k);
    const double tmid = t0 + (k + 0.5) * dt;
    const MajoranaHamiltonian h = jw_tfim(params_at(schedule, tmid));
    w = expm_apply(h.superdiag, w, dt);
    pending = true;
  }
  if (noise_at == steps) {
    materialize(t1);
    state = apply_pauli_error_cov(state, noise->site, noise->axis);
  }
  record(steps);
  traj.final_state = std::move(state);
  return traj;
}

}  // namespace adiaerr::freefermion
