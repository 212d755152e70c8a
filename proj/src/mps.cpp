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

#include "adiaerr/mps.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <future>
#include <map>
#include <numbers>
#include <random>

#include <lapacke.h>

#include "adiaerr/errors.hpp"

namespace adiaerr::mps {

using cd = std::complex<double>;
using Eigen::MatrixXcd;

namespace {

MatrixXcd stack_rows(const SiteTensor& a) {
  MatrixXcd m(2 * a[0].rows(), a[0].cols());
  m << a[0], a[1];
  return m;
}

MatrixXcd stack_cols(const SiteTensor& a) {
  MatrixXcd m(a[0].rows(), 2 * a[0].cols());
  m << a[0], a[1];
  return m;
}

// Thin QR of m: out_q has min(rows, cols) orthonormal columns.
void thin_qr(const MatrixXcd& m, MatrixXcd& q, MatrixXcd& r) {
  const Eigen::Index k = std::min(m.rows(), m.cols());
  Eigen::HouseholderQR<MatrixXcd> qr(m);
  q = qr.householderQ() * MatrixXcd::Identity(m.rows(), k);
  r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
}

// E' = sum_{s, s'} op(s, s') A[s]^dagger E A[s'].
MatrixXcd transfer(const MatrixXcd& env, const SiteTensor& a, const Eigen::Matrix2cd& op) {
  MatrixXcd out = MatrixXcd::Zero(a[0].cols(), a[0].cols());
  for (int sp = 0; sp < 2; ++sp) {
    if (op(0, sp) == cd(0.0) && op(1, sp) == cd(0.0)) continue;
    const MatrixXcd t = env * a[sp];
    for (int s = 0; s < 2; ++s) {
      if (op(s, sp) != cd(0.0)) out.noalias() += op(s, sp) * (a[s].adjoint() * t);
    }
  }
  return out;
}

struct Svd {
  MatrixXcd u;
  Eigen::VectorXd s;
  MatrixXcd vh;
};

// Thin SVD by divide and conquer, falling back to the QR-iteration driver.
Svd thin_svd(const MatrixXcd& m) {
  const lapack_int rows = static_cast<lapack_int>(m.rows());
  const lapack_int cols = static_cast<lapack_int>(m.cols());
  const lapack_int k = std::min(rows, cols);
  auto lp = [](MatrixXcd& x) { return reinterpret_cast<lapack_complex_double*>(x.data()); };
  Svd out{MatrixXcd(rows, k), Eigen::VectorXd(k), MatrixXcd(k, cols)};
  MatrixXcd work = m;
  lapack_int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'S', rows, cols, lp(work), rows, out.s.data(),
                                   lp(out.u), rows, lp(out.vh), k);
  if (info != 0) {
    work = m;
    std::vector<double> superb(std::max<lapack_int>(1, k - 1));
    info = LAPACKE_zgesvd(LAPACK_COL_MAJOR, 'S', 'S', rows, cols, lp(work), rows, out.s.data(),
                          lp(out.u), rows, lp(out.vh), k, superb.data());
  }
  if (info != 0) throw NumericalError("SVD failed in two-site update");
  return out;
}

}  // namespace

Mps Mps::product(const std::vector<Eigen::Vector2cd>& local) {
  if (local.empty()) throw InputError("product state needs at least one site");
  Mps m;
  m.sites_.resize(local.size());
  for (std::size_t i = 0; i < local.size(); ++i) {
    for (int s = 0; s < 2; ++s) m.sites_[i][s] = MatrixXcd::Constant(1, 1, local[i](s));
  }
  m.center_ = 0;
  m.normalize();
  return m;
}

Mps Mps::product(const ProductBasis& basis) {
  std::vector<Eigen::Vector2cd> local;
  for (int i = 0; i < basis.size(); ++i) local.push_back(basis.reference(i));
  return product(local);
}

Mps Mps::random(int n, int max_bond, std::uint64_t seed) {
  if (n < 1 || max_bond < 1) throw InputError("random MPS needs n >= 1 and max_bond >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  auto dim = [&](int b) {  // bond to the left of site b
    const int edge = std::min(b, n - b);
    return edge >= 30 ? max_bond : std::min<int>(max_bond, 1 << edge);
  };
  Mps m;
  m.sites_.resize(n);
  for (int i = 0; i < n; ++i) {
    for (int s = 0; s < 2; ++s) {
      MatrixXcd a(dim(i), dim(i + 1));
      for (Eigen::Index k = 0; k < a.size(); ++k) a.data()[k] = cd(g(rng), g(rng));
      m.sites_[i][s] = std::move(a);
    }
  }
  m.center_ = n - 1;
  m.move_center(0);
  m.normalize();
  return m;
}

Mps Mps::from_tensors(std::vector<SiteTensor> sites, int center) {
  if (sites.empty()) throw InputError("MPS needs at least one site");
  if (center < 0 || center >= static_cast<int>(sites.size())) throw InputError("center out of range");
  for (std::size_t i = 0; i < sites.size(); ++i) {
    const auto& a = sites[i];
    if (a[0].rows() != a[1].rows() || a[0].cols() != a[1].cols()) {
      throw InputError("site tensor blocks disagree in shape");
    }
    if (i == 0 && a[0].rows() != 1) throw InputError("left boundary bond must be 1");
    if (i + 1 == sites.size() && a[0].cols() != 1) throw InputError("right boundary bond must be 1");
    if (i > 0 && sites[i - 1][0].cols() != a[0].rows()) throw InputError("bond dimensions disagree");
  }
  Mps m;
  m.sites_ = std::move(sites);
  m.center_ = center;
  return m;
}

std::vector<int> Mps::bond_dimensions() const {
  std::vector<int> out;
  for (int b = 0; b + 1 < size(); ++b) out.push_back(bond_dimension(b));
  return out;
}

int Mps::max_bond_dimension() const {
  int chi = 1;
  for (int b = 0; b + 1 < size(); ++b) chi = std::max(chi, bond_dimension(b));
  return chi;
}

void Mps::move_center(int target) {
  if (target < 0 || target >= size()) throw InputError("center target out of range");
  MatrixXcd q, r;
  while (center_ < target) {
    auto& a = sites_[center_];
    const Eigen::Index rows = a[0].rows();
    thin_qr(stack_rows(a), q, r);
    a[0] = q.topRows(rows);
    a[1] = q.bottomRows(rows);
    auto& next = sites_[center_ + 1];
    for (int s = 0; s < 2; ++s) next[s] = r * next[s];
    ++center_;
  }
  while (center_ > target) {
    auto& a = sites_[center_];
    const Eigen::Index cols = a[0].cols();
    thin_qr(stack_cols(a).adjoint(), q, r);
    const MatrixXcd qa = q.adjoint();
    a[0] = qa.leftCols(cols);
    a[1] = qa.rightCols(cols);
    auto& prev = sites_[center_ - 1];
    const MatrixXcd l = r.adjoint();
    for (int s = 0; s < 2; ++s) prev[s] = prev[s] * l;
    --center_;
  }
}

double Mps::norm() const {
  return std::sqrt(std::max(0.0, overlap(*this).real()));
}

void Mps::normalize() {
  const double nrm = norm();
  if (!(nrm > 0.0) || !std::isfinite(nrm)) throw NumericalError("cannot normalize MPS");
  for (int s = 0; s < 2; ++s) sites_[center_][s] /= nrm;
}

double Mps::isometry_defect(int i) const {
  const auto& a = sites_.at(i);
  if (i == center_) return 0.0;
  MatrixXcd g;
  if (i < center_) {
    g = a[0].adjoint() * a[0] + a[1].adjoint() * a[1];
  } else {
    g = a[0] * a[0].adjoint() + a[1] * a[1].adjoint();
  }
  return (g - MatrixXcd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
}

void Mps::apply_single_site(int i, const Eigen::Matrix2cd& op) {
  auto& a = sites_.at(i);
  const MatrixXcd a0 = a[0];
  const MatrixXcd a1 = a[1];
  a[0] = op(0, 0) * a0 + op(0, 1) * a1;
  a[1] = op(1, 0) * a0 + op(1, 1) * a1;
}

double Mps::apply_two_site(int b, const Eigen::Matrix4cd& gate, const Truncation& trunc,
                           CenterMoves moves, bool renormalize) {
  if (b < 0 || b + 1 >= size()) throw InputError("bond out of range");
  if (center_ < b) move_center(b);
  if (center_ > b + 1) move_center(b + 1);
  auto& left = sites_[b];
  auto& right = sites_[b + 1];
  const Eigen::Index chi_l = left[0].rows();
  const Eigen::Index chi_r = right[0].cols();

  MatrixXcd pair[2][2];
  for (int s1 = 0; s1 < 2; ++s1) {
    for (int s2 = 0; s2 < 2; ++s2) pair[s1][s2].noalias() = left[s1] * right[s2];
  }
  MatrixXcd theta(2 * chi_l, 2 * chi_r);
  for (int s1 = 0; s1 < 2; ++s1) {
    for (int s2 = 0; s2 < 2; ++s2) {
      auto block = theta.block(s1 * chi_l, s2 * chi_r, chi_l, chi_r);
      block.setZero();
      for (int p1 = 0; p1 < 2; ++p1) {
        for (int p2 = 0; p2 < 2; ++p2) {
          const cd g = gate(2 * s1 + s2, 2 * p1 + p2);
          if (g != cd(0.0)) block += g * pair[p1][p2];
        }
      }
    }
  }
  if (!theta.allFinite()) throw NumericalError("non-finite two-site block");
  const Svd svd = thin_svd(theta);
  const Eigen::VectorXd& sv = svd.s;
  const double total = sv.squaredNorm();
  if (!(total > 0.0) || !std::isfinite(total)) throw NumericalError("two-site block has zero norm");
  Eigen::Index keep = sv.size();
  double discarded = 0.0;
  while (keep > 1) {
    const double w = sv(keep - 1) * sv(keep - 1);
    if ((discarded + w) / total > trunc.cutoff) break;
    discarded += w;
    --keep;
  }
  if (keep > trunc.max_bond) {
    throw CapacityError("bond dimension " + std::to_string(keep) + " exceeds cap " +
                            std::to_string(trunc.max_bond),
                        0.0);
  }
  Eigen::VectorXd s = sv.head(keep);
  if (renormalize) s /= s.norm();
  const MatrixXcd u = svd.u.leftCols(keep);
  const MatrixXcd vh = svd.vh.topRows(keep);
  if (moves == CenterMoves::Right) {
    const MatrixXcd svh = s.cast<cd>().asDiagonal() * vh;
    for (int q = 0; q < 2; ++q) {
      left[q] = u.middleRows(q * chi_l, chi_l);
      right[q] = svh.middleCols(q * chi_r, chi_r);
    }
    center_ = b + 1;
  } else {
    const MatrixXcd us = u * s.cast<cd>().asDiagonal();
    for (int q = 0; q < 2; ++q) {
      left[q] = us.middleRows(q * chi_l, chi_l);
      right[q] = vh.middleCols(q * chi_r, chi_r);
    }
    center_ = b;
  }
  return discarded / total;
}

Eigen::VectorXcd Mps::to_dense() const {
  if (size() > 20) throw CapacityError("to_dense is limited to 20 sites", 0.0);
  MatrixXcd psi = MatrixXcd::Ones(1, 1);
  for (int i = 0; i < size(); ++i) {
    const auto& a = sites_[i];
    MatrixXcd next(2 * psi.rows(), a[0].cols());
    next.topRows(psi.rows()) = psi * a[0];
    next.bottomRows(psi.rows()) = psi * a[1];
    psi = std::move(next);
  }
  return psi.col(0);
}

std::complex<double> Mps::overlap(const Mps& other) const {
  if (other.size() != size()) throw InputError("overlap of MPS with different lengths");
  MatrixXcd env = MatrixXcd::Ones(1, 1);
  for (int i = 0; i < size(); ++i) {
    const auto& a = sites_[i];
    const auto& b = other.sites_[i];
    const MatrixXcd t0 = env * b[0];
    const MatrixXcd t1 = env * b[1];
    env = a[0].adjoint() * t0 + a[1].adjoint() * t1;
  }
  return env(0, 0);
}

std::complex<double> Mps::expect_product(const std::vector<Eigen::Matrix2cd>& ops) const {
  if (static_cast<int>(ops.size()) != size()) throw InputError("one operator per site required");
  MatrixXcd env = MatrixXcd::Ones(1, 1);
  for (int i = 0; i < size(); ++i) env = transfer(env, sites_[i], ops[i]);
  return env(0, 0);
}

double energy_mps(const Mps& state, const ModelSpec& model) {
  const int n = state.size();
  if (model.n != n) throw InputError("model and state disagree on n");
  // Finite-automaton MPO: channel 0 = identity so far, 1..C = left half of a
  // bond term placed on the previous site, C + 1 = term completed.
  std::map<std::pair<Axis, Axis>, int> channels;
  for (const auto& t : model.bond_terms()) {
    channels.emplace(std::make_pair(t.left, t.right), 0);
  }
  int c = 0;
  std::vector<std::pair<Axis, Axis>> channel_ops;
  for (auto& [k, v] : channels) {
    v = ++c;
    channel_ops.push_back(k);
  }
  const int dim = c + 2;
  const int done = c + 1;
  std::vector<std::vector<double>> bond_coeff(n, std::vector<double>(dim, 0.0));
  for (const auto& t : model.bond_terms()) {
    bond_coeff[t.site][channels.at({t.left, t.right})] += t.coeff;
  }
  std::vector<Eigen::Matrix2cd> onsite(n, Eigen::Matrix2cd::Zero());
  for (const auto& t : model.site_terms()) onsite[t.site] += t.coeff * pauli(t.axis);
  const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();

  std::vector<MatrixXcd> env(dim);
  env[0] = MatrixXcd::Ones(1, 1);
  for (int i = 0; i < n; ++i) {
    const auto& a = state.site(i);
    const Eigen::Index chi = a[0].cols();
    std::vector<MatrixXcd> next(dim, MatrixXcd::Zero(chi, chi));
    if (env[0].size() > 0) {
      next[0] = transfer(env[0], a, id);
      next[done] = transfer(env[0], a, onsite[i]);
      if (i + 1 < n) {
        for (int ch = 1; ch <= c; ++ch) {
          if (bond_coeff[i][ch] != 0.0) next[ch] = transfer(env[0], a, pauli(channel_ops[ch - 1].first));
        }
      }
    }
    if (i > 0) {
      for (int ch = 1; ch <= c; ++ch) {
        if (env[ch].size() == 0 || bond_coeff[i - 1][ch] == 0.0) continue;
        next[done] += bond_coeff[i - 1][ch] *
                      transfer(env[ch], a, pauli(channel_ops[ch - 1].second));
      }
    }
    if (env[done].size() > 0) next[done] += transfer(env[done], a, id);
    for (int ch = 1; ch <= c; ++ch) {
      if (i + 1 >= n || bond_coeff[i][ch] == 0.0) next[ch].resize(0, 0);
    }
    env = std::move(next);
  }
  const double norm2 = env[0](0, 0).real();
  if (!(norm2 > 0.0)) throw NumericalError("state has zero norm");
  return env[done](0, 0).real() / norm2;
}

ExcitationPopulations hamming_populations(const Mps& state, const ProductBasis& reference,
                                          int k_max) {
  const int n = state.size();
  if (reference.size() != n) throw InputError("reference basis and state disagree on n");
  reference.check_orthonormal();
  if (k_max < 0) throw InputError("k_max must be non-negative");
  const int m = n + 1;
  auto sample = [&](int j) {
    const double theta = 2.0 * std::numbers::pi * j / m;
    std::vector<Eigen::Matrix2cd> ops(n);
    for (int i = 0; i < n; ++i) {
      const Eigen::Matrix2cd& u = reference.local[i];
      Eigen::Matrix2cd d = Eigen::Matrix2cd::Zero();
      d(0, 0) = 1.0;
      d(1, 1) = std::polar(1.0, theta);
      ops[i] = u * d * u.adjoint();
    }
    return state.expect_product(ops);
  };
  std::vector<std::future<cd>> jobs;
  const unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  std::vector<cd> values(m);
  if (workers > 1) {
    for (int j = 0; j < m; ++j) jobs.push_back(std::async(std::launch::async, sample, j));
    for (int j = 0; j < m; ++j) values[j] = jobs[j].get();
  } else {
    for (int j = 0; j < m; ++j) values[j] = sample(j);
  }
  const double norm2 = values[0].real();
  if (!(norm2 > 0.0)) throw NumericalError("state has zero norm");
  for (auto& v : values) v /= norm2;
  return populations_from_generating_function(values, k_max);
}

namespace {

constexpr char kMagic[8] = {'A', 'D', 'I', 'A', 'M', 'P', 'S', '1'};
constexpr std::uint32_t kVersion = 1;

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes little-endian");

template <class T>
void put(std::ofstream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::ifstream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw InputError("checkpoint is truncated");
  return v;
}

}  // namespace

void save_checkpoint(const std::string& path, const Checkpoint& checkpoint) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot open checkpoint for writing: " + path);
  const Mps& m = checkpoint.state;
  out.write(kMagic, sizeof(kMagic));
  put(out, kVersion);
  put(out, static_cast<std::int32_t>(m.size()));
  put(out, static_cast<std::int32_t>(m.center()));
  put(out, checkpoint.cutoff);
  put(out, checkpoint.time);
  put(out, std::int32_t{1});
  for (int i = 0; i < m.size(); ++i) put(out, static_cast<std::int32_t>(m.site(i)[0].cols()));
  for (int i = 0; i < m.size(); ++i) {
    for (int s = 0; s < 2; ++s) {
      const MatrixXcd& a = m.site(i)[s];
      out.write(reinterpret_cast<const char*>(a.data()),
                static_cast<std::streamsize>(a.size() * sizeof(cd)));
    }
  }
  if (!out) throw InputError("failed writing checkpoint: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open checkpoint: " + path);
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw InputError("not an MPS checkpoint: " + path);
  }
  if (get<std::uint32_t>(in) != kVersion) throw InputError("unsupported checkpoint version");
  const int n = get<std::int32_t>(in);
  const int center = get<std::int32_t>(in);
  if (n < 1 || n > 1 << 20) throw InputError("checkpoint has invalid length");
  Checkpoint cp;
  cp.cutoff = get<double>(in);
  cp.time = get<double>(in);
  std::vector<int> chi(n + 1);
  for (auto& x : chi) {
    x = get<std::int32_t>(in);
    if (x < 1 || x > 1 << 16) throw InputError("checkpoint has invalid bond dimension");
  }
  std::vector<SiteTensor> sites(n);
  for (int i = 0; i < n; ++i) {
    for (int s = 0; s < 2; ++s) {
      MatrixXcd a(chi[i], chi[i + 1]);
      in.read(reinterpret_cast<char*>(a.data()), static_cast<std::streamsize>(a.size() * sizeof(cd)));
      if (!in) throw InputError("checkpoint is truncated");
      sites[i][s] = std::move(a);
    }
  }
  cp.state = Mps::from_tensors(std::move(sites), center);
  return cp;
}

}  // namespace adiaerr::mps
