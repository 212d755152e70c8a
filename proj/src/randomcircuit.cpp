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

#include "adiaerr/randomcircuit.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "adiaerr/errors.hpp"

namespace adiaerr::randomcircuit {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  std::uint64_t z = x + 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// The modulo bias of 2^64 mod 5 is below 1e-18.
bool clears(Rng& rng) { return rng() % 5 == 0; }

void check_chain(int n, int start_site, int first_parity) {
  if (n < 2) throw InputError("chain needs at least 2 qubits");
  if (start_site < 0 || start_site >= n) throw InputError("start site out of range");
  if (first_parity != 0 && first_parity != 1) throw InputError("layer parity must be 0 or 1");
}

int resolve_start(const MarkovQuery& q) { return q.start_site < 0 ? q.n / 2 : q.start_site; }

}  // namespace

std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(master ^ splitmix64(index));
}

NoiseString NoiseString::one_hot(int n, int site, int first_parity) {
  check_chain(n, site, first_parity);
  NoiseString s;
  s.bits.assign(n, 0);
  s.bits[site] = 1;
  s.first_parity = first_parity;
  return s;
}

int NoiseString::count() const {
  return static_cast<int>(std::count(bits.begin(), bits.end(), std::uint8_t{1}));
}

bool NoiseString::absorbed() const {
  const int c = count();
  return c == 0 || c == size();
}

void gate_update(std::vector<std::uint8_t>& bits, int left, Rng& rng) {
  if (left < 0 || left + 1 >= static_cast<int>(bits.size())) throw InputError("gate off the chain");
  if (bits[left] == bits[left + 1]) return;
  const std::uint8_t v = clears(rng) ? 0 : 1;
  bits[left] = v;
  bits[left + 1] = v;
}

void apply_layer(NoiseString& s, Rng& rng) {
  for (int i = s.next_parity(); i + 1 < s.size(); i += 2) gate_update(s.bits, i, rng);
  ++s.layer;
}

std::vector<NoiseString> run_layers(int n, int t_layers, int start_site, Rng& rng,
                                    int first_parity) {
  if (t_layers < 0) throw InputError("number of layers must be non-negative");
  std::vector<NoiseString> out;
  out.reserve(t_layers + 1);
  out.push_back(NoiseString::one_hot(n, start_site, first_parity));
  for (int t = 0; t < t_layers; ++t) {
    NoiseString next = out.back();
    apply_layer(next, rng);
    out.push_back(std::move(next));
  }
  return out;
}

double MarkovStats::mean(int t) const { return static_cast<double>(sum.at(t)) / samples; }

double MarkovStats::standard_error(int t) const {
  if (samples < 2) return 0.0;
  const double m = mean(t);
  const double var = (static_cast<double>(sum_sq.at(t)) - samples * m * m) / (samples - 1);
  return std::sqrt(std::max(0.0, var) / samples);
}

double MarkovStats::fraction_zero(int t) const {
  return static_cast<double>(zero_count.at(t)) / samples;
}

double MarkovStats::fraction_full(int t) const {
  return static_cast<double>(full_count.at(t)) / samples;
}

double MarkovStats::fraction_unresolved(int t) const {
  return 1.0 - fraction_zero(t) - fraction_full(t);
}

MarkovStats simulate(const MarkovQuery& q) {
  const int start = resolve_start(q);
  check_chain(q.n, start, q.first_parity);
  if (q.t_layers < 0) throw InputError("number of layers must be non-negative");
  if (q.samples < 1) throw InputError("need at least one sample");
  const int n = q.n;
  const int t_max = q.t_layers;

  struct Tally {
    std::vector<std::int64_t> sum, sum_sq, zero_from, full_from;
  };
  auto run_chunk = [&](long begin, long end, Tally& tally) {
    tally.sum.assign(t_max + 1, 0);
    tally.sum_sq.assign(t_max + 1, 0);
    tally.zero_from.assign(t_max + 2, 0);
    tally.full_from.assign(t_max + 2, 0);
    std::vector<std::uint8_t> bits(n);
    for (long j = begin; j < end; ++j) {
      Rng rng(stream_seed(q.seed, static_cast<std::uint64_t>(j)));
      std::fill(bits.begin(), bits.end(), std::uint8_t{0});
      bits[start] = 1;
      int lo = start, hi = start, count = 1;
      int t = 0;
      for (;; ++t) {
        tally.sum[t] += count;
        tally.sum_sq[t] += static_cast<std::int64_t>(count) * count;
        if (count == 0 || count == n) {
          // Absorbed: the value holds for every later layer.
          for (int u = t + 1; u <= t_max; ++u) {
            tally.sum[u] += count;
            tally.sum_sq[u] += static_cast<std::int64_t>(count) * count;
          }
          (count == 0 ? tally.zero_from : tally.full_from)[t] += 1;
          break;
        }
        if (t == t_max) break;
        // Only gates touching [lo - 1, hi + 1] can change the string.
        const int parity = (q.first_parity + t) % 2;
        int first = std::max(0, lo - 1);
        if ((first - parity) % 2 != 0) ++first;
        for (int i = first; i + 1 < n && i <= hi; i += 2) gate_update(bits, i, rng);
        const int scan_lo = std::max(0, lo - 1), scan_hi = std::min(n - 1, hi + 1);
        count = 0;
        lo = n;
        hi = -1;
        for (int i = scan_lo; i <= scan_hi; ++i) {
          if (bits[i]) {
            ++count;
            lo = std::min(lo, i);
            hi = std::max(hi, i);
          }
        }
      }
    }
  };

  unsigned threads = q.threads ? q.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<long>(threads, q.samples));
  std::vector<Tally> tallies(threads);
  if (threads == 1) {
    run_chunk(0, q.samples, tallies[0]);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) {
      const long begin = q.samples * w / threads;
      const long end = q.samples * (w + 1) / threads;
      pool.emplace_back(run_chunk, begin, end, std::ref(tallies[w]));
    }
    for (auto& th : pool) th.join();
  }

  MarkovStats stats;
  stats.samples = q.samples;
  stats.n = n;
  stats.sum.assign(t_max + 1, 0);
  stats.sum_sq.assign(t_max + 1, 0);
  stats.zero_count.assign(t_max + 1, 0);
  stats.full_count.assign(t_max + 1, 0);
  for (const auto& tally : tallies) {
    std::int64_t zero = 0, full = 0;
    for (int t = 0; t <= t_max; ++t) {
      zero += tally.zero_from[t];
      full += tally.full_from[t];
      stats.sum[t] += tally.sum[t];
      stats.sum_sq[t] += tally.sum_sq[t];
      stats.zero_count[t] += zero;
      stats.full_count[t] += full;
    }
  }
  return stats;
}

DamageCurve mean_damage(const MarkovQuery& q) {
  const MarkovStats stats = simulate(q);
  DamageCurve curve;
  for (int t = 0; t <= q.t_layers; ++t) {
    curve.mean.push_back(stats.mean(t));
    curve.standard_error.push_back(stats.standard_error(t));
  }
  return curve;
}

Proportion wilson(std::int64_t successes, std::int64_t trials, double z) {
  if (trials <= 0) return {0.0, 0.0, 0.0, 1.0};
  if (successes < 0 || successes > trials) throw InputError("successes out of range");
  const double nt = static_cast<double>(trials);
  const double p = successes / nt;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nt;
  const double center = (p + z2 / (2.0 * nt)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / nt + z2 / (4.0 * nt * nt)) / denom;
  return {p, std::sqrt(p * (1.0 - p) / nt), std::max(0.0, center - half), std::min(1.0, center + half)};
}

std::vector<Proportion> return_probability(const MarkovQuery& q) {
  const MarkovStats stats = simulate(q);
  std::vector<Proportion> out;
  for (int t = 0; t <= q.t_layers; ++t) out.push_back(wilson(stats.zero_count[t], stats.samples));
  return out;
}

ChainDistribution::ChainDistribution(int n, int start_site, int first_parity)
    : n_(n), parity_(first_parity) {
  check_chain(n, start_site, first_parity);
  interval_.assign(static_cast<std::size_t>(n) * n, 0.0);
  interval_[static_cast<std::size_t>(start_site) * n + start_site] = 1.0;
}

void ChainDistribution::step() {
  const int n = n_;
  const int parity = (parity_ + layer_) % 2;
  // Left end of the gate covering site i in this layer, or -1.
  auto gate_of = [&](int i) {
    const int left = ((i - parity) % 2 == 0) ? i : i - 1;
    return (left >= 0 && left + 1 < n) ? left : -1;
  };
  std::vector<double> next(interval_.size(), 0.0);
  double empty = empty_;
  auto add = [&](int a, int b, double p) {
    if (a > b) {
      empty += p;
    } else {
      next[static_cast<std::size_t>(a) * n + b] += p;
    }
  };
  for (int a = 0; a < n; ++a) {
    for (int b = a; b < n; ++b) {
      const double p = interval_[static_cast<std::size_t>(a) * n + b];
      if (p == 0.0) continue;
      if (a == b) {
        const int g = gate_of(a);
        if (g < 0) {
          add(a, b, p);
        } else {
          add(g, g + 1, 0.8 * p);
          empty += 0.2 * p;
        }
        continue;
      }
      // Boundary moves: (new end, probability) pairs.
      std::pair<int, double> left[2] = {{a, 1.0}, {a, 0.0}};
      std::pair<int, double> right[2] = {{b, 1.0}, {b, 0.0}};
      if (a > 0 && gate_of(a) == a - 1) {
        left[0] = {a - 1, 0.8};
        left[1] = {a + 1, 0.2};
      }
      if (gate_of(b) == b) {
        right[0] = {b + 1, 0.8};
        right[1] = {b - 1, 0.2};
      }
      for (const auto& [na, pa] : left) {
        for (const auto& [nb, pb] : right) {
          if (pa * pb > 0.0) add(na, nb, p * pa * pb);
        }
      }
    }
  }
  interval_ = std::move(next);
  empty_ = empty;
  ++layer_;
}

std::vector<double> ChainDistribution::marginal() const {
  std::vector<double> out(n_ + 1, 0.0);
  out[0] = empty_;
  for (int a = 0; a < n_; ++a) {
    for (int b = a; b < n_; ++b) out[b - a + 1] += interval_[static_cast<std::size_t>(a) * n_ + b];
  }
  return out;
}

double ChainDistribution::mean() const {
  const auto m = marginal();
  double s = 0.0;
  for (std::size_t k = 0; k < m.size(); ++k) s += k * m[k];
  return s;
}

double ChainDistribution::total() const {
  const auto m = marginal();
  double s = 0.0;
  for (double v : m) s += v;
  return s;
}

double extensive_delta_e(int n, double ground_energy_per_site, double pr_spread) {
  if (n < 1) throw InputError("n must be positive");
  if (pr_spread < 0.0 || pr_spread > 1.0) throw InputError("spreading probability outside [0, 1]");
  return pr_spread * (0.0 - n * ground_energy_per_site);
}

}  // namespace adiaerr::randomcircuit
