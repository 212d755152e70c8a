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

#include <cstdint>
#include <random>
#include <vector>

/// Spreading of a single depolarized qubit through a brick-wall circuit of
/// random two-qubit gates, tracked on bit strings.
namespace adiaerr::randomcircuit {

using Rng = std::mt19937_64;

/// Seed of trajectory `index` drawn from the master seed.
std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index);

/// bits[i] = 1 iff qubit i carries the error.
struct NoiseString {
  std::vector<std::uint8_t> bits;
  /// Layers applied so far.
  int layer = 0;
  /// Bond parity of the first layer: 0 starts with (0,1),(2,3),..., 1 with (1,2),(3,4),...
  int first_parity = 0;

  static NoiseString one_hot(int n, int site, int first_parity = 0);
  int size() const { return static_cast<int>(bits.size()); }
  int count() const;
  /// Parity of the bonds the next layer acts on.
  int next_parity() const { return (first_parity + layer) % 2; }
  bool absorbed() const;
};

/// Twirled gate on (left, left + 1): 00 and 11 are kept; a single error
/// becomes 00 with probability 1/5 and 11 with probability 4/5.
void gate_update(std::vector<std::uint8_t>& bits, int left, Rng& rng);

/// One brick-wall layer on the bonds of the string's next parity.
void apply_layer(NoiseString& s, Rng& rng);

/// Strings after 0, 1, ..., t_layers layers starting one-hot at start_site.
std::vector<NoiseString> run_layers(int n, int t_layers, int start_site, Rng& rng,
                                    int first_parity = 0);

struct MarkovQuery {
  int n = 50;
  int t_layers = 100;
  long samples = 100000;
  /// Defaults to n / 2 when negative.
  int start_site = -1;
  int first_parity = 0;
  std::uint64_t seed = 1;
  /// Worker threads; 0 picks the hardware concurrency.
  unsigned threads = 0;
};

/// Monte Carlo tallies per layer count t = 0..t_layers. Sums are integers so
/// the result does not depend on how trajectories are split across threads.
struct MarkovStats {
  long samples = 0;
  int n = 0;
  std::vector<std::int64_t> sum;
  std::vector<std::int64_t> sum_sq;
  std::vector<std::int64_t> zero_count;
  std::vector<std::int64_t> full_count;

  double mean(int t) const;
  double standard_error(int t) const;
  double fraction_zero(int t) const;
  double fraction_full(int t) const;
  double fraction_unresolved(int t) const;
};

MarkovStats simulate(const MarkovQuery& q);

struct DamageCurve {
  std::vector<double> mean;
  std::vector<double> standard_error;
};

/// <X_t> with its standard error for t = 0..t_layers.
DamageCurve mean_damage(const MarkovQuery& q);

struct Proportion {
  double estimate = 0.0;
  double sigma = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

/// Wilson score interval at z standard deviations.
Proportion wilson(std::int64_t successes, std::int64_t trials, double z = 1.96);

/// Pr(X_t = 0 | X_0 = 1) for t = 0..t_layers.
std::vector<Proportion> return_probability(const MarkovQuery& q);

/// Exact law of X_t. The error support stays a contiguous interval, so the
/// chain is iterated over intervals [a, b] plus the empty state.
class ChainDistribution {
 public:
  ChainDistribution(int n, int start_site, int first_parity = 0);

  void step();
  int layer() const { return layer_; }
  /// Pr(X = k) for k = 0..n.
  std::vector<double> marginal() const;
  double mean() const;
  double total() const;

 private:
  int n_;
  int parity_;
  int layer_ = 0;
  double empty_ = 0.0;
  std::vector<double> interval_;  // interval_[a * n + b], a <= b
};

/// Energy excess when the error spreads over the whole chain with
/// probability pr_spread: the mixed state has energy 0.
double extensive_delta_e(int n, double ground_energy_per_site, double pr_spread);

}  // namespace adiaerr::randomcircuit
