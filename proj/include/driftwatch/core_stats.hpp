/*
 * Copyright 2026 The driftwatch authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Univariate distribution estimation (PMF / empirical CDF) and the three
// distribution distances used for drift monitoring, plus the small
// normalization/correlation utilities the monitoring layer needs.
//
// All functions are pure and thread-safe. Sums run left-to-right over the
// support so results are bitwise reproducible.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace driftwatch {

enum class MetricKind : std::uint8_t {
  Wasserstein1 = 0,
  KolmogorovSmirnov = 1,
  KullbackLeibler = 2,
};

// The three metrics in their fixed presentation order.
std::span<const MetricKind> all_metrics();

std::string_view metric_name(MetricKind kind);

// Parses "wasserstein1"/"w1", "kolmogorov_smirnov"/"ks",
// "kullback_leibler"/"kld". Throws std::invalid_argument otherwise.
MetricKind parse_metric(std::string_view name);

enum class EdgePolicy : std::uint8_t {
  Clamp = 0,   // out-of-range samples land in the first/last bin
  Reject = 1,  // out-of-range samples raise an error
};

struct HistogramSpec {
  std::size_t bin_count = 100;
  double lower_edge = 0.0;
  double upper_edge = 1.0;
  EdgePolicy edge_policy = EdgePolicy::Clamp;

  // Throws std::invalid_argument unless lower < upper, both finite,
  // and bin_count >= 2.
  void validate() const;

  bool operator==(const HistogramSpec&) const = default;
};

// A discrete PMF on a strictly increasing support. Mass entries are
// nonnegative and sum to 1 within 1e-9; both checked at construction.
class DiscretePmf {
 public:
  DiscretePmf(std::vector<double> support, std::vector<double> mass);

  const std::vector<double>& support() const { return support_; }
  const std::vector<double>& mass() const { return mass_; }
  std::size_t size() const { return support_.size(); }

 private:
  std::vector<double> support_;
  std::vector<double> mass_;
};

// Right-continuous empirical CDF: cumulative[n] = F(support[n]),
// nondecreasing with final entry 1 (within 1e-12, checked).
class EmpiricalCdf {
 public:
  EmpiricalCdf(std::vector<double> support, std::vector<double> cumulative);

  // Step evaluation: F(x) = cumulative at the largest support point <= x,
  // 0 below the support.
  double operator()(double x) const;

  const std::vector<double>& support() const { return support_; }
  const std::vector<double>& cumulative() const { return cumulative_; }
  std::size_t size() const { return support_.size(); }

 private:
  std::vector<double> support_;
  std::vector<double> cumulative_;
};

// Histogram PMF of `samples` under `spec`: support = bin centers, bins are
// half-open [edge_i, edge_{i+1}) with the final bin closed.
DiscretePmf build_histogram(std::span<const double> samples,
                            const HistogramSpec& spec);

// Empirical CDF of `samples`: support = sorted distinct values,
// cumulative[n] = #(samples <= s_n) / total.
EmpiricalCdf build_empirical_cdf(std::span<const double> samples);

// Same, with `sorted` already in ascending order (not re-checked beyond
// debug assertions; the drift engine's per-dimension columns use this).
EmpiricalCdf cdf_from_sorted(std::span<const double> sorted);

// Re-expresses both CDFs on the union of their supports. Distances
// computed on the merged pair equal those on the originals.
std::pair<EmpiricalCdf, EmpiricalCdf> merge_supports(const EmpiricalCdf& p,
                                                     const EmpiricalCdf& q);

// Area between the two CDFs over the merged support
// sum_{n=2}^{N} |F_p(s_{n-1}) - F_q(s_{n-1})| * (s_n - s_{n-1}),
// i.e. the CDF gap is taken at the left endpoint of each interval.
// Symmetric, zero exactly when the distributions are equal, and for point
// masses at a and b equals |a - b|.
double wasserstein1(const EmpiricalCdf& p, const EmpiricalCdf& q);

// max_n |F_p(s_n) - F_q(s_n)| over the merged support. In [0, 1];
// 1 exactly when the supports are disjoint and ordered.
double ks_statistic(const EmpiricalCdf& p, const EmpiricalCdf& q);

// sum_n f'_p(s_n) * ln(f'_p(s_n) / f'_q(s_n)) where f' adds `smoothing`
// to every bin and renormalizes. Requires identical supports. With
// smoothing = 0, bins with f_p = 0 contribute nothing and a bin with
// f_p > 0, f_q = 0 raises std::domain_error. Natural log; asymmetric.
double kl_divergence(const DiscretePmf& p, const DiscretePmf& q,
                     double smoothing);

// (x - min) / (max - min) elementwise; a constant series maps to all
// zeros. Preserves argmin/argmax positions.
std::vector<double> min_max_normalize(std::span<const double> series);

// Sample Pearson coefficient. Requires equal lengths >= 2 and neither
// series constant.
double pearson_correlation(std::span<const double> a,
                           std::span<const double> b);

}  // namespace driftwatch
