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

#include "driftwatch/core_stats.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace driftwatch {

namespace {

constexpr double kMassSumTolerance = 1e-9;
constexpr double kCdfFinalTolerance = 1e-12;

void require(bool condition, const std::string& message) {
  if (!condition) {
    throw std::invalid_argument(message);
  }
}

void require_finite(std::span<const double> samples, const char* what) {
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!std::isfinite(samples[i])) {
      throw std::invalid_argument(std::string(what) + ": non-finite value at index " +
                                  std::to_string(i));
    }
  }
}

}  // namespace

std::span<const MetricKind> all_metrics() {
  static constexpr std::array<MetricKind, 3> kMetrics = {
      MetricKind::Wasserstein1,
      MetricKind::KolmogorovSmirnov,
      MetricKind::KullbackLeibler,
  };
  return kMetrics;
}

std::string_view metric_name(MetricKind kind) {
  switch (kind) {
    case MetricKind::Wasserstein1:
      return "wasserstein1";
    case MetricKind::KolmogorovSmirnov:
      return "kolmogorov_smirnov";
    case MetricKind::KullbackLeibler:
      return "kullback_leibler";
  }
  throw std::invalid_argument("unknown metric kind");
}

MetricKind parse_metric(std::string_view name) {
  if (name == "wasserstein1" || name == "w1") {
    return MetricKind::Wasserstein1;
  }
  if (name == "kolmogorov_smirnov" || name == "kolmogorov-smirnov" ||
      name == "ks") {
    return MetricKind::KolmogorovSmirnov;
  }
  if (name == "kullback_leibler" || name == "kullback-leibler" ||
      name == "kld" || name == "kl") {
    return MetricKind::KullbackLeibler;
  }
  throw std::invalid_argument("unknown metric '" + std::string(name) + "'");
}

void HistogramSpec::validate() const {
  require(bin_count >= 2, "HistogramSpec: bin_count must be >= 2");
  require(std::isfinite(lower_edge) && std::isfinite(upper_edge),
          "HistogramSpec: edges must be finite");
  require(lower_edge < upper_edge,
          "HistogramSpec: lower_edge must be < upper_edge");
}

DiscretePmf::DiscretePmf(std::vector<double> support, std::vector<double> mass)
    : support_(std::move(support)), mass_(std::move(mass)) {
  require(!support_.empty(), "DiscretePmf: empty support");
  require(support_.size() == mass_.size(),
          "DiscretePmf: support/mass length mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < support_.size(); ++i) {
    require(std::isfinite(support_[i]), "DiscretePmf: non-finite support");
    if (i > 0) {
      require(support_[i - 1] < support_[i],
              "DiscretePmf: support must be strictly increasing");
    }
    require(mass_[i] >= 0.0, "DiscretePmf: negative mass");
    sum += mass_[i];
  }
  require(std::abs(sum - 1.0) <= kMassSumTolerance,
          "DiscretePmf: mass must sum to 1");
}

EmpiricalCdf::EmpiricalCdf(std::vector<double> support,
                           std::vector<double> cumulative)
    : support_(std::move(support)), cumulative_(std::move(cumulative)) {
  require(!support_.empty(), "EmpiricalCdf: empty support");
  require(support_.size() == cumulative_.size(),
          "EmpiricalCdf: support/cumulative length mismatch");
  for (std::size_t i = 0; i < support_.size(); ++i) {
    require(std::isfinite(support_[i]), "EmpiricalCdf: non-finite support");
    if (i > 0) {
      require(support_[i - 1] < support_[i],
              "EmpiricalCdf: support must be strictly increasing");
      require(cumulative_[i - 1] <= cumulative_[i],
              "EmpiricalCdf: cumulative must be nondecreasing");
    }
    require(cumulative_[i] >= 0.0 && cumulative_[i] <= 1.0,
            "EmpiricalCdf: cumulative values must lie in [0, 1]");
  }
  require(std::abs(cumulative_.back() - 1.0) <= kCdfFinalTolerance,
          "EmpiricalCdf: final cumulative value must be 1");
}

double EmpiricalCdf::operator()(double x) const {
  auto it = std::upper_bound(support_.begin(), support_.end(), x);
  if (it == support_.begin()) {
    return 0.0;
  }
  return cumulative_[static_cast<std::size_t>(it - support_.begin()) - 1];
}

DiscretePmf build_histogram(std::span<const double> samples,
                            const HistogramSpec& spec) {
  require(!samples.empty(), "build_histogram: empty sample list");
  spec.validate();
  require_finite(samples, "build_histogram");

  const std::size_t bins = spec.bin_count;
  const double width = (spec.upper_edge - spec.lower_edge) / static_cast<double>(bins);
  std::vector<std::size_t> counts(bins, 0);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double x = samples[i];
    std::size_t idx;
    if (x < spec.lower_edge || x > spec.upper_edge) {
      if (spec.edge_policy == EdgePolicy::Reject) {
        throw std::invalid_argument(
            "build_histogram: sample " + std::to_string(i) + " (" +
            std::to_string(x) + ") outside [" + std::to_string(spec.lower_edge) +
            ", " + std::to_string(spec.upper_edge) + "] under reject policy");
      }
      idx = x < spec.lower_edge ? 0 : bins - 1;
    } else {
      const double offset = (x - spec.lower_edge) / width;
      idx = std::min<std::size_t>(static_cast<std::size_t>(offset), bins - 1);
    }
    ++counts[idx];
  }

  std::vector<double> support(bins);
  std::vector<double> mass(bins);
  const double total = static_cast<double>(samples.size());
  for (std::size_t b = 0; b < bins; ++b) {
    support[b] = spec.lower_edge + (static_cast<double>(b) + 0.5) * width;
    mass[b] = static_cast<double>(counts[b]) / total;
  }
  return DiscretePmf(std::move(support), std::move(mass));
}

EmpiricalCdf build_empirical_cdf(std::span<const double> samples) {
  require(!samples.empty(), "build_empirical_cdf: empty sample list");
  require_finite(samples, "build_empirical_cdf");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  return cdf_from_sorted(sorted);
}

EmpiricalCdf cdf_from_sorted(std::span<const double> sorted) {
  require(!sorted.empty(), "cdf_from_sorted: empty sample list");
  const double total = static_cast<double>(sorted.size());
  std::vector<double> support;
  std::vector<double> cumulative;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i + 1 < sorted.size() && sorted[i + 1] == sorted[i]) {
      continue;  // ranks of duplicates collapse onto the last one
    }
    support.push_back(sorted[i]);
    cumulative.push_back(static_cast<double>(i + 1) / total);
  }
  return EmpiricalCdf(std::move(support), std::move(cumulative));
}

namespace {

// Walks the union of two supports in ascending order, calling
// visit(s, F_p_before, F_q_before, F_p_at, F_q_at) at every union point s,
// where *_before are the step values just left of s and *_at the
// right-continuous values at s.
template <typename Visitor>
void walk_merged(const EmpiricalCdf& p, const EmpiricalCdf& q, Visitor visit) {
  const auto& ps = p.support();
  const auto& qs = q.support();
  std::size_t i = 0;
  std::size_t j = 0;
  double fp = 0.0;
  double fq = 0.0;
  while (i < ps.size() || j < qs.size()) {
    double s;
    if (j >= qs.size() || (i < ps.size() && ps[i] <= qs[j])) {
      s = ps[i];
    } else {
      s = qs[j];
    }
    const double fp_before = fp;
    const double fq_before = fq;
    if (i < ps.size() && ps[i] == s) {
      fp = p.cumulative()[i];
      ++i;
    }
    if (j < qs.size() && qs[j] == s) {
      fq = q.cumulative()[j];
      ++j;
    }
    visit(s, fp_before, fq_before, fp, fq);
  }
}

}  // namespace

std::pair<EmpiricalCdf, EmpiricalCdf> merge_supports(const EmpiricalCdf& p,
                                                     const EmpiricalCdf& q) {
  std::vector<double> support;
  std::vector<double> fp_values;
  std::vector<double> fq_values;
  walk_merged(p, q, [&](double s, double, double, double fp_at, double fq_at) {
    support.push_back(s);
    fp_values.push_back(fp_at);
    fq_values.push_back(fq_at);
  });
  EmpiricalCdf merged_p(support, std::move(fp_values));
  EmpiricalCdf merged_q(std::move(support), std::move(fq_values));
  return {std::move(merged_p), std::move(merged_q)};
}

double wasserstein1(const EmpiricalCdf& p, const EmpiricalCdf& q) {
  double total = 0.0;
  double prev = 0.0;
  bool first = true;
  walk_merged(p, q,
              [&](double s, double fp_before, double fq_before, double, double) {
                if (!first) {
                  total += std::abs(fp_before - fq_before) * (s - prev);
                }
                prev = s;
                first = false;
              });
  return total;
}

double ks_statistic(const EmpiricalCdf& p, const EmpiricalCdf& q) {
  double max_gap = 0.0;
  walk_merged(p, q, [&](double, double, double, double fp_at, double fq_at) {
    max_gap = std::max(max_gap, std::abs(fp_at - fq_at));
  });
  return max_gap;
}

double kl_divergence(const DiscretePmf& p, const DiscretePmf& q,
                     double smoothing) {
  require(smoothing >= 0.0, "kl_divergence: smoothing must be >= 0");
  require(p.size() == q.size() && p.support() == q.support(),
          "kl_divergence: PMFs must share an identical support");

  const std::size_t n = p.size();
  double total = 0.0;
  if (smoothing > 0.0) {
    double p_norm = static_cast<double>(n) * smoothing;
    double q_norm = p_norm;
    for (std::size_t i = 0; i < n; ++i) {
      p_norm += p.mass()[i];
      q_norm += q.mass()[i];
    }
    for (std::size_t i = 0; i < n; ++i) {
      const double fp = (p.mass()[i] + smoothing) / p_norm;
      const double fq = (q.mass()[i] + smoothing) / q_norm;
      total += fp * std::log(fp / fq);
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const double fp = p.mass()[i];
      if (fp == 0.0) {
        continue;
      }
      const double fq = q.mass()[i];
      if (fq == 0.0) {
        throw std::domain_error(
            "kl_divergence: zero q-mass under nonzero p-mass at support index " +
            std::to_string(i) + " with smoothing = 0");
      }
      total += fp * std::log(fp / fq);
    }
  }
  // Gibbs' inequality guarantees nonnegativity; rounding can leave a tiny
  // negative residue for near-identical inputs.
  return std::max(0.0, total);
}

std::vector<double> min_max_normalize(std::span<const double> series) {
  require(!series.empty(), "min_max_normalize: empty series");
  const auto [min_it, max_it] = std::minmax_element(series.begin(), series.end());
  const double lo = *min_it;
  const double hi = *max_it;
  std::vector<double> out(series.size());
  if (lo == hi) {
    std::fill(out.begin(), out.end(), 0.0);
    return out;
  }
  const double range = hi - lo;
  for (std::size_t i = 0; i < series.size(); ++i) {
    out[i] = (series[i] - lo) / range;
  }
  return out;
}

double pearson_correlation(std::span<const double> a,
                           std::span<const double> b) {
  require(a.size() == b.size(), "pearson_correlation: length mismatch");
  require(a.size() >= 2, "pearson_correlation: need at least 2 points");
  const double n = static_cast<double>(a.size());
  double mean_a = 0.0;
  double mean_b = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    mean_a += a[i];
    mean_b += b[i];
  }
  mean_a /= n;
  mean_b /= n;
  double cov = 0.0;
  double var_a = 0.0;
  double var_b = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - mean_a;
    const double db = b[i] - mean_b;
    cov += da * db;
    var_a += da * da;
    var_b += db * db;
  }
  require(var_a > 0.0 && var_b > 0.0, "pearson_correlation: constant input");
  return cov / std::sqrt(var_a * var_b);
}

}  // namespace driftwatch
