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

#include "driftwatch/drift_engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "driftwatch/parallel.hpp"
#include "driftwatch/rng.hpp"

namespace driftwatch {

namespace {

void require(bool condition, const std::string& message) {
  if (!condition) {
    throw std::invalid_argument(message);
  }
}

// When every reference value in a dimension is identical the histogram
// window collapses; it is widened to this so the point still sits in-range.
constexpr double kDegenerateSpanWidth = 1e-9;

}  // namespace

EmbeddingSet::EmbeddingSet(std::size_t dim, std::vector<double> row_major_data,
                           std::string label)
    : dim_(dim), data_(std::move(row_major_data)), label_(std::move(label)) {
  require(dim_ >= 1, "EmbeddingSet: dim must be >= 1");
  require(!data_.empty() && data_.size() % dim_ == 0,
          "EmbeddingSet: data size must be a nonzero multiple of dim");
  for (std::size_t i = 0; i < data_.size(); ++i) {
    if (!std::isfinite(data_[i])) {
      throw std::invalid_argument("EmbeddingSet: non-finite value at row " +
                                  std::to_string(i / dim_) + ", column " +
                                  std::to_string(i % dim_));
    }
  }
}

std::vector<double> EmbeddingSet::column(std::size_t c) const {
  const std::size_t rows = row_count();
  std::vector<double> out(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    out[r] = data_[r * dim_ + c];
  }
  return out;
}

std::vector<double> transpose_to_columns(const EmbeddingSet& set) {
  const std::size_t rows = set.row_count();
  const std::size_t dim = set.dim();
  const auto& data = set.data();
  std::vector<double> columns(rows * dim);
  constexpr std::size_t kTile = 64;
  for (std::size_t r0 = 0; r0 < rows; r0 += kTile) {
    const std::size_t r1 = std::min(rows, r0 + kTile);
    for (std::size_t c0 = 0; c0 < dim; c0 += kTile) {
      const std::size_t c1 = std::min(dim, c0 + kTile);
      for (std::size_t r = r0; r < r1; ++r) {
        for (std::size_t c = c0; c < c1; ++c) {
          columns[c * rows + r] = data[r * dim + c];
        }
      }
    }
  }
  return columns;
}

ReferenceProfile::ReferenceProfile(EmbeddingSet reference,
                                   HistogramDefaults defaults)
    : embeddings_(std::move(reference)), defaults_(defaults) {
  const std::size_t dim = embeddings_.dim();
  const std::size_t rows = embeddings_.row_count();

  std::vector<double> columns = transpose_to_columns(embeddings_);
  sorted_columns_.resize(dim);
  specs_.resize(dim);
  histograms_.reserve(dim);

  for (std::size_t d = 0; d < dim; ++d) {
    std::vector<double> col(columns.begin() + static_cast<std::ptrdiff_t>(d * rows),
                            columns.begin() + static_cast<std::ptrdiff_t>((d + 1) * rows));
    std::sort(col.begin(), col.end());

    double lo = col.front();
    double hi = col.back();
    if (lo == hi) {
      lo -= kDegenerateSpanWidth / 2.0;
      hi += kDegenerateSpanWidth / 2.0;
    }
    specs_[d] = HistogramSpec{defaults_.bin_count, lo, hi, defaults_.edge_policy};
    histograms_.push_back(build_histogram(col, specs_[d]));
    sorted_columns_[d] = std::move(col);
  }
}

void ReferenceProfile::set_calibration(MetricKind metric,
                                       std::vector<double> self_drift) {
  for (double v : self_drift) {
    require(v >= 0.0, "ReferenceProfile: calibration values must be >= 0");
  }
  calibration_[metric] = std::move(self_drift);
}

ReferenceProfile build_reference(EmbeddingSet reference,
                                 HistogramDefaults defaults) {
  return ReferenceProfile(std::move(reference), defaults);
}

void validate_report(const DriftReport& report) {
  require(!report.per_dim.empty(), "DriftReport: empty per_dim");
  double sum = 0.0;
  for (double v : report.per_dim) {
    require(v >= 0.0, "DriftReport: negative per-dimension distance");
    sum += v;
  }
  const double tol = 1e-9 * static_cast<double>(std::max<std::size_t>(1, report.per_dim.size()));
  require(std::abs(sum - report.total) <= tol,
          "DriftReport: total does not match the per-dimension sum");
}

std::vector<DriftReport> drift_distances(const ReferenceProfile& profile,
                                         const EmbeddingSet& test,
                                         std::span<const MetricKind> metrics,
                                         const DriftOptions& options) {
  require(test.dim() == profile.dim(),
          "drift_distance: test dim " + std::to_string(test.dim()) +
              " does not match reference dim " + std::to_string(profile.dim()));
  require(!metrics.empty(), "drift_distance: no metrics requested");

  const std::size_t dim = profile.dim();
  const std::size_t rows = test.row_count();
  const std::vector<double> columns = transpose_to_columns(test);

  bool needs_cdf = false;
  bool needs_pmf = false;
  for (MetricKind m : metrics) {
    (m == MetricKind::KullbackLeibler ? needs_pmf : needs_cdf) = true;
  }

  std::vector<std::vector<double>> per_dim(metrics.size(),
                                           std::vector<double>(dim, 0.0));

  const std::size_t threads = resolve_thread_count(options.threads);
  parallel_for(0, dim, threads, [&](std::size_t d) {
    const std::span<const double> col(columns.data() + d * rows, rows);

    if (needs_cdf) {
      std::vector<double> sorted(col.begin(), col.end());
      std::sort(sorted.begin(), sorted.end());
      const EmpiricalCdf test_cdf = cdf_from_sorted(sorted);
      const EmpiricalCdf ref_cdf = cdf_from_sorted(profile.sorted_samples(d));
      for (std::size_t m = 0; m < metrics.size(); ++m) {
        if (metrics[m] == MetricKind::Wasserstein1) {
          per_dim[m][d] = wasserstein1(test_cdf, ref_cdf);
        } else if (metrics[m] == MetricKind::KolmogorovSmirnov) {
          per_dim[m][d] = ks_statistic(test_cdf, ref_cdf);
        }
      }
    }
    if (needs_pmf) {
      HistogramSpec spec = profile.histogram_spec(d);
      spec.edge_policy = EdgePolicy::Clamp;  // out-of-range test mass is signal
      const DiscretePmf test_pmf = build_histogram(col, spec);
      for (std::size_t m = 0; m < metrics.size(); ++m) {
        if (metrics[m] == MetricKind::KullbackLeibler) {
          per_dim[m][d] = kl_divergence(test_pmf, profile.histogram(d),
                                        options.kl_smoothing);
        }
      }
    }
  });

  std::vector<DriftReport> reports;
  reports.reserve(metrics.size());
  for (std::size_t m = 0; m < metrics.size(); ++m) {
    DriftReport report;
    report.metric = metrics[m];
    report.per_dim = std::move(per_dim[m]);
    // Fixed ascending-dimension reduction keeps totals identical for any
    // degree of parallelism.
    report.total = 0.0;
    for (std::size_t d = 0; d < dim; ++d) {
      report.total += report.per_dim[d];
    }
    report.test_label = test.label();
    report.ref_id = profile.label();
    report.test_count = rows;
    report.ref_count = profile.row_count();
    reports.push_back(std::move(report));
  }
  return reports;
}

DriftReport drift_distance(const ReferenceProfile& profile,
                           const EmbeddingSet& test, MetricKind metric,
                           const DriftOptions& options) {
  const MetricKind metrics[1] = {metric};
  return std::move(drift_distances(profile, test, metrics, options).front());
}

double calibrate_threshold(ReferenceProfile& profile, MetricKind metric,
                           std::size_t splits, double quantile,
                           std::uint64_t seed, const DriftOptions& options) {
  const std::size_t rows = profile.row_count();
  require(rows >= 4, "calibrate_threshold: reference needs at least 4 rows");
  require(splits >= 10, "calibrate_threshold: need at least 10 splits");
  require(quantile > 0.0 && quantile < 1.0,
          "calibrate_threshold: quantile must lie in (0, 1)");

  const EmbeddingSet& source = profile.embeddings();
  const std::size_t dim = profile.dim();
  const std::size_t half = rows / 2;

  std::vector<double> self_drift(splits);
  std::vector<std::size_t> order(rows);
  for (std::size_t k = 0; k < splits; ++k) {
    std::mt19937_64 engine(rng::derive_seed(seed, k));
    std::iota(order.begin(), order.end(), 0);
    rng::shuffle(order, engine);

    std::vector<double> half_a(half * dim);
    std::vector<double> half_b((rows - half) * dim);
    for (std::size_t r = 0; r < half; ++r) {
      const auto row = source.row(order[r]);
      std::copy(row.begin(), row.end(), half_a.begin() + static_cast<std::ptrdiff_t>(r * dim));
    }
    for (std::size_t r = half; r < rows; ++r) {
      const auto row = source.row(order[r]);
      std::copy(row.begin(), row.end(),
                half_b.begin() + static_cast<std::ptrdiff_t>((r - half) * dim));
    }

    ReferenceProfile half_profile(EmbeddingSet(dim, std::move(half_a)),
                                  profile.defaults());
    const EmbeddingSet probe(dim, std::move(half_b));
    self_drift[k] = drift_distance(half_profile, probe, metric, options).total;
  }

  std::vector<double> sorted(self_drift);
  std::sort(sorted.begin(), sorted.end());
  const double rank = std::ceil(quantile * static_cast<double>(splits));
  const std::size_t idx =
      std::min<std::size_t>(sorted.size() - 1,
                            static_cast<std::size_t>(std::max(1.0, rank)) - 1);
  profile.set_calibration(metric, std::move(self_drift));
  return sorted[idx];
}

MonitorSeries monitor(ReferenceProfile& profile,
                      std::span<const EmbeddingSet> tests,
                      std::span<const MetricKind> metrics,
                      const ThresholdPolicy& policy,
                      const DriftOptions& options) {
  require(!metrics.empty(), "monitor: no metrics requested");
  require(std::find(metrics.begin(), metrics.end(), policy.alert_metric) !=
              metrics.end(),
          "monitor: alert metric must be among the requested metrics");
  for (const EmbeddingSet& test : tests) {
    require(test.dim() == profile.dim(),
            "monitor: test set '" + test.label() + "' has dim " +
                std::to_string(test.dim()) + ", reference has " +
                std::to_string(profile.dim()));
  }

  MonitorSeries series;
  series.metrics.assign(metrics.begin(), metrics.end());
  series.policy = policy;
  series.threshold =
      policy.kind == ThresholdPolicy::Kind::Absolute
          ? policy.absolute_value
          : calibrate_threshold(profile, policy.alert_metric, policy.splits,
                                policy.quantile, policy.seed, options);

  const std::size_t alert_index = static_cast<std::size_t>(
      std::find(metrics.begin(), metrics.end(), policy.alert_metric) -
      metrics.begin());

  for (const EmbeddingSet& test : tests) {
    MonitorEntry entry;
    entry.test_label = test.label();
    entry.reports = drift_distances(profile, test, metrics, options);
    entry.alert = entry.reports[alert_index].total > series.threshold;
    series.entries.push_back(std::move(entry));
  }
  return series;
}

CorrelationMatrix metric_agreement(const MonitorSeries& series) {
  require(series.entries.size() >= 2,
          "metric_agreement: need at least 2 entries");
  require(series.metrics.size() >= 2,
          "metric_agreement: need at least 2 metrics");

  const std::size_t k = series.metrics.size();
  std::vector<std::vector<double>> normalized(k);
  for (std::size_t m = 0; m < k; ++m) {
    std::vector<double> totals;
    totals.reserve(series.entries.size());
    for (const MonitorEntry& entry : series.entries) {
      totals.push_back(entry.reports[m].total);
    }
    const auto [lo, hi] = std::minmax_element(totals.begin(), totals.end());
    require(*lo < *hi, "metric_agreement: totals for metric '" +
                           std::string(metric_name(series.metrics[m])) +
                           "' are constant");
    normalized[m] = min_max_normalize(totals);
  }

  CorrelationMatrix matrix;
  matrix.metrics = series.metrics;
  matrix.values.assign(k * k, 1.0);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      const double r = pearson_correlation(normalized[i], normalized[j]);
      matrix.values[i * k + j] = r;
      matrix.values[j * k + i] = r;
    }
  }
  return matrix;
}

}  // namespace driftwatch
