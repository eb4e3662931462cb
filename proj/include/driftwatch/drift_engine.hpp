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

// Aggregation of per-dimension distribution distances into a single drift
// score against a reference profile, bootstrap threshold calibration, and
// sequential monitoring over an ordered series of test sets.
//
// The engine is label-agnostic: callers are expected to feed it embedding
// sets already filtered to the class of interest.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "driftwatch/core_stats.hpp"

namespace driftwatch {

// A set of fixed-dimensional embedding vectors, one row per utterance,
// stored row-major. All entries must be finite; at least one row.
class EmbeddingSet {
 public:
  EmbeddingSet(std::size_t dim, std::vector<double> row_major_data,
               std::string label = "");

  std::size_t dim() const { return dim_; }
  std::size_t row_count() const { return data_.size() / dim_; }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * dim_, dim_};
  }
  double at(std::size_t r, std::size_t c) const { return data_[r * dim_ + c]; }
  const std::vector<double>& data() const { return data_; }

  const std::string& label() const { return label_; }
  void set_label(std::string label) { label_ = std::move(label); }

  // Column gather (blocked transpose behind the scenes when fetching all).
  std::vector<double> column(std::size_t c) const;

 private:
  std::size_t dim_;
  std::vector<double> data_;
  std::string label_;
};

// Column-major copy of a whole set; the per-dimension hot path.
std::vector<double> transpose_to_columns(const EmbeddingSet& set);

// Parameters for the per-dimension reference histograms. Edges always come
// from each dimension's own sample min/max, so only the count and policy
// are configurable.
struct HistogramDefaults {
  std::size_t bin_count = 100;
  EdgePolicy edge_policy = EdgePolicy::Clamp;
};

// Per-dimension distribution summaries of a reference set: sorted samples
// for the CDF metrics, reference-anchored histograms for KLD, plus the
// source rows (required for half-split calibration) and any calibration
// values computed so far. Distribution data is immutable after
// construction and safe to share across threads.
class ReferenceProfile {
 public:
  ReferenceProfile(EmbeddingSet reference, HistogramDefaults defaults = {});

  std::size_t dim() const { return embeddings_.dim(); }
  std::size_t row_count() const { return embeddings_.row_count(); }
  const std::string& label() const { return embeddings_.label(); }

  const std::vector<double>& sorted_samples(std::size_t d) const {
    return sorted_columns_[d];
  }
  const DiscretePmf& histogram(std::size_t d) const { return histograms_[d]; }
  const HistogramSpec& histogram_spec(std::size_t d) const { return specs_[d]; }
  const HistogramDefaults& defaults() const { return defaults_; }
  const EmbeddingSet& embeddings() const { return embeddings_; }

  const std::map<MetricKind, std::vector<double>>& calibration() const {
    return calibration_;
  }
  void set_calibration(MetricKind metric, std::vector<double> self_drift);

 private:
  EmbeddingSet embeddings_;
  HistogramDefaults defaults_;
  std::vector<std::vector<double>> sorted_columns_;
  std::vector<HistogramSpec> specs_;
  std::vector<DiscretePmf> histograms_;
  std::map<MetricKind, std::vector<double>> calibration_;
};

// Convenience mirror of the ReferenceProfile constructor.
ReferenceProfile build_reference(EmbeddingSet reference,
                                 HistogramDefaults defaults = {});

struct DriftReport {
  MetricKind metric = MetricKind::Wasserstein1;
  std::vector<double> per_dim;
  double total = 0.0;
  std::string test_label;
  std::string ref_id;
  std::size_t test_count = 0;
  std::size_t ref_count = 0;
};

// Throws std::invalid_argument unless per_dim is nonnegative and total
// matches its sum within 1e-9 * max(1, M).
void validate_report(const DriftReport& report);

struct DriftOptions {
  double kl_smoothing = 1e-6;
  std::size_t threads = 0;  // 0 = auto (capped by DRIFTWATCH_THREADS)
};

// Per-dimension distance between the profile and a test set, summed in
// ascending dimension order. CDF metrics run on exact empirical CDFs; KLD
// histograms the test with the profile's per-dimension spec (always
// clamped) and computes D(test || reference).
DriftReport drift_distance(const ReferenceProfile& profile,
                           const EmbeddingSet& test, MetricKind metric,
                           const DriftOptions& options = {});

// Same, for several metrics at once; shares the transpose/sort work.
std::vector<DriftReport> drift_distances(const ReferenceProfile& profile,
                                         const EmbeddingSet& test,
                                         std::span<const MetricKind> metrics,
                                         const DriftOptions& options = {});

// Splits the reference rows into random halves `splits` times, measures
// half-vs-half drift, stores the values on the profile and returns the
// rank-based empirical quantile. Deterministic for a fixed seed; each
// split uses an independently derived stream.
double calibrate_threshold(ReferenceProfile& profile, MetricKind metric,
                           std::size_t splits, double quantile,
                           std::uint64_t seed,
                           const DriftOptions& options = {});

struct ThresholdPolicy {
  enum class Kind : std::uint8_t { Absolute = 0, CalibratedQuantile = 1 };

  Kind kind = Kind::Absolute;
  MetricKind alert_metric = MetricKind::Wasserstein1;
  double absolute_value = 0.0;       // Kind::Absolute
  std::size_t splits = 100;          // Kind::CalibratedQuantile
  double quantile = 0.99;
  std::uint64_t seed = 0;
};

struct MonitorEntry {
  std::string test_label;
  std::vector<DriftReport> reports;  // parallel to MonitorSeries::metrics
  bool alert = false;
};

struct MonitorSeries {
  std::vector<MetricKind> metrics;
  std::vector<MonitorEntry> entries;
  ThresholdPolicy policy;
  double threshold = 0.0;  // resolved value the alert flags were set from
};

// Reports for every (test set, metric) pair in submission order; the alert
// flag fires when the policy metric's total strictly exceeds the resolved
// threshold. `policy.alert_metric` must be among `metrics`.
MonitorSeries monitor(ReferenceProfile& profile,
                      std::span<const EmbeddingSet> tests,
                      std::span<const MetricKind> metrics,
                      const ThresholdPolicy& policy,
                      const DriftOptions& options = {});

struct CorrelationMatrix {
  std::vector<MetricKind> metrics;
  std::vector<double> values;  // row-major, metrics.size() squared

  double at(std::size_t i, std::size_t j) const {
    return values[i * metrics.size() + j];
  }
};

// Pairwise Pearson correlation of the min-max-normalized total-drift
// series of each metric. Needs >= 2 entries, >= 2 metrics, and no metric
// with a constant series.
CorrelationMatrix metric_agreement(const MonitorSeries& series);

}  // namespace driftwatch
