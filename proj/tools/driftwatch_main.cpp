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

// driftwatch command-line tool.
//
// Exit codes: 0 success; 2 usage error; 3 data/format error; 4 when
// `monitor --fail-on-alert` saw at least one alert. Output files are staged
// in memory and flushed only on exit 0, so a failing invocation never
// leaves partial artifacts behind. Report documents are always echoed to
// standard output; diagnostics go to standard error.

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "driftwatch/drift_engine.hpp"
#include "driftwatch/eval.hpp"
#include "driftwatch/format.hpp"
#include "driftwatch/io_formats.hpp"
#include "driftwatch/synth.hpp"

namespace {

namespace fs = std::filesystem;
using namespace driftwatch;

// Command-level misuse that CLI11 cannot catch (bad flag values, invalid
// flag combinations). Mapped to exit 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Output files accumulate here and hit the disk only when the whole
// command has succeeded.
class StagedWrites {
 public:
  void add(fs::path path, std::string bytes) {
    files_.emplace_back(std::move(path), std::move(bytes));
  }

  void flush() const {
    for (const auto& [path, bytes] : files_) {
      write_file_bytes(path, bytes);
      std::cerr << "driftwatch: wrote " << path.string() << "\n";
    }
  }

 private:
  std::vector<std::pair<fs::path, std::string>> files_;
};

void require_input_file(const std::string& path, const char* flag) {
  if (!fs::is_regular_file(path)) {
    throw IoError(std::string(flag) + " " + path +
                  ": file not found or not a regular file");
  }
}

void require_output_dir(const std::string& path, const char* flag) {
  const fs::path parent = fs::path(path).parent_path();
  if (!parent.empty() && !fs::is_directory(parent)) {
    throw IoError(std::string(flag) + " " + path + ": directory " +
                  parent.string() + " does not exist");
  }
}

// Expands "all" and aliases, drops duplicates, keeps first-use order.
std::vector<MetricKind> resolve_metrics(const std::vector<std::string>& flags,
                                        MetricKind fallback) {
  std::vector<MetricKind> out;
  const auto push = [&out](MetricKind m) {
    for (MetricKind have : out) {
      if (have == m) {
        return;
      }
    }
    out.push_back(m);
  };
  for (const std::string& flag : flags) {
    if (flag == "all") {
      for (MetricKind m : all_metrics()) {
        push(m);
      }
      continue;
    }
    try {
      push(parse_metric(flag));
    } catch (const std::invalid_argument&) {
      throw UsageError("--metric " + flag +
                       ": expected wasserstein1|kolmogorov_smirnov|"
                       "kullback_leibler|w1|ks|kld|all");
    }
  }
  if (out.empty()) {
    out.push_back(fallback);
  }
  return out;
}

double parse_double_flag(const std::string& text, const char* flag) {
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw UsageError(std::string(flag) + " " + text + ": not a number");
  }
  return value;
}

EmbeddingFormat parse_format_flag(const std::string& text) {
  if (text == "bin" || text == "binary") {
    return EmbeddingFormat::Binary;
  }
  if (text == "csv") {
    return EmbeddingFormat::Csv;
  }
  throw UsageError("--format " + text + ": expected bin or csv");
}

EmbeddingSet read_any_embeddings(const std::string& path) {
  return read_embeddings(path, detect_format(path));
}

std::string pad_index(std::size_t k, std::size_t total) {
  const std::size_t width =
      std::max<std::size_t>(2, std::to_string(total - 1).size());
  std::string digits = std::to_string(k);
  return std::string(width - std::min(width, digits.size()), '0') + digits;
}

// --- subcommand argument bundles ---------------------------------------------

struct BuildRefArgs {
  std::string input;
  std::string out;
  std::size_t bins = 100;
  std::string label;
};

struct DriftArgs {
  std::string ref;
  std::string test;
  std::vector<std::string> metrics;
  double smoothing = 1e-6;
  std::string out;
  std::string timestamp;
};

struct MonitorArgs {
  std::string ref;
  std::vector<std::string> tests;
  std::vector<std::string> metrics;
  std::string alert_metric;
  std::string threshold = "auto";
  double quantile = 0.99;
  std::size_t splits = 100;
  std::uint64_t seed = 0;
  double smoothing = 1e-6;
  std::string out;
  std::string timestamp;
  bool fail_on_alert = false;
};

struct EerArgs {
  std::vector<std::string> fake_files;
  std::vector<std::string> real_files;
  bool flip_polarity = false;
};

struct SynthArgs {
  std::size_t dim = 8;
  std::size_t count = 1000;
  std::string family = "gaussian";
  double shift = 0.0;
  double scale = 1.0;
  std::vector<double> weights;
  std::uint64_t seed = 0;
  std::string format = "bin";
  std::string out;
  std::string out_dir;
  std::string prefix = "set";
  std::vector<double> shifts;
  bool finetune = false;
  std::string test_in;
  std::string ref_in;
  double lambda = 0.0;
};

struct PlotArgs {
  std::string series;
  std::string out;
  double width = 800.0;
  double height = 400.0;
  std::string threshold;  // empty = none, "series", or a number
};

struct CorrelateArgs {
  std::string series;
  std::string out;
};

// --- subcommand handlers ------------------------------------------------------

int run_build_ref(const BuildRefArgs& args, StagedWrites& staged) {
  require_input_file(args.input, "--input");
  require_output_dir(args.out, "--out");
  if (args.bins < 2) {
    throw UsageError("--bins " + std::to_string(args.bins) +
                     ": need at least 2 bins");
  }

  std::string label =
      args.label.empty() ? fs::path(args.input).stem().string() : args.label;
  EmbeddingSet reference =
      read_embeddings(args.input, detect_format(args.input), label);
  HistogramDefaults defaults;
  defaults.bin_count = args.bins;
  ReferenceProfile profile = build_reference(std::move(reference), defaults);

  staged.add(args.out, serialize_profile(profile));
  std::cerr << "driftwatch: reference '" << profile.label() << "': "
            << profile.row_count() << " rows x " << profile.dim()
            << " dims, " << args.bins << " bins\n";
  return 0;
}

int run_drift(const DriftArgs& args, StagedWrites& staged) {
  // Flag validation first: a request that is malformed regardless of the
  // filesystem is a usage error, not a data error.
  const std::vector<MetricKind> metrics =
      resolve_metrics(args.metrics, MetricKind::Wasserstein1);
  require_input_file(args.ref, "--ref");
  require_input_file(args.test, "--test");
  if (!args.out.empty()) {
    require_output_dir(args.out, "--out");
    if (metrics.size() > 1) {
      throw UsageError(
          "--out holds a single report; select one metric or use "
          "`monitor` for multi-metric documents");
    }
  }

  const ReferenceProfile profile = load_profile(args.ref);
  const EmbeddingSet test = read_any_embeddings(args.test);
  DriftOptions options;
  options.kl_smoothing = args.smoothing;

  const std::vector<DriftReport> reports =
      drift_distances(profile, test, metrics, options);
  for (const DriftReport& report : reports) {
    std::cout << serialize_report(report, args.timestamp);
  }
  if (!args.out.empty()) {
    staged.add(args.out, serialize_report(reports.front(), args.timestamp));
  }
  return 0;
}

int run_monitor(const MonitorArgs& args, StagedWrites& staged) {
  const std::vector<MetricKind> metrics =
      resolve_metrics(args.metrics, MetricKind::Wasserstein1);
  require_input_file(args.ref, "--ref");
  for (const std::string& test : args.tests) {
    require_input_file(test, "--test");
  }
  if (!args.out.empty()) {
    require_output_dir(args.out, "--out");
  }

  ThresholdPolicy policy;
  policy.alert_metric = metrics.front();
  if (!args.alert_metric.empty()) {
    try {
      policy.alert_metric = parse_metric(args.alert_metric);
    } catch (const std::invalid_argument&) {
      throw UsageError("--alert-metric " + args.alert_metric +
                       ": unknown metric");
    }
    bool selected = false;
    for (MetricKind m : metrics) {
      selected = selected || m == policy.alert_metric;
    }
    if (!selected) {
      throw UsageError("--alert-metric " + args.alert_metric +
                       ": not among the selected metrics");
    }
  }
  if (args.threshold == "auto") {
    policy.kind = ThresholdPolicy::Kind::CalibratedQuantile;
    policy.splits = args.splits;
    policy.quantile = args.quantile;
    policy.seed = args.seed;
  } else {
    policy.kind = ThresholdPolicy::Kind::Absolute;
    policy.absolute_value = parse_double_flag(args.threshold, "--threshold");
  }

  ReferenceProfile profile = load_profile(args.ref);
  std::vector<EmbeddingSet> tests;
  tests.reserve(args.tests.size());
  for (const std::string& test : args.tests) {
    tests.push_back(read_any_embeddings(test));
  }
  DriftOptions options;
  options.kl_smoothing = args.smoothing;

  const MonitorSeries series =
      monitor(profile, tests, metrics, policy, options);
  std::cout << serialize_series(series, args.timestamp);
  if (!args.out.empty()) {
    staged.add(args.out, serialize_series(series, args.timestamp));
  }

  std::size_t alerts = 0;
  for (const MonitorEntry& entry : series.entries) {
    alerts += entry.alert ? 1 : 0;
  }
  std::cerr << "driftwatch: threshold "
            << format_double(series.threshold) << " ("
            << std::string(metric_name(policy.alert_metric)) << "), "
            << alerts << " of " << series.entries.size() << " alerts\n";
  if (args.fail_on_alert && alerts > 0) {
    return 4;
  }
  return 0;
}

int run_eer(const EerArgs& args) {
  if (args.fake_files.size() != args.real_files.size()) {
    throw UsageError("--fake and --real must be given the same number of "
                     "times (one pair per score group)");
  }
  for (const std::string& path : args.fake_files) {
    require_input_file(path, "--fake");
  }
  for (const std::string& path : args.real_files) {
    require_input_file(path, "--real");
  }

  std::vector<ScoreSet> groups;
  groups.reserve(args.fake_files.size());
  for (std::size_t g = 0; g < args.fake_files.size(); ++g) {
    ScoreSet set;
    set.fake_scores = read_score_file(args.fake_files[g]);
    set.real_scores = read_score_file(args.real_files[g]);
    if (args.flip_polarity) {
      for (double& v : set.fake_scores) {
        v = -v;
      }
      for (double& v : set.real_scores) {
        v = -v;
      }
    }
    groups.push_back(std::move(set));
  }

  const double value =
      groups.size() == 1 ? eer(groups.front()) : pooled_eer(groups);
  std::cout << format_fixed(value, 4) << "\n";
  return 0;
}

int run_synth(const SynthArgs& args, StagedWrites& staged) {
  const EmbeddingFormat format = parse_format_flag(args.format);
  const std::string extension =
      format == EmbeddingFormat::Binary ? ".bin" : ".csv";

  SynthSpec spec;
  spec.dim = args.dim;
  spec.count = args.count;
  if (args.family == "gaussian") {
    spec.family = SynthFamily::Gaussian;
  } else if (args.family == "gaussian-mixture") {
    spec.family = SynthFamily::GaussianMixture;
  } else {
    throw UsageError("--family " + args.family +
                     ": expected gaussian or gaussian-mixture");
  }
  spec.location_shift = args.shift;
  spec.scale_factor = args.scale;
  spec.mixture_weights = args.weights;
  spec.seed = args.seed;

  if (args.finetune) {
    if (args.test_in.empty() || args.ref_in.empty() || args.out.empty()) {
      throw UsageError(
          "--finetune needs --test-in, --ref-in, --lambda and --out");
    }
    if (!args.shifts.empty() || !args.out_dir.empty()) {
      throw UsageError("--finetune cannot be combined with --shifts/--out-dir");
    }
    require_input_file(args.test_in, "--test-in");
    require_input_file(args.ref_in, "--ref-in");
    require_output_dir(args.out, "--out");
    const EmbeddingSet test = read_any_embeddings(args.test_in);
    const EmbeddingSet reference = read_any_embeddings(args.ref_in);
    const EmbeddingSet mixed = [&] {
      try {
        return simulate_finetune(test, reference, args.lambda, args.seed);
      } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("--lambda/--test-in/--ref-in: ") +
                         e.what());
      }
    }();
    staged.add(args.out, serialize_embeddings(mixed, format));
    return 0;
  }

  if (!args.shifts.empty()) {
    if (args.out_dir.empty()) {
      throw UsageError("--shifts needs --out-dir");
    }
    if (!args.out.empty()) {
      throw UsageError("--shifts writes one file per shift; use --out-dir, "
                       "not --out");
    }
    std::error_code ec;
    fs::create_directories(args.out_dir, ec);
    if (ec || !fs::is_directory(args.out_dir)) {
      throw IoError("--out-dir " + args.out_dir + ": cannot create directory");
    }
    std::vector<EmbeddingSet> sets;
    try {
      sets = evolve_sequence(spec, args.shifts);
    } catch (const std::invalid_argument& e) {
      throw UsageError(std::string("synth: ") + e.what());
    }
    for (std::size_t k = 0; k < sets.size(); ++k) {
      const fs::path path =
          fs::path(args.out_dir) /
          (args.prefix + "_" + pad_index(k, sets.size()) + extension);
      staged.add(path, serialize_embeddings(sets[k], format));
    }
    return 0;
  }

  if (args.out.empty()) {
    throw UsageError("synth needs --out (single set) or --shifts with "
                     "--out-dir (sequence)");
  }
  require_output_dir(args.out, "--out");
  EmbeddingSet set = [&] {
    try {
      return generate(spec);
    } catch (const std::invalid_argument& e) {
      throw UsageError(std::string("synth: ") + e.what());
    }
  }();
  staged.add(args.out, serialize_embeddings(set, format));
  return 0;
}

int run_plot(const PlotArgs& args, StagedWrites& staged) {
  require_input_file(args.series, "--series");
  require_output_dir(args.out, "--out");

  const MonitorSeries series = load_series(args.series);
  PlotOptions options;
  options.width = args.width;
  options.height = args.height;
  if (args.threshold == "series") {
    options.threshold = series.threshold;
  } else if (!args.threshold.empty()) {
    options.threshold = parse_double_flag(args.threshold, "--threshold");
  }

  try {
    staged.add(args.out, emit_drift_plot(series, options));
  } catch (const std::invalid_argument& e) {
    throw IoError("--series " + args.series + ": " + e.what());
  }
  return 0;
}

int run_correlate(const CorrelateArgs& args, StagedWrites& staged) {
  require_input_file(args.series, "--series");
  if (!args.out.empty()) {
    require_output_dir(args.out, "--out");
  }

  const MonitorSeries series = load_series(args.series);
  CorrelationMatrix matrix;
  try {
    matrix = metric_agreement(series);
  } catch (const std::invalid_argument& e) {
    throw IoError("--series " + args.series + ": " + e.what());
  }
  const std::string doc = serialize_correlation(matrix);
  std::cout << doc;
  if (!args.out.empty()) {
    staged.add(args.out, doc);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "driftwatch: distribution-drift monitoring for detector embeddings"};
  app.require_subcommand(1);

  const char* metric_help =
      "Metric: wasserstein1|w1, kolmogorov_smirnov|ks, kullback_leibler|kld, "
      "or all; repeatable, duplicates ignored";

  BuildRefArgs build_ref_args;
  CLI::App* build_ref_cmd = app.add_subcommand(
      "build-ref", "Build a reference profile from an embeddings file");
  build_ref_cmd->add_option("--input", build_ref_args.input,
                            "Reference embeddings (binary or CSV)")
      ->required();
  build_ref_cmd->add_option("--out", build_ref_args.out, "Profile output path")
      ->required();
  build_ref_cmd->add_option("--bins", build_ref_args.bins,
                            "Histogram bins per dimension (default 100)");
  build_ref_cmd->add_option("--label", build_ref_args.label,
                            "Profile label (default: input file stem)");

  DriftArgs drift_args;
  CLI::App* drift_cmd = app.add_subcommand(
      "drift", "Drift of one test set against a reference profile");
  drift_cmd->add_option("--ref", drift_args.ref, "Reference profile")
      ->required();
  drift_cmd->add_option("--test", drift_args.test, "Test embeddings")
      ->required();
  drift_cmd->add_option("--metric", drift_args.metrics, metric_help)
      ->delimiter(',');
  drift_cmd->add_option("--smoothing", drift_args.smoothing,
                        "KLD additive smoothing (default 1e-6)");
  drift_cmd->add_option("--out", drift_args.out,
                        "Report output path (single metric only)");
  drift_cmd->add_option("--timestamp", drift_args.timestamp,
                        "Timestamp string stored in the report (default "
                        "empty for reproducible bytes)");

  MonitorArgs monitor_args;
  CLI::App* monitor_cmd = app.add_subcommand(
      "monitor", "Drift of an ordered series of test sets, with alerting");
  monitor_cmd->add_option("--ref", monitor_args.ref, "Reference profile")
      ->required();
  monitor_cmd->add_option("--test", monitor_args.tests,
                          "Test embeddings, in monitoring order; repeatable")
      ->required();
  monitor_cmd->add_option("--metric", monitor_args.metrics, metric_help)
      ->delimiter(',');
  monitor_cmd->add_option("--alert-metric", monitor_args.alert_metric,
                          "Metric driving alerts (default: first selected)");
  monitor_cmd->add_option("--threshold", monitor_args.threshold,
                          "Alert threshold: a number, or 'auto' for "
                          "calibrated self-drift quantile (default auto)");
  monitor_cmd->add_option("--quantile", monitor_args.quantile,
                          "Self-drift quantile for auto threshold "
                          "(default 0.99)");
  monitor_cmd->add_option("--splits", monitor_args.splits,
                          "Half-splits for auto threshold (default 100)");
  monitor_cmd->add_option("--seed", monitor_args.seed,
                          "Seed for auto-threshold splits (default 0)");
  monitor_cmd->add_option("--smoothing", monitor_args.smoothing,
                          "KLD additive smoothing (default 1e-6)");
  monitor_cmd->add_option("--out", monitor_args.out, "Series output path");
  monitor_cmd->add_option("--timestamp", monitor_args.timestamp,
                          "Timestamp string stored in the document");
  monitor_cmd->add_flag("--fail-on-alert", monitor_args.fail_on_alert,
                        "Exit 4 when any entry alerts");

  EerArgs eer_args;
  CLI::App* eer_cmd = app.add_subcommand(
      "eer", "Equal error rate from fake/real score files");
  eer_cmd->add_option("--fake", eer_args.fake_files,
                      "Scores of fake utterances, one per line; repeatable "
                      "(pooled pairwise with --real)")
      ->required();
  eer_cmd->add_option("--real", eer_args.real_files,
                      "Scores of real utterances; repeatable")
      ->required();
  eer_cmd->add_flag("--flip-polarity", eer_args.flip_polarity,
                    "Scores mean 'higher = fake' (default: higher = real)");

  SynthArgs synth_args;
  CLI::App* synth_cmd = app.add_subcommand(
      "synth", "Generate synthetic embedding sets");
  synth_cmd->add_option("--dim", synth_args.dim, "Dimensions (default 8)");
  synth_cmd->add_option("--count", synth_args.count,
                        "Rows per set (default 1000)");
  synth_cmd->add_option("--family", synth_args.family,
                        "gaussian or gaussian-mixture (default gaussian)");
  synth_cmd->add_option("--shift", synth_args.shift,
                        "Location shift for a single set (default 0)");
  synth_cmd->add_option("--scale", synth_args.scale,
                        "Scale factor (default 1)");
  synth_cmd->add_option("--weights", synth_args.weights,
                        "Mixture weights, comma-separated, sum to 1")
      ->delimiter(',');
  synth_cmd->add_option("--seed", synth_args.seed, "Base seed (default 0)");
  synth_cmd->add_option("--format", synth_args.format,
                        "Output format: bin or csv (default bin)");
  synth_cmd->add_option("--out", synth_args.out, "Output file (single set)");
  synth_cmd->add_option("--out-dir", synth_args.out_dir,
                        "Output directory (with --shifts)");
  synth_cmd->add_option("--prefix", synth_args.prefix,
                        "Sequence filename prefix (default 'set')");
  synth_cmd->add_option("--shifts", synth_args.shifts,
                        "Comma-separated shifts; one set per value, derived "
                        "seeds")
      ->delimiter(',');
  synth_cmd->add_flag("--finetune", synth_args.finetune,
                      "Resample --test-in rows toward --ref-in instead of "
                      "generating");
  synth_cmd->add_option("--test-in", synth_args.test_in,
                        "Test embeddings (--finetune)");
  synth_cmd->add_option("--ref-in", synth_args.ref_in,
                        "Reference embeddings (--finetune)");
  synth_cmd->add_option("--lambda", synth_args.lambda,
                        "Fraction resampled from the reference, in [0,1]");

  PlotArgs plot_args;
  CLI::App* plot_cmd = app.add_subcommand(
      "plot", "Render a monitor series as an SVG drift plot");
  plot_cmd->add_option("--series", plot_args.series, "Monitor series document")
      ->required();
  plot_cmd->add_option("--out", plot_args.out, "SVG output path")->required();
  plot_cmd->add_option("--width", plot_args.width,
                       "Canvas width (default 800)");
  plot_cmd->add_option("--height", plot_args.height,
                       "Canvas height (default 400)");
  plot_cmd->add_option("--threshold", plot_args.threshold,
                       "Threshold line: a number, or 'series' to use the "
                       "document's resolved threshold (default: none)");

  CorrelateArgs correlate_args;
  CLI::App* correlate_cmd = app.add_subcommand(
      "correlate", "Pairwise metric agreement over a monitor series");
  correlate_cmd->add_option("--series", correlate_args.series,
                            "Monitor series document")
      ->required();
  correlate_cmd->add_option("--out", correlate_args.out,
                            "Correlation output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    StagedWrites staged;
    int code = 0;
    if (app.got_subcommand(build_ref_cmd)) {
      code = run_build_ref(build_ref_args, staged);
    } else if (app.got_subcommand(drift_cmd)) {
      code = run_drift(drift_args, staged);
    } else if (app.got_subcommand(monitor_cmd)) {
      code = run_monitor(monitor_args, staged);
    } else if (app.got_subcommand(eer_cmd)) {
      code = run_eer(eer_args);
    } else if (app.got_subcommand(synth_cmd)) {
      code = run_synth(synth_args, staged);
    } else if (app.got_subcommand(plot_cmd)) {
      code = run_plot(plot_args, staged);
    } else if (app.got_subcommand(correlate_cmd)) {
      code = run_correlate(correlate_args, staged);
    }
    if (code == 0) {
      staged.flush();
    }
    return code;
  } catch (const UsageError& e) {
    std::cerr << "driftwatch: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "driftwatch: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "driftwatch: " << e.what() << "\n";
    return 3;
  }
}
