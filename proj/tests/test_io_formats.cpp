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

#include <unistd.h>

#include <bit>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "driftwatch/io_formats.hpp"
#include "driftwatch/synth.hpp"
#include "json.hpp"
#include "oracles.hpp"

using namespace driftwatch;
namespace fs = std::filesystem;

namespace {

fs::path fixture(const char* name) {
  return fs::path(DRIFTWATCH_FIXTURE_DIR) / name;
}

fs::path corrupt_fixture(const char* name) {
  return fs::path(DRIFTWATCH_FIXTURE_DIR) / "corrupt" / name;
}

// Fresh scratch directory per test case, removed on scope exit.
class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    dir_ = fs::temp_directory_path() /
           ("driftwatch_io_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter++));
    fs::create_directories(dir_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(dir_, ec);
  }
  fs::path operator/(const char* name) const { return dir_ / name; }
  const fs::path& path() const { return dir_; }

 private:
  fs::path dir_;
};

// Little-endian byte builders, written independently of the library so the
// on-disk layout is pinned by the test, not by shared helpers.
void push_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) {
    out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
}

void push_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
}

void push_f32(std::string& out, float v) {
  push_u32(out, std::bit_cast<std::uint32_t>(v));
}

// Doubles that survive the binary32 payload unchanged.
std::vector<double> f32_exact_values(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  std::vector<double> values(n);
  for (double& v : values) {
    v = static_cast<double>(
        static_cast<float>(oracles::uniform(engine) * 8.0 - 4.0));
  }
  return values;
}

MonitorSeries small_series() {
  SynthSpec spec;
  spec.dim = 2;
  spec.count = 60;
  spec.seed = 77;
  ReferenceProfile profile = build_reference(generate(spec));
  const std::vector<double> shifts{0.0, 0.5, 1.0};
  const std::vector<EmbeddingSet> tests = evolve_sequence(spec, shifts);
  ThresholdPolicy policy;
  policy.kind = ThresholdPolicy::Kind::Absolute;
  policy.absolute_value = 0.4;
  policy.alert_metric = MetricKind::Wasserstein1;
  const std::vector<MetricKind> metrics{MetricKind::Wasserstein1,
                                        MetricKind::KolmogorovSmirnov};
  return monitor(profile, tests, metrics, policy);
}

}  // namespace

TEST_CASE("binary embedding serialization pins the 20-byte header layout") {
  const EmbeddingSet set(2, {1.5, -2.25});
  std::string expected = "DRFT";
  push_u32(expected, 1);  // format_version
  push_u32(expected, 2);  // dim
  push_u64(expected, 1);  // row_count
  push_f32(expected, 1.5F);
  push_f32(expected, -2.25F);
  CHECK(serialize_embeddings(set, EmbeddingFormat::Binary) == expected);

  std::istringstream in(expected);
  const EmbeddingSet parsed = read_embeddings(in, EmbeddingFormat::Binary);
  CHECK(parsed.dim() == 2);
  CHECK(parsed.row_count() == 1);
  CHECK(parsed.data() == std::vector<double>{1.5, -2.25});
}

TEST_CASE("binary embeddings round-trip bitwise through a file") {
  TempDir tmp;
  const EmbeddingSet original(16, f32_exact_values(100 * 16, 42), "week_00");
  const fs::path path = tmp / "week_00.dwemb";
  write_embeddings(original, path, EmbeddingFormat::Binary);

  const EmbeddingSet loaded = read_embeddings(path, EmbeddingFormat::Binary);
  CHECK(loaded.data() == original.data());
  CHECK(loaded.dim() == 16);
  CHECK(loaded.row_count() == 100);
  CHECK(loaded.label() == "week_00");  // file stem by default

  const EmbeddingSet named =
      read_embeddings(path, EmbeddingFormat::Binary, "override");
  CHECK(named.label() == "override");
}

TEST_CASE("csv embeddings parse the documented grammar") {
  std::istringstream plain("1.0,2.0\n3.0,4.0\n");
  const EmbeddingSet a = read_embeddings(plain, EmbeddingFormat::Csv);
  CHECK(a.dim() == 2);
  CHECK(a.row_count() == 2);
  CHECK(a.data() == std::vector<double>{1.0, 2.0, 3.0, 4.0});

  std::istringstream messy(
      "# leading comment\n\n1.0, 2.0\r\n  # indented comment\n3.0,4.0");
  const EmbeddingSet b = read_embeddings(messy, EmbeddingFormat::Csv);
  CHECK(b.data() == a.data());
}

TEST_CASE("csv embeddings round-trip full-precision doubles") {
  TempDir tmp;
  std::mt19937_64 engine(4321);
  const EmbeddingSet original(
      3, oracles::uniform_vector(engine, 20 * 3, -5.0, 5.0));
  const fs::path path = tmp / "values.csv";
  write_embeddings(original, path, EmbeddingFormat::Csv);
  const EmbeddingSet loaded = read_embeddings(path, EmbeddingFormat::Csv);
  CHECK(loaded.data() == original.data());  // shortest-round-trip exactness
}

TEST_CASE("detect_format sniffs the binary magic") {
  TempDir tmp;
  const EmbeddingSet set(2, {1.0, 2.0});
  const fs::path bin = tmp / "a.dwemb";
  const fs::path csv = tmp / "a.csv";
  write_embeddings(set, bin, EmbeddingFormat::Binary);
  write_embeddings(set, csv, EmbeddingFormat::Csv);
  CHECK(detect_format(bin) == EmbeddingFormat::Binary);
  CHECK(detect_format(csv) == EmbeddingFormat::Csv);
  CHECK_THROWS_AS(detect_format(tmp / "missing.dwemb"), IoError);
}

TEST_CASE("corrupt embedding files raise IoError") {
  const char* binary_cases[] = {
      "bad_magic.dwemb",        "bad_version.dwemb",
      "zero_dim.dwemb",         "zero_rows.dwemb",
      "truncated_header.dwemb", "truncated_payload.dwemb",
      "trailing_bytes.dwemb",   "nonfinite_value.dwemb",
  };
  for (const char* name : binary_cases) {
    CAPTURE(name);
    CHECK_THROWS_AS(read_embeddings(corrupt_fixture(name), EmbeddingFormat::Binary),
                    IoError);
  }

  const char* csv_cases[] = {"ragged.csv", "non_numeric.csv", "empty.csv"};
  for (const char* name : csv_cases) {
    CAPTURE(name);
    CHECK_THROWS_AS(read_embeddings(corrupt_fixture(name), EmbeddingFormat::Csv),
                    IoError);
  }

  // Diagnostics carry a location, not just a verdict.
  CHECK_THROWS_WITH_AS(
      read_embeddings(corrupt_fixture("truncated_payload.dwemb"),
                      EmbeddingFormat::Binary),
      doctest::Contains("truncated"), IoError);
  CHECK_THROWS_WITH_AS(
      read_embeddings(corrupt_fixture("ragged.csv"), EmbeddingFormat::Csv),
      doctest::Contains("expected 2 fields, got 1"), IoError);
}

TEST_CASE("corrupt profile files raise IoError") {
  CHECK_THROWS_AS(load_profile(corrupt_fixture("bad_magic.dwprof")), IoError);
  CHECK_THROWS_AS(load_profile(corrupt_fixture("truncated.dwprof")), IoError);
}

TEST_CASE("corrupt json documents raise IoError") {
  CHECK_THROWS_AS(load_report(corrupt_fixture("syntax_error.json")), IoError);
  CHECK_THROWS_AS(load_report(corrupt_fixture("bad_schema_version.json")), IoError);
  CHECK_THROWS_AS(load_report(corrupt_fixture("total_mismatch.json")), IoError);
  CHECK_THROWS_AS(load_series(corrupt_fixture("series_metric_mismatch.json")), IoError);
  // A series document is not a report document.
  CHECK_THROWS_AS(parse_report(serialize_series(MonitorSeries{})), IoError);
}

TEST_CASE("profile round-trip preserves drift behavior bitwise") {
  TempDir tmp;
  SynthSpec spec;
  spec.dim = 5;
  spec.count = 60;
  spec.seed = 2025;
  EmbeddingSet ref = generate(spec);
  ref.set_label("baseline");
  ReferenceProfile original = build_reference(ref, {24, EdgePolicy::Clamp});
  calibrate_threshold(original, MetricKind::Wasserstein1, 12, 0.9, 3);
  calibrate_threshold(original, MetricKind::KolmogorovSmirnov, 10, 0.8, 4);

  const fs::path path = tmp / "baseline.dwprof";
  save_profile(original, path);
  const ReferenceProfile loaded = load_profile(path);

  CHECK(loaded.label() == "baseline");
  CHECK(loaded.dim() == 5);
  CHECK(loaded.row_count() == 60);
  CHECK(loaded.defaults().bin_count == 24);
  CHECK(loaded.defaults().edge_policy == EdgePolicy::Clamp);
  CHECK(loaded.embeddings().data() == ref.data());
  CHECK(loaded.calibration() == original.calibration());
  for (std::size_t d = 0; d < 5; ++d) {
    CHECK(loaded.histogram_spec(d) == original.histogram_spec(d));
    CHECK(loaded.sorted_samples(d) == original.sorted_samples(d));
    CHECK(loaded.histogram(d).mass() == original.histogram(d).mass());
  }

  spec.location_shift = 0.4;
  spec.seed = 2026;
  const EmbeddingSet probe = generate(spec);
  for (MetricKind metric : all_metrics()) {
    const DriftReport a = drift_distance(original, probe, metric);
    const DriftReport b = drift_distance(loaded, probe, metric);
    CHECK(a.per_dim == b.per_dim);
    CHECK(a.total == b.total);
  }
}

TEST_CASE("report documents round-trip with exact numbers") {
  TempDir tmp;
  DriftReport report;
  report.metric = MetricKind::KolmogorovSmirnov;
  report.per_dim = {0.125, 0.1 + 0.2, 0.375};  // includes a non-terminating one
  report.total = report.per_dim[0] + report.per_dim[1] + report.per_dim[2];
  report.test_label = "week_07";
  report.ref_id = "baseline";
  report.test_count = 480;
  report.ref_count = 1000;

  const std::string text = serialize_report(report, "2026-01-01T00:00:00Z");
  std::string timestamp;
  const DriftReport parsed = parse_report(text, &timestamp);
  CHECK(parsed.metric == report.metric);
  CHECK(parsed.per_dim == report.per_dim);
  CHECK(parsed.total == report.total);
  CHECK(parsed.test_label == report.test_label);
  CHECK(parsed.ref_id == report.ref_id);
  CHECK(parsed.test_count == report.test_count);
  CHECK(parsed.ref_count == report.ref_count);
  CHECK(timestamp == "2026-01-01T00:00:00Z");

  // Canonical documents re-serialize byte for byte.
  CHECK(serialize_report(parsed, timestamp) == text);

  // Default timestamp stays empty and byte-stable.
  const std::string bare = serialize_report(report);
  std::string empty_ts = "sentinel";
  parse_report(bare, &empty_ts);
  CHECK(empty_ts.empty());
  CHECK(serialize_report(report) == bare);

  const fs::path path = tmp / "report.json";
  save_report(report, path);
  const DriftReport loaded = load_report(path);
  CHECK(loaded.per_dim == report.per_dim);
  CHECK(loaded.total == report.total);
}

TEST_CASE("series documents round-trip including policy and alerts") {
  TempDir tmp;
  const MonitorSeries series = small_series();
  const std::string text = serialize_series(series, "t0");

  std::string timestamp;
  const MonitorSeries parsed = parse_series(text, &timestamp);
  CHECK(timestamp == "t0");
  CHECK(parsed.metrics == series.metrics);
  CHECK(parsed.threshold == series.threshold);
  CHECK(parsed.policy.kind == series.policy.kind);
  CHECK(parsed.policy.alert_metric == series.policy.alert_metric);
  CHECK(parsed.policy.absolute_value == series.policy.absolute_value);
  CHECK(parsed.policy.splits == series.policy.splits);
  CHECK(parsed.policy.quantile == series.policy.quantile);
  CHECK(parsed.policy.seed == series.policy.seed);
  REQUIRE(parsed.entries.size() == series.entries.size());
  for (std::size_t i = 0; i < parsed.entries.size(); ++i) {
    CHECK(parsed.entries[i].test_label == series.entries[i].test_label);
    CHECK(parsed.entries[i].alert == series.entries[i].alert);
    REQUIRE(parsed.entries[i].reports.size() ==
            series.entries[i].reports.size());
    for (std::size_t m = 0; m < parsed.entries[i].reports.size(); ++m) {
      CHECK(parsed.entries[i].reports[m].metric ==
            series.entries[i].reports[m].metric);
      CHECK(parsed.entries[i].reports[m].per_dim ==
            series.entries[i].reports[m].per_dim);
      CHECK(parsed.entries[i].reports[m].total ==
            series.entries[i].reports[m].total);
    }
  }
  CHECK(serialize_series(parsed, timestamp) == text);

  const fs::path path = tmp / "series.json";
  save_series(series, path);
  const MonitorSeries loaded = load_series(path);
  CHECK(loaded.entries.size() == series.entries.size());
  CHECK(loaded.threshold == series.threshold);
}

TEST_CASE("an empty monitor series is a valid document") {
  const MonitorSeries empty;
  const std::string text = serialize_series(empty);
  const MonitorSeries parsed = parse_series(text);
  CHECK(parsed.metrics.empty());
  CHECK(parsed.entries.empty());
  CHECK(parsed.threshold == 0.0);
  CHECK(serialize_series(parsed) == text);
}

TEST_CASE("correlation documents carry the full matrix") {
  MonitorSeries series = small_series();
  const CorrelationMatrix matrix = metric_agreement(series);
  const std::string text = serialize_correlation(matrix);

  const nlohmann::json j = nlohmann::json::parse(text);
  CHECK(j.at("schema_version").get<int>() == 1);
  CHECK(j.at("kind").get<std::string>() == "metric_agreement");
  const auto& metrics = j.at("metrics");
  REQUIRE(metrics.size() == matrix.metrics.size());
  for (std::size_t i = 0; i < matrix.metrics.size(); ++i) {
    CHECK(metrics[i].get<std::string>() ==
          std::string(metric_name(matrix.metrics[i])));
  }
  const auto& values = j.at("values");
  REQUIRE(values.size() == matrix.metrics.size());
  for (std::size_t i = 0; i < matrix.metrics.size(); ++i) {
    REQUIRE(values[i].size() == matrix.metrics.size());
    for (std::size_t k = 0; k < matrix.metrics.size(); ++k) {
      CHECK(values[i][k].get<double>() == matrix.at(i, k));
    }
  }
}

TEST_CASE("score files parse one value per line") {
  TempDir tmp;
  const fs::path path = tmp / "scores.txt";
  write_file_bytes(path, "0.5\n# comment\n\n-1.25e2\n 0.75 \n");
  CHECK(read_score_file(path) == std::vector<double>{0.5, -125.0, 0.75});

  const fs::path bad = tmp / "bad.txt";
  write_file_bytes(bad, "0.5\nnot-a-number\n");
  CHECK_THROWS_WITH_AS(read_score_file(bad), doctest::Contains(":2:"),
                       IoError);

  const fs::path blank = tmp / "blank.txt";
  write_file_bytes(blank, "# nothing\n");
  CHECK_THROWS_AS(read_score_file(blank), IoError);
  CHECK_THROWS_AS(read_score_file(tmp / "missing.txt"), IoError);
}

TEST_CASE("drift plots reproduce the golden document byte for byte") {
  const MonitorSeries series =
      load_series(fixture("plot_series.json"));
  PlotOptions options;
  options.threshold = 0.8;
  const std::string svg = emit_drift_plot(series, options);
  CHECK(svg == read_file_bytes(fixture("drift_plot_golden.svg")));
}

TEST_CASE("drift plot structure follows the series shape") {
  const MonitorSeries series = small_series();  // 3 entries x 2 metrics
  const std::string svg = emit_drift_plot(series);

  const auto count = [&svg](std::string_view needle) {
    std::size_t n = 0;
    for (std::size_t pos = svg.find(needle); pos != std::string::npos;
         pos = svg.find(needle, pos + needle.size())) {
      ++n;
    }
    return n;
  };

  CHECK(svg.rfind("<?xml version=\"1.0\" encoding=\"UTF-8\"?>", 0) == 0);
  CHECK(count("<polyline") == 2);
  CHECK(count("<circle") == 2 * 3);
  CHECK(count("class=\"threshold\"") == 0);

  PlotOptions with_line;
  with_line.threshold = 0.5;
  const std::string lined = emit_drift_plot(series, with_line);
  std::size_t threshold_lines = 0;
  for (std::size_t pos = lined.find("class=\"threshold\"");
       pos != std::string::npos;
       pos = lined.find("class=\"threshold\"", pos + 1)) {
    ++threshold_lines;
  }
  CHECK(threshold_lines == 1);

  // Every metric name appears in the legend, every label on the axis.
  for (MetricKind metric : series.metrics) {
    CHECK(svg.find(std::string(metric_name(metric))) != std::string::npos);
  }
  for (const MonitorEntry& entry : series.entries) {
    CHECK(svg.find(entry.test_label) != std::string::npos);
  }
}

TEST_CASE("drift plot escapes markup in test labels") {
  MonitorSeries series = small_series();
  series.entries[0].test_label = "a<b&c\"d";
  const std::string svg = emit_drift_plot(series);
  CHECK(svg.find("a&lt;b&amp;c&quot;d") != std::string::npos);
  CHECK(svg.find("a<b&c") == std::string::npos);
}

TEST_CASE("drift plot on a single entry keeps the markers") {
  MonitorSeries series = small_series();
  series.entries.resize(1);
  const std::string svg = emit_drift_plot(series);
  std::size_t circles = 0;
  for (std::size_t pos = svg.find("<circle"); pos != std::string::npos;
       pos = svg.find("<circle", pos + 1)) {
    ++circles;
  }
  CHECK(circles == series.metrics.size());
}

TEST_CASE("drift plot rejects impossible requests") {
  CHECK_THROWS_AS(emit_drift_plot(MonitorSeries{}), std::invalid_argument);
  const MonitorSeries series = small_series();
  PlotOptions tiny;
  tiny.width = 100.0;  // smaller than the fixed margins
  tiny.height = 50.0;
  CHECK_THROWS_AS(emit_drift_plot(series, tiny), std::invalid_argument);
}

TEST_CASE("drift plots are well-formed XML") {
  TempDir tmp;
  if (std::system("python3 -c 'import xml.dom.minidom' >/dev/null 2>&1") !=
      0) {
    return;  // no checker available on this machine
  }
  const fs::path path = tmp / "plot.svg";
  PlotOptions options;
  options.threshold = 0.25;
  write_file_bytes(path, emit_drift_plot(small_series(), options));
  const std::string command =
      "python3 -c \"import xml.dom.minidom,sys; "
      "xml.dom.minidom.parse(sys.argv[1])\" " +
      path.string() + " >/dev/null 2>&1";
  CHECK(std::system(command.c_str()) == 0);
}

TEST_CASE("read and write helpers surface OS failures as IoError") {
  TempDir tmp;
  CHECK_THROWS_AS(read_file_bytes(tmp / "does_not_exist.bin"), IoError);
  CHECK_THROWS_AS(write_file_bytes(tmp / "no_dir" / "file.bin", "x"), IoError);
}
