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

// File formats. All of them are bit-exact contracts:
//
// Embeddings, binary ("DRFT"): 20-byte little-endian header
//     bytes  0..3   magic "DRFT"
//     bytes  4..7   format_version (u32) = 1
//     bytes  8..11  dim M (u32)
//     bytes 12..19  row_count (u64)
//   followed by row-major IEEE-754 binary32 payload. Declared sizes must
//   match the payload length exactly.
//
// Embeddings, CSV: one utterance per line, M comma-separated decimal
//   floats; lines starting with '#' are comments; values are written with
//   the shortest round-trip representation.
//
// Reference profile ("DRFP"): header, histogram defaults, label,
//   calibration values, then the raw reference rows as binary64. The
//   derived state (sorted columns, histograms) is rebuilt on load, which
//   reproduces it exactly.
//
// Reports and monitor series: JSON documents with a schema_version field,
// validated on load. Numbers are serialized shortest-round-trip.
//
// Malformed inputs raise IoError naming the offending byte offset or
// line; they never crash.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "driftwatch/drift_engine.hpp"
#include "driftwatch/errors.hpp"

namespace driftwatch {

enum class EmbeddingFormat : std::uint8_t {
  Binary = 0,
  Csv = 1,
};

// Whole-file helpers used by every loader; IoError on OS-level failures.
std::string read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path,
                      std::string_view bytes);

// Sniffs the leading bytes: "DRFT" means binary, anything else CSV.
EmbeddingFormat detect_format(const std::filesystem::path& path);

// Readers label the set with the file stem unless `label` is given.
EmbeddingSet read_embeddings(const std::filesystem::path& path,
                             EmbeddingFormat format,
                             std::optional<std::string> label = std::nullopt);
EmbeddingSet read_embeddings(std::istream& in, EmbeddingFormat format,
                             std::string_view source_name = "<stream>");

// Serialized bytes of the set in the given format. The binary format
// stores binary32, so doubles are narrowed on write.
std::string serialize_embeddings(const EmbeddingSet& set,
                                 EmbeddingFormat format);
void write_embeddings(const EmbeddingSet& set,
                      const std::filesystem::path& path,
                      EmbeddingFormat format);

std::string serialize_profile(const ReferenceProfile& profile);
ReferenceProfile parse_profile(std::string_view bytes,
                               std::string_view source_name = "<buffer>");
void save_profile(const ReferenceProfile& profile,
                  const std::filesystem::path& path);
ReferenceProfile load_profile(const std::filesystem::path& path);

// `timestamp` is free-form metadata carried by the document; the default
// empty string keeps outputs byte-reproducible.
std::string serialize_report(const DriftReport& report,
                             std::string_view timestamp = {});
DriftReport parse_report(std::string_view text,
                         std::string* timestamp = nullptr,
                         std::string_view source_name = "<buffer>");
void save_report(const DriftReport& report, const std::filesystem::path& path,
                 std::string_view timestamp = {});
DriftReport load_report(const std::filesystem::path& path);

std::string serialize_series(const MonitorSeries& series,
                             std::string_view timestamp = {});
MonitorSeries parse_series(std::string_view text,
                           std::string* timestamp = nullptr,
                           std::string_view source_name = "<buffer>");
void save_series(const MonitorSeries& series,
                 const std::filesystem::path& path,
                 std::string_view timestamp = {});
MonitorSeries load_series(const std::filesystem::path& path);

std::string serialize_correlation(const CorrelationMatrix& matrix);

// One score per line; blank lines and '#' comments are skipped.
std::vector<double> read_score_file(const std::filesystem::path& path);

struct PlotOptions {
  double width = 800.0;
  double height = 400.0;
  // Raw threshold in the alert metric's units; drawn on that metric's
  // min-max-normalized scale, clamped to the plot box. No line when unset.
  std::optional<double> threshold;
};

// SVG 1.1 document: one polyline per metric over the min-max-normalized
// totals, point markers at every entry, x-axis labeled with the test-set
// labels in order. Byte-deterministic for fixed input.
std::string emit_drift_plot(const MonitorSeries& series,
                            const PlotOptions& options = {});

}  // namespace driftwatch
