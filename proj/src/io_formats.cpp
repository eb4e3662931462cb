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

#include "driftwatch/io_formats.hpp"

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "driftwatch/format.hpp"
#include "json.hpp"

namespace driftwatch {

namespace {

using nlohmann::json;

constexpr char kEmbeddingMagic[4] = {'D', 'R', 'F', 'T'};
constexpr char kProfileMagic[4] = {'D', 'R', 'F', 'P'};
constexpr std::uint32_t kEmbeddingVersion = 1;
constexpr std::uint32_t kProfileVersion = 1;
constexpr std::int64_t kSchemaVersion = 1;

// --- little-endian encoding -------------------------------------------------

void append_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) {
    out.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
  }
}

void append_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    out.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
  }
}

void append_f32(std::string& out, float v) {
  append_u32(out, std::bit_cast<std::uint32_t>(v));
}

void append_f64(std::string& out, double v) {
  append_u64(out, std::bit_cast<std::uint64_t>(v));
}

// Bounds-checked little-endian reader over a byte buffer. All failures
// throw IoError with the source name and the byte offset that ran dry.
class Cursor {
 public:
  Cursor(std::string_view bytes, std::string_view name)
      : bytes_(bytes), name_(name) {}

  std::size_t pos() const { return pos_; }
  std::size_t remaining() const { return bytes_.size() - pos_; }

  [[noreturn]] void fail(const std::string& message) const {
    throw IoError(std::string(name_) + ": " + message + " (byte " +
                  std::to_string(pos_) + ")");
  }

  std::string_view read_bytes(std::size_t n, const char* what) {
    need(n, what);
    std::string_view out = bytes_.substr(pos_, n);
    pos_ += n;
    return out;
  }

  std::uint32_t read_u32(const char* what) {
    need(4, what);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      v |= static_cast<std::uint32_t>(
               static_cast<unsigned char>(bytes_[pos_ + static_cast<std::size_t>(i)]))
           << (8 * i);
    }
    pos_ += 4;
    return v;
  }

  std::uint64_t read_u64(const char* what) {
    need(8, what);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) {
      v |= static_cast<std::uint64_t>(
               static_cast<unsigned char>(bytes_[pos_ + static_cast<std::size_t>(i)]))
           << (8 * i);
    }
    pos_ += 8;
    return v;
  }

  float read_f32(const char* what) {
    return std::bit_cast<float>(read_u32(what));
  }

  double read_f64(const char* what) {
    return std::bit_cast<double>(read_u64(what));
  }

  void expect_end(const char* what) const {
    if (pos_ != bytes_.size()) {
      throw IoError(std::string(name_) + ": " +
                    std::to_string(bytes_.size() - pos_) + " trailing bytes after " +
                    what + " (byte " + std::to_string(pos_) + ")");
    }
  }

 private:
  void need(std::size_t n, const char* what) const {
    if (remaining() < n) {
      throw IoError(std::string(name_) + ": truncated " + what + ": need " +
                    std::to_string(n) + " bytes at offset " +
                    std::to_string(pos_) + ", have " +
                    std::to_string(remaining()));
    }
  }

  std::string_view bytes_;
  std::string_view name_;
  std::size_t pos_ = 0;
};

[[noreturn]] void fail_at_line(std::string_view name, std::size_t line,
                               const std::string& message) {
  throw IoError(std::string(name) + ":" + std::to_string(line) + ": " +
                message);
}

// Wraps construction of validated types so malformed file content surfaces
// as IoError instead of invalid_argument.
template <typename Fn>
auto as_io_error(std::string_view name, Fn&& fn) {
  try {
    return fn();
  } catch (const std::invalid_argument& e) {
    throw IoError(std::string(name) + ": " + e.what());
  }
}

MetricKind metric_from_code(std::uint32_t code, Cursor& cursor) {
  switch (code) {
    case 0:
      return MetricKind::Wasserstein1;
    case 1:
      return MetricKind::KolmogorovSmirnov;
    case 2:
      return MetricKind::KullbackLeibler;
    default:
      cursor.fail("unknown metric code " + std::to_string(code));
  }
}

EdgePolicy edge_policy_from_code(std::uint32_t code, Cursor& cursor) {
  switch (code) {
    case 0:
      return EdgePolicy::Clamp;
    case 1:
      return EdgePolicy::Reject;
    default:
      cursor.fail("unknown edge policy code " + std::to_string(code));
  }
}

// --- binary embeddings ------------------------------------------------------

EmbeddingSet parse_binary_embeddings(std::string_view bytes,
                                     std::string_view name,
                                     std::string label) {
  Cursor cursor(bytes, name);
  const std::string_view magic = cursor.read_bytes(4, "header");
  if (std::memcmp(magic.data(), kEmbeddingMagic, 4) != 0) {
    throw IoError(std::string(name) +
                  ": bad magic: expected \"DRFT\" (byte 0)");
  }
  const std::uint32_t version = cursor.read_u32("header");
  if (version != kEmbeddingVersion) {
    cursor.fail("unsupported format version " + std::to_string(version) +
                " (expected " + std::to_string(kEmbeddingVersion) + ")");
  }
  const std::uint32_t dim = cursor.read_u32("header");
  const std::uint64_t rows = cursor.read_u64("header");
  if (dim == 0) {
    cursor.fail("dim must be >= 1");
  }
  if (rows == 0) {
    cursor.fail("row count must be >= 1");
  }
  if (rows > (std::numeric_limits<std::size_t>::max() / 4) / dim) {
    cursor.fail("declared payload size overflows");
  }

  const std::size_t count = static_cast<std::size_t>(rows) * dim;
  if (cursor.remaining() < count * 4) {
    throw IoError(std::string(name) + ": truncated payload: header declares " +
                  std::to_string(rows) + " rows x " + std::to_string(dim) +
                  " dims (" + std::to_string(count * 4) + " bytes), have " +
                  std::to_string(cursor.remaining()) + " after byte " +
                  std::to_string(cursor.pos()));
  }

  std::vector<double> values(count);
  for (std::size_t i = 0; i < count; ++i) {
    values[i] = static_cast<double>(cursor.read_f32("payload"));
  }
  cursor.expect_end("payload");

  return as_io_error(name, [&] {
    return EmbeddingSet(dim, std::move(values), std::move(label));
  });
}

// --- CSV embeddings ---------------------------------------------------------

void trim(std::string_view& field) {
  while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) {
    field.remove_prefix(1);
  }
  while (!field.empty() && (field.back() == ' ' || field.back() == '\t')) {
    field.remove_suffix(1);
  }
}

double parse_field(std::string_view field, std::string_view name,
                   std::size_t line, std::size_t index) {
  trim(field);
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    fail_at_line(name, line,
                 "field " + std::to_string(index + 1) + ": not a number: '" +
                     std::string(field) + "'");
  }
  return value;
}

EmbeddingSet parse_csv_embeddings(std::string_view text, std::string_view name,
                                  std::string label) {
  std::vector<double> values;
  std::size_t dim = 0;
  std::size_t line_no = 0;

  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find('\n', start), text.size());
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.remove_suffix(1);
    }
    std::string_view stripped = line;
    trim(stripped);
    if (stripped.empty() || stripped.front() == '#') {
      continue;
    }

    std::size_t fields = 0;
    std::size_t field_start = 0;
    while (field_start <= line.size()) {
      const std::size_t comma = std::min(line.find(',', field_start), line.size());
      values.push_back(
          parse_field(line.substr(field_start, comma - field_start), name,
                      line_no, fields));
      ++fields;
      field_start = comma + 1;
    }

    if (dim == 0) {
      dim = fields;
    } else if (fields != dim) {
      fail_at_line(name, line_no,
                   "expected " + std::to_string(dim) + " fields, got " +
                       std::to_string(fields));
    }
  }

  if (dim == 0) {
    throw IoError(std::string(name) + ": no data rows");
  }
  return as_io_error(name, [&] {
    return EmbeddingSet(dim, std::move(values), std::move(label));
  });
}

std::string serialize_csv(const EmbeddingSet& set) {
  std::string out;
  out.reserve(set.data().size() * 12);
  const std::size_t dim = set.dim();
  for (std::size_t r = 0; r < set.row_count(); ++r) {
    for (std::size_t c = 0; c < dim; ++c) {
      if (c != 0) {
        out.push_back(',');
      }
      out += format_double(set.at(r, c));
    }
    out.push_back('\n');
  }
  return out;
}

std::string serialize_binary(const EmbeddingSet& set) {
  std::string out;
  out.reserve(20 + set.data().size() * 4);
  out.append(kEmbeddingMagic, 4);
  append_u32(out, kEmbeddingVersion);
  append_u32(out, static_cast<std::uint32_t>(set.dim()));
  append_u64(out, static_cast<std::uint64_t>(set.row_count()));
  for (double v : set.data()) {
    append_f32(out, static_cast<float>(v));
  }
  return out;
}

// --- JSON helpers -----------------------------------------------------------

[[noreturn]] void fail_doc(std::string_view name, const std::string& message) {
  throw IoError(std::string(name) + ": " + message);
}

const json& expect_field(const json& j, const char* key,
                         std::string_view name, const char* context) {
  const auto it = j.find(key);
  if (it == j.end()) {
    fail_doc(name, std::string(context) + ": missing field '" + key + "'");
  }
  return *it;
}

std::string expect_string(const json& j, const char* key,
                          std::string_view name, const char* context) {
  const json& field = expect_field(j, key, name, context);
  if (!field.is_string()) {
    fail_doc(name, std::string(context) + ": field '" + key +
                       "' must be a string");
  }
  return field.get<std::string>();
}

double expect_number(const json& j, const char* key, std::string_view name,
                     const char* context) {
  const json& field = expect_field(j, key, name, context);
  if (!field.is_number()) {
    fail_doc(name, std::string(context) + ": field '" + key +
                       "' must be a number");
  }
  return field.get<double>();
}

std::uint64_t expect_count(const json& j, const char* key,
                           std::string_view name, const char* context) {
  const json& field = expect_field(j, key, name, context);
  if (!field.is_number_unsigned() &&
      !(field.is_number_integer() && field.get<std::int64_t>() >= 0)) {
    fail_doc(name, std::string(context) + ": field '" + key +
                       "' must be a nonnegative integer");
  }
  return field.get<std::uint64_t>();
}

bool expect_bool(const json& j, const char* key, std::string_view name,
                 const char* context) {
  const json& field = expect_field(j, key, name, context);
  if (!field.is_boolean()) {
    fail_doc(name, std::string(context) + ": field '" + key +
                       "' must be a boolean");
  }
  return field.get<bool>();
}

MetricKind expect_metric(const json& j, const char* key, std::string_view name,
                         const char* context) {
  const std::string text = expect_string(j, key, name, context);
  return as_io_error(name, [&] { return parse_metric(text); });
}

void check_envelope(const json& j, const char* kind, std::string_view name) {
  if (!j.is_object()) {
    fail_doc(name, "document root must be an object");
  }
  const json& version = expect_field(j, "schema_version", name, "document");
  if (!version.is_number_integer() ||
      version.get<std::int64_t>() != kSchemaVersion) {
    fail_doc(name, "unsupported schema_version " + version.dump() +
                       " (expected " + std::to_string(kSchemaVersion) + ")");
  }
  const std::string found = expect_string(j, "kind", name, "document");
  if (found != kind) {
    fail_doc(name, "wrong document kind '" + found + "' (expected '" + kind +
                       "')");
  }
}

std::string read_timestamp(const json& j, std::string_view name) {
  const auto it = j.find("timestamp");
  if (it == j.end()) {
    return "";
  }
  if (!it->is_string()) {
    fail_doc(name, "field 'timestamp' must be a string");
  }
  return it->get<std::string>();
}

json parse_json_text(std::string_view text, std::string_view name) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw IoError(std::string(name) + ": " + e.what());
  }
}

json report_body_to_json(const DriftReport& report) {
  json j;
  j["metric"] = metric_name(report.metric);
  j["per_dim"] = report.per_dim;
  j["total"] = report.total;
  j["test_label"] = report.test_label;
  j["ref_id"] = report.ref_id;
  j["test_count"] = report.test_count;
  j["ref_count"] = report.ref_count;
  return j;
}

DriftReport report_body_from_json(const json& j, std::string_view name,
                                  const char* context) {
  if (!j.is_object()) {
    fail_doc(name, std::string(context) + ": must be an object");
  }
  DriftReport report;
  report.metric = expect_metric(j, "metric", name, context);
  const json& per_dim = expect_field(j, "per_dim", name, context);
  if (!per_dim.is_array() || per_dim.empty()) {
    fail_doc(name, std::string(context) + ": field 'per_dim' must be a "
                       "nonempty array");
  }
  report.per_dim.reserve(per_dim.size());
  for (const json& v : per_dim) {
    if (!v.is_number()) {
      fail_doc(name, std::string(context) + ": field 'per_dim' must contain "
                         "only numbers");
    }
    report.per_dim.push_back(v.get<double>());
  }
  report.total = expect_number(j, "total", name, context);
  report.test_label = expect_string(j, "test_label", name, context);
  report.ref_id = expect_string(j, "ref_id", name, context);
  report.test_count =
      static_cast<std::size_t>(expect_count(j, "test_count", name, context));
  report.ref_count =
      static_cast<std::size_t>(expect_count(j, "ref_count", name, context));
  as_io_error(name, [&] {
    validate_report(report);
    return 0;
  });
  return report;
}

std::string threshold_kind_name(ThresholdPolicy::Kind kind) {
  return kind == ThresholdPolicy::Kind::Absolute ? "absolute"
                                                 : "calibrated_quantile";
}

json policy_to_json(const ThresholdPolicy& policy) {
  json j;
  j["kind"] = threshold_kind_name(policy.kind);
  j["alert_metric"] = metric_name(policy.alert_metric);
  j["absolute_value"] = policy.absolute_value;
  j["splits"] = policy.splits;
  j["quantile"] = policy.quantile;
  j["seed"] = policy.seed;
  return j;
}

ThresholdPolicy policy_from_json(const json& j, std::string_view name) {
  if (!j.is_object()) {
    fail_doc(name, "policy: must be an object");
  }
  ThresholdPolicy policy;
  const std::string kind = expect_string(j, "kind", name, "policy");
  if (kind == "absolute") {
    policy.kind = ThresholdPolicy::Kind::Absolute;
  } else if (kind == "calibrated_quantile") {
    policy.kind = ThresholdPolicy::Kind::CalibratedQuantile;
  } else {
    fail_doc(name, "policy: unknown kind '" + kind + "'");
  }
  policy.alert_metric = expect_metric(j, "alert_metric", name, "policy");
  policy.absolute_value = expect_number(j, "absolute_value", name, "policy");
  policy.splits =
      static_cast<std::size_t>(expect_count(j, "splits", name, "policy"));
  policy.quantile = expect_number(j, "quantile", name, "policy");
  policy.seed = expect_count(j, "seed", name, "policy");
  return policy;
}

std::string dump_document(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

// --- file helpers -----------------------------------------------------------

std::string read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError(path.string() + ": cannot open for reading");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) {
    throw IoError(path.string() + ": read failed");
  }
  return std::move(buffer).str();
}

void write_file_bytes(const std::filesystem::path& path,
                      std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError(path.string() + ": cannot open for writing");
  }
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) {
    throw IoError(path.string() + ": write failed");
  }
}

// --- embeddings -------------------------------------------------------------

EmbeddingFormat detect_format(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError(path.string() + ": cannot open for reading");
  }
  char head[4] = {0, 0, 0, 0};
  in.read(head, 4);
  if (in.gcount() == 4 && std::memcmp(head, kEmbeddingMagic, 4) == 0) {
    return EmbeddingFormat::Binary;
  }
  return EmbeddingFormat::Csv;
}

EmbeddingSet read_embeddings(const std::filesystem::path& path,
                             EmbeddingFormat format,
                             std::optional<std::string> label) {
  const std::string bytes = read_file_bytes(path);
  std::string set_label = label.value_or(path.stem().string());
  if (format == EmbeddingFormat::Binary) {
    return parse_binary_embeddings(bytes, path.string(), std::move(set_label));
  }
  return parse_csv_embeddings(bytes, path.string(), std::move(set_label));
}

EmbeddingSet read_embeddings(std::istream& in, EmbeddingFormat format,
                             std::string_view source_name) {
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) {
    throw IoError(std::string(source_name) + ": read failed");
  }
  const std::string bytes = std::move(buffer).str();
  if (format == EmbeddingFormat::Binary) {
    return parse_binary_embeddings(bytes, source_name, "");
  }
  return parse_csv_embeddings(bytes, source_name, "");
}

std::string serialize_embeddings(const EmbeddingSet& set,
                                 EmbeddingFormat format) {
  return format == EmbeddingFormat::Binary ? serialize_binary(set)
                                           : serialize_csv(set);
}

void write_embeddings(const EmbeddingSet& set,
                      const std::filesystem::path& path,
                      EmbeddingFormat format) {
  write_file_bytes(path, serialize_embeddings(set, format));
}

// --- reference profiles -----------------------------------------------------

std::string serialize_profile(const ReferenceProfile& profile) {
  const EmbeddingSet& source = profile.embeddings();
  std::string out;
  out.reserve(64 + source.data().size() * 8);

  out.append(kProfileMagic, 4);
  append_u32(out, kProfileVersion);
  append_u32(out, static_cast<std::uint32_t>(profile.dim()));
  append_u64(out, static_cast<std::uint64_t>(profile.row_count()));
  append_u32(out, static_cast<std::uint32_t>(profile.defaults().bin_count));
  append_u32(out, static_cast<std::uint32_t>(profile.defaults().edge_policy));

  append_u32(out, static_cast<std::uint32_t>(profile.label().size()));
  out += profile.label();

  append_u32(out, static_cast<std::uint32_t>(profile.calibration().size()));
  for (const auto& [metric, values] : profile.calibration()) {
    append_u32(out, static_cast<std::uint32_t>(metric));
    append_u64(out, static_cast<std::uint64_t>(values.size()));
    for (double v : values) {
      append_f64(out, v);
    }
  }

  // Raw rows last; every derived structure is rebuilt from them on load.
  for (double v : source.data()) {
    append_f64(out, v);
  }
  return out;
}

ReferenceProfile parse_profile(std::string_view bytes,
                               std::string_view source_name) {
  Cursor cursor(bytes, source_name);
  const std::string_view magic = cursor.read_bytes(4, "header");
  if (std::memcmp(magic.data(), kProfileMagic, 4) != 0) {
    throw IoError(std::string(source_name) +
                  ": bad magic: expected \"DRFP\" (byte 0)");
  }
  const std::uint32_t version = cursor.read_u32("header");
  if (version != kProfileVersion) {
    cursor.fail("unsupported format version " + std::to_string(version) +
                " (expected " + std::to_string(kProfileVersion) + ")");
  }
  const std::uint32_t dim = cursor.read_u32("header");
  const std::uint64_t rows = cursor.read_u64("header");
  if (dim == 0) {
    cursor.fail("dim must be >= 1");
  }
  if (rows == 0) {
    cursor.fail("row count must be >= 1");
  }

  HistogramDefaults defaults;
  defaults.bin_count = cursor.read_u32("header");
  defaults.edge_policy = edge_policy_from_code(cursor.read_u32("header"), cursor);
  if (defaults.bin_count == 0) {
    cursor.fail("bin count must be >= 1");
  }

  const std::uint32_t label_len = cursor.read_u32("label");
  const std::string label(cursor.read_bytes(label_len, "label"));

  const std::uint32_t calib_entries = cursor.read_u32("calibration");
  std::map<MetricKind, std::vector<double>> calibration;
  for (std::uint32_t e = 0; e < calib_entries; ++e) {
    const MetricKind metric =
        metric_from_code(cursor.read_u32("calibration"), cursor);
    if (calibration.count(metric) != 0) {
      cursor.fail("duplicate calibration entry for metric '" +
                  std::string(metric_name(metric)) + "'");
    }
    const std::uint64_t count = cursor.read_u64("calibration");
    if (count > cursor.remaining() / 8) {
      cursor.fail("calibration length overruns the file");
    }
    std::vector<double> values(static_cast<std::size_t>(count));
    for (auto& v : values) {
      v = cursor.read_f64("calibration");
    }
    calibration.emplace(metric, std::move(values));
  }

  if (rows > (std::numeric_limits<std::size_t>::max() / 8) / dim) {
    cursor.fail("declared payload size overflows");
  }
  const std::size_t count = static_cast<std::size_t>(rows) * dim;
  if (cursor.remaining() < count * 8) {
    throw IoError(std::string(source_name) +
                  ": truncated payload: header declares " +
                  std::to_string(rows) + " rows x " + std::to_string(dim) +
                  " dims (" + std::to_string(count * 8) + " bytes), have " +
                  std::to_string(cursor.remaining()) + " after byte " +
                  std::to_string(cursor.pos()));
  }
  std::vector<double> values(count);
  for (std::size_t i = 0; i < count; ++i) {
    values[i] = cursor.read_f64("payload");
  }
  cursor.expect_end("payload");

  return as_io_error(source_name, [&] {
    ReferenceProfile profile(EmbeddingSet(dim, std::move(values), label),
                             defaults);
    for (auto& [metric, self_drift] : calibration) {
      profile.set_calibration(metric, std::move(self_drift));
    }
    return profile;
  });
}

void save_profile(const ReferenceProfile& profile,
                  const std::filesystem::path& path) {
  write_file_bytes(path, serialize_profile(profile));
}

ReferenceProfile load_profile(const std::filesystem::path& path) {
  return parse_profile(read_file_bytes(path), path.string());
}

// --- drift reports ----------------------------------------------------------

std::string serialize_report(const DriftReport& report,
                             std::string_view timestamp) {
  json j = report_body_to_json(report);
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "drift_report";
  j["timestamp"] = std::string(timestamp);
  return dump_document(j);
}

DriftReport parse_report(std::string_view text, std::string* timestamp,
                         std::string_view source_name) {
  const json j = parse_json_text(text, source_name);
  check_envelope(j, "drift_report", source_name);
  if (timestamp != nullptr) {
    *timestamp = read_timestamp(j, source_name);
  }
  return report_body_from_json(j, source_name, "report");
}

void save_report(const DriftReport& report, const std::filesystem::path& path,
                 std::string_view timestamp) {
  write_file_bytes(path, serialize_report(report, timestamp));
}

DriftReport load_report(const std::filesystem::path& path) {
  return parse_report(read_file_bytes(path), nullptr, path.string());
}

// --- monitor series ---------------------------------------------------------

std::string serialize_series(const MonitorSeries& series,
                             std::string_view timestamp) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "monitor_series";
  j["timestamp"] = std::string(timestamp);

  json metrics = json::array();
  for (MetricKind m : series.metrics) {
    metrics.push_back(metric_name(m));
  }
  j["metrics"] = std::move(metrics);
  j["policy"] = policy_to_json(series.policy);
  j["threshold"] = series.threshold;

  json entries = json::array();
  for (const MonitorEntry& entry : series.entries) {
    json e;
    e["test_label"] = entry.test_label;
    e["alert"] = entry.alert;
    json reports = json::array();
    for (const DriftReport& report : entry.reports) {
      reports.push_back(report_body_to_json(report));
    }
    e["reports"] = std::move(reports);
    entries.push_back(std::move(e));
  }
  j["entries"] = std::move(entries);
  return dump_document(j);
}

MonitorSeries parse_series(std::string_view text, std::string* timestamp,
                           std::string_view source_name) {
  const json j = parse_json_text(text, source_name);
  check_envelope(j, "monitor_series", source_name);
  if (timestamp != nullptr) {
    *timestamp = read_timestamp(j, source_name);
  }

  MonitorSeries series;
  const json& metrics = expect_field(j, "metrics", source_name, "document");
  if (!metrics.is_array()) {
    fail_doc(source_name, "field 'metrics' must be an array");
  }
  for (const json& m : metrics) {
    if (!m.is_string()) {
      fail_doc(source_name, "field 'metrics' must contain only strings");
    }
    series.metrics.push_back(as_io_error(
        source_name, [&] { return parse_metric(m.get<std::string>()); }));
  }

  series.policy =
      policy_from_json(expect_field(j, "policy", source_name, "document"),
                       source_name);
  series.threshold = expect_number(j, "threshold", source_name, "document");

  const json& entries = expect_field(j, "entries", source_name, "document");
  if (!entries.is_array()) {
    fail_doc(source_name, "field 'entries' must be an array");
  }
  std::size_t index = 0;
  for (const json& e : entries) {
    const std::string context = "entry " + std::to_string(index);
    if (!e.is_object()) {
      fail_doc(source_name, context + ": must be an object");
    }
    MonitorEntry entry;
    entry.test_label =
        expect_string(e, "test_label", source_name, context.c_str());
    entry.alert = expect_bool(e, "alert", source_name, context.c_str());
    const json& reports = expect_field(e, "reports", source_name,
                                       context.c_str());
    if (!reports.is_array() || reports.size() != series.metrics.size()) {
      fail_doc(source_name, context + ": field 'reports' must be an array of " +
                                std::to_string(series.metrics.size()) +
                                " reports");
    }
    std::size_t r = 0;
    for (const json& report_json : reports) {
      const std::string report_context = context + ": report " +
                                         std::to_string(r);
      DriftReport report = report_body_from_json(report_json, source_name,
                                                 report_context.c_str());
      if (report.metric != series.metrics[r]) {
        fail_doc(source_name,
                 report_context + ": metric '" +
                     std::string(metric_name(report.metric)) +
                     "' does not match series metric '" +
                     std::string(metric_name(series.metrics[r])) + "'");
      }
      entry.reports.push_back(std::move(report));
      ++r;
    }
    series.entries.push_back(std::move(entry));
    ++index;
  }
  return series;
}

void save_series(const MonitorSeries& series,
                 const std::filesystem::path& path,
                 std::string_view timestamp) {
  write_file_bytes(path, serialize_series(series, timestamp));
}

MonitorSeries load_series(const std::filesystem::path& path) {
  return parse_series(read_file_bytes(path), nullptr, path.string());
}

// --- metric agreement -------------------------------------------------------

std::string serialize_correlation(const CorrelationMatrix& matrix) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "metric_agreement";
  json metrics = json::array();
  for (MetricKind m : matrix.metrics) {
    metrics.push_back(metric_name(m));
  }
  j["metrics"] = std::move(metrics);
  json values = json::array();
  for (std::size_t i = 0; i < matrix.metrics.size(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < matrix.metrics.size(); ++k) {
      row.push_back(matrix.at(i, k));
    }
    values.push_back(std::move(row));
  }
  j["values"] = std::move(values);
  return dump_document(j);
}

// --- score files ------------------------------------------------------------

std::vector<double> read_score_file(const std::filesystem::path& path) {
  const std::string text = read_file_bytes(path);
  const std::string name = path.string();
  std::vector<double> scores;
  std::size_t line_no = 0;

  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find('\n', start), text.size());
    std::string_view line =
        std::string_view(text).substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.remove_suffix(1);
    }
    trim(line);
    if (line.empty() || line.front() == '#') {
      continue;
    }
    double value = 0.0;
    const auto [ptr, ec] =
        std::from_chars(line.data(), line.data() + line.size(), value);
    if (ec != std::errc() || ptr != line.data() + line.size()) {
      fail_at_line(name, line_no, "not a number: '" + std::string(line) + "'");
    }
    scores.push_back(value);
  }
  if (scores.empty()) {
    throw IoError(name + ": no scores");
  }
  return scores;
}

}  // namespace driftwatch
