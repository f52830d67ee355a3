#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ahspec/errors.hpp"

namespace ahspec {

// First line of every CSV artifact, and the code tag mixed into cache
// fingerprints so records from another build never resurface.
inline constexpr const char* kSchemaTag = "ahspec-schema v1";
inline constexpr const char* kVersionTag = "ahspec 0.1.0";

// One result table per run: a fixed column set and preformatted cells.
// Cells are strings so a cache hit reproduces the original bytes exactly.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

// %.12g with the sign of zero dropped; every numeric cell goes through here
// so fresh and cached rows format identically.
std::string fmt_num(double v);

// Appends after checking arity; commas, quotes and line breaks in cells are
// replaced (the CSV writer does not escape).
void table_append(Table& t, std::vector<std::string> cells);

// Schema comment line, header line, one line per row.
std::string csv_text(const Table& t);

// The same table as JSON, with per-row annotations (cache hits, wall time,
// solver diagnostics) that stay out of the CSV byte contract.
struct RowMeta {
  bool cached = false;
  double seconds = 0;
  std::string diagnostics;
};
std::string json_text(const std::string& command, const Table& t,
                      const std::vector<RowMeta>& meta);

// Self-contained line plot.  Every series is also embedded verbatim in an
// XML comment so the plotted numbers can be audited without parsing paths.
struct Series {
  std::string name;
  std::vector<std::pair<double, double>> points;
};
std::string svg_text(const std::string& title, const std::string& xlabel,
                     const std::string& ylabel, const std::vector<Series>& series);

void write_file(const std::filesystem::path& path, const std::string& text);

// Content-addressed cache of formatted result rows.  The fingerprint hashes
// the canonical task description (task kind, metric key, parameters,
// tolerances) together with kVersionTag.  AHSPEC_CACHE_DIR overrides the
// location; a record that fails its integrity line throws CorruptCache and
// the caller recomputes.
std::filesystem::path cache_dir();
std::string fingerprint(const std::string& canonical);
std::optional<std::string> cache_lookup(const std::string& fp);
void cache_store(const std::string& fp, const std::string& payload);

// Row group <-> cache payload.  decode_rows validates the shape and throws
// CorruptCache on anything it would not itself have written.
std::string encode_rows(const std::vector<std::vector<std::string>>& rows);
std::vector<std::vector<std::string>> decode_rows(const std::string& payload, size_t n_cols);

}  // namespace ahspec
