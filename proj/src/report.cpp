#include "ahspec/report.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace ahspec {

namespace {

std::string sanitize(std::string s) {
  for (char& ch : s) {
    if (ch == ',' || ch == '"') ch = ';';
    if (ch == '\n' || ch == '\r') ch = ' ';
  }
  return s;
}

std::uint64_t fnv1a64(const std::string& s, std::uint64_t h) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex16(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

constexpr const char* kCacheMagic = "ahspec-cache v1 ";

}  // namespace

std::string fmt_num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) v = 0.0;  // -0 and +0 must print the same byte sequence
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void table_append(Table& t, std::vector<std::string> cells) {
  if (cells.size() != t.columns.size())
    fail(errc::config_error, "row arity " + std::to_string(cells.size()) + " vs " +
                                 std::to_string(t.columns.size()) + " columns");
  for (auto& c : cells) c = sanitize(std::move(c));
  t.rows.push_back(std::move(cells));
}

std::string csv_text(const Table& t) {
  std::ostringstream out;
  out << "# " << kSchemaTag << "\n";
  for (size_t j = 0; j < t.columns.size(); ++j) out << (j ? "," : "") << t.columns[j];
  out << "\n";
  for (const auto& row : t.rows) {
    for (size_t j = 0; j < row.size(); ++j) out << (j ? "," : "") << row[j];
    out << "\n";
  }
  return out.str();
}

std::string json_text(const std::string& command, const Table& t,
                      const std::vector<RowMeta>& meta) {
  if (meta.size() != t.rows.size()) fail(errc::config_error, "row/meta length mismatch");
  nlohmann::json doc;
  doc["schema"] = kSchemaTag;
  doc["version"] = kVersionTag;
  doc["command"] = command;
  doc["columns"] = t.columns;
  nlohmann::json rows = nlohmann::json::array();
  for (size_t i = 0; i < t.rows.size(); ++i) {
    nlohmann::json row;
    for (size_t j = 0; j < t.columns.size(); ++j) row[t.columns[j]] = t.rows[i][j];
    row["cached"] = meta[i].cached;
    row["seconds"] = meta[i].seconds;
    if (!meta[i].diagnostics.empty()) row["diagnostics"] = meta[i].diagnostics;
    rows.push_back(std::move(row));
  }
  doc["rows"] = std::move(rows);
  return doc.dump(2) + "\n";
}

std::string svg_text(const std::string& title, const std::string& xlabel,
                     const std::string& ylabel, const std::vector<Series>& series) {
  const double W = 640, H = 420, L = 72, R = 618, T = 44, B = 372;
  double xlo = INFINITY, xhi = -INFINITY, ylo = INFINITY, yhi = -INFINITY;
  for (const auto& s : series)
    for (auto [x, y] : s.points) {
      xlo = std::min(xlo, x), xhi = std::max(xhi, x);
      ylo = std::min(ylo, y), yhi = std::max(yhi, y);
    }
  if (!(xlo <= xhi)) xlo = 0, xhi = 1;
  if (!(ylo <= yhi)) ylo = 0, yhi = 1;
  if (xhi == xlo) xlo -= 1, xhi += 1;
  if (yhi == ylo) ylo -= 1, yhi += 1;
  double ypad = 0.05 * (yhi - ylo);
  ylo -= ypad, yhi += ypad;
  auto px = [&](double x) { return L + (x - xlo) / (xhi - xlo) * (R - L); };
  auto py = [&](double y) { return B - (y - ylo) / (yhi - ylo) * (B - T); };
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << W << " " << H
      << "\" font-family=\"monospace\" font-size=\"12\">\n";
  out << "<title>" << title << "</title>\n";
  for (const auto& s : series) {
    out << "<!-- data " << s.name << ":";
    for (auto [x, y] : s.points) out << " " << fmt_num(x) << "," << fmt_num(y);
    out << " -->\n";
  }
  out << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << L << "\" y=\"24\" font-size=\"14\">" << title << "</text>\n";
  for (int i = 0; i <= 4; ++i) {
    double x = xlo + (xhi - xlo) * i / 4, y = ylo + (yhi - ylo) * i / 4;
    out << "<line x1=\"" << px(x) << "\" y1=\"" << B << "\" x2=\"" << px(x) << "\" y2=\"" << B + 5
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << px(x) << "\" y=\"" << B + 18 << "\" text-anchor=\"middle\">"
        << fmt_num(x) << "</text>\n";
    out << "<line x1=\"" << L - 5 << "\" y1=\"" << py(y) << "\" x2=\"" << L << "\" y2=\"" << py(y)
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << L - 8 << "\" y=\"" << py(y) + 4 << "\" text-anchor=\"end\">"
        << fmt_num(y) << "</text>\n";
  }
  out << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << B
      << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << L << "\" y1=\"" << B << "\" x2=\"" << R << "\" y2=\"" << B
      << "\" stroke=\"black\"/>\n";
  out << "<text x=\"" << 0.5 * (L + R) << "\" y=\"" << H - 8 << "\" text-anchor=\"middle\">"
      << xlabel << "</text>\n";
  out << "<text x=\"16\" y=\"" << 0.5 * (T + B)
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " << 0.5 * (T + B) << ")\">" << ylabel
      << "</text>\n";
  for (size_t k = 0; k < series.size(); ++k) {
    const char* color = palette[k % 5];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (auto [x, y] : series[k].points) out << px(x) << "," << py(y) << " ";
    out << "\"/>\n";
    for (auto [x, y] : series[k].points)
      out << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"2.5\" fill=\"" << color
          << "\"/>\n";
    double ly = T + 14.0 * double(k);
    out << "<line x1=\"" << R - 130 << "\" y1=\"" << ly << "\" x2=\"" << R - 110 << "\" y2=\"" << ly
        << "\" stroke=\"" << color << "\" stroke-width=\"1.5\"/>\n";
    out << "<text x=\"" << R - 104 << "\" y=\"" << ly + 4 << "\">" << series[k].name
        << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(errc::config_error, "cannot open " + path.string() + " for writing");
  out << text;
  out.close();
  if (!out) fail(errc::config_error, "short write to " + path.string());
}

std::filesystem::path cache_dir() {
  if (const char* env = std::getenv("AHSPEC_CACHE_DIR"); env && *env)
    return std::filesystem::path(env);
  return std::filesystem::path(".ahspec-cache");
}

std::string fingerprint(const std::string& canonical) {
  std::string tagged = std::string(kVersionTag) + "|" + canonical;
  return hex16(fnv1a64(tagged, 14695981039346656037ull)) +
         hex16(fnv1a64(tagged, 88172645463325252ull));
}

std::optional<std::string> cache_lookup(const std::string& fp) {
  auto path = cache_dir() / (fp + ".rec");
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  std::string expect = std::string(kCacheMagic) + fp + "\n";
  if (text.size() < expect.size() || text.compare(0, expect.size(), expect) != 0)
    fail(errc::corrupt_cache, "bad integrity line in " + path.string());
  return text.substr(expect.size());
}

void cache_store(const std::string& fp, const std::string& payload) {
  std::filesystem::create_directories(cache_dir());
  auto path = cache_dir() / (fp + ".rec");
  auto tmp = cache_dir() / (fp + ".tmp");
  write_file(tmp, std::string(kCacheMagic) + fp + "\n" + payload);
  std::filesystem::rename(tmp, path);
}

std::string encode_rows(const std::vector<std::vector<std::string>>& rows) {
  std::ostringstream out;
  for (const auto& row : rows) {
    for (size_t j = 0; j < row.size(); ++j) out << (j ? "," : "") << row[j];
    out << "\n";
  }
  return out.str();
}

std::vector<std::vector<std::string>> decode_rows(const std::string& payload, size_t n_cols) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(payload);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    size_t start = 0;
    while (true) {
      size_t pos = line.find(',', start);
      cells.push_back(line.substr(start, pos == std::string::npos ? pos : pos - start));
      if (pos == std::string::npos) break;
      start = pos + 1;
    }
    if (cells.size() != n_cols)
      fail(errc::corrupt_cache, "cached row has " + std::to_string(cells.size()) +
                                    " cells, table has " + std::to_string(n_cols) + " columns");
    rows.push_back(std::move(cells));
  }
  if (rows.empty()) fail(errc::corrupt_cache, "cached record holds no rows");
  return rows;
}

}  // namespace ahspec
