#include "csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>
#include <unistd.h>

namespace svmreg::cli {

namespace {

struct RawRow {
  std::size_t line = 0;
  std::vector<std::string_view> fields;
};

struct RawTable {
  std::vector<std::string> header;
  std::vector<RawRow> rows;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::string_view unquote(std::string_view s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
  return s;
}

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw DataError("line " + std::to_string(line) + ": " + what);
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                          : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

RawTable tokenize(std::string_view text) {
  if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
  RawTable table;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool have_header = false;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    ++line_no;
    pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
    if (trim(line).empty()) continue;
    auto fields = split(line);
    if (!have_header) {
      for (auto f : fields) {
        const auto name = trim(unquote(f));
        if (name.empty()) fail(line_no, "empty column name in header");
        if (std::find(table.header.begin(), table.header.end(), name) != table.header.end()) {
          fail(line_no, "duplicate column name '" + std::string(name) + "'");
        }
        table.header.emplace_back(name);
      }
      have_header = true;
      continue;
    }
    if (fields.size() != table.header.size()) {
      fail(line_no, "expected " + std::to_string(table.header.size()) + " fields, found " +
                        std::to_string(fields.size()));
    }
    table.rows.push_back({line_no, std::move(fields)});
  }
  if (!have_header) throw DataError("line 1: missing header row");
  return table;
}

double parse_number(std::string_view s, std::size_t line, const std::string& column) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (!s.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (s.empty() || ec != std::errc() || ptr != last) {
    fail(line, "column '" + column + "': cannot parse '" + std::string(s) + "' as a number");
  }
  if (!std::isfinite(v)) fail(line, "column '" + column + "': non-finite value");
  return v;
}

std::size_t column_index(const RawTable& t, const std::string& name) {
  const auto it = std::find(t.header.begin(), t.header.end(), name);
  if (it == t.header.end()) throw DataError("line 1: no column named '" + name + "'");
  return static_cast<std::size_t>(it - t.header.begin());
}

std::vector<std::size_t> resolve_features(const RawTable& t, CsvSchema& schema,
                                          std::optional<std::size_t> label_idx) {
  std::vector<std::size_t> idx;
  if (schema.feature_columns.empty()) {
    for (std::size_t j = 0; j < t.header.size(); ++j) {
      if (label_idx && j == *label_idx) continue;
      idx.push_back(j);
      schema.feature_columns.push_back(t.header[j]);
    }
  } else {
    for (const auto& name : schema.feature_columns) {
      if (name == schema.label_column) {
        throw DataError("line 1: label column '" + name + "' cannot also be a feature");
      }
      idx.push_back(column_index(t, name));
    }
  }
  if (idx.empty()) throw DataError("line 1: no feature columns");
  return idx;
}

CovariateMatrix read_features(const RawTable& t, const std::vector<std::size_t>& idx) {
  CovariateMatrix x(static_cast<Eigen::Index>(t.rows.size()), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    for (std::size_t j = 0; j < idx.size(); ++j) {
      x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          parse_number(t.rows[i].fields[idx[j]], t.rows[i].line, t.header[idx[j]]);
    }
  }
  return x;
}

// Parses the label column and settles the encoding.
Eigen::VectorXd read_labels(const RawTable& t, std::size_t col, LabelEncoding& encoding) {
  std::vector<int> raw(t.rows.size());
  bool seen_minus = false;
  bool seen_zero = false;
  std::size_t first_minus = 0;
  std::size_t first_zero = 0;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const std::size_t line = t.rows[i].line;
    const double v = parse_number(t.rows[i].fields[col], line, t.header[col]);
    if (v == 1.0) {
      raw[i] = 1;
    } else if (v == -1.0) {
      raw[i] = -1;
      if (!seen_minus) first_minus = line;
      seen_minus = true;
    } else if (v == 0.0) {
      raw[i] = 0;
      if (!seen_zero) first_zero = line;
      seen_zero = true;
    } else {
      fail(line, "label '" + std::string(t.rows[i].fields[col]) + "' is not one of -1, 0, 1");
    }
  }
  if (seen_minus && seen_zero) {
    fail(std::max(first_minus, first_zero), "labels mix the -1/1 and 0/1 encodings");
  }
  if (encoding == LabelEncoding::Auto) {
    encoding = seen_zero ? LabelEncoding::ZeroOne : LabelEncoding::PlusMinusOne;
  } else if (encoding == LabelEncoding::PlusMinusOne && seen_zero) {
    fail(first_zero, "label 0 is not valid for the -1/1 encoding");
  } else if (encoding == LabelEncoding::ZeroOne && seen_minus) {
    fail(first_minus, "label -1 is not valid for the 0/1 encoding");
  }
  Eigen::VectorXd y(static_cast<Eigen::Index>(raw.size()));
  for (std::size_t i = 0; i < raw.size(); ++i) y[static_cast<Eigen::Index>(i)] = raw[i] == 1 ? 1.0 : -1.0;
  return y;
}

}  // namespace

std::string_view to_string(LabelEncoding e) {
  switch (e) {
    case LabelEncoding::Auto: return "auto";
    case LabelEncoding::PlusMinusOne: return "pm1";
    case LabelEncoding::ZeroOne: return "01";
  }
  return "auto";
}

LabelEncoding parse_label_encoding(std::string_view s) {
  if (s == "auto") return LabelEncoding::Auto;
  if (s == "pm1") return LabelEncoding::PlusMinusOne;
  if (s == "01") return LabelEncoding::ZeroOne;
  throw std::invalid_argument("label encoding must be auto, pm1 or 01");
}

int encode_label(Label y, LabelEncoding e) {
  if (y == Label::Positive) return 1;
  return e == LabelEncoding::ZeroOne ? 0 : -1;
}

CsvTable parse_csv(std::string_view text, const CsvSchema& requested) {
  const RawTable raw = tokenize(text);
  if (raw.rows.empty()) throw DataError("line 2: no data rows");
  CsvTable out;
  out.schema = requested;
  const std::size_t label_idx = column_index(raw, out.schema.label_column);
  const auto feature_idx = resolve_features(raw, out.schema, label_idx);
  Eigen::VectorXd y = read_labels(raw, label_idx, out.schema.label_encoding);
  out.data = Dataset(read_features(raw, feature_idx), std::move(y));
  out.positives = out.data.count(Label::Positive);
  out.negatives = out.data.size() - out.positives;
  return out;
}

CsvTable read_csv(const std::filesystem::path& path, const CsvSchema& requested) {
  return parse_csv(read_file(path), requested);
}

CsvFeatures parse_csv_features(std::string_view text, const CsvSchema& schema) {
  const RawTable raw = tokenize(text);
  if (raw.rows.empty()) throw DataError("line 2: no data rows");
  CsvFeatures out;
  out.schema = schema;
  const auto label_it = std::find(raw.header.begin(), raw.header.end(), schema.label_column);
  std::optional<std::size_t> label_idx;
  if (label_it != raw.header.end()) label_idx = static_cast<std::size_t>(label_it - raw.header.begin());
  const auto feature_idx = resolve_features(raw, out.schema, label_idx);
  out.x = read_features(raw, feature_idx);
  if (label_idx) {
    LabelEncoding enc = schema.label_encoding;
    out.y = read_labels(raw, *label_idx, enc);
  }
  return out;
}

CsvFeatures read_csv_features(const std::filesystem::path& path, const CsvSchema& schema) {
  return parse_csv_features(read_file(path), schema);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write '" + tmp.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw DataError("write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw DataError("cannot move output into place at '" + path.string() + "'");
  }
}

}  // namespace svmreg::cli
