#include "omicsprep/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include "omicsprep/error.hpp"

namespace omicsprep {
namespace csv {

std::vector<Record> read_records(std::string_view text) {
  std::vector<Record> records;
  Record current;
  std::string field;
  bool in_quotes = false;
  bool any = false;  // current record has content

  auto end_record = [&] {
    current.push_back(std::move(field));
    field.clear();
    records.push_back(std::move(current));
    current.clear();
    any = false;
  };

  for (std::size_t k = 0; k < text.size(); ++k) {
    const char c = text[k];
    if (in_quotes) {
      if (c == '"') {
        if (k + 1 < text.size() && text[k + 1] == '"') {
          field.push_back('"');
          ++k;
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        in_quotes = true;
        any = true;
        break;
      case ',':
        current.push_back(std::move(field));
        field.clear();
        any = true;
        break;
      case '\r':
        if (k + 1 < text.size() && text[k + 1] == '\n') break;
        [[fallthrough]];
      case '\n':
        end_record();
        break;
      default:
        field.push_back(c);
        any = true;
    }
  }
  if (in_quotes) throw ParseError("unterminated quoted field at end of input");
  if (any || !field.empty() || !current.empty()) end_record();

  // Blank lines at the end of a file are not records.
  while (!records.empty() && records.back().size() == 1 &&
         records.back().front().empty()) {
    records.pop_back();
  }
  return records;
}

std::string escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string join(const Record& fields) {
  std::string out;
  for (std::size_t k = 0; k < fields.size(); ++k) {
    if (k) out.push_back(',');
    out += escape(fields[k]);
  }
  return out;
}

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

bool parse_double(std::string_view text, double& out) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) {
    text.remove_prefix(1);
  }
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) {
    text.remove_suffix(1);
  }
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return false;
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) return false;
  if (!std::isfinite(value)) return false;
  out = value;
  return true;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  if (path.empty()) throw IoError("empty output path");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

}  // namespace csv

FeatureMatrix parse_csv(std::string_view text, const CsvOptions& options) {
  const auto records = csv::read_records(text);
  if (records.empty()) throw ParseError("CSV input is empty");

  const std::size_t width = records.front().size();
  const std::size_t first_data = options.header ? 1 : 0;
  for (std::size_t r = 0; r < records.size(); ++r) {
    if (records[r].size() != width) {
      throw ParseError("row " + std::to_string(r + 1) + ": expected " +
                       std::to_string(width) + " fields, got " +
                       std::to_string(records[r].size()));
    }
  }
  if (records.size() <= first_data) throw ParseError("CSV has no data rows");

  const std::size_t first_col = options.id_column ? 1 : 0;
  std::optional<std::size_t> group_col, batch_col;
  std::vector<std::size_t> feature_cols;
  Labels feature_labels;
  for (std::size_t c = first_col; c < width; ++c) {
    if (options.header) {
      const auto& name = records.front()[c];
      if (name == "group" && !group_col) {
        group_col = c;
        continue;
      }
      if (name == "batch" && !batch_col) {
        batch_col = c;
        continue;
      }
      feature_labels.push_back(name);
    }
    feature_cols.push_back(c);
  }
  if (!options.header) feature_labels = numbered_labels("f", feature_cols.size());
  if (feature_cols.empty()) throw ParseError("CSV has no feature columns");

  const std::size_t n = records.size() - first_data;
  const std::size_t p = feature_cols.size();
  std::vector<double> values;
  values.reserve(n * p);
  Labels ids;
  std::optional<Labels> group, batch;
  if (group_col) group.emplace();
  if (batch_col) batch.emplace();

  for (std::size_t r = first_data; r < records.size(); ++r) {
    const auto& rec = records[r];
    ids.push_back(options.id_column ? rec[0]
                                    : "s" + std::to_string(r - first_data + 1));
    for (std::size_t j = 0; j < p; ++j) {
      double v = 0.0;
      if (!csv::parse_double(rec[feature_cols[j]], v)) {
        throw ParseError("row " + std::to_string(r + 1) + " (sample '" +
                         ids.back() + "'), column '" + feature_labels[j] +
                         "': '" + rec[feature_cols[j]] +
                         "' is not a finite number");
      }
      values.push_back(v);
    }
    if (group) group->push_back(rec[*group_col]);
    if (batch) batch->push_back(rec[*batch_col]);
  }
  return FeatureMatrix(n, p, std::move(values), std::move(ids),
                       std::move(feature_labels), std::move(group),
                       std::move(batch));
}

FeatureMatrix load_csv(const std::filesystem::path& path,
                       const CsvOptions& options) {
  const std::string text = csv::read_file(path);
  try {
    return parse_csv(text, options);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

std::string to_csv(const FeatureMatrix& m) {
  std::string out;
  csv::Record header{"id"};
  if (m.group()) header.push_back("group");
  if (m.batch()) header.push_back("batch");
  header.insert(header.end(), m.feature_labels().begin(), m.feature_labels().end());
  out += csv::join(header);
  out.push_back('\n');
  for (std::size_t i = 0; i < m.n_samples(); ++i) {
    out += csv::escape(m.sample_ids()[i]);
    if (m.group()) (out += ',') += csv::escape((*m.group())[i]);
    if (m.batch()) (out += ',') += csv::escape((*m.batch())[i]);
    for (double v : m.row(i)) (out += ',') += csv::format_double(v);
    out.push_back('\n');
  }
  return out;
}

void save_csv(const FeatureMatrix& matrix, const std::filesystem::path& path) {
  csv::write_file(path, to_csv(matrix));
}

}  // namespace omicsprep
