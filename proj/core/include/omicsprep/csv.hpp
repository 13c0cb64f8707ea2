#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "omicsprep/feature_matrix.hpp"

namespace omicsprep {

struct CsvOptions {
  /// First row holds column names. Without a header, features are named
  /// f1..fp and group/batch columns cannot be recognised.
  bool header = true;
  /// First column holds sample ids. Otherwise ids are s1..sn.
  bool id_column = true;
};

/// Reads a feature matrix. Columns named `group` and `batch` (header mode)
/// become annotations; every other non-id column must be numeric.
FeatureMatrix load_csv(const std::filesystem::path& path,
                       const CsvOptions& options = {});
FeatureMatrix parse_csv(std::string_view text, const CsvOptions& options = {});

/// Values are written in shortest round-trip form, so load_csv(save_csv(m))
/// reproduces m exactly.
void save_csv(const FeatureMatrix& matrix, const std::filesystem::path& path);
std::string to_csv(const FeatureMatrix& matrix);

namespace csv {

using Record = std::vector<std::string>;

/// Splits text into records. Handles double-quoted fields with "" escapes,
/// CRLF line ends and trailing blank lines. Fields are not trimmed.
std::vector<Record> read_records(std::string_view text);

std::string escape(std::string_view field);
std::string join(const Record& fields);

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double value);

/// Parses a finite double, ignoring surrounding blanks. False on failure.
bool parse_double(std::string_view text, double& out);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace csv
}  // namespace omicsprep
