#pragma once

#include "svmreg/dataset.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace svmreg::cli {

enum class LabelEncoding { Auto, PlusMinusOne, ZeroOne };

std::string_view to_string(LabelEncoding e);
LabelEncoding parse_label_encoding(std::string_view s);

struct CsvSchema {
  std::string label_column = "y";
  std::vector<std::string> feature_columns;  ///< empty: every column except the label
  LabelEncoding label_encoding = LabelEncoding::Auto;
};

struct CsvTable {
  Dataset data;
  CsvSchema schema;  ///< resolved: explicit feature list, concrete encoding
  Eigen::Index positives = 0;
  Eigen::Index negatives = 0;
};

/// Features plus optional labels, for prediction inputs where the label column may be absent.
struct CsvFeatures {
  CovariateMatrix x;
  std::optional<Eigen::VectorXd> y;  ///< +-1 when the label column is present
  CsvSchema schema;
};

/// Comma-separated, header row, '.' decimals. Labels -1/1 or 0/1 (0 maps to -1).
/// Throws DataError with the offending line number on malformed input.
CsvTable read_csv(const std::filesystem::path& path, const CsvSchema& requested);
CsvTable parse_csv(std::string_view text, const CsvSchema& requested);

CsvFeatures read_csv_features(const std::filesystem::path& path, const CsvSchema& schema);
CsvFeatures parse_csv_features(std::string_view text, const CsvSchema& schema);

/// Label as written in a file of the given encoding.
int encode_label(Label y, LabelEncoding e);

std::string read_file(const std::filesystem::path& path);

/// Writes via a temporary sibling and rename, so readers never see a partial file.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace svmreg::cli
