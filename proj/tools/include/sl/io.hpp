#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "synlik/types.hpp"

namespace sl {

/// 17 significant digits with a '.' decimal; NA, Inf and -Inf for non-finite values.
std::string format_double(double value);

/// Writes `content` verbatim (binary mode, so LF stays LF).
void write_text(const std::filesystem::path& path, const std::string& content);

void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& doc);
nlohmann::json read_json(const std::filesystem::path& path);

/// Header row then one row per matrix row.
std::string matrix_csv(const std::vector<std::string>& header, const synlik::Matrix& values);

struct CsvTable {
  std::vector<std::string> header;
  synlik::Matrix values;
};

/// Parses a numeric CSV with a header row; throws std::runtime_error naming
/// the offending line.
CsvTable read_csv(const std::filesystem::path& path);

/// Reads a vector of numbers stored either as a JSON array or as plain text
/// separated by whitespace or commas.
synlik::Vector read_vector(const std::filesystem::path& path);

}  // namespace sl
