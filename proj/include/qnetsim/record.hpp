#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace qnetsim {

using Cell = std::variant<std::string, double, std::int64_t>;

// One scenario's output table.
struct RunRecord {
  std::string scenario;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::size_t samples = 0;
  double wall_seconds = 0.0;
};

// Header plus rows, LF endings, shortest round-trip floats. Strings holding
// a comma, quote or newline are quoted.
std::string to_csv(const RunRecord& record);

// Several records sharing one column set, header written once. Throws
// InvalidArgument on mismatched columns or an empty list.
std::string to_csv(std::span<const RunRecord> records);

// Writes to a sibling temp file, then renames over `path`. Throws IoError.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace qnetsim
