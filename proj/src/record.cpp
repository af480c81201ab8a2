#include "qnetsim/record.hpp"

#include <atomic>
#include <fstream>
#include <system_error>
#include <unistd.h>

#include "qnetsim/drive_signal.hpp"
#include "qnetsim/error.hpp"

namespace qnetsim {

namespace {

void append_cell(std::string& out, const Cell& cell) {
  if (const auto* d = std::get_if<double>(&cell)) {
    out += format_double(*d);
  } else if (const auto* i = std::get_if<std::int64_t>(&cell)) {
    out += std::to_string(*i);
  } else {
    const std::string& s = std::get<std::string>(cell);
    if (s.find_first_of(",\"\n\r") == std::string::npos) {
      out += s;
      return;
    }
    out += '"';
    for (char c : s) {
      if (c == '"') out += '"';
      out += c;
    }
    out += '"';
  }
}

void append_row(std::string& out, std::span<const Cell> cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    append_cell(out, cells[i]);
  }
  out += '\n';
}

void append_header(std::string& out, const std::vector<std::string>& columns) {
  std::vector<Cell> cells(columns.begin(), columns.end());
  append_row(out, cells);
}

}  // namespace

std::string to_csv(const RunRecord& record) {
  return to_csv(std::span<const RunRecord>(&record, 1));
}

std::string to_csv(std::span<const RunRecord> records) {
  if (records.empty()) throw Error(ErrorCode::InvalidArgument, "no records to write");
  std::string out;
  append_header(out, records.front().columns);
  for (const RunRecord& r : records) {
    if (r.columns != records.front().columns)
      throw Error(ErrorCode::InvalidArgument,
                  "scenario '" + r.scenario + "' has a different column set");
    for (const auto& row : r.rows) {
      if (row.size() != r.columns.size())
        throw Error(ErrorCode::InvalidArgument, "row width differs from header in '" + r.scenario + "'");
      append_row(out, row);
    }
  }
  return out;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  static std::atomic<unsigned> counter{0};
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter++);
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorCode::IoError, "cannot open " + tmp.string() + " for writing");
    f.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    f.close();
    if (!f) {
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw Error(ErrorCode::IoError, "write to " + tmp.string() + " failed");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    std::filesystem::remove(tmp, ignored);
    throw Error(ErrorCode::IoError, "cannot rename onto " + path.string() + ": " + ec.message());
  }
}

}  // namespace qnetsim
