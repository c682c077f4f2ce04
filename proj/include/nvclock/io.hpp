// Copyright 2026 The nvclock Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Output plumbing: a fixed CSV dialect (comma, '.', header row, LF) with
// shortest round-trip number formatting, atomic file replacement, and the
// run manifest.

#include <charconv>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "json.hpp"
#include "nvclock/errors.hpp"

namespace nvclock {

/// Shortest representation that parses back to the same double. Locale
/// independent.
inline std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  void add_row(const std::vector<double>& values) {
    std::vector<std::string> row;
    row.reserve(values.size());
    for (double v : values) row.push_back(format_number(v));
    add_row(std::move(row));
  }

  void add_row(std::vector<std::string> cells) {
    if (cells.size() != header_.size()) throw Error("CSV row width does not match the header");
    rows_.push_back(std::move(cells));
  }

  [[nodiscard]] std::string str() const {
    std::string out;
    auto line = [&out](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += cells[i];
      }
      out += '\n';
    };
    line(header_);
    for (const auto& r : rows_) line(r);
    return out;
  }

  [[nodiscard]] std::size_t rows() const { return rows_.size(); }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Writes to a sibling temporary file and renames it over `path`, so readers
/// never observe a partial file.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  if (ec) throw Error("cannot create directory '" + path.parent_path().string() + "': " + ec.message());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open '" + tmp.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      out.close();
      fs::remove(tmp, ec);
      throw Error("failed writing '" + tmp.string() + "'");
    }
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error("cannot move '" + tmp.string() + "' into place");
  }
}

/// Parses a two-or-more-column numeric CSV with a header row.
struct CsvData {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;
};

inline CsvData read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  CsvData data;
  std::string line;
  auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream is(s);
    while (std::getline(is, cell, ',')) {
      while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
      while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
      cells.push_back(cell);
    }
    return cells;
  };
  if (!std::getline(in, line)) throw ConfigError("'" + path + "' is empty");
  data.header = split(line);
  data.columns.assign(data.header.size(), {});
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto cells = split(line);
    if (cells.size() != data.header.size()) {
      throw ConfigError("'" + path + "' line " + std::to_string(lineno) + ": wrong number of columns");
    }
    for (std::size_t i = 0; i < cells.size(); ++i) {
      double v = 0.0;
      const char* b = cells[i].data();
      const char* e = b + cells[i].size();
      const auto res = std::from_chars(b, e, v);
      if (res.ec != std::errc() || res.ptr != e) {
        throw ConfigError("'" + path + "' line " + std::to_string(lineno) + ": not a number: '" + cells[i] + "'");
      }
      data.columns[i].push_back(v);
    }
  }
  return data;
}

inline std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct RunManifest {
  std::string tool_version;
  std::string command;
  std::string config_hash;
  std::uint64_t seed = 0;
  std::string start_time;
  std::string end_time;
  std::vector<std::string> outputs;

  [[nodiscard]] nlohmann::json to_json() const {
    return {{"tool_version", tool_version}, {"command", command}, {"config_hash", config_hash},
            {"seed", seed},                 {"start_time", start_time}, {"end_time", end_time},
            {"outputs", outputs}};
  }
};

}  // namespace nvclock
