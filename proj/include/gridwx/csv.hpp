// Copyright (c) 2026 The gridwx Authors.
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

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gridwx {

// All interchange files are headered UTF-8 CSV. Fields never contain commas
// or quotes; leading '#' lines are metadata and preserved verbatim.

struct CsvFile {
  std::filesystem::path path;
  std::vector<std::string> meta;  // '#' lines without the newline
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

CsvFile read_csv(const std::filesystem::path& path);

/// Throws SchemaError unless the header matches `expected` exactly.
void require_columns(const CsvFile& csv, std::span<const char* const> expected);

/// Allocation-light row access for large files: the whole file is held once
/// and rows are exposed as string_views into it.
class CsvReader {
 public:
  explicit CsvReader(const std::filesystem::path& path);

  const std::filesystem::path& path() const { return path_; }
  const std::vector<std::string>& meta() const { return meta_; }
  const std::vector<std::string>& header() const { return header_; }
  void require(std::span<const char* const> expected) const;

  /// Calls fn(fields, row_index) per data row; fields has header arity.
  template <typename Fn>
  void for_each_row(Fn&& fn) {
    std::vector<std::string_view> fields;
    std::size_t row_index = 0;
    std::size_t pos = body_start_;
    while (pos < text_.size()) {
      std::size_t eol = text_.find('\n', pos);
      if (eol == std::string::npos) eol = text_.size();
      std::string_view line(text_.data() + pos, eol - pos);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      pos = eol + 1;
      if (line.empty()) continue;
      fields.clear();
      std::size_t start = 0;
      while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
          fields.push_back(line.substr(start));
          break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
      }
      if (fields.size() != header_.size()) {
        throw_field_count(row_index);
      }
      fn(std::span<const std::string_view>(fields), row_index);
      ++row_index;
    }
  }

  std::string row_context(std::size_t row_index) const;

 private:
  [[noreturn]] void throw_field_count(std::size_t row_index) const;
  std::filesystem::path path_;
  std::string text_;
  std::vector<std::string> meta_;
  std::vector<std::string> header_;
  std::size_t body_start_ = 0;
};

double parse_double_field(std::string_view text, const std::string& context);
long long parse_int_field(std::string_view text, const std::string& context);

/// Canonical float formatting for every file this toolkit writes: shortest
/// form at 9 significant digits, so load-then-serialize is byte-stable.
std::string format_double(double v);
std::string format_int(long long v);

class CsvWriter {
 public:
  explicit CsvWriter(const std::filesystem::path& path);
  ~CsvWriter();
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  void meta(std::string_view line);  // writes "#<line>\n"
  void row(std::span<const std::string> fields);
  void row(std::initializer_list<std::string> fields);
  void close();

 private:
  void append(std::string_view text);
  std::ofstream out_;
  std::string buffer_;
};

/// FNV-1a 64-bit content hash, hex encoded; the manifest records the
/// algorithm name alongside each digest.
std::string fnv1a64_hex(std::string_view bytes);
std::string fnv1a64_hex_file(const std::filesystem::path& path);
inline constexpr const char* kHashAlgorithm = "fnv1a64";

std::string read_text_file(const std::filesystem::path& path);

}  // namespace gridwx
