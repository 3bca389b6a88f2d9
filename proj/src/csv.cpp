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

#include "gridwx/csv.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>

#include "gridwx/errors.hpp"

namespace gridwx {

namespace {

std::vector<std::string> split_fields(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.emplace_back(line.substr(start));
      break;
    }
    out.emplace_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return out;
}

}  // namespace

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) throw SchemaError("cannot open file: " + path.string());
  const std::streamsize size = in.tellg();
  in.seekg(0);
  std::string text(static_cast<std::size_t>(size), '\0');
  in.read(text.data(), size);
  return text;
}

CsvFile read_csv(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  CsvFile csv;
  csv.path = path;
  std::size_t pos = 0;
  bool header_seen = false;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) eol = text.size();
    std::string_view line(text.data() + pos, eol - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos = eol + 1;
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (header_seen) {
        throw SchemaError(path.string() + ": metadata line after header");
      }
      csv.meta.emplace_back(line.substr(1));
      continue;
    }
    if (!header_seen) {
      csv.header = split_fields(line);
      header_seen = true;
      continue;
    }
    csv.rows.push_back(split_fields(line));
  }
  if (!header_seen) throw SchemaError(path.string() + ": missing header row");
  return csv;
}

void require_columns(const CsvFile& csv, std::span<const char* const> expected) {
  bool ok = csv.header.size() == expected.size();
  if (ok) {
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (csv.header[i] != expected[i]) {
        ok = false;
        break;
      }
    }
  }
  if (!ok) {
    std::string want;
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) want += ',';
      want += expected[i];
    }
    std::string got;
    for (std::size_t i = 0; i < csv.header.size(); ++i) {
      if (i) got += ',';
      got += csv.header[i];
    }
    throw SchemaError(csv.path.string() + ": header mismatch, expected [" +
                      want + "] got [" + got + "]");
  }
}

CsvReader::CsvReader(const std::filesystem::path& path)
    : path_(path), text_(read_text_file(path)) {
  std::size_t pos = 0;
  bool header_seen = false;
  while (pos < text_.size() && !header_seen) {
    std::size_t eol = text_.find('\n', pos);
    if (eol == std::string::npos) eol = text_.size();
    std::string_view line(text_.data() + pos, eol - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos = eol + 1;
    if (line.empty()) continue;
    if (line.front() == '#') {
      meta_.emplace_back(line.substr(1));
      continue;
    }
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      if (comma == std::string_view::npos) {
        header_.emplace_back(line.substr(start));
        break;
      }
      header_.emplace_back(line.substr(start, comma - start));
      start = comma + 1;
    }
    header_seen = true;
  }
  if (!header_seen) throw SchemaError(path_.string() + ": missing header row");
  body_start_ = pos;
}

void CsvReader::require(std::span<const char* const> expected) const {
  bool ok = header_.size() == expected.size();
  if (ok) {
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (header_[i] != expected[i]) {
        ok = false;
        break;
      }
    }
  }
  if (!ok) {
    std::string want;
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) want += ',';
      want += expected[i];
    }
    throw SchemaError(path_.string() + ": header mismatch, expected [" + want +
                      "]");
  }
}

std::string CsvReader::row_context(std::size_t row_index) const {
  return path_.string() + " row " + std::to_string(row_index + 2);
}

void CsvReader::throw_field_count(std::size_t row_index) const {
  throw SchemaError(row_context(row_index) + ": wrong field count");
}

double parse_double_field(std::string_view text, const std::string& context) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw SchemaError(context + ": cannot parse number '" + std::string(text) + "'");
  }
  return value;
}

long long parse_int_field(std::string_view text, const std::string& context) {
  long long value = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw SchemaError(context + ": cannot parse integer '" + std::string(text) + "'");
  }
  return value;
}

std::string format_double(double v) {
  // Same text as printf "%.9g", via the locale-free fast path.
  char buf[40];
  const auto res =
      std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 9);
  return std::string(buf, res.ptr);
}

std::string format_int(long long v) {
  char buf[24];
  const int n = std::snprintf(buf, sizeof(buf), "%lld", v);
  return std::string(buf, static_cast<std::size_t>(n));
}

CsvWriter::CsvWriter(const std::filesystem::path& path)
    : out_(path, std::ios::binary) {
  if (!out_) throw SchemaError("cannot open file for writing: " + path.string());
  buffer_.reserve(1 << 20);
}

CsvWriter::~CsvWriter() { close(); }

void CsvWriter::append(std::string_view text) {
  buffer_.append(text);
  if (buffer_.size() >= (1 << 20)) {
    out_.write(buffer_.data(), static_cast<std::streamsize>(buffer_.size()));
    buffer_.clear();
  }
}

void CsvWriter::meta(std::string_view line) {
  append("#");
  append(line);
  append("\n");
}

void CsvWriter::row(std::span<const std::string> fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) append(",");
    append(fields[i]);
  }
  append("\n");
}

void CsvWriter::row(std::initializer_list<std::string> fields) {
  row(std::span<const std::string>(fields.begin(), fields.size()));
}

void CsvWriter::close() {
  if (out_.is_open()) {
    if (!buffer_.empty()) {
      out_.write(buffer_.data(), static_cast<std::streamsize>(buffer_.size()));
      buffer_.clear();
    }
    out_.close();
  }
}

std::string fnv1a64_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf, 16);
}

std::string fnv1a64_hex_file(const std::filesystem::path& path) {
  return fnv1a64_hex(read_text_file(path));
}

}  // namespace gridwx
