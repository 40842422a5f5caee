// Copyright (c) 2026 koopcert developers
// SPDX-License-Identifier: Apache-2.0

#include "koopcert/text_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "koopcert/errors.hpp"

namespace koopcert {

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string format_csv(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.16g", v);
  return buf;
}

double parse_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || (end != nullptr && *end != '\0')) {
    throw IoError("cannot parse '" + s + "' as a real number");
  }
  return v;
}

long parse_long(const std::string& s) {
  char* end = nullptr;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (end == s.c_str() || (end != nullptr && *end != '\0')) {
    throw IoError("cannot parse '" + s + "' as an integer");
  }
  return v;
}

void Manifest::set(const std::string& key, const std::string& value) {
  auto it = index_.find(key);
  if (it == index_.end()) {
    index_[key] = entries_.size();
    entries_.emplace_back(key, value);
  } else {
    entries_[it->second].second = value;
  }
}

void Manifest::set(const std::string& key, double value) { set(key, format_full(value)); }
void Manifest::set(const std::string& key, long value) { set(key, std::to_string(value)); }
void Manifest::set(const std::string& key, bool value) {
  set(key, std::string(value ? "true" : "false"));
}

bool Manifest::has(const std::string& key) const { return index_.count(key) > 0; }

const std::string& Manifest::get(const std::string& key) const {
  auto it = index_.find(key);
  if (it == index_.end()) throw IoError("manifest key not found: " + key);
  return entries_[it->second].second;
}

double Manifest::get_double(const std::string& key) const { return parse_double(get(key)); }
long Manifest::get_long(const std::string& key) const { return parse_long(get(key)); }

bool Manifest::get_bool(const std::string& key) const {
  const std::string& v = get(key);
  if (v == "true") return true;
  if (v == "false") return false;
  throw IoError("manifest key " + key + " is not a boolean: " + v);
}

std::string Manifest::serialize() const {
  std::string out;
  for (const auto& [k, v] : entries_) {
    out += k;
    out += '=';
    out += v;
    out += '\n';
  }
  return out;
}

Manifest Manifest::parse(const std::string& text) {
  Manifest m;
  std::istringstream in(text);
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw IoError("manifest line " + std::to_string(lineno) + " has no '=': " + line);
    }
    m.set(line.substr(0, eq), line.substr(eq + 1));
  }
  return m;
}

void Manifest::save(const std::filesystem::path& path) const {
  write_text_file(path, serialize());
}

Manifest Manifest::load(const std::filesystem::path& path) {
  return parse(read_text_file(path));
}

std::string matrix_to_text(const Eigen::MatrixXd& m) {
  std::string out;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out += ' ';
      out += format_full(m(i, j));
    }
    out += '\n';
  }
  return out;
}

Eigen::MatrixXd matrix_from_text(const std::string& text, int rows, int cols) {
  Eigen::MatrixXd m(rows, cols);
  std::istringstream in(text);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      std::string tok;
      if (!(in >> tok)) throw IoError("matrix text ended early");
      m(i, j) = parse_double(tok);
    }
  }
  return m;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << content;
  if (!out) throw IoError("write failed: " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string CsvTable::serialize() const {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i > 0) out += ',';
    out += header[i];
  }
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out += ',';
      out += format_csv(row[i]);
    }
    out += '\n';
  }
  return out;
}

CsvTable CsvTable::parse(const std::string& text) {
  CsvTable t;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (first) {
      t.header = split(line, ',');
      first = false;
      continue;
    }
    const auto toks = split(line, ',');
    std::vector<double> row;
    row.reserve(toks.size());
    for (const auto& tok : toks) row.push_back(parse_double(tok));
    if (row.size() != t.header.size()) {
      throw IoError("csv row width " + std::to_string(row.size()) +
                    " does not match header width " + std::to_string(t.header.size()));
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

void CsvTable::save(const std::filesystem::path& path) const {
  write_text_file(path, serialize());
}

CsvTable CsvTable::load(const std::filesystem::path& path) {
  return parse(read_text_file(path));
}

}  // namespace koopcert
