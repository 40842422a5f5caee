// Copyright (c) 2026 koopcert developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace koopcert {

/// Formats a double with 17 significant digits (lossless text round trip).
std::string format_full(double v);

/// Formats with at least 15 significant digits, for trajectory CSVs.
std::string format_csv(double v);

double parse_double(const std::string& s);
long parse_long(const std::string& s);

/// Ordered key=value manifest. Lines starting with '#' are comments.
/// Insertion order is preserved so that serialization is byte-stable.
class Manifest {
 public:
  void set(const std::string& key, const std::string& value);
  void set(const std::string& key, double value);
  void set(const std::string& key, long value);
  void set(const std::string& key, bool value);

  bool has(const std::string& key) const;
  const std::string& get(const std::string& key) const;
  double get_double(const std::string& key) const;
  long get_long(const std::string& key) const;
  bool get_bool(const std::string& key) const;

  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

  std::string serialize() const;
  static Manifest parse(const std::string& text);

  void save(const std::filesystem::path& path) const;
  static Manifest load(const std::filesystem::path& path);

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
  std::map<std::string, std::size_t> index_;
};

/// Writes a matrix as row-major decimal text, one row per line, 17
/// significant digits per entry.
std::string matrix_to_text(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_text(const std::string& text, int rows, int cols);

void write_text_file(const std::filesystem::path& path, const std::string& content);
std::string read_text_file(const std::filesystem::path& path);

/// Minimal CSV support: numeric tables with one string header row.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::string serialize() const;
  static CsvTable parse(const std::string& text);
  void save(const std::filesystem::path& path) const;
  static CsvTable load(const std::filesystem::path& path);
};

std::vector<std::string> split(const std::string& s, char sep);

}  // namespace koopcert
