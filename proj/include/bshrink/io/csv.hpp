#pragma once

#include <charconv>
#include <cstddef>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "bshrink/errors.hpp"
#include "bshrink/sim_models/sampling.hpp"

namespace bshrink {

/// Shortest decimal text that parses back to exactly v.
[[nodiscard]] inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

[[nodiscard]] inline double parse_double(std::string_view s, std::size_t line = 0) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ValidationError("CSV line " + std::to_string(line) + ": cannot parse number '" + std::string(s) + "'");
  }
  return v;
}

[[nodiscard]] inline std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      out.push_back(line.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

/// Header `x,z1,...,zD,y`, one row per observation.
inline void write_dataset_csv(std::ostream& os, const SampledDataset& data) {
  os << "x";
  for (std::size_t t = 1; t <= data.aux_dim; ++t) os << ",z" << t;
  os << ",y\n";
  for (std::size_t i = 0; i < data.size(); ++i) {
    os << format_double(data.x[i]);
    for (std::size_t t = 0; t < data.aux_dim; ++t) os << ',' << format_double(data.z[i * data.aux_dim + t]);
    os << ',' << format_double(data.y[i]) << '\n';
  }
}

[[nodiscard]] inline SampledDataset read_dataset_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ValidationError("dataset CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_csv_line(line);
  if (header.size() < 3 || header.front() != "x" || header.back() != "y") {
    throw ValidationError("dataset CSV header must be x,z1..zD,y");
  }
  SampledDataset data;
  data.aux_dim = header.size() - 2;
  for (std::size_t t = 1; t <= data.aux_dim; ++t) {
    if (header[t] != "z" + std::to_string(t)) throw ValidationError("dataset CSV header must be x,z1..zD,y");
  }
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      throw ValidationError("CSV line " + std::to_string(lineno) + ": expected " + std::to_string(header.size()) +
                            " fields");
    }
    data.x.push_back(parse_double(cells[0], lineno));
    for (std::size_t t = 0; t < data.aux_dim; ++t) data.z.push_back(parse_double(cells[t + 1], lineno));
    data.y.push_back(parse_double(cells.back(), lineno));
  }
  data.validate();
  return data;
}

inline void write_dataset_csv(const std::string& path, const SampledDataset& data) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_dataset_csv(os, data);
  if (!os) throw std::runtime_error("write to '" + path + "' failed");
}

[[nodiscard]] inline SampledDataset read_dataset_csv(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open '" + path + "' for reading");
  return read_dataset_csv(is);
}

}  // namespace bshrink
