// Copyright 2026 The boltzdrift Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "boltzdrift/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <string_view>

#include "boltzdrift/errors.hpp"

namespace boltzdrift {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_points_csv(const std::filesystem::path& path, ConstMatRef points,
                      std::vector<std::string> header) {
  if (header.empty()) {
    for (Eigen::Index d = 0; d < points.cols(); ++d)
      header.push_back("x" + std::to_string(d + 1));
  }
  if (static_cast<Eigen::Index>(header.size()) != points.cols())
    throw InvalidInput("write_points_csv: header/column count mismatch");
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw InvalidInput("cannot open '" + path.string() + "' for writing");
  for (std::size_t c = 0; c < header.size(); ++c)
    out << (c ? "," : "") << header[c];
  out << '\n';
  std::string line;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    line.clear();
    for (Eigen::Index d = 0; d < points.cols(); ++d) {
      if (d) line += ',';
      line += format_double(points(i, d));
    }
    line += '\n';
    out << line;
  }
  if (!out) throw InvalidInput("write to '" + path.string() + "' failed");
}

Mat read_points_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line))
    throw InvalidInput(path.string() + ": missing header line");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto cols = static_cast<Eigen::Index>(
      std::count(line.begin(), line.end(), ',') + 1);

  std::vector<double> values;
  Eigen::Index rows = 0;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::string_view rest(line);
    Eigen::Index c = 0;
    while (true) {
      const std::size_t comma = rest.find(',');
      std::string_view field = rest.substr(0, comma);
      while (!field.empty() && field.front() == ' ') field.remove_prefix(1);
      while (!field.empty() && field.back() == ' ') field.remove_suffix(1);
      double v = 0.0;
      const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
      if (field.empty() || res.ec != std::errc() ||
          res.ptr != field.data() + field.size() || !std::isfinite(v))
        throw InvalidInput(path.string() + ":" + std::to_string(lineno) +
                           ": malformed number '" + std::string(field) + "'");
      values.push_back(v);
      ++c;
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (c != cols)
      throw InvalidInput(path.string() + ":" + std::to_string(lineno) +
                         ": expected " + std::to_string(cols) + " fields, got " +
                         std::to_string(c));
    ++rows;
  }
  Mat out(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index d = 0; d < cols; ++d)
      out(i, d) = values[static_cast<std::size_t>(i * cols + d)];
  return out;
}

}  // namespace boltzdrift
