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

#ifndef BOLTZDRIFT_CSV_HPP
#define BOLTZDRIFT_CSV_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "boltzdrift/energy.hpp"

namespace boltzdrift {

/// Shortest decimal string that parses back to exactly `v`.
std::string format_double(double v);

/// Points with a header row of column names. Default header x1,x2,...
void write_points_csv(const std::filesystem::path& path, ConstMatRef points,
                      std::vector<std::string> header = {});

/// Reads a numeric CSV whose first line is a header. Every data row must have
/// the header's column count. Throws InvalidInput naming the 1-based line
/// number of the first malformed row.
Mat read_points_csv(const std::filesystem::path& path);

}  // namespace boltzdrift

#endif  // BOLTZDRIFT_CSV_HPP
