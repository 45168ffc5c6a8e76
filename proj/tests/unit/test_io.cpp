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


#include <charconv>
#include <cstring>
#include <filesystem>
#include <map>
#include <fstream>
#include <random>
#include <regex>
#include <sstream>

#include <gtest/gtest.h>

#include "boltzdrift/csv.hpp"
#include "boltzdrift/errors.hpp"
#include "boltzdrift/rng.hpp"
#include "boltzdrift/svg_plot.hpp"

namespace fs = std::filesystem;

namespace boltzdrift {
namespace {

fs::path temp_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("boltzdrift_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::size_t circles_in_group(const std::string& svg, const std::string& cls) {
  const auto start = svg.find("<g class=\"" + cls + "\">");
  if (start == std::string::npos) return 0;
  const std::string body = svg.substr(start, svg.find("</g>", start) - start);
  std::size_t n = 0, pos = 0;
  while ((pos = body.find("<circle", pos)) != std::string::npos) ++n, ++pos;
  return n;
}

TEST(Csv, ShortestRoundTripFormat) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(1.0), "1");
  EXPECT_EQ(format_double(-2.5e-300), "-2.5e-300");
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::uint64_t> bits;
  for (int i = 0; i < 20000; ++i) {
    const std::uint64_t b = bits(rng);
    double v;
    std::memcpy(&v, &b, sizeof v);
    if (!std::isfinite(v)) continue;
    const std::string s = format_double(v);
    double back = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), back);
    ASSERT_EQ(res.ec, std::errc()) << s;
    EXPECT_EQ(back, v) << s;
  }
}

TEST(Csv, WriteReadRoundTripIsExact) {
  const fs::path dir = temp_dir("csv_roundtrip");
  Rng rng(1);
  const Mat m = normal_matrix(rng, 257, 2) * 1e3;
  write_points_csv(dir / "p.csv", m);
  EXPECT_EQ(slurp(dir / "p.csv").substr(0, 6), "x1,x2\n");
  EXPECT_EQ(read_points_csv(dir / "p.csv"), m);
}

TEST(Csv, EmptyBodyGivesZeroRows) {
  const fs::path dir = temp_dir("csv_empty");
  write_points_csv(dir / "e.csv", Mat(0, 2));
  EXPECT_EQ(slurp(dir / "e.csv"), "x1,x2\n");
  const Mat back = read_points_csv(dir / "e.csv");
  EXPECT_EQ(back.rows(), 0);
  EXPECT_EQ(back.cols(), 2);
}

TEST(Csv, MalformedRowReportsLineNumber) {
  const fs::path dir = temp_dir("csv_bad");
  write_file(dir / "bad.csv", "x1,x2\n1,2\n3,4\n5,abc\n");
  try {
    read_points_csv(dir / "bad.csv");
    FAIL() << "expected InvalidInput";
  } catch (const InvalidInput& e) {
    EXPECT_NE(std::string(e.what()).find(":4:"), std::string::npos) << e.what();
  }
  write_file(dir / "short.csv", "x1,x2\n1,2\n3\n");
  try {
    read_points_csv(dir / "short.csv");
    FAIL() << "expected InvalidInput";
  } catch (const InvalidInput& e) {
    EXPECT_NE(std::string(e.what()).find(":3:"), std::string::npos) << e.what();
  }
  write_file(dir / "nan.csv", "x1,x2\nnan,1\n");
  EXPECT_THROW(read_points_csv(dir / "nan.csv"), InvalidInput);
  write_file(dir / "none.csv", "");
  EXPECT_THROW(read_points_csv(dir / "none.csv"), InvalidInput);
}

TEST(Csv, ToleratesCrlfAndSpaces) {
  const fs::path dir = temp_dir("csv_crlf");
  write_file(dir / "w.csv", "x1,x2\r\n 1.5 , -2\r\n\r\n3,4\r\n");
  Mat expect(2, 2);
  expect << 1.5, -2, 3, 4;
  EXPECT_EQ(read_points_csv(dir / "w.csv"), expect);
}

TEST(Svg, ByteDeterministic) {
  GaussianMixture4 g;
  const Mat gen = g.sample_reference(3000, 1).points;
  const Mat ref = g.sample_reference(3000, 2).points;
  EXPECT_EQ(render_svg(g, gen, ref), render_svg(g, gen, ref));
}

TEST(Svg, StructureAndSubsampling) {
  GaussianMixture4 g;
  const Mat gen = g.sample_reference(5000, 1).points;
  const Mat ref = g.sample_reference(5000, 2).points;
  const std::string svg = render_svg(g, gen, ref);
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  EXPECT_NE(svg.find("id=\"heatmap\""), std::string::npos);
  EXPECT_NE(svg.find("id=\"legend\""), std::string::npos);
  EXPECT_NE(svg.find("id=\"axes\""), std::string::npos);
  EXPECT_LE(circles_in_group(svg, "gen"), 2000u);
  EXPECT_GT(circles_in_group(svg, "gen"), 1900u);
  EXPECT_LE(circles_in_group(svg, "ref"), 2000u);
}

TEST(Svg, EmptySamplesGiveHeatmapOnly) {
  DoubleWell dw;
  const std::string svg = render_svg(dw, Mat(0, 2), Mat(0, 2));
  EXPECT_NE(svg.find("id=\"heatmap\""), std::string::npos);
  EXPECT_EQ(circles_in_group(svg, "gen"), 0u);
  EXPECT_EQ(circles_in_group(svg, "ref"), 0u);
}

TEST(Svg, HeatmapCoversEveryCell) {
  Banana b;
  PlotOptions opts;
  opts.grid = 40;
  const std::string svg = render_svg(b, Mat(0, 2), Mat(0, 2), opts);
  // Widths of merged runs in each row sum to the plot edge.
  const std::regex rect("<rect x=\"([0-9.]+)\" y=\"([0-9.]+)\" width=\"([0-9.]+)\"");
  const auto hs = svg.find("id=\"heatmap\"");
  const auto he = svg.find("</g>", hs);
  const std::string body = svg.substr(hs, he - hs);
  std::map<std::string, double> row_width;
  for (auto it = std::sregex_iterator(body.begin(), body.end(), rect); it != std::sregex_iterator(); ++it)
    row_width[(*it)[2]] += std::stod((*it)[3]) - 0.05;
  EXPECT_EQ(row_width.size(), 40u);
  for (const auto& [y, w] : row_width) EXPECT_NEAR(w, opts.size_px, 0.5) << y;
}

TEST(Svg, RejectsBadInput) {
  GaussianMixture4 g;
  EXPECT_THROW(render_svg(g, Mat::Zero(3, 3), Mat(0, 2)), InvalidInput);
  PlotOptions o;
  o.grid = 1;
  EXPECT_THROW(render_svg(g, Mat(0, 2), Mat(0, 2), o), InvalidInput);
}

}  // namespace
}  // namespace boltzdrift
