// Copyright 2026 The cvgan Authors.
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

#include "cvgan/metrics.h"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

namespace cvgan {
namespace {

TEST(ConfusionMatrixTest, Counts) {
  const std::vector<int> labels = {1, 1, 2, 2}, preds = {1, 2, 2, 2};
  EXPECT_EQ(ConfusionMatrix::FromPredictions(preds, labels, 2),
            ConfusionMatrix::FromCounts({{1, 1}, {0, 2}}));
  EXPECT_EQ(ConfusionMatrix::FromPredictions(labels, labels, 2),
            ConfusionMatrix::FromCounts({{2, 0}, {0, 2}}));
  EXPECT_EQ(ConfusionMatrix::FromPredictions({}, {}, 3).total(), 0u);
  const std::vector<int> bad = {1, 4};
  EXPECT_THROW(ConfusionMatrix::FromPredictions(bad, std::span(labels).first(2), 3),
               std::out_of_range);
}

TEST(MetricsTest, HandComputedExample) {
  const auto cm = ConfusionMatrix::FromCounts({{45, 5}, {10, 40}});
  EXPECT_DOUBLE_EQ(OverallAccuracy(cm), 0.85);
  EXPECT_DOUBLE_EQ(ComputeAverageAccuracy(cm).value, 0.85);
  EXPECT_NEAR(Kappa(cm), 0.70, 1e-15);
}

TEST(MetricsTest, PerfectDiagonal) {
  const auto cm = ConfusionMatrix::FromCounts({{3, 0, 0}, {0, 7, 0}, {0, 0, 1}});
  EXPECT_EQ(OverallAccuracy(cm), 1.0);
  EXPECT_EQ(ComputeAverageAccuracy(cm).value, 1.0);
  EXPECT_EQ(Kappa(cm), 1.0);
  EXPECT_LT(Kappa(ConfusionMatrix::FromCounts({{3, 1, 0}, {0, 7, 0},
                                               {0, 0, 1}})),
            1.0);
}

TEST(MetricsTest, ZeroSupportClassExcluded) {
  const auto aa =
      ComputeAverageAccuracy(ConfusionMatrix::FromCounts({{4, 0, 0},
                                                          {0, 0, 0},
                                                          {1, 0, 1}}));
  EXPECT_DOUBLE_EQ(aa.value, 0.75);
  EXPECT_EQ(aa.excluded_classes, std::vector<int>{2});
  EXPECT_TRUE(std::isnan(aa.recall[1]));
}

TEST(MetricsTest, DegenerateInputs) {
  EXPECT_THROW(OverallAccuracy(ConfusionMatrix(2)), MetricError);
  EXPECT_THROW(Kappa(ConfusionMatrix(2)), MetricError);
  EXPECT_THROW(Kappa(ConfusionMatrix::FromCounts({{5, 0}, {0, 0}})),
               MetricError);
}

TEST(MetricsTest, KappaInvariantUnderPermutation) {
  const std::vector<std::vector<std::uint64_t>> rows = {
      {20, 3, 1}, {4, 15, 6}, {2, 2, 30}};
  const std::vector<std::size_t> perm = {2, 0, 1};
  std::vector<std::vector<std::uint64_t>> permuted(3, std::vector<std::uint64_t>(3));
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) permuted[i][j] = rows[perm[i]][perm[j]];
  EXPECT_NEAR(Kappa(ConfusionMatrix::FromCounts(rows)),
              Kappa(ConfusionMatrix::FromCounts(permuted)), 1e-15);
}

TEST(MetricsTest, IndependentPredictionsHaveZeroKappa) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> cls(1, 4);
  ConfusionMatrix cm(4);
  for (int i = 0; i < 200000; ++i) cm.Add(cls(rng), cls(rng));
  EXPECT_NEAR(Kappa(cm), 0.0, 0.05);
}

TEST(MetricsTest, ConfusionCsv) {
  std::ostringstream out;
  WriteConfusionCsv(out, ConfusionMatrix::FromCounts({{1, 2}, {3, 4}}));
  EXPECT_EQ(out.str(), "truth\\predicted,1,2\n1,1,2\n2,3,4\n");
}

TEST(KsTest, Properties) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<double> a(1000), b(1000), far(1000);
  for (auto& v : a) v = n(rng);
  for (auto& v : b) v = n(rng);
  for (auto& v : far) v = n(rng) + 10.0;
  EXPECT_EQ(KsStatistic(a, a), 0.0);
  EXPECT_GT(KsStatistic(a, far), 0.9);
  const double d = KsStatistic(a, b);
  EXPECT_GE(d, 0.0);
  EXPECT_LE(d, 1.0);
  EXPECT_EQ(KsStatistic(b, a), d);
  std::vector<double> ea, eb;
  for (double v : a) ea.push_back(std::exp(3.0 * v));
  for (double v : b) eb.push_back(std::exp(3.0 * v));
  EXPECT_EQ(KsStatistic(ea, eb), d);
  EXPECT_EQ(KsStatistic(std::vector<double>{1.0, 2.0},
                        std::vector<double>{3.0, 4.0}),
            1.0);
  EXPECT_THROW(KsStatistic(a, {}), std::invalid_argument);
}

TEST(HistogramTest, CountsAndEdges) {
  const std::vector<double> a = {0.0, 1.0, 2.0, 3.0, 4.0};
  const std::vector<double> g = {4.0, 4.0};
  const HistogramReport r = CompareHistograms(a, g, 4, "T11", "re");
  ASSERT_EQ(r.edges.size(), 5u);
  for (std::size_t i = 0; i + 1 < r.edges.size(); ++i)
    EXPECT_LT(r.edges[i], r.edges[i + 1]);
  EXPECT_EQ(r.actual, (std::vector<std::uint64_t>{1, 1, 1, 2}));
  EXPECT_EQ(r.generated, (std::vector<std::uint64_t>{0, 0, 0, 2}));
  const HistogramReport same = CompareHistograms(g, g, 3, "T12", "im");
  EXPECT_EQ(same.ks, 0.0);
  EXPECT_EQ(same.actual[0] + same.actual[1] + same.actual[2], 2u);

  std::ostringstream csv;
  const std::vector<HistogramReport> reports = {r, same};
  WriteHistogramCsv(csv, reports);
  const std::string s = csv.str();
  EXPECT_EQ(s.rfind("channel,plane,bin_left,bin_right,count_actual,"
                    "count_generated\n", 0),
            0u);
  EXPECT_NE(s.find("T11,re,0,1,1,0\n"), std::string::npos);
  EXPECT_NE(s.find("# ks=0\n"), std::string::npos);
}

TEST(PcolorTest, ConstantRasterIsGray) {
  CoherencyRaster r(3, 5);
  for (auto& t : r.pixels) t = {2.0, 3.0, 4.0, {}, {}, {}};
  const RgbImage img = Pcolor(r);
  EXPECT_EQ(img.height, 3u);
  EXPECT_EQ(img.width, 5u);
  for (auto v : img.rgb) EXPECT_EQ(v, 128);
}

TEST(PcolorTest, PercentileExtremesMapToFullRange) {
  CoherencyRaster r(1, 2);
  r.pixels[0] = {1.0, 1.0, 1.0, {}, {}, {}};
  r.pixels[1] = {5.0, 1.0, 1.0, {}, {}, {}};
  const RgbImage img = Pcolor(r);
  EXPECT_EQ(img.rgb[0], 0);
  EXPECT_EQ(img.rgb[3], 255);
  EXPECT_DOUBLE_EQ(Percentile({1.0, 5.0}, 2.0), 1.08);
}

TEST(PcolorTest, WritesBinaryPpm) {
  CoherencyRaster r(2, 3);
  for (std::size_t i = 0; i < 6; ++i)
    r.pixels[i] = {double(i), double(5 - i), 1.0, {}, {}, {}};
  const auto path = std::filesystem::temp_directory_path() /
                    ("cvgan_metrics_" + std::to_string(::getpid()) + ".ppm");
  WritePpm(Pcolor(r), path);
  std::ifstream in(path, std::ios::binary);
  const std::string bytes{std::istreambuf_iterator<char>(in), {}};
  const std::string header = "P6\n3 2\n255\n";
  ASSERT_EQ(bytes.size(), header.size() + 18);
  EXPECT_EQ(bytes.substr(0, header.size()), header);
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace cvgan
