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

#ifndef CVGAN_METRICS_H_
#define CVGAN_METRICS_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cvgan/data.h"

namespace cvgan {

class MetricError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// K x K counts; entry (i, j) is the number of samples of true class i+1
// predicted as class j+1.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(std::size_t classes);

  // Labels and predictions in 1..classes; throws std::out_of_range otherwise.
  static ConfusionMatrix FromPredictions(std::span<const int> predictions,
                                         std::span<const int> labels,
                                         std::size_t classes);
  static ConfusionMatrix FromCounts(
      const std::vector<std::vector<std::uint64_t>>& rows);

  void Add(int label, int prediction);

  std::size_t classes() const { return classes_; }
  std::uint64_t at(std::size_t truth, std::size_t predicted) const {
    return counts_[truth * classes_ + predicted];
  }
  std::uint64_t total() const;
  std::uint64_t RowSum(std::size_t truth) const;
  std::uint64_t ColumnSum(std::size_t predicted) const;

  friend bool operator==(const ConfusionMatrix&,
                         const ConfusionMatrix&) = default;

 private:
  std::size_t classes_;
  std::vector<std::uint64_t> counts_;
};

double OverallAccuracy(const ConfusionMatrix& cm);

struct AverageAccuracy {
  double value = 0.0;
  std::vector<double> recall;             // per class; NaN without support
  std::vector<int> excluded_classes;      // 1-based, zero support
};

AverageAccuracy ComputeAverageAccuracy(const ConfusionMatrix& cm);

// Throws MetricError when the total is zero or the expected agreement is 1.
double Kappa(const ConfusionMatrix& cm);

void WriteConfusionCsv(std::ostream& out, const ConfusionMatrix& cm);

// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b| on raw values.
double KsStatistic(std::span<const double> a, std::span<const double> b);

struct HistogramReport {
  std::string channel;  // e.g. "T11"
  std::string plane;    // "re" or "im"
  std::vector<double> edges;  // bins + 1, strictly increasing
  std::vector<std::uint64_t> actual, generated;
  double ks = 0.0;
};

// Shared equal-width bins over the pooled range; the last bin is closed.
HistogramReport CompareHistograms(std::span<const double> actual,
                                  std::span<const double> generated,
                                  std::size_t bins, std::string channel,
                                  std::string plane);

// channel,plane,bin_left,bin_right,count_actual,count_generated rows, each
// report followed by a "# ks=<value>" line.
void WriteHistogramCsv(std::ostream& out,
                       std::span<const HistogramReport> reports);

// Per-pixel values of one coherency entry: channel in 0..5 (T11, T22, T33,
// T12, T13, T23), imaginary plane when imag is set.
std::vector<double> ChannelValues(const CoherencyRaster& raster,
                                  std::size_t channel, bool imag);

struct RgbImage {
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<std::uint8_t> rgb;  // row-major, 3 bytes per pixel
};

// Linear-interpolated percentile of values, q in [0, 100].
double Percentile(std::vector<double> values, double q);

// (Re T11, Re T22, Re T33) -> (R, G, B), each clipped to its 2nd-98th
// percentile and scaled to 0..255. A channel with equal percentiles maps to
// 128.
RgbImage Pcolor(const CoherencyRaster& raster);

void WritePpm(const RgbImage& image, const std::filesystem::path& path);

}  // namespace cvgan

#endif  // CVGAN_METRICS_H_
