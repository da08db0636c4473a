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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace cvgan {

ConfusionMatrix::ConfusionMatrix(std::size_t classes)
    : classes_(classes), counts_(classes * classes, 0) {
  if (classes == 0) {
    throw std::invalid_argument("confusion matrix needs at least one class");
  }
}

ConfusionMatrix ConfusionMatrix::FromPredictions(
    std::span<const int> predictions, std::span<const int> labels,
    std::size_t classes) {
  if (predictions.size() != labels.size()) {
    throw std::invalid_argument(
        "got " + std::to_string(predictions.size()) + " predictions for " +
        std::to_string(labels.size()) + " labels");
  }
  ConfusionMatrix cm(classes);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    cm.Add(labels[i], predictions[i]);
  }
  return cm;
}

ConfusionMatrix ConfusionMatrix::FromCounts(
    const std::vector<std::vector<std::uint64_t>>& rows) {
  ConfusionMatrix cm(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.size()) {
      throw std::invalid_argument("confusion counts are not square");
    }
    std::copy(rows[i].begin(), rows[i].end(),
              cm.counts_.begin() + i * rows.size());
  }
  return cm;
}

void ConfusionMatrix::Add(int label, int prediction) {
  const auto k = static_cast<int>(classes_);
  for (int v : {label, prediction}) {
    if (v < 1 || v > k) {
      throw std::out_of_range("class " + std::to_string(v) + " outside 1.." +
                              std::to_string(k));
    }
  }
  ++counts_[(label - 1) * classes_ + (prediction - 1)];
}

std::uint64_t ConfusionMatrix::total() const {
  std::uint64_t s = 0;
  for (auto c : counts_) s += c;
  return s;
}

std::uint64_t ConfusionMatrix::RowSum(std::size_t truth) const {
  std::uint64_t s = 0;
  for (std::size_t j = 0; j < classes_; ++j) s += at(truth, j);
  return s;
}

std::uint64_t ConfusionMatrix::ColumnSum(std::size_t predicted) const {
  std::uint64_t s = 0;
  for (std::size_t i = 0; i < classes_; ++i) s += at(i, predicted);
  return s;
}

namespace {

double Total(const ConfusionMatrix& cm) {
  const std::uint64_t n = cm.total();
  if (n == 0) throw MetricError("confusion matrix is empty");
  return static_cast<double>(n);
}

}  // namespace

double OverallAccuracy(const ConfusionMatrix& cm) {
  const double n = Total(cm);
  std::uint64_t trace = 0;
  for (std::size_t i = 0; i < cm.classes(); ++i) trace += cm.at(i, i);
  return static_cast<double>(trace) / n;
}

AverageAccuracy ComputeAverageAccuracy(const ConfusionMatrix& cm) {
  Total(cm);
  AverageAccuracy aa;
  double sum = 0.0;
  std::size_t supported = 0;
  for (std::size_t i = 0; i < cm.classes(); ++i) {
    const std::uint64_t support = cm.RowSum(i);
    if (support == 0) {
      aa.recall.push_back(std::numeric_limits<double>::quiet_NaN());
      aa.excluded_classes.push_back(static_cast<int>(i + 1));
      continue;
    }
    const double r =
        static_cast<double>(cm.at(i, i)) / static_cast<double>(support);
    aa.recall.push_back(r);
    sum += r;
    ++supported;
  }
  aa.value = sum / static_cast<double>(supported);
  return aa;
}

double Kappa(const ConfusionMatrix& cm) {
  const double n = Total(cm);
  double expected = 0.0;
  for (std::size_t i = 0; i < cm.classes(); ++i) {
    expected += static_cast<double>(cm.RowSum(i)) *
                static_cast<double>(cm.ColumnSum(i));
  }
  expected /= n * n;
  if (expected == 1.0) {
    throw MetricError("kappa is undefined: expected agreement is 1");
  }
  return (OverallAccuracy(cm) - expected) / (1.0 - expected);
}

void WriteConfusionCsv(std::ostream& out, const ConfusionMatrix& cm) {
  out << "truth\\predicted";
  for (std::size_t j = 0; j < cm.classes(); ++j) out << ',' << j + 1;
  out << '\n';
  for (std::size_t i = 0; i < cm.classes(); ++i) {
    out << i + 1;
    for (std::size_t j = 0; j < cm.classes(); ++j) out << ',' << cm.at(i, j);
    out << '\n';
  }
}

double KsStatistic(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) {
    throw std::invalid_argument("KS statistic needs two non-empty samples");
  }
  std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double nx = static_cast<double>(x.size());
  const double ny = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / nx -
                             static_cast<double>(j) / ny));
  }
  return d;
}

HistogramReport CompareHistograms(std::span<const double> actual,
                                  std::span<const double> generated,
                                  std::size_t bins, std::string channel,
                                  std::string plane) {
  if (actual.empty() || generated.empty()) {
    throw std::invalid_argument("histogram comparison needs two non-empty "
                                "samples");
  }
  if (bins == 0) throw std::invalid_argument("histogram needs bins >= 1");
  HistogramReport r;
  r.channel = std::move(channel);
  r.plane = std::move(plane);
  auto [amin, amax] = std::minmax_element(actual.begin(), actual.end());
  auto [gmin, gmax] = std::minmax_element(generated.begin(), generated.end());
  double lo = std::min(*amin, *gmin);
  double hi = std::max(*amax, *gmax);
  if (lo == hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double step = (hi - lo) / static_cast<double>(bins);
  for (std::size_t i = 0; i <= bins; ++i) {
    r.edges.push_back(i == bins ? hi : lo + step * static_cast<double>(i));
  }
  auto count = [&](std::span<const double> values) {
    std::vector<std::uint64_t> c(bins, 0);
    for (double v : values) {
      auto b = static_cast<std::size_t>((v - lo) / step);
      ++c[std::min(b, bins - 1)];
    }
    return c;
  };
  r.actual = count(actual);
  r.generated = count(generated);
  r.ks = KsStatistic(actual, generated);
  return r;
}

void WriteHistogramCsv(std::ostream& out,
                       std::span<const HistogramReport> reports) {
  out << "channel,plane,bin_left,bin_right,count_actual,count_generated\n";
  std::ostringstream num;
  num.precision(17);
  for (const auto& r : reports) {
    for (std::size_t i = 0; i + 1 < r.edges.size(); ++i) {
      out << r.channel << ',' << r.plane << ',';
      num.str("");
      num << r.edges[i] << ',' << r.edges[i + 1];
      out << num.str() << ',' << r.actual[i] << ',' << r.generated[i] << '\n';
    }
    num.str("");
    num << r.ks;
    out << "# ks=" << num.str() << '\n';
  }
}

std::vector<double> ChannelValues(const CoherencyRaster& raster,
                                  std::size_t channel, bool imag) {
  if (channel >= kPatchChannels) {
    throw std::out_of_range("channel " + std::to_string(channel) +
                            " outside 0.." +
                            std::to_string(kPatchChannels - 1));
  }
  std::vector<double> out;
  out.reserve(raster.pixels.size());
  for (const CoherencyPixel& t : raster.pixels) {
    Complex z;
    switch (channel) {
      case 0: z = {t.t11, 0.0}; break;
      case 1: z = {t.t22, 0.0}; break;
      case 2: z = {t.t33, 0.0}; break;
      case 3: z = t.t12; break;
      case 4: z = t.t13; break;
      default: z = t.t23; break;
    }
    out.push_back(imag ? z.im : z.re);
  }
  return out;
}

double Percentile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("percentile of no values");
  std::sort(values.begin(), values.end());
  const double pos = q / 100.0 * static_cast<double>(values.size() - 1);
  const auto below = static_cast<std::size_t>(std::floor(pos));
  const std::size_t above = std::min(below + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(below);
  return values[below] + frac * (values[above] - values[below]);
}

RgbImage Pcolor(const CoherencyRaster& raster) {
  if (raster.pixels.empty()) {
    throw std::invalid_argument("pcolor of an empty raster");
  }
  RgbImage img{raster.height, raster.width,
               std::vector<std::uint8_t>(raster.pixels.size() * 3)};
  for (std::size_t c = 0; c < 3; ++c) {
    const std::vector<double> v = ChannelValues(raster, c, false);
    const double lo = Percentile(v, 2.0);
    const double hi = Percentile(v, 98.0);
    for (std::size_t i = 0; i < v.size(); ++i) {
      double s = 128.0;
      if (hi > lo) s = std::clamp((v[i] - lo) / (hi - lo), 0.0, 1.0) * 255.0;
      img.rgb[3 * i + c] = static_cast<std::uint8_t>(std::lround(s));
    }
  }
  return img;
}

void WritePpm(const RgbImage& image, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  out << "P6\n" << image.width << ' ' << image.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(image.rgb.data()),
            static_cast<std::streamsize>(image.rgb.size()));
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace cvgan
