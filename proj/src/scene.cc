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

#include <algorithm>
#include <cmath>
#include <string>

#include "cvgan/data.h"

namespace cvgan {
namespace {

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct ClassEntry {
  double d1, d2, d3;
  double rho12, phi12, rho13, phi13, rho23, phi23;
};

constexpr ClassEntry kBuiltin[kMaxBuiltinClasses] = {
    {1.00, 0.25, 0.50, 0.30, 0.6, 0.10, -1.1, 0.20, 2.0},
    {0.30, 1.20, 0.40, 0.20, -1.2, 0.15, 0.4, 0.25, -0.5},
    {0.50, 0.40, 1.60, 0.10, 2.4, 0.30, -2.0, 0.15, 1.3},
    {1.50, 1.00, 0.30, 0.35, -0.3, 0.05, 1.7, 0.10, -2.6},
    {0.20, 0.60, 0.90, 0.25, 1.6, 0.20, -0.8, 0.30, 0.2},
    {2.00, 0.50, 1.20, 0.15, -2.2, 0.25, 2.9, 0.05, -1.4},
    {0.80, 2.00, 1.00, 0.30, 0.9, 0.10, -2.7, 0.20, 1.0},
    {0.40, 0.30, 2.20, 0.05, -1.8, 0.35, 0.7, 0.25, -2.3},
};

Complex Polar(double r, double phi) {
  return {r * std::cos(phi), r * std::sin(phi)};
}

CoherencyPixel RoundToFloat(const CoherencyPixel& t) {
  const auto rec = t.ToRecord();
  std::array<float, 9> narrow;
  std::array<double, 9> wide;
  std::copy(rec.begin(), rec.end(), narrow.begin());
  std::copy(narrow.begin(), narrow.end(), wide.begin());
  return CoherencyPixel::FromRecord(wide);
}

}  // namespace

int CoherencyRaster::MaxLabel() const {
  int k = 0;
  for (std::int16_t l : labels) k = std::max<int>(k, l);
  return k;
}

Layout ParseLayout(const std::string& name) {
  if (name == "stripes") return Layout::kStripes;
  if (name == "blocks") return Layout::kBlocks;
  throw std::invalid_argument("unknown layout '" + name +
                              "' (expected stripes or blocks)");
}

std::vector<std::int16_t> LayoutLabels(Layout layout, int classes,
                                       std::size_t height, std::size_t width) {
  if (classes < 1) throw std::invalid_argument("class count must be >= 1");
  const auto k = static_cast<std::size_t>(classes);
  std::vector<std::int16_t> labels(height * width);
  if (layout == Layout::kStripes) {
    if (width < k) {
      throw std::invalid_argument("stripes layout needs width >= " +
                                  std::to_string(k) + ", got " +
                                  std::to_string(width));
    }
    for (std::size_t r = 0; r < height; ++r)
      for (std::size_t c = 0; c < width; ++c)
        labels[r * width + c] = static_cast<std::int16_t>(c * k / width + 1);
    return labels;
  }
  const auto cols = static_cast<std::size_t>(
      std::ceil(std::sqrt(static_cast<double>(k))));
  const std::size_t rows = (k + cols - 1) / cols;
  if (height < rows || width < cols) {
    throw std::invalid_argument(
        "blocks layout for " + std::to_string(k) + " classes needs at least " +
        std::to_string(rows) + "x" + std::to_string(cols) + " pixels");
  }
  for (std::size_t r = 0; r < height; ++r)
    for (std::size_t c = 0; c < width; ++c) {
      const std::size_t cell = (r * rows / height) * cols + c * cols / width;
      labels[r * width + c] = static_cast<std::int16_t>(cell % k + 1);
    }
  return labels;
}

std::vector<CoherencyPixel> BuiltinClassCovariances(int classes) {
  if (classes < 1 || classes > kMaxBuiltinClasses) {
    throw std::invalid_argument(
        "built-in covariance table holds 1.." +
        std::to_string(kMaxBuiltinClasses) + " classes, requested " +
        std::to_string(classes));
  }
  std::vector<CoherencyPixel> out;
  for (int i = 0; i < classes; ++i) {
    const ClassEntry& e = kBuiltin[i];
    out.push_back({e.d1, e.d2, e.d3,
                   Polar(e.rho12 * std::sqrt(e.d1 * e.d2), e.phi12),
                   Polar(e.rho13 * std::sqrt(e.d1 * e.d3), e.phi13),
                   Polar(e.rho23 * std::sqrt(e.d2 * e.d3), e.phi23)});
  }
  return out;
}

CoherencyRaster GenerateScene(const SceneSpec& spec) {
  if (spec.classes < 2) {
    throw std::invalid_argument("a scene needs at least 2 classes, got " +
                                std::to_string(spec.classes));
  }
  const std::vector<CoherencyPixel> sigmas =
      spec.class_covariances.empty() ? BuiltinClassCovariances(spec.classes)
                                     : spec.class_covariances;
  if (sigmas.size() != static_cast<std::size_t>(spec.classes)) {
    throw std::invalid_argument("expected " + std::to_string(spec.classes) +
                                " class covariances, got " +
                                std::to_string(sigmas.size()));
  }
  for (std::size_t a = 0; a < sigmas.size(); ++a)
    for (std::size_t b = a + 1; b < sigmas.size(); ++b)
      if (sigmas[a] == sigmas[b]) {
        throw std::invalid_argument("class covariances " +
                                    std::to_string(a + 1) + " and " +
                                    std::to_string(b + 1) + " are identical");
      }
  std::vector<WishartSampler> samplers;
  for (const auto& s : sigmas) samplers.emplace_back(s, spec.looks);

  CoherencyRaster raster(spec.height, spec.width);
  raster.labels =
      LayoutLabels(spec.layout, spec.classes, spec.height, spec.width);
  const std::uint64_t base = SplitMix64(spec.seed);
  for (std::size_t i = 0; i < raster.pixels.size(); ++i) {
    std::mt19937_64 rng(SplitMix64(base ^ SplitMix64(i)));
    const auto& sampler = samplers[raster.labels[i] - 1];
    raster.pixels[i] = RoundToFloat(sampler(rng));
  }
  return raster;
}

}  // namespace cvgan
