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
#include <numeric>
#include <string>

#include "cvgan/data.h"

namespace cvgan {
namespace {

std::size_t CenterOffset(std::size_t patch_size) { return patch_size / 2; }

struct PlaneLayout {
  std::size_t outer, channels, spatial;
};

PlaneLayout LayoutFor(const ComplexTensor& x, std::size_t channels) {
  if (x.rank() < 3 || x.dim(x.rank() - 3) != channels) {
    throw ShapeError("expected [..., " + std::to_string(channels) +
                     ", H, W], got " + ShapeToString(x.shape()));
  }
  const std::size_t spatial = x.dim(x.rank() - 2) * x.dim(x.rank() - 1);
  return {x.size() / (channels * spatial), channels, spatial};
}

template <typename Tensor, typename Fn>
void ForEachPlaneValue(Tensor& x, std::size_t channels, Fn fn) {
  const PlaneLayout l = LayoutFor(x, channels);
  for (std::size_t o = 0; o < l.outer; ++o)
    for (std::size_t c = 0; c < l.channels; ++c) {
      const std::size_t base = (o * l.channels + c) * l.spatial;
      for (std::size_t s = 0; s < l.spatial; ++s) {
        fn(c, x.re()[base + s], x.im()[base + s]);
      }
    }
}

}  // namespace

std::vector<Patch> ExtractPatches(const CoherencyRaster& raster,
                                  std::size_t patch_size, std::size_t stride) {
  if (patch_size == 0 || stride == 0) {
    throw std::invalid_argument("patch size and stride must be >= 1");
  }
  if (raster.height < patch_size || raster.width < patch_size) {
    throw std::invalid_argument(
        "raster " + std::to_string(raster.height) + "x" +
        std::to_string(raster.width) + " is smaller than patch size " +
        std::to_string(patch_size));
  }
  const std::size_t p = patch_size, pp = p * p;
  std::vector<Patch> out;
  for (std::size_t r = 0; r + p <= raster.height; r += stride) {
    for (std::size_t c = 0; c + p <= raster.width; c += stride) {
      Patch patch{ComplexTensor({kPatchChannels, p, p}),
                  raster.label(r + CenterOffset(p), c + CenterOffset(p)), r,
                  c};
      auto re = patch.data.re();
      auto im = patch.data.im();
      for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = 0; j < p; ++j) {
          const CoherencyPixel& t = raster.pixel(r + i, c + j);
          const std::size_t s = i * p + j;
          re[0 * pp + s] = t.t11;
          re[1 * pp + s] = t.t22;
          re[2 * pp + s] = t.t33;
          re[3 * pp + s] = t.t12.re;
          im[3 * pp + s] = t.t12.im;
          re[4 * pp + s] = t.t13.re;
          im[4 * pp + s] = t.t13.im;
          re[5 * pp + s] = t.t23.re;
          im[5 * pp + s] = t.t23.im;
        }
      }
      out.push_back(std::move(patch));
    }
  }
  return out;
}

CoherencyPixel PixelFromPatch(const Patch& patch, std::size_t r,
                              std::size_t c) {
  const std::size_t p = patch.data.dim(1), pp = p * p, s = r * p + c;
  auto re = patch.data.re();
  auto im = patch.data.im();
  return {re[s],
          re[pp + s],
          re[2 * pp + s],
          {re[3 * pp + s], im[3 * pp + s]},
          {re[4 * pp + s], im[4 * pp + s]},
          {re[5 * pp + s], im[5 * pp + s]}};
}

ComplexTensor StackPatches(std::span<const Patch> patches) {
  std::vector<std::size_t> all(patches.size());
  std::iota(all.begin(), all.end(), 0);
  return StackPatches(patches, all);
}

ComplexTensor StackPatches(std::span<const Patch> patches,
                           std::span<const std::size_t> indices) {
  if (indices.empty()) return ComplexTensor();
  const Shape& one = patches[indices[0]].data.shape();
  Shape shape{indices.size()};
  shape.insert(shape.end(), one.begin(), one.end());
  ComplexTensor out(shape);
  const std::size_t n = patches[indices[0]].data.size();
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const ComplexTensor& src = patches[indices[i]].data;
    if (src.shape() != one) {
      throw ShapeError("cannot stack patches of shapes " +
                       ShapeToString(one) + " and " +
                       ShapeToString(src.shape()));
    }
    std::copy(src.re().begin(), src.re().end(), out.re().begin() + i * n);
    std::copy(src.im().begin(), src.im().end(), out.im().begin() + i * n);
  }
  return out;
}

CoherencyRaster TilePatches(const ComplexTensor& batch) {
  if (batch.rank() != 4 || batch.dim(1) != kPatchChannels ||
      batch.dim(2) != batch.dim(3)) {
    throw ShapeError("expected [N, 6, P, P], got " +
                     ShapeToString(batch.shape()));
  }
  const std::size_t n = batch.dim(0), p = batch.dim(2), pp = p * p;
  CoherencyRaster raster(p, n * p);
  for (std::size_t k = 0; k < n; ++k) {
    Patch view{ComplexTensor({kPatchChannels, p, p}), 0, 0, 0};
    std::copy_n(batch.re().begin() + k * kPatchChannels * pp,
                kPatchChannels * pp, view.data.re().begin());
    std::copy_n(batch.im().begin() + k * kPatchChannels * pp,
                kPatchChannels * pp, view.data.im().begin());
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = 0; j < p; ++j) {
        raster.pixels[i * raster.width + k * p + j] = PixelFromPatch(view, i, j);
      }
  }
  return raster;
}

std::size_t LabeledQuota::For(std::size_t population) const {
  if (kind == Kind::kCount) return count;
  const auto n = static_cast<std::size_t>(
      std::floor(ratio * static_cast<double>(population)));
  return std::max<std::size_t>(n, 1);
}

DataSplit SplitPatches(std::span<const Patch> patches, const SplitSpec& spec) {
  if (spec.quota.kind == LabeledQuota::Kind::kRatio &&
      !(spec.quota.ratio > 0.0 && spec.quota.ratio <= 1.0)) {
    throw std::invalid_argument("labeled ratio must be in (0, 1]");
  }
  if (spec.quota.kind == LabeledQuota::Kind::kCount && spec.quota.count < 1) {
    throw std::invalid_argument("labeled count must be >= 1");
  }
  if (!(spec.unlabeled_fraction >= 0.0 && spec.unlabeled_fraction <= 1.0)) {
    throw std::invalid_argument("unlabeled fraction must be in [0, 1]");
  }
  int classes = 0;
  for (const Patch& p : patches) classes = std::max(classes, p.label);
  if (classes == 0) throw std::invalid_argument("no labeled patches to split");

  std::vector<std::vector<std::size_t>> by_class(classes + 1);
  for (std::size_t i = 0; i < patches.size(); ++i) {
    if (patches[i].label > 0) by_class[patches[i].label].push_back(i);
  }

  std::mt19937_64 rng(spec.seed);
  DataSplit split;
  for (int k = 1; k <= classes; ++k) {
    auto& members = by_class[k];
    const std::size_t quota = spec.quota.For(members.size());
    if (quota > members.size()) {
      throw std::invalid_argument(
          "class " + std::to_string(k) + " has " +
          std::to_string(members.size()) + " labeled patches, quota needs " +
          std::to_string(quota));
    }
    std::shuffle(members.begin(), members.end(), rng);
    for (std::size_t i = 0; i < members.size(); ++i) {
      (i < quota ? split.labeled : split.test).push_back(patches[members[i]]);
    }
    if (quota == members.size()) {
      split.warnings.push_back("class " + std::to_string(k) +
                               " has no patches left for testing");
    }
  }

  const auto n_unlabeled = static_cast<std::size_t>(std::floor(
      spec.unlabeled_fraction * static_cast<double>(patches.size())));
  std::vector<std::size_t> all(patches.size());
  std::iota(all.begin(), all.end(), 0);
  std::shuffle(all.begin(), all.end(), rng);
  for (std::size_t i = 0; i < n_unlabeled; ++i) {
    Patch p = patches[all[i]];
    p.label = 0;
    split.unlabeled.push_back(std::move(p));
  }
  return split;
}

NormalizationStats ComputeNormalization(std::span<const Patch> labeled,
                                        std::span<const Patch> unlabeled) {
  const std::size_t c = kPatchChannels;
  NormalizationStats s{std::vector<double>(c, 0.0), std::vector<double>(c, 0.0),
                       std::vector<double>(c, 0.0),
                       std::vector<double>(c, 0.0)};
  std::vector<double> count(c, 0.0);
  auto visit = [&](auto fn) {
    for (auto set : {labeled, unlabeled})
      for (const Patch& p : set) ForEachPlaneValue(p.data, c, fn);
  };
  visit([&](std::size_t ch, double re, double im) {
    s.mean_re[ch] += re;
    s.mean_im[ch] += im;
    count[ch] += 1.0;
  });
  if (count[0] == 0.0) {
    throw std::invalid_argument("normalization needs at least one patch");
  }
  for (std::size_t ch = 0; ch < c; ++ch) {
    s.mean_re[ch] /= count[ch];
    s.mean_im[ch] /= count[ch];
  }
  visit([&](std::size_t ch, double re, double im) {
    s.std_re[ch] += (re - s.mean_re[ch]) * (re - s.mean_re[ch]);
    s.std_im[ch] += (im - s.mean_im[ch]) * (im - s.mean_im[ch]);
  });
  for (std::size_t ch = 0; ch < c; ++ch) {
    s.std_re[ch] = std::sqrt(s.std_re[ch] / count[ch]);
    s.std_im[ch] = std::sqrt(s.std_im[ch] / count[ch]);
  }
  return s;
}

void Normalize(ComplexTensor& x, const NormalizationStats& stats) {
  ForEachPlaneValue(x, stats.channels(),
                    [&](std::size_t c, double& re, double& im) {
                      re = (re - stats.mean_re[c]) /
                           std::max(stats.std_re[c],
                                    NormalizationStats::kStdFloor);
                      im = (im - stats.mean_im[c]) /
                           std::max(stats.std_im[c],
                                    NormalizationStats::kStdFloor);
                    });
}

void Denormalize(ComplexTensor& x, const NormalizationStats& stats) {
  ForEachPlaneValue(x, stats.channels(),
                    [&](std::size_t c, double& re, double& im) {
                      re = re * std::max(stats.std_re[c],
                                         NormalizationStats::kStdFloor) +
                           stats.mean_re[c];
                      im = im * std::max(stats.std_im[c],
                                         NormalizationStats::kStdFloor) +
                           stats.mean_im[c];
                    });
}

void Normalize(std::vector<Patch>& patches, const NormalizationStats& stats) {
  for (Patch& p : patches) Normalize(p.data, stats);
}

}  // namespace cvgan
