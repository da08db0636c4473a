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

#include "lowering.h"

#include <algorithm>

namespace cvgan::internal {

void Im2Col(std::span<const double> image, const ImageDims& d,
            const ConvGeometry& g, std::size_t out_h, std::size_t out_w,
            std::span<double> cols) {
  const std::size_t k = g.kernel;
  const std::size_t ncols = d.batch * out_h * out_w;
  const auto pad = static_cast<std::ptrdiff_t>(g.padding);
  for (std::size_t c = 0; c < d.channels; ++c) {
    for (std::size_t ki = 0; ki < k; ++ki) {
      for (std::size_t kj = 0; kj < k; ++kj) {
        double* row = cols.data() + ((c * k + ki) * k + kj) * ncols;
        for (std::size_t b = 0; b < d.batch; ++b) {
          const double* plane =
              image.data() + (b * d.channels + c) * d.height * d.width;
          for (std::size_t oh = 0; oh < out_h; ++oh) {
            double* dst = row + (b * out_h + oh) * out_w;
            const std::ptrdiff_t ih =
                static_cast<std::ptrdiff_t>(oh * g.stride + ki) - pad;
            if (ih < 0 || ih >= static_cast<std::ptrdiff_t>(d.height)) {
              std::fill_n(dst, out_w, 0.0);
              continue;
            }
            const double* src = plane + ih * d.width;
            for (std::size_t ow = 0; ow < out_w; ++ow) {
              const std::ptrdiff_t iw =
                  static_cast<std::ptrdiff_t>(ow * g.stride + kj) - pad;
              dst[ow] = (iw < 0 || iw >= static_cast<std::ptrdiff_t>(d.width))
                            ? 0.0
                            : src[iw];
            }
          }
        }
      }
    }
  }
}

void Col2Im(std::span<const double> cols, const ImageDims& d,
            const ConvGeometry& g, std::size_t out_h, std::size_t out_w,
            std::span<double> image) {
  std::fill(image.begin(), image.end(), 0.0);
  const std::size_t k = g.kernel;
  const std::size_t ncols = d.batch * out_h * out_w;
  const auto pad = static_cast<std::ptrdiff_t>(g.padding);
  for (std::size_t c = 0; c < d.channels; ++c) {
    for (std::size_t ki = 0; ki < k; ++ki) {
      for (std::size_t kj = 0; kj < k; ++kj) {
        const double* row = cols.data() + ((c * k + ki) * k + kj) * ncols;
        for (std::size_t b = 0; b < d.batch; ++b) {
          double* plane =
              image.data() + (b * d.channels + c) * d.height * d.width;
          for (std::size_t oh = 0; oh < out_h; ++oh) {
            const std::ptrdiff_t ih =
                static_cast<std::ptrdiff_t>(oh * g.stride + ki) - pad;
            if (ih < 0 || ih >= static_cast<std::ptrdiff_t>(d.height)) continue;
            const double* src = row + (b * out_h + oh) * out_w;
            double* dst = plane + ih * d.width;
            for (std::size_t ow = 0; ow < out_w; ++ow) {
              const std::ptrdiff_t iw =
                  static_cast<std::ptrdiff_t>(ow * g.stride + kj) - pad;
              if (iw >= 0 && iw < static_cast<std::ptrdiff_t>(d.width)) {
                dst[iw] += src[ow];
              }
            }
          }
        }
      }
    }
  }
}

void BatchToChannelMajor(std::span<const double> src, std::size_t batch,
                         std::size_t channels, std::size_t spatial,
                         std::span<double> dst) {
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t c = 0; c < channels; ++c) {
      std::copy_n(src.data() + (b * channels + c) * spatial, spatial,
                  dst.data() + (c * batch + b) * spatial);
    }
  }
}

void ChannelToBatchMajor(std::span<const double> src, std::size_t batch,
                         std::size_t channels, std::size_t spatial,
                         std::span<double> dst) {
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t c = 0; c < channels; ++c) {
      std::copy_n(src.data() + (c * batch + b) * spatial, spatial,
                  dst.data() + (b * channels + c) * spatial);
    }
  }
}

}  // namespace cvgan::internal
