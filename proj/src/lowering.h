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

#ifndef CVGAN_SRC_LOWERING_H_
#define CVGAN_SRC_LOWERING_H_

#include <cstddef>
#include <span>

#include "cvgan/layers.h"

namespace cvgan::internal {

// Image extents of a batch-major plane [batch, channels, height, width].
struct ImageDims {
  std::size_t batch, channels, height, width;
};

// Lowers a plane to columns [C*k*k, B*OH*OW]; row (c, ki, kj), column
// (b, oh, ow). Out-of-image taps read zero.
void Im2Col(std::span<const double> image, const ImageDims& d,
            const ConvGeometry& g, std::size_t out_h, std::size_t out_w,
            std::span<double> cols);

// Adjoint of Im2Col: scatters columns back, summing overlaps. The image is
// overwritten.
void Col2Im(std::span<const double> cols, const ImageDims& d,
            const ConvGeometry& g, std::size_t out_h, std::size_t out_w,
            std::span<double> image);

// [B, C, S] <-> [C, B*S]
void BatchToChannelMajor(std::span<const double> src, std::size_t batch,
                         std::size_t channels, std::size_t spatial,
                         std::span<double> dst);
void ChannelToBatchMajor(std::span<const double> src, std::size_t batch,
                         std::size_t channels, std::size_t spatial,
                         std::span<double> dst);

}  // namespace cvgan::internal

#endif  // CVGAN_SRC_LOWERING_H_
