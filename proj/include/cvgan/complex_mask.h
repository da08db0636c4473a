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

#ifndef CVGAN_COMPLEX_MASK_H_
#define CVGAN_COMPLEX_MASK_H_

#include <cstddef>
#include <span>

namespace cvgan {

// Complex-valued operation mask. A complex linear operation OUT = op(W) * IN
// is evaluated as four real products combined by one subtraction and one
// addition:
//
//   OUT_r = op(W_r) * IN_r - op(W_i) * IN_i
//   OUT_i = op(W_i) * IN_r + op(W_r) * IN_i
//
// Full connection, convolution and deconvolution all lower their inputs to a
// matrix product and then go through this mask.

struct MaskGeometry {
  std::size_t m = 0;  // rows of op(W) and OUT
  std::size_t n = 0;  // columns of IN and OUT
  std::size_t k = 0;  // columns of op(W), rows of IN
  bool transpose_w = false;  // W is stored k x m and op(W) = W^T
};

struct ConstPlanes {
  std::span<const double> re;
  std::span<const double> im;
};

struct Planes {
  std::span<double> re;
  std::span<double> im;
};

void MaskForward(const MaskGeometry& g, ConstPlanes w, ConstPlanes in,
                 Planes out);

// Gradients of a scalar loss given dL/dOUT (re and im treated as independent
// real variables). grad_w is accumulated into; grad_in is overwritten and may
// be left empty when the input gradient is not needed.
void MaskBackward(const MaskGeometry& g, ConstPlanes w, ConstPlanes in,
                  ConstPlanes grad_out, Planes grad_w, Planes grad_in);

}  // namespace cvgan

#endif  // CVGAN_COMPLEX_MASK_H_
