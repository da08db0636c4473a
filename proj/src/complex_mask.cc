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

#include "cvgan/complex_mask.h"

#include "gemm.h"

namespace cvgan {

using internal::Gemm;

void MaskForward(const MaskGeometry& g, ConstPlanes w, ConstPlanes in,
                 Planes out) {
  const bool tw = g.transpose_w;
  Gemm(tw, false, g.m, g.n, g.k, 1.0, w.re.data(), in.re.data(), 0.0,
       out.re.data());
  Gemm(tw, false, g.m, g.n, g.k, -1.0, w.im.data(), in.im.data(), 1.0,
       out.re.data());
  Gemm(tw, false, g.m, g.n, g.k, 1.0, w.im.data(), in.re.data(), 0.0,
       out.im.data());
  Gemm(tw, false, g.m, g.n, g.k, 1.0, w.re.data(), in.im.data(), 1.0,
       out.im.data());
}

void MaskBackward(const MaskGeometry& g, ConstPlanes w, ConstPlanes in,
                  ConstPlanes grad_out, Planes grad_w, Planes grad_in) {
  const bool tw = g.transpose_w;
  if (!grad_in.re.empty()) {
    // dIN_r = op(W_r)^T G_r + op(W_i)^T G_i
    // dIN_i = op(W_r)^T G_i - op(W_i)^T G_r
    Gemm(!tw, false, g.k, g.n, g.m, 1.0, w.re.data(), grad_out.re.data(), 0.0,
         grad_in.re.data());
    Gemm(!tw, false, g.k, g.n, g.m, 1.0, w.im.data(), grad_out.im.data(), 1.0,
         grad_in.re.data());
    Gemm(!tw, false, g.k, g.n, g.m, 1.0, w.re.data(), grad_out.im.data(), 0.0,
         grad_in.im.data());
    Gemm(!tw, false, g.k, g.n, g.m, -1.0, w.im.data(), grad_out.re.data(),
         1.0, grad_in.im.data());
  }
  // d op(W_r) = G_r IN_r^T + G_i IN_i^T
  // d op(W_i) = G_i IN_r^T - G_r IN_i^T
  // Stored-transposed weights receive the transpose, IN G^T.
  auto accumulate = [&](double alpha, std::span<const double> grad,
                        std::span<const double> input, std::span<double> dst) {
    if (tw) {
      Gemm(false, true, g.k, g.m, g.n, alpha, input.data(), grad.data(), 1.0,
           dst.data());
    } else {
      Gemm(false, true, g.m, g.k, g.n, alpha, grad.data(), input.data(), 1.0,
           dst.data());
    }
  };
  accumulate(1.0, grad_out.re, in.re, grad_w.re);
  accumulate(1.0, grad_out.im, in.im, grad_w.re);
  accumulate(1.0, grad_out.im, in.re, grad_w.im);
  accumulate(-1.0, grad_out.re, in.im, grad_w.im);
}

}  // namespace cvgan
