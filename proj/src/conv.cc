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

#include <stdexcept>
#include <string>

#include "cvgan/complex_mask.h"
#include "cvgan/layers.h"
#include "lowering.h"

namespace cvgan {
namespace {

using internal::BatchToChannelMajor;
using internal::ChannelToBatchMajor;
using internal::Col2Im;
using internal::Im2Col;
using internal::ImageDims;

void ValidateGeometry(const ConvGeometry& g) {
  if (g.kernel < 1 || g.stride < 1) {
    throw std::invalid_argument("convolution kernel and stride must be >= 1");
  }
}

ImageDims RequireImage(const ComplexTensor& x, std::size_t channels,
                       const char* layer) {
  if (x.rank() != 4 || x.dim(1) != channels) {
    throw ShapeError(std::string(layer) + " expects [B, " +
                     std::to_string(channels) + ", H, W], got " +
                     ShapeToString(x.shape()));
  }
  return {x.dim(0), x.dim(1), x.dim(2), x.dim(3)};
}

void AddChannelBias(ComplexTensor& y, const ComplexTensor& bias) {
  const std::size_t batch = y.dim(0), channels = y.dim(1);
  const std::size_t spatial = y.dim(2) * y.dim(3);
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t c = 0; c < channels; ++c) {
      const std::size_t base = (b * channels + c) * spatial;
      for (std::size_t s = 0; s < spatial; ++s) {
        y.re()[base + s] += bias.re()[c];
        y.im()[base + s] += bias.im()[c];
      }
    }
  }
}

void AccumulateChannelBias(const ComplexTensor& g, ComplexTensor& bias_grad) {
  const std::size_t batch = g.dim(0), channels = g.dim(1);
  const std::size_t spatial = g.dim(2) * g.dim(3);
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t c = 0; c < channels; ++c) {
      const std::size_t base = (b * channels + c) * spatial;
      double sr = 0.0, si = 0.0;
      for (std::size_t s = 0; s < spatial; ++s) {
        sr += g.re()[base + s];
        si += g.im()[base + s];
      }
      bias_grad.re()[c] += sr;
      bias_grad.im()[c] += si;
    }
  }
}

}  // namespace

std::size_t ConvOutputSize(std::size_t in, const ConvGeometry& g,
                           const char* axis) {
  if (in + 2 * g.padding < g.kernel) {
    throw ShapeError(std::string("degenerate convolution output along ") +
                     axis + ": input " + std::to_string(in) + ", kernel " +
                     std::to_string(g.kernel) + ", padding " +
                     std::to_string(g.padding));
  }
  return (in + 2 * g.padding - g.kernel) / g.stride + 1;
}

std::size_t DeconvOutputSize(std::size_t in, const ConvGeometry& g,
                             const char* axis) {
  const std::size_t full = (in == 0 ? 0 : (in - 1) * g.stride) + g.kernel;
  if (in == 0 || full <= 2 * g.padding) {
    throw ShapeError(std::string("degenerate deconvolution output along ") +
                     axis + ": input " + std::to_string(in) + ", kernel " +
                     std::to_string(g.kernel) + ", stride " +
                     std::to_string(g.stride) + ", padding " +
                     std::to_string(g.padding));
  }
  return full - 2 * g.padding;
}

// ---------------------------------------------------------------------------
// ComplexConv2d

ComplexConv2d::ComplexConv2d(std::size_t in_channels, std::size_t out_channels,
                             ConvGeometry geometry)
    : in_c_(in_channels),
      out_c_(out_channels),
      geom_(geometry),
      weight_({out_channels, in_channels, geometry.kernel, geometry.kernel}),
      bias_({out_channels}),
      weight_grad_(weight_.shape()),
      bias_grad_({out_channels}) {
  ValidateGeometry(geom_);
}

void ComplexConv2d::Initialize(std::mt19937_64& rng) {
  const std::size_t kk = geom_.kernel * geom_.kernel;
  GlorotComplexInit(weight_, in_c_ * kk, out_c_ * kk, rng);
  bias_.Fill({});
}

ComplexTensor ComplexConv2d::Forward(const ComplexTensor& x, Mode) {
  const ImageDims d = RequireImage(x, in_c_, "ComplexConv2d");
  const std::size_t oh = ConvOutputSize(d.height, geom_, "height");
  const std::size_t ow = ConvOutputSize(d.width, geom_, "width");
  const std::size_t rows = in_c_ * geom_.kernel * geom_.kernel;
  const std::size_t n = d.batch * oh * ow;

  ComplexTensor cols({rows, n});
  Im2Col(x.re(), d, geom_, oh, ow, cols.re());
  Im2Col(x.im(), d, geom_, oh, ow, cols.im());

  ComplexTensor out_cm({out_c_, n});
  const MaskGeometry g{.m = out_c_, .n = n, .k = rows};
  MaskForward(g, {weight_.re(), weight_.im()}, {cols.re(), cols.im()},
              {out_cm.re(), out_cm.im()});

  ComplexTensor y({d.batch, out_c_, oh, ow});
  ChannelToBatchMajor(out_cm.re(), d.batch, out_c_, oh * ow, y.re());
  ChannelToBatchMajor(out_cm.im(), d.batch, out_c_, oh * ow, y.im());
  AddChannelBias(y, bias_);

  input_shape_ = x.shape();
  cols_ = std::move(cols);
  return y;
}

ComplexTensor ComplexConv2d::Backward(const ComplexTensor& grad_out) {
  if (!cols_) {
    throw std::logic_error(
        "ComplexConv2d: Backward called without a cached forward pass");
  }
  const ImageDims d{input_shape_[0], input_shape_[1], input_shape_[2],
                    input_shape_[3]};
  const std::size_t oh = ConvOutputSize(d.height, geom_, "height");
  const std::size_t ow = ConvOutputSize(d.width, geom_, "width");
  if (grad_out.shape() != Shape{d.batch, out_c_, oh, ow}) {
    throw ShapeError("ComplexConv2d gradient shape " +
                     ShapeToString(grad_out.shape()));
  }
  const std::size_t rows = in_c_ * geom_.kernel * geom_.kernel;
  const std::size_t n = d.batch * oh * ow;

  ComplexTensor g_cm({out_c_, n});
  BatchToChannelMajor(grad_out.re(), d.batch, out_c_, oh * ow, g_cm.re());
  BatchToChannelMajor(grad_out.im(), d.batch, out_c_, oh * ow, g_cm.im());

  ComplexTensor dcols({rows, n});
  const MaskGeometry g{.m = out_c_, .n = n, .k = rows};
  MaskBackward(g, {weight_.re(), weight_.im()}, {cols_->re(), cols_->im()},
               {g_cm.re(), g_cm.im()}, {weight_grad_.re(), weight_grad_.im()},
               {dcols.re(), dcols.im()});
  AccumulateChannelBias(grad_out, bias_grad_);

  ComplexTensor dx(input_shape_);
  Col2Im(dcols.re(), d, geom_, oh, ow, dx.re());
  Col2Im(dcols.im(), d, geom_, oh, ow, dx.im());
  return dx;
}

std::vector<ParamView> ComplexConv2d::Params() {
  std::vector<ParamView> out;
  AppendComplexParams(out, "weight", weight_, weight_grad_);
  AppendComplexParams(out, "bias", bias_, bias_grad_);
  return out;
}

// ---------------------------------------------------------------------------
// ComplexDeconv2d

ComplexDeconv2d::ComplexDeconv2d(std::size_t in_channels,
                                 std::size_t out_channels,
                                 ConvGeometry geometry)
    : in_c_(in_channels),
      out_c_(out_channels),
      geom_(geometry),
      weight_({in_channels, out_channels, geometry.kernel, geometry.kernel}),
      bias_({out_channels}),
      weight_grad_(weight_.shape()),
      bias_grad_({out_channels}) {
  ValidateGeometry(geom_);
}

void ComplexDeconv2d::Initialize(std::mt19937_64& rng) {
  const std::size_t kk = geom_.kernel * geom_.kernel;
  GlorotComplexInit(weight_, in_c_ * kk, out_c_ * kk, rng);
  bias_.Fill({});
}

ComplexTensor ComplexDeconv2d::Forward(const ComplexTensor& x, Mode) {
  const ImageDims in = RequireImage(x, in_c_, "ComplexDeconv2d");
  const std::size_t oh = DeconvOutputSize(in.height, geom_, "height");
  const std::size_t ow = DeconvOutputSize(in.width, geom_, "width");
  const std::size_t rows = out_c_ * geom_.kernel * geom_.kernel;
  const std::size_t n = in.batch * in.height * in.width;

  ComplexTensor x_cm({in_c_, n});
  BatchToChannelMajor(x.re(), in.batch, in_c_, in.height * in.width,
                      x_cm.re());
  BatchToChannelMajor(x.im(), in.batch, in_c_, in.height * in.width,
                      x_cm.im());

  ComplexTensor cols({rows, n});
  const MaskGeometry g{.m = rows, .n = n, .k = in_c_, .transpose_w = true};
  MaskForward(g, {weight_.re(), weight_.im()}, {x_cm.re(), x_cm.im()},
              {cols.re(), cols.im()});

  ComplexTensor y({in.batch, out_c_, oh, ow});
  const ImageDims out{in.batch, out_c_, oh, ow};
  Col2Im(cols.re(), out, geom_, in.height, in.width, y.re());
  Col2Im(cols.im(), out, geom_, in.height, in.width, y.im());
  AddChannelBias(y, bias_);

  input_shape_ = x.shape();
  input_cm_ = std::move(x_cm);
  return y;
}

ComplexTensor ComplexDeconv2d::Backward(const ComplexTensor& grad_out) {
  if (!input_cm_) {
    throw std::logic_error(
        "ComplexDeconv2d: Backward called without a cached forward pass");
  }
  const ImageDims in{input_shape_[0], input_shape_[1], input_shape_[2],
                     input_shape_[3]};
  const std::size_t oh = DeconvOutputSize(in.height, geom_, "height");
  const std::size_t ow = DeconvOutputSize(in.width, geom_, "width");
  if (grad_out.shape() != Shape{in.batch, out_c_, oh, ow}) {
    throw ShapeError("ComplexDeconv2d gradient shape " +
                     ShapeToString(grad_out.shape()));
  }
  const std::size_t rows = out_c_ * geom_.kernel * geom_.kernel;
  const std::size_t n = in.batch * in.height * in.width;

  ComplexTensor g_cols({rows, n});
  const ImageDims out{in.batch, out_c_, oh, ow};
  Im2Col(grad_out.re(), out, geom_, in.height, in.width, g_cols.re());
  Im2Col(grad_out.im(), out, geom_, in.height, in.width, g_cols.im());

  ComplexTensor dx_cm({in_c_, n});
  const MaskGeometry g{.m = rows, .n = n, .k = in_c_, .transpose_w = true};
  MaskBackward(g, {weight_.re(), weight_.im()},
               {input_cm_->re(), input_cm_->im()},
               {g_cols.re(), g_cols.im()},
               {weight_grad_.re(), weight_grad_.im()},
               {dx_cm.re(), dx_cm.im()});
  AccumulateChannelBias(grad_out, bias_grad_);

  ComplexTensor dx(input_shape_);
  ChannelToBatchMajor(dx_cm.re(), in.batch, in_c_, in.height * in.width,
                      dx.re());
  ChannelToBatchMajor(dx_cm.im(), in.batch, in_c_, in.height * in.width,
                      dx.im());
  return dx;
}

std::vector<ParamView> ComplexDeconv2d::Params() {
  std::vector<ParamView> out;
  AppendComplexParams(out, "weight", weight_, weight_grad_);
  AppendComplexParams(out, "bias", bias_, bias_grad_);
  return out;
}

}  // namespace cvgan
