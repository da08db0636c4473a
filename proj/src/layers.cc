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

#include "cvgan/layers.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cvgan/complex_mask.h"
#include "gemm.h"

namespace cvgan {
namespace {

void Transpose(std::span<const double> src, std::size_t rows,
               std::size_t cols, std::span<double> dst) {
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) dst[c * rows + r] = src[r * cols + c];
  }
}

[[noreturn]] void MissingCache(const char* layer) {
  throw std::logic_error(std::string(layer) +
                         ": Backward called without a cached forward pass");
}

}  // namespace

void PrefixNames(const std::string& prefix, std::vector<ParamView>& params) {
  for (auto& p : params) p.name = prefix + "." + p.name;
}

void PrefixNames(const std::string& prefix, std::vector<BufferView>& buffers) {
  for (auto& b : buffers) b.name = prefix + "." + b.name;
}

void AppendComplexParams(std::vector<ParamView>& out, const std::string& name,
                         ComplexTensor& value, ComplexTensor& grad) {
  out.push_back({name + ".re", value.shape(), value.re(), grad.re()});
  out.push_back({name + ".im", value.shape(), value.im(), grad.im()});
}

void Layer::ZeroGrad() {
  for (auto& p : Params()) std::fill(p.grad.begin(), p.grad.end(), 0.0);
}

void GlorotComplexInit(ComplexTensor& w, std::size_t fan_in,
                       std::size_t fan_out, std::mt19937_64& rng) {
  const double limit =
      std::sqrt(6.0 / static_cast<double>(fan_in + fan_out)) / std::sqrt(2.0);
  std::uniform_real_distribution<double> dist(-limit, limit);
  for (double& v : w.re()) v = dist(rng);
  for (double& v : w.im()) v = dist(rng);
}

// ---------------------------------------------------------------------------
// ComplexLinear

ComplexLinear::ComplexLinear(std::size_t in_features, std::size_t out_features)
    : in_(in_features),
      out_(out_features),
      weight_({out_features, in_features}),
      bias_({out_features}),
      weight_grad_({out_features, in_features}),
      bias_grad_({out_features}) {}

void ComplexLinear::Initialize(std::mt19937_64& rng) {
  GlorotComplexInit(weight_, in_, out_, rng);
  bias_.Fill({});
}

ComplexTensor ComplexLinear::Forward(const ComplexTensor& x, Mode) {
  if (x.rank() != 2 || x.dim(1) != in_) {
    throw ShapeError("ComplexLinear expects [B, " + std::to_string(in_) +
                     "], got " + ShapeToString(x.shape()));
  }
  const std::size_t batch = x.dim(0);
  ComplexTensor xt({in_, batch});
  Transpose(x.re(), batch, in_, xt.re());
  Transpose(x.im(), batch, in_, xt.im());

  ComplexTensor ot({out_, batch});
  const MaskGeometry g{.m = out_, .n = batch, .k = in_};
  MaskForward(g, {weight_.re(), weight_.im()}, {xt.re(), xt.im()},
              {ot.re(), ot.im()});

  ComplexTensor y({batch, out_});
  Transpose(ot.re(), out_, batch, y.re());
  Transpose(ot.im(), out_, batch, y.im());
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t o = 0; o < out_; ++o) {
      y.re()[b * out_ + o] += bias_.re()[o];
      y.im()[b * out_ + o] += bias_.im()[o];
    }
  }
  input_t_ = std::move(xt);
  return y;
}

ComplexTensor ComplexLinear::Backward(const ComplexTensor& grad_out) {
  if (!input_t_) MissingCache("ComplexLinear");
  const std::size_t batch = input_t_->dim(1);
  if (grad_out.shape() != Shape{batch, out_}) {
    throw ShapeError("ComplexLinear gradient shape " +
                     ShapeToString(grad_out.shape()));
  }
  ComplexTensor gt({out_, batch});
  Transpose(grad_out.re(), batch, out_, gt.re());
  Transpose(grad_out.im(), batch, out_, gt.im());

  ComplexTensor dxt({in_, batch});
  const MaskGeometry g{.m = out_, .n = batch, .k = in_};
  MaskBackward(g, {weight_.re(), weight_.im()},
               {input_t_->re(), input_t_->im()}, {gt.re(), gt.im()},
               {weight_grad_.re(), weight_grad_.im()}, {dxt.re(), dxt.im()});
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t o = 0; o < out_; ++o) {
      bias_grad_.re()[o] += grad_out.re()[b * out_ + o];
      bias_grad_.im()[o] += grad_out.im()[b * out_ + o];
    }
  }
  ComplexTensor dx({batch, in_});
  Transpose(dxt.re(), in_, batch, dx.re());
  Transpose(dxt.im(), in_, batch, dx.im());
  return dx;
}

std::vector<ParamView> ComplexLinear::Params() {
  std::vector<ParamView> out;
  AppendComplexParams(out, "weight", weight_, weight_grad_);
  AppendComplexParams(out, "bias", bias_, bias_grad_);
  return out;
}

// ---------------------------------------------------------------------------
// CRelu

ComplexTensor CRelu::Forward(const ComplexTensor& x, Mode) {
  ComplexTensor y = x;
  for (double& v : y.re()) v = std::max(v, 0.0);
  for (double& v : y.im()) v = std::max(v, 0.0);
  input_ = x;
  return y;
}

ComplexTensor CRelu::Backward(const ComplexTensor& grad_out) {
  if (!input_) MissingCache("CRelu");
  if (grad_out.shape() != input_->shape()) {
    throw ShapeError("CRelu gradient shape " +
                     ShapeToString(grad_out.shape()));
  }
  ComplexTensor dx = grad_out;
  for (std::size_t i = 0; i < dx.size(); ++i) {
    if (input_->re()[i] <= 0.0) dx.re()[i] = 0.0;
    if (input_->im()[i] <= 0.0) dx.im()[i] = 0.0;
  }
  return dx;
}

// ---------------------------------------------------------------------------
// RealLinear

RealLinear::RealLinear(std::size_t in_features, std::size_t out_features)
    : in_(in_features),
      out_(out_features),
      weight_({out_features, in_features}),
      bias_({out_features}),
      weight_grad_({out_features, in_features}),
      bias_grad_({out_features}) {}

void RealLinear::Initialize(std::mt19937_64& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(in_ + out_));
  std::uniform_real_distribution<double> dist(-limit, limit);
  for (double& v : weight_.data()) v = dist(rng);
  std::fill(bias_.data().begin(), bias_.data().end(), 0.0);
}

RealTensor RealLinear::Forward(const RealTensor& x) {
  if (x.rank() != 2 || x.dim(1) != in_) {
    throw ShapeError("RealLinear expects [B, " + std::to_string(in_) +
                     "], got " + ShapeToString(x.shape()));
  }
  const std::size_t batch = x.dim(0);
  RealTensor y({batch, out_});
  for (std::size_t b = 0; b < batch; ++b) {
    std::copy_n(bias_.data().begin(), out_, y.data().begin() + b * out_);
  }
  internal::Gemm(false, true, batch, out_, in_, 1.0, x.data().data(),
                 weight_.data().data(), 1.0, y.data().data());
  input_ = x;
  return y;
}

RealTensor RealLinear::Backward(const RealTensor& grad_out) {
  if (!input_) MissingCache("RealLinear");
  const std::size_t batch = input_->dim(0);
  if (grad_out.shape() != Shape{batch, out_}) {
    throw ShapeError("RealLinear gradient shape " +
                     ShapeToString(grad_out.shape()));
  }
  // dW += G^T X, db += sum_b G, dX = G W
  internal::Gemm(true, false, out_, in_, batch, 1.0, grad_out.data().data(),
                 input_->data().data(), 1.0, weight_grad_.data().data());
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t o = 0; o < out_; ++o) {
      bias_grad_[o] += grad_out[b * out_ + o];
    }
  }
  RealTensor dx({batch, in_});
  internal::Gemm(false, false, batch, in_, out_, 1.0, grad_out.data().data(),
                 weight_.data().data(), 0.0, dx.data().data());
  return dx;
}

std::vector<ParamView> RealLinear::Params() {
  return {{"weight", weight_.shape(), weight_.data(), weight_grad_.data()},
          {"bias", bias_.shape(), bias_.data(), bias_grad_.data()}};
}

void RealLinear::ZeroGrad() {
  for (auto& p : Params()) std::fill(p.grad.begin(), p.grad.end(), 0.0);
}

}  // namespace cvgan
