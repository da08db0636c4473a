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
#include <stdexcept>
#include <string>

#include "cvgan/layers.h"

namespace cvgan {
namespace {

struct Extent {
  std::size_t batch, channels, spatial;
};

Extent ChannelExtent(const ComplexTensor& x) {
  if (x.rank() < 2) {
    throw ShapeError("ComplexBatchNorm expects [B, C, ...], got " +
                     ShapeToString(x.shape()));
  }
  std::size_t spatial = 1;
  for (std::size_t a = 2; a < x.rank(); ++a) spatial *= x.dim(a);
  return {x.dim(0), x.dim(1), spatial};
}

}  // namespace

Sym2 InverseSqrt2x2(Sym2 v, double epsilon) {
  const double s =
      std::sqrt(std::max(v.rr * v.ii - v.ri * v.ri, epsilon * epsilon));
  const double t = std::sqrt(v.rr + v.ii + 2.0 * s);
  const double inv_st = 1.0 / (s * t);
  return {(v.ii + s) * inv_st, -v.ri * inv_st, (v.rr + s) * inv_st};
}

ComplexBatchNorm::ComplexBatchNorm(std::size_t channels, std::size_t memory,
                                   double epsilon)
    : channels_(channels),
      memory_(memory),
      epsilon_(epsilon),
      gamma_(channels, 1.0),
      beta_re_(channels, 0.0),
      beta_im_(channels, 0.0),
      gamma_grad_(channels, 0.0),
      beta_re_grad_(channels, 0.0),
      beta_im_grad_(channels, 0.0),
      ring_(memory * channels * kStatWidth, 0.0),
      cursor_(2, 0.0) {
  if (memory == 0) throw std::invalid_argument("CBN memory must be >= 1");
  if (!(epsilon > 0.0)) throw std::invalid_argument("CBN epsilon must be > 0");
}

std::vector<ComplexBatchNorm::Stats> ComplexBatchNorm::BatchStatistics(
    const ComplexTensor& x) {
  const Extent e = ChannelExtent(x);
  const double n = static_cast<double>(e.batch * e.spatial);
  std::vector<Stats> out(e.channels);
  for (std::size_t c = 0; c < e.channels; ++c) {
    double sr = 0.0, si = 0.0;
    for (std::size_t b = 0; b < e.batch; ++b) {
      const std::size_t base = (b * e.channels + c) * e.spatial;
      for (std::size_t s = 0; s < e.spatial; ++s) {
        sr += x.re()[base + s];
        si += x.im()[base + s];
      }
    }
    const Complex mean{sr / n, si / n};
    double rr = 0.0, ri = 0.0, ii = 0.0;
    for (std::size_t b = 0; b < e.batch; ++b) {
      const std::size_t base = (b * e.channels + c) * e.spatial;
      for (std::size_t s = 0; s < e.spatial; ++s) {
        const double dr = x.re()[base + s] - mean.re;
        const double di = x.im()[base + s] - mean.im;
        rr += dr * dr;
        ri += dr * di;
        ii += di * di;
      }
    }
    out[c] = {mean, {rr / n, ri / n, ii / n}};
  }
  return out;
}

void ComplexBatchNorm::Push(const std::vector<Stats>& stats) {
  const auto slot = static_cast<std::size_t>(cursor_[1]);
  double* dst = ring_.data() + slot * channels_ * kStatWidth;
  for (std::size_t c = 0; c < channels_; ++c) {
    dst[c * kStatWidth + 0] = stats[c].mean.re;
    dst[c * kStatWidth + 1] = stats[c].mean.im;
    dst[c * kStatWidth + 2] = stats[c].cov.rr;
    dst[c * kStatWidth + 3] = stats[c].cov.ri;
    dst[c * kStatWidth + 4] = stats[c].cov.ii;
  }
  cursor_[1] = static_cast<double>((slot + 1) % memory_);
  cursor_[0] = static_cast<double>(std::min(filled() + 1, memory_));
}

ComplexBatchNorm::Stats ComplexBatchNorm::Averaged(std::size_t c) const {
  const std::size_t n = filled();
  if (n == 0) return {{0.0, 0.0}, {1.0, 0.0, 1.0}};
  // Oldest to newest.
  const auto next = static_cast<std::size_t>(cursor_[1]);
  const std::size_t first = (next + memory_ - n) % memory_;
  double acc[kStatWidth] = {};
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t slot = (first + j) % memory_;
    const double* src = ring_.data() + (slot * channels_ + c) * kStatWidth;
    for (std::size_t w = 0; w < kStatWidth; ++w) acc[w] += src[w];
  }
  const double inv = static_cast<double>(n);
  return {{acc[0] / inv, acc[1] / inv}, {acc[2] / inv, acc[3] / inv,
                                         acc[4] / inv}};
}

ComplexTensor ComplexBatchNorm::Forward(const ComplexTensor& x, Mode mode) {
  const Extent e = ChannelExtent(x);
  if (e.channels != channels_) {
    throw ShapeError("ComplexBatchNorm has " + std::to_string(channels_) +
                     " channels, input " + ShapeToString(x.shape()));
  }
  if (mode == Mode::kTraining) {
    if (e.batch < 2) {
      throw std::invalid_argument(
          "ComplexBatchNorm: training batch must hold at least 2 samples");
    }
    Push(BatchStatistics(x));
  }

  const bool warm = filled() > 0;
  whitening_.assign(channels_, Sym2{1.0, 0.0, 1.0});
  std::vector<Complex> means(channels_);
  if (warm) {
    for (std::size_t c = 0; c < channels_; ++c) {
      const Stats avg = Averaged(c);
      means[c] = avg.mean;
      const Sym2 reg{avg.cov.rr + epsilon_, avg.cov.ri, avg.cov.ii + epsilon_};
      whitening_[c] = InverseSqrt2x2(reg, epsilon_);
    }
  }

  ComplexTensor x_hat(x.shape());
  ComplexTensor y(x.shape());
  for (std::size_t b = 0; b < e.batch; ++b) {
    for (std::size_t c = 0; c < channels_; ++c) {
      const Sym2& w = whitening_[c];
      const std::size_t base = (b * channels_ + c) * e.spatial;
      for (std::size_t s = 0; s < e.spatial; ++s) {
        const double dr = x.re()[base + s] - means[c].re;
        const double di = x.im()[base + s] - means[c].im;
        const double hr = w.rr * dr + w.ri * di;
        const double hi = w.ri * dr + w.ii * di;
        x_hat.re()[base + s] = hr;
        x_hat.im()[base + s] = hi;
        y.re()[base + s] = gamma_[c] * hr + beta_re_[c];
        y.im()[base + s] = gamma_[c] * hi + beta_im_[c];
      }
    }
  }
  x_hat_ = std::move(x_hat);
  return y;
}

ComplexTensor ComplexBatchNorm::Backward(const ComplexTensor& grad_out) {
  if (!x_hat_) {
    throw std::logic_error(
        "ComplexBatchNorm: Backward called without a cached forward pass");
  }
  if (grad_out.shape() != x_hat_->shape()) {
    throw ShapeError("ComplexBatchNorm gradient shape " +
                     ShapeToString(grad_out.shape()));
  }
  const Extent e = ChannelExtent(grad_out);
  ComplexTensor dx(grad_out.shape());
  for (std::size_t b = 0; b < e.batch; ++b) {
    for (std::size_t c = 0; c < channels_; ++c) {
      const Sym2& w = whitening_[c];
      const double g = gamma_[c];
      const std::size_t base = (b * channels_ + c) * e.spatial;
      double dgamma = 0.0, dbr = 0.0, dbi = 0.0;
      for (std::size_t s = 0; s < e.spatial; ++s) {
        const double gr = grad_out.re()[base + s];
        const double gi = grad_out.im()[base + s];
        dgamma += gr * x_hat_->re()[base + s] + gi * x_hat_->im()[base + s];
        dbr += gr;
        dbi += gi;
        dx.re()[base + s] = g * (w.rr * gr + w.ri * gi);
        dx.im()[base + s] = g * (w.ri * gr + w.ii * gi);
      }
      gamma_grad_[c] += dgamma;
      beta_re_grad_[c] += dbr;
      beta_im_grad_[c] += dbi;
    }
  }
  return dx;
}

std::vector<ParamView> ComplexBatchNorm::Params() {
  const Shape shape{channels_};
  return {{"gamma", shape, gamma_, gamma_grad_},
          {"beta.re", shape, beta_re_, beta_re_grad_},
          {"beta.im", shape, beta_im_, beta_im_grad_}};
}

std::vector<BufferView> ComplexBatchNorm::Buffers() {
  return {{"ring", {memory_, channels_, kStatWidth}, ring_},
          {"cursor", {2}, cursor_}};
}

}  // namespace cvgan
