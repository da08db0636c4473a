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

#include "cvgan/ctensor.h"

#include <algorithm>
#include <sstream>
#include <utility>

#include "cvgan/complex_mask.h"

namespace cvgan {

std::size_t NumElements(const Shape& shape) {
  std::size_t n = 1;
  for (std::size_t d : shape) n *= d;
  return n;
}

std::string ShapeToString(const Shape& shape) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) os << ", ";
    os << shape[i];
  }
  os << ']';
  return os.str();
}

namespace {

void CheckSize(const Shape& shape, std::size_t re, std::size_t im) {
  const std::size_t n = NumElements(shape);
  if (re != n || im != n) {
    throw ShapeError("tensor data size does not match shape " +
                     ShapeToString(shape));
  }
}

void RequireSameShape(const ComplexTensor& a, const ComplexTensor& b) {
  if (a.shape() != b.shape()) {
    throw ShapeError("shape mismatch: " + ShapeToString(a.shape()) + " vs " +
                     ShapeToString(b.shape()));
  }
}

}  // namespace

RealTensor::RealTensor(Shape shape)
    : shape_(std::move(shape)), data_(NumElements(shape_), 0.0) {}

RealTensor::RealTensor(Shape shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  CheckSize(shape_, data_.size(), data_.size());
}

void RealTensor::Reshape(Shape shape) {
  if (NumElements(shape) != data_.size()) {
    throw ShapeError("cannot reshape " + ShapeToString(shape_) + " to " +
                     ShapeToString(shape));
  }
  shape_ = std::move(shape);
}

ComplexTensor::ComplexTensor(Shape shape)
    : shape_(std::move(shape)),
      re_(NumElements(shape_), 0.0),
      im_(NumElements(shape_), 0.0) {}

ComplexTensor::ComplexTensor(Shape shape, std::vector<double> re,
                             std::vector<double> im)
    : shape_(std::move(shape)), re_(std::move(re)), im_(std::move(im)) {
  CheckSize(shape_, re_.size(), im_.size());
}

ComplexTensor ComplexTensor::Filled(Shape shape, Complex value) {
  ComplexTensor t(std::move(shape));
  t.Fill(value);
  return t;
}

void ComplexTensor::Fill(Complex value) {
  std::fill(re_.begin(), re_.end(), value.re);
  std::fill(im_.begin(), im_.end(), value.im);
}

void ComplexTensor::Reshape(Shape shape) {
  if (NumElements(shape) != re_.size()) {
    throw ShapeError("cannot reshape " + ShapeToString(shape_) + " to " +
                     ShapeToString(shape));
  }
  shape_ = std::move(shape);
}

ComplexTensor ComplexTensor::Reshaped(Shape shape) const {
  ComplexTensor t = *this;
  t.Reshape(std::move(shape));
  return t;
}

ComplexTensor Elementwise(ElementwiseOp op, const ComplexTensor& a,
                          const ComplexTensor& b) {
  RequireSameShape(a, b);
  ComplexTensor out(a.shape());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Complex x = a.at(i);
    const Complex y = b.at(i);
    switch (op) {
      case ElementwiseOp::kAdd: out.set(i, x + y); break;
      case ElementwiseOp::kSub: out.set(i, x - y); break;
      case ElementwiseOp::kMul: out.set(i, x * y); break;
    }
  }
  return out;
}

ComplexTensor operator+(const ComplexTensor& a, const ComplexTensor& b) {
  return Elementwise(ElementwiseOp::kAdd, a, b);
}

ComplexTensor operator-(const ComplexTensor& a, const ComplexTensor& b) {
  return Elementwise(ElementwiseOp::kSub, a, b);
}

ComplexTensor operator*(const ComplexTensor& a, const ComplexTensor& b) {
  return Elementwise(ElementwiseOp::kMul, a, b);
}

ComplexTensor operator*(Complex scalar, const ComplexTensor& x) {
  ComplexTensor out(x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) out.set(i, scalar * x.at(i));
  return out;
}

ComplexTensor Negate(const ComplexTensor& x) {
  return Complex{-1.0, 0.0} * x;
}

ComplexTensor ComplexMatmul(const ComplexTensor& a, const ComplexTensor& b) {
  if (a.rank() != 2 || b.rank() != 2 || a.dim(1) != b.dim(0)) {
    throw ShapeError("matmul dimension mismatch: " + ShapeToString(a.shape()) +
                     " x " + ShapeToString(b.shape()));
  }
  const MaskGeometry g{.m = a.dim(0), .n = b.dim(1), .k = a.dim(1)};
  ComplexTensor out({g.m, g.n});
  MaskForward(g, {a.re(), a.im()}, {b.re(), b.im()}, {out.re(), out.im()});
  return out;
}

RealTensor ConcatRealImag(const ComplexTensor& x) {
  Shape shape = x.shape();
  if (shape.empty()) shape.push_back(1);
  const std::size_t inner = shape.back();
  const std::size_t outer = inner ? x.size() / inner : 0;
  shape.back() = 2 * inner;
  RealTensor out(shape);
  auto re = x.re();
  auto im = x.im();
  auto dst = out.data();
  for (std::size_t r = 0; r < outer; ++r) {
    std::copy_n(re.begin() + r * inner, inner, dst.begin() + 2 * r * inner);
    std::copy_n(im.begin() + r * inner, inner,
                dst.begin() + (2 * r + 1) * inner);
  }
  return out;
}

ComplexTensor SplitRealImag(const RealTensor& x, const Shape& complex_shape) {
  ComplexTensor out(complex_shape);
  if (x.size() != 2 * out.size()) {
    throw ShapeError("cannot split " + ShapeToString(x.shape()) + " into " +
                     ShapeToString(complex_shape));
  }
  const std::size_t inner = complex_shape.empty() ? 1 : complex_shape.back();
  const std::size_t outer = inner ? out.size() / inner : 0;
  auto src = x.data();
  for (std::size_t r = 0; r < outer; ++r) {
    std::copy_n(src.begin() + 2 * r * inner, inner,
                out.re().begin() + r * inner);
    std::copy_n(src.begin() + (2 * r + 1) * inner, inner,
                out.im().begin() + r * inner);
  }
  return out;
}

}  // namespace cvgan
