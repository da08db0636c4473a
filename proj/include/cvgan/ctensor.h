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

#ifndef CVGAN_CTENSOR_H_
#define CVGAN_CTENSOR_H_

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cvgan {

// Complex scalar in algebraic form a + ib.
struct Complex {
  double re = 0.0;
  double im = 0.0;

  friend constexpr bool operator==(const Complex&, const Complex&) = default;
};

constexpr Complex operator*(Complex z1, Complex z2) {
  return {z1.re * z2.re - z1.im * z2.im, z1.re * z2.im + z1.im * z2.re};
}
constexpr Complex operator+(Complex z1, Complex z2) {
  return {z1.re + z2.re, z1.im + z2.im};
}
constexpr Complex operator-(Complex z1, Complex z2) {
  return {z1.re - z2.re, z1.im - z2.im};
}
constexpr Complex operator-(Complex z) { return {-z.re, -z.im}; }
constexpr Complex Conj(Complex z) { return {z.re, -z.im}; }
inline double Abs(Complex z) { return std::hypot(z.re, z.im); }

using Shape = std::vector<std::size_t>;

std::size_t NumElements(const Shape& shape);
std::string ShapeToString(const Shape& shape);

class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Dense row-major real tensor.
class RealTensor {
 public:
  RealTensor() = default;
  explicit RealTensor(Shape shape);
  RealTensor(Shape shape, std::vector<double> data);

  const Shape& shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t dim(std::size_t axis) const { return shape_.at(axis); }
  std::size_t size() const { return data_.size(); }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }
  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  void Reshape(Shape shape);

 private:
  Shape shape_;
  std::vector<double> data_;
};

// Dense row-major complex tensor stored as two planes (real and imaginary)
// sharing one shape.
class ComplexTensor {
 public:
  ComplexTensor() = default;
  explicit ComplexTensor(Shape shape);
  ComplexTensor(Shape shape, std::vector<double> re, std::vector<double> im);

  static ComplexTensor Filled(Shape shape, Complex value);

  const Shape& shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t dim(std::size_t axis) const { return shape_.at(axis); }
  std::size_t size() const { return re_.size(); }

  std::span<double> re() { return re_; }
  std::span<const double> re() const { return re_; }
  std::span<double> im() { return im_; }
  std::span<const double> im() const { return im_; }

  Complex at(std::size_t i) const { return {re_[i], im_[i]}; }
  void set(std::size_t i, Complex z) {
    re_[i] = z.re;
    im_[i] = z.im;
  }

  void Fill(Complex value);
  // Same data under a new shape; element count must be preserved.
  void Reshape(Shape shape);
  ComplexTensor Reshaped(Shape shape) const;

  friend bool operator==(const ComplexTensor&, const ComplexTensor&) = default;

 private:
  Shape shape_;
  std::vector<double> re_;
  std::vector<double> im_;
};

enum class ElementwiseOp { kAdd, kSub, kMul };

// Applies the scalar rule elementwise. Shapes must match exactly.
ComplexTensor Elementwise(ElementwiseOp op, const ComplexTensor& a,
                          const ComplexTensor& b);

ComplexTensor operator+(const ComplexTensor& a, const ComplexTensor& b);
ComplexTensor operator-(const ComplexTensor& a, const ComplexTensor& b);
ComplexTensor operator*(const ComplexTensor& a, const ComplexTensor& b);
ComplexTensor operator*(Complex scalar, const ComplexTensor& x);
ComplexTensor Negate(const ComplexTensor& x);

// Rank-2 complex product a[M,K] * b[K,N] computed as four real matrix
// products, one subtraction and one addition.
ComplexTensor ComplexMatmul(const ComplexTensor& a, const ComplexTensor& b);

// Real tensor whose trailing axis is doubled: [..., n] -> [..., 2n] with the
// real plane in the first half and the imaginary plane in the second. A
// rank-0 input yields shape {2}.
RealTensor ConcatRealImag(const ComplexTensor& x);

// Inverse of ConcatRealImag for a given complex target shape.
ComplexTensor SplitRealImag(const RealTensor& x, const Shape& complex_shape);

}  // namespace cvgan

#endif  // CVGAN_CTENSOR_H_
