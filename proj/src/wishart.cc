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

#include <cmath>
#include <string>

#include "cvgan/data.h"

namespace cvgan {
namespace {

using cd = std::complex<double>;

cd ToStd(Complex z) { return {z.re, z.im}; }

}  // namespace

std::complex<double> CoherencyPixel::at(int row, int col) const {
  if (row == col) {
    return row == 0 ? t11 : row == 1 ? t22 : t33;
  }
  if (row > col) return std::conj(at(col, row));
  if (row == 0) return ToStd(col == 1 ? t12 : t13);
  return ToStd(t23);
}

std::array<double, 9> CoherencyPixel::ToRecord() const {
  return {t11, t22, t33, t12.re, t12.im, t13.re, t13.im, t23.re, t23.im};
}

CoherencyPixel CoherencyPixel::FromRecord(std::span<const double, 9> r) {
  return {r[0], r[1], r[2], {r[3], r[4]}, {r[5], r[6]}, {r[7], r[8]}};
}

bool IsPositiveSemidefinite(const CoherencyPixel& t, double tolerance) {
  // Tolerances scale with the matrix magnitude so the check is invariant to
  // the units of T.
  const double scale = std::max(1.0, std::abs(t.t11) + std::abs(t.t22) +
                                         std::abs(t.t33));
  const double tol1 = tolerance * scale;
  const double tol2 = tol1 * scale;
  const double tol3 = tol2 * scale;
  if (t.t11 < -tol1 || t.t22 < -tol1 || t.t33 < -tol1) return false;
  const double n12 = std::norm(ToStd(t.t12));
  const double n13 = std::norm(ToStd(t.t13));
  const double n23 = std::norm(ToStd(t.t23));
  if (t.t11 * t.t22 - n12 < -tol2) return false;
  if (t.t11 * t.t33 - n13 < -tol2) return false;
  if (t.t22 * t.t33 - n23 < -tol2) return false;
  const double det =
      t.t11 * t.t22 * t.t33 +
      2.0 * std::real(ToStd(t.t12) * ToStd(t.t23) * std::conj(ToStd(t.t13))) -
      t.t11 * n23 - t.t22 * n13 - t.t33 * n12;
  return det >= -tol3;
}

CholeskyError::CholeskyError(int leading_minor, double pivot)
    : std::invalid_argument(
          "covariance is not positive semi-definite: leading minor " +
          std::to_string(leading_minor) + " has pivot " +
          std::to_string(pivot)),
      leading_minor_(leading_minor) {}

WishartSampler::WishartSampler(const CoherencyPixel& sigma, int looks)
    : looks_(looks) {
  if (looks < 1) throw std::invalid_argument("looks must be >= 1");
  // Lower-triangular L with L L^H = sigma, stored as
  // {L00, L10, L11, L20, L21, L22}.
  const double scale = std::abs(sigma.t11) + std::abs(sigma.t22) +
                       std::abs(sigma.t33);
  const double tol = 1e-12 * std::max(scale, 1e-300);
  auto pivot = [&](double d, int minor) {
    if (d < -tol) throw CholeskyError(minor, d);
    return std::sqrt(std::max(d, 0.0));
  };
  auto safe_div = [](cd num, double den) {
    return den > 0.0 ? num / den : cd{};
  };
  const double l00 = pivot(sigma.t11, 1);
  const cd l10 = safe_div(sigma.at(1, 0), l00);
  const cd l20 = safe_div(sigma.at(2, 0), l00);
  const double l11 = pivot(sigma.t22 - std::norm(l10), 2);
  const cd l21 = safe_div(sigma.at(2, 1) - l20 * std::conj(l10), l11);
  const double l22 = pivot(sigma.t33 - std::norm(l20) - std::norm(l21), 3);
  chol_ = {l00, l10, l11, l20, l21, l22};
}

CoherencyPixel WishartSampler::operator()(std::mt19937_64& rng) const {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  std::array<cd, 6> acc{};  // T11, T22, T33, T12, T13, T23
  for (int k = 0; k < looks_; ++k) {
    const cd g0{normal(rng), normal(rng)};
    const cd g1{normal(rng), normal(rng)};
    const cd g2{normal(rng), normal(rng)};
    const cd s0 = chol_[0] * g0;
    const cd s1 = chol_[1] * g0 + chol_[2] * g1;
    const cd s2 = chol_[3] * g0 + chol_[4] * g1 + chol_[5] * g2;
    acc[0] += std::norm(s0);
    acc[1] += std::norm(s1);
    acc[2] += std::norm(s2);
    acc[3] += s0 * std::conj(s1);
    acc[4] += s0 * std::conj(s2);
    acc[5] += s1 * std::conj(s2);
  }
  const double inv = 1.0 / looks_;
  auto z = [&](cd v) { return Complex{v.real() * inv, v.imag() * inv}; };
  return {acc[0].real() * inv, acc[1].real() * inv, acc[2].real() * inv,
          z(acc[3]), z(acc[4]), z(acc[5])};
}

CoherencyPixel SampleWishart(const CoherencyPixel& sigma, int looks,
                             std::mt19937_64& rng) {
  return WishartSampler(sigma, looks)(rng);
}

}  // namespace cvgan
