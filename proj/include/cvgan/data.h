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

#ifndef CVGAN_DATA_H_
#define CVGAN_DATA_H_

#include <array>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cvgan/ctensor.h"

namespace cvgan {

// 3x3 Hermitian coherency matrix T. Only the upper triangle is stored; the
// diagonal is real.
struct CoherencyPixel {
  double t11 = 0.0, t22 = 0.0, t33 = 0.0;
  Complex t12, t13, t23;

  std::complex<double> at(int row, int col) const;

  // T11, T22, T33, ReT12, ImT12, ReT13, ImT13, ReT23, ImT23
  std::array<double, 9> ToRecord() const;
  static CoherencyPixel FromRecord(std::span<const double, 9> record);

  friend bool operator==(const CoherencyPixel&,
                         const CoherencyPixel&) = default;
};

// All principal minors >= -tolerance.
bool IsPositiveSemidefinite(const CoherencyPixel& t, double tolerance = 1e-9);

class CholeskyError : public std::invalid_argument {
 public:
  CholeskyError(int leading_minor, double pivot);
  int leading_minor() const { return leading_minor_; }

 private:
  int leading_minor_;
};

// Draws T = (1/L) sum_k s_k s_k^H with s_k ~ CN(0, sigma), i.e. a scaled
// complex Wishart matrix with L looks and E[T] = sigma.
class WishartSampler {
 public:
  // Throws CholeskyError naming the first non-positive leading minor.
  WishartSampler(const CoherencyPixel& sigma, int looks);

  CoherencyPixel operator()(std::mt19937_64& rng) const;

 private:
  std::array<std::complex<double>, 6> chol_;  // lower triangle, row-major
  int looks_;
};

CoherencyPixel SampleWishart(const CoherencyPixel& sigma, int looks,
                             std::mt19937_64& rng);

// H x W grid of coherency matrices with an aligned label grid
// (0 = unlabeled, 1..K = class).
struct CoherencyRaster {
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<CoherencyPixel> pixels;  // row-major
  std::vector<std::int16_t> labels;    // row-major

  CoherencyRaster() = default;
  CoherencyRaster(std::size_t h, std::size_t w)
      : height(h), width(w), pixels(h * w), labels(h * w, 0) {}

  const CoherencyPixel& pixel(std::size_t r, std::size_t c) const {
    return pixels[r * width + c];
  }
  std::int16_t label(std::size_t r, std::size_t c) const {
    return labels[r * width + c];
  }
  int MaxLabel() const;

  friend bool operator==(const CoherencyRaster&,
                         const CoherencyRaster&) = default;
};

enum class Layout { kStripes, kBlocks };

Layout ParseLayout(const std::string& name);

// Label grid for K classes. Stripes: K vertical bands of equal width.
// Blocks: a ceil(sqrt(K))-column grid of cells assigned classes cyclically.
std::vector<std::int16_t> LayoutLabels(Layout layout, int classes,
                                       std::size_t height, std::size_t width);

// Fixed table of diagonal-dominant class covariances with distinct diagonal
// scales and off-diagonal phases.
inline constexpr int kMaxBuiltinClasses = 8;
std::vector<CoherencyPixel> BuiltinClassCovariances(int classes);

struct SceneSpec {
  int classes = 3;
  std::size_t height = 128;
  std::size_t width = 128;
  int looks = 8;
  Layout layout = Layout::kStripes;
  std::uint64_t seed = 0;
  std::vector<CoherencyPixel> class_covariances;  // empty: built-in table
};

// Wishart-sampled synthetic scene. Each pixel draws from its own stream
// derived from (seed, pixel index); values are rounded to single precision,
// the storage precision of the raster file.
CoherencyRaster GenerateScene(const SceneSpec& spec);

inline constexpr std::size_t kPatchChannels = 6;

// data: [6, P, P] with channels T11, T22, T33, T12, T13, T23.
struct Patch {
  ComplexTensor data;
  int label = 0;
  std::size_t row = 0;  // top-left corner in the source raster
  std::size_t col = 0;
};

// Sliding-window patches; each takes the label of pixel
// (row + P/2, col + P/2).
std::vector<Patch> ExtractPatches(const CoherencyRaster& raster,
                                  std::size_t patch_size, std::size_t stride);

// Rebuilds the coherency matrix stored at (r, c) of a patch.
CoherencyPixel PixelFromPatch(const Patch& patch, std::size_t r,
                              std::size_t c);

// Stacks patch tensors into [N, 6, P, P].
ComplexTensor StackPatches(std::span<const Patch> patches);
ComplexTensor StackPatches(std::span<const Patch> patches,
                           std::span<const std::size_t> indices);

// Lays N patches [N, 6, P, P] side by side into a P x (N*P) raster.
CoherencyRaster TilePatches(const ComplexTensor& batch);

struct LabeledQuota {
  enum class Kind { kRatio, kCount };
  Kind kind = Kind::kCount;
  double ratio = 0.0;
  std::size_t count = 0;

  static LabeledQuota Ratio(double r) { return {Kind::kRatio, r, 0}; }
  static LabeledQuota Count(std::size_t n) { return {Kind::kCount, 0.0, n}; }
  // floor(ratio * population), at least 1; or the fixed count.
  std::size_t For(std::size_t population) const;
};

struct SplitSpec {
  LabeledQuota quota = LabeledQuota::Count(10);
  double unlabeled_fraction = 0.1;
  std::uint64_t seed = 0;
};

struct DataSplit {
  std::vector<Patch> labeled;    // training patches with labels
  std::vector<Patch> unlabeled;  // label stripped to 0
  std::vector<Patch> test;       // remaining labeled patches
  std::vector<std::string> warnings;
};

// Per class, draws the quota without replacement into the labeled set and
// leaves the rest for testing. The unlabeled pool is drawn from all patches,
// whatever their label.
DataSplit SplitPatches(std::span<const Patch> patches, const SplitSpec& spec);

// Per channel and plane affine standardization.
struct NormalizationStats {
  static constexpr double kStdFloor = 1e-8;

  std::vector<double> mean_re, mean_im, std_re, std_im;

  std::size_t channels() const { return mean_re.size(); }
};

NormalizationStats ComputeNormalization(std::span<const Patch> labeled,
                                        std::span<const Patch> unlabeled);
// x is [..., C, H, W] with C = stats.channels() at axis rank-3 or
// [C, H, W]; applied in place.
void Normalize(ComplexTensor& x, const NormalizationStats& stats);
void Denormalize(ComplexTensor& x, const NormalizationStats& stats);
void Normalize(std::vector<Patch>& patches, const NormalizationStats& stats);

// ---------------------------------------------------------------------------
// Raster files. Coherency: "CTM1", u32 height, u32 width, H*W records of
// 9 f32. Labels: "LBL1", u32 height, u32 width, H*W i16. Little-endian.

class RasterFileError : public std::runtime_error {
 public:
  enum class Kind { kIo, kBadMagic, kTruncated, kDimensionOverflow,
                    kMismatch };
  RasterFileError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

void WriteCoherencyFile(const CoherencyRaster& raster,
                        const std::filesystem::path& path);
void WriteLabelFile(const CoherencyRaster& raster,
                    const std::filesystem::path& path);
// Labels of the returned raster are all 0.
CoherencyRaster ReadCoherencyFile(const std::filesystem::path& path);
// Returns a raster of the file's size with default pixels and its labels.
CoherencyRaster ReadLabelFile(const std::filesystem::path& path);

void SaveRaster(const CoherencyRaster& raster,
                const std::filesystem::path& data_path,
                const std::filesystem::path& label_path);
CoherencyRaster LoadRaster(const std::filesystem::path& data_path,
                           const std::filesystem::path& label_path);

}  // namespace cvgan

#endif  // CVGAN_DATA_H_
