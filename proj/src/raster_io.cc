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

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "cvgan/data.h"

namespace cvgan {
namespace {

constexpr char kCoherencyMagic[4] = {'C', 'T', 'M', '1'};
constexpr char kLabelMagic[4] = {'L', 'B', 'L', '1'};
constexpr std::size_t kHeaderBytes = 12;
constexpr std::size_t kCoherencyRecordBytes = 9 * 4;
constexpr std::size_t kLabelRecordBytes = 2;
// Larger rasters are rejected before any allocation happens.
constexpr std::uint64_t kMaxPixels = std::uint64_t{1} << 28;

using Kind = RasterFileError::Kind;

void PutU32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>(v >> (8 * i)));
}

std::uint32_t GetU32(const std::string& in, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[at + i]))
         << (8 * i);
  }
  return v;
}

void WriteBytes(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw RasterFileError(Kind::kIo, "cannot open " + path.string() +
                                         " for writing");
  }
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw RasterFileError(Kind::kIo, "write failed: " + path.string());
}

std::string ReadBytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw RasterFileError(Kind::kIo, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string Header(const char (&magic)[4], const CoherencyRaster& raster) {
  if (raster.height > UINT32_MAX || raster.width > UINT32_MAX) {
    throw RasterFileError(Kind::kDimensionOverflow,
                          "raster dimensions exceed u32");
  }
  std::string out(magic, 4);
  PutU32(out, static_cast<std::uint32_t>(raster.height));
  PutU32(out, static_cast<std::uint32_t>(raster.width));
  return out;
}

// Validates magic, dimensions and payload length; returns {height, width}.
std::pair<std::size_t, std::size_t> ParseHeader(const std::string& bytes,
                                                const char (&magic)[4],
                                                std::size_t record_bytes,
                                                const std::string& name) {
  if (bytes.size() >= 4 && std::memcmp(bytes.data(), magic, 4) != 0) {
    throw RasterFileError(Kind::kBadMagic,
                          name + ": bad magic, expected " +
                              std::string(magic, 4));
  }
  if (bytes.size() < kHeaderBytes) {
    throw RasterFileError(Kind::kTruncated,
                          name + ": truncated header, expected " +
                              std::to_string(kHeaderBytes) + " bytes, got " +
                              std::to_string(bytes.size()));
  }
  const std::uint64_t h = GetU32(bytes, 4);
  const std::uint64_t w = GetU32(bytes, 8);
  if (h == 0 || w == 0 || h * w > kMaxPixels) {
    throw RasterFileError(Kind::kDimensionOverflow,
                          name + ": dimension overflow (" + std::to_string(h) +
                              "x" + std::to_string(w) + ")");
  }
  const std::uint64_t expected = kHeaderBytes + h * w * record_bytes;
  if (bytes.size() < expected) {
    throw RasterFileError(Kind::kTruncated,
                          name + ": truncated payload, expected " +
                              std::to_string(expected) + " bytes, got " +
                              std::to_string(bytes.size()));
  }
  if (bytes.size() > expected) {
    throw RasterFileError(Kind::kMismatch,
                          name + ": " + std::to_string(bytes.size() - expected) +
                              " unexpected trailing bytes");
  }
  return {static_cast<std::size_t>(h), static_cast<std::size_t>(w)};
}

}  // namespace

void WriteCoherencyFile(const CoherencyRaster& raster,
                        const std::filesystem::path& path) {
  std::string out = Header(kCoherencyMagic, raster);
  out.reserve(kHeaderBytes + raster.pixels.size() * kCoherencyRecordBytes);
  for (const CoherencyPixel& t : raster.pixels) {
    for (double v : t.ToRecord()) {
      PutU32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
    }
  }
  WriteBytes(path, out);
}

void WriteLabelFile(const CoherencyRaster& raster,
                    const std::filesystem::path& path) {
  std::string out = Header(kLabelMagic, raster);
  for (std::int16_t l : raster.labels) {
    const auto u = static_cast<std::uint16_t>(l);
    out.push_back(static_cast<char>(u & 0xff));
    out.push_back(static_cast<char>(u >> 8));
  }
  WriteBytes(path, out);
}

CoherencyRaster ReadCoherencyFile(const std::filesystem::path& path) {
  const std::string bytes = ReadBytes(path);
  const auto [h, w] =
      ParseHeader(bytes, kCoherencyMagic, kCoherencyRecordBytes, path.string());
  CoherencyRaster raster(h, w);
  std::size_t at = kHeaderBytes;
  for (CoherencyPixel& t : raster.pixels) {
    std::array<double, 9> rec;
    for (double& v : rec) {
      v = std::bit_cast<float>(GetU32(bytes, at));
      at += 4;
    }
    t = CoherencyPixel::FromRecord(rec);
  }
  return raster;
}

CoherencyRaster ReadLabelFile(const std::filesystem::path& path) {
  const std::string bytes = ReadBytes(path);
  const auto [h, w] =
      ParseHeader(bytes, kLabelMagic, kLabelRecordBytes, path.string());
  CoherencyRaster raster(h, w);
  for (std::size_t i = 0; i < raster.labels.size(); ++i) {
    const auto lo = static_cast<unsigned char>(bytes[kHeaderBytes + 2 * i]);
    const auto hi = static_cast<unsigned char>(bytes[kHeaderBytes + 2 * i + 1]);
    raster.labels[i] = static_cast<std::int16_t>(
        static_cast<std::uint16_t>(lo | (hi << 8)));
  }
  return raster;
}

void SaveRaster(const CoherencyRaster& raster,
                const std::filesystem::path& data_path,
                const std::filesystem::path& label_path) {
  WriteCoherencyFile(raster, data_path);
  WriteLabelFile(raster, label_path);
}

CoherencyRaster LoadRaster(const std::filesystem::path& data_path,
                           const std::filesystem::path& label_path) {
  CoherencyRaster raster = ReadCoherencyFile(data_path);
  CoherencyRaster labels = ReadLabelFile(label_path);
  if (labels.height != raster.height || labels.width != raster.width) {
    throw RasterFileError(
        Kind::kMismatch,
        "label grid " + std::to_string(labels.height) + "x" +
            std::to_string(labels.width) + " does not match raster " +
            std::to_string(raster.height) + "x" +
            std::to_string(raster.width));
  }
  for (std::int16_t l : labels.labels) {
    if (l < 0) {
      throw RasterFileError(Kind::kMismatch,
                            "negative label " + std::to_string(l) + " in " +
                                label_path.string());
    }
  }
  raster.labels = std::move(labels.labels);
  return raster;
}

}  // namespace cvgan
