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
#include <fstream>
#include <iterator>
#include <map>
#include <string>

#include "cvgan/gan.h"

namespace cvgan {
namespace {

using Kind = CheckpointError::Kind;

constexpr char kMagic[4] = {'C', 'V', 'G', '1'};
constexpr std::uint8_t kF32 = 0;
constexpr std::uint8_t kF64 = 1;
constexpr std::size_t kMaxRank = 8;

struct Entry {
  Shape shape;
  std::vector<double> values;
};

class Writer {
 public:
  void Bytes(const void* p, std::size_t n) {
    out_.append(static_cast<const char*>(p), n);
  }
  void U8(std::uint8_t v) { out_.push_back(static_cast<char>(v)); }
  void U16(std::uint16_t v) {
    for (int i = 0; i < 2; ++i) U8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void U32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) U8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void U64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) U8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void Entry(const std::string& name, const Shape& shape,
             std::span<const double> values) {
    U16(static_cast<std::uint16_t>(name.size()));
    Bytes(name.data(), name.size());
    U8(kF64);
    U8(static_cast<std::uint8_t>(shape.size()));
    for (std::size_t d : shape) U32(static_cast<std::uint32_t>(d));
    for (double v : values) U64(std::bit_cast<std::uint64_t>(v));
  }
  const std::string& str() const { return out_; }

 private:
  std::string out_;
};

class Reader {
 public:
  Reader(const std::string& bytes, std::string name)
      : bytes_(bytes), name_(std::move(name)) {}

  std::uint64_t Uint(std::size_t width) {
    Need(width);
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < width; ++i) {
      v |= static_cast<std::uint64_t>(
               static_cast<unsigned char>(bytes_[at_ + i]))
           << (8 * i);
    }
    at_ += width;
    return v;
  }
  std::string Bytes(std::size_t n) {
    Need(n);
    std::string s = bytes_.substr(at_, n);
    at_ += n;
    return s;
  }
  bool done() const { return at_ == bytes_.size(); }
  std::size_t offset() const { return at_; }
  const std::string& name() const { return name_; }

 private:
  void Need(std::size_t n) const {
    if (bytes_.size() - at_ < n) {
      throw CheckpointError(
          Kind::kTruncated,
          name_ + ": truncated at byte " + std::to_string(at_) + ", needed " +
              std::to_string(n) + " more bytes, " +
              std::to_string(bytes_.size() - at_) + " remain");
    }
  }

  const std::string& bytes_;
  std::string name_;
  std::size_t at_ = 0;
};

std::vector<std::pair<std::string, struct Entry>> ConfigEntries(
    const TrainingConfig& c) {
  auto scalar = [](double v) { return Entry{{1}, {v}}; };
  auto list = [](const std::vector<std::size_t>& v) {
    return Entry{{v.size()}, std::vector<double>(v.begin(), v.end())};
  };
  return {
      {"config.patch_size", scalar(static_cast<double>(c.patch_size))},
      {"config.lr", scalar(c.lr)},
      {"config.beta1", scalar(c.beta1)},
      {"config.beta2", scalar(c.beta2)},
      {"config.epochs", scalar(static_cast<double>(c.epochs))},
      {"config.batch_size", scalar(static_cast<double>(c.batch_size))},
      {"config.memory", scalar(static_cast<double>(c.memory))},
      {"config.latent", scalar(static_cast<double>(c.latent))},
      {"config.seed",
       Entry{{2},
             {static_cast<double>(c.seed >> 32),
              static_cast<double>(c.seed & 0xffffffffu)}}},
      {"config.mode",
       scalar(c.mode == TrainingMode::kSemisupervised ? 0.0 : 1.0)},
      {"config.classes", scalar(static_cast<double>(c.classes))},
      {"config.generator_widths", list(c.generator_widths)},
      {"config.discriminator_widths", list(c.discriminator_widths)},
  };
}

const Entry& Require(const std::map<std::string, Entry>& entries,
                     const std::string& key, const std::string& file) {
  const auto it = entries.find(key);
  if (it == entries.end()) {
    throw CheckpointError(Kind::kMissing, file + ": missing entry " + key);
  }
  return it->second;
}

double Scalar(const std::map<std::string, Entry>& entries,
              const std::string& key, const std::string& file) {
  const Entry& e = Require(entries, key, file);
  if (e.values.size() != 1) {
    throw CheckpointError(Kind::kMalformed,
                          file + ": entry " + key + " is not a scalar");
  }
  return e.values[0];
}

std::size_t Count(const std::map<std::string, Entry>& entries,
                  const std::string& key, const std::string& file) {
  const double v = Scalar(entries, key, file);
  if (!(v >= 0.0) || v > 1e9 || v != static_cast<double>(
                                        static_cast<std::size_t>(v))) {
    throw CheckpointError(Kind::kMalformed,
                          file + ": entry " + key + " is not a count");
  }
  return static_cast<std::size_t>(v);
}

std::vector<std::size_t> Counts(const std::map<std::string, Entry>& entries,
                                const std::string& key,
                                const std::string& file) {
  const Entry& e = Require(entries, key, file);
  std::vector<std::size_t> out;
  for (double v : e.values) {
    if (!(v >= 1.0) || v > 1e6) {
      throw CheckpointError(Kind::kMalformed,
                            file + ": entry " + key + " has a bad width");
    }
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

TrainingConfig ParseConfig(const std::map<std::string, Entry>& e,
                           const std::string& file) {
  TrainingConfig c;
  c.patch_size = Count(e, "config.patch_size", file);
  c.lr = Scalar(e, "config.lr", file);
  c.beta1 = Scalar(e, "config.beta1", file);
  c.beta2 = Scalar(e, "config.beta2", file);
  c.epochs = Count(e, "config.epochs", file);
  c.batch_size = Count(e, "config.batch_size", file);
  c.memory = Count(e, "config.memory", file);
  c.latent = Count(e, "config.latent", file);
  const Entry& seed = Require(e, "config.seed", file);
  if (seed.values.size() != 2) {
    throw CheckpointError(Kind::kMalformed, file + ": bad config.seed");
  }
  c.seed = (static_cast<std::uint64_t>(seed.values[0]) << 32) |
           static_cast<std::uint64_t>(seed.values[1]);
  c.mode = Scalar(e, "config.mode", file) == 0.0 ? TrainingMode::kSemisupervised
                                                 : TrainingMode::kSupervised;
  c.classes = Count(e, "config.classes", file);
  c.generator_widths = Counts(e, "config.generator_widths", file);
  c.discriminator_widths = Counts(e, "config.discriminator_widths", file);
  if (c.classes < 1 || c.memory < 1 || c.latent < 1 || c.patch_size < 1) {
    throw CheckpointError(Kind::kMalformed,
                          file + ": config holds a zero size");
  }
  return c;
}

}  // namespace

void SaveCheckpoint(Model& model, const std::filesystem::path& path) {
  const auto config = ConfigEntries(model.config());
  const auto state = model.State();
  Writer w;
  w.Bytes(kMagic, sizeof(kMagic));
  w.U32(static_cast<std::uint32_t>(config.size() + state.size()));
  for (const auto& [name, entry] : config) {
    w.Entry(name, entry.shape, entry.values);
  }
  for (const auto& b : state) w.Entry(b.name, b.shape, b.value);

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw CheckpointError(Kind::kIo,
                          "cannot open " + path.string() + " for writing");
  }
  out.write(w.str().data(), static_cast<std::streamsize>(w.str().size()));
  if (!out) {
    throw CheckpointError(Kind::kIo, "failed writing " + path.string());
  }
}

std::unique_ptr<Model> LoadCheckpoint(const std::filesystem::path& path) {
  const std::string file = path.string();
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError(Kind::kIo, "cannot open " + file);
  const std::string bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
  if (bytes.size() >= 4 && bytes.compare(0, 4, kMagic, 4) != 0) {
    throw CheckpointError(Kind::kBadMagic, file + ": bad magic (expected CVG1)");
  }
  Reader r(bytes, file);
  r.Bytes(4);
  const std::uint64_t count = r.Uint(4);

  std::map<std::string, Entry> entries;
  for (std::uint64_t i = 0; i < count; ++i) {
    const std::string name = r.Bytes(r.Uint(2));
    const auto dtype = static_cast<std::uint8_t>(r.Uint(1));
    const std::size_t rank = r.Uint(1);
    if ((dtype != kF32 && dtype != kF64) || rank > kMaxRank) {
      throw CheckpointError(Kind::kMalformed,
                            file + ": entry " + name + " has dtype " +
                                std::to_string(dtype) + " and rank " +
                                std::to_string(rank));
    }
    Entry e;
    std::uint64_t elements = 1;
    for (std::size_t d = 0; d < rank; ++d) {
      e.shape.push_back(r.Uint(4));
      elements *= e.shape.back();
      if (elements > bytes.size()) {
        throw CheckpointError(Kind::kTruncated,
                              file + ": entry " + name + " claims " +
                                  ShapeToString(e.shape) +
                                  " elements beyond the file size");
      }
    }
    e.values.resize(elements);
    for (double& v : e.values) {
      v = dtype == kF64 ? std::bit_cast<double>(r.Uint(8))
                        : std::bit_cast<float>(
                              static_cast<std::uint32_t>(r.Uint(4)));
    }
    if (!entries.emplace(name, std::move(e)).second) {
      throw CheckpointError(Kind::kMalformed,
                            file + ": duplicate entry " + name);
    }
  }
  if (!r.done()) {
    throw CheckpointError(Kind::kMalformed,
                          file + ": " + std::to_string(bytes.size() - r.offset()) +
                              " trailing bytes");
  }

  const TrainingConfig config = ParseConfig(entries, file);
  std::unique_ptr<Model> model;
  try {
    model = std::make_unique<Model>(config, config.classes);
  } catch (const std::invalid_argument& e) {
    throw CheckpointError(Kind::kMalformed,
                          file + ": inconsistent config: " + e.what());
  }
  std::size_t used = ConfigEntries(config).size();
  for (const auto& b : model->State()) {
    const Entry& e = Require(entries, b.name, file);
    if (e.shape != b.shape) {
      throw CheckpointError(Kind::kMalformed,
                            file + ": entry " + b.name + " has shape " +
                                ShapeToString(e.shape) + ", expected " +
                                ShapeToString(b.shape));
    }
    std::copy(e.values.begin(), e.values.end(), b.value.begin());
    ++used;
  }
  if (used != entries.size()) {
    throw CheckpointError(Kind::kMalformed,
                          file + ": " + std::to_string(entries.size() - used) +
                              " unrecognized entries");
  }
  return model;
}

}  // namespace cvgan
