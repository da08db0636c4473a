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

#include "cli.h"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>

#include "cvgan/data.h"
#include "cvgan/gan.h"
#include "cvgan/metrics.h"

namespace cvgan {
namespace {

struct SynthOptions {
  int classes = 3;
  std::size_t height = 128;
  std::size_t width = 128;
  int looks = 8;
  std::string layout = "stripes";
  std::uint64_t seed = 0;
  std::string out;
  std::string labels;
};

struct TrainOptions {
  std::string data;
  std::string labels;
  std::size_t per_class_count = 10;
  double per_class_ratio = 0.0;
  double unlabeled_fraction = 0.1;
  std::size_t stride = 0;
  std::string mode = "semisup";
  std::string out;
  TrainingConfig config;
};

struct EvaluateOptions {
  std::string data;
  std::string labels;
  std::string model;
  std::string out;
  std::size_t stride = 0;
};

struct GenerateOptions {
  std::string model;
  std::size_t count = 16;
  std::uint64_t seed = 0;
  std::string out;
};

struct CompareOptions {
  std::string real;
  std::string gen;
  std::size_t bins = 64;
  std::string out;
};

struct PcolorOptions {
  std::string data;
  std::string out;
};

std::string Full(double v) {
  std::ostringstream s;
  s.precision(std::numeric_limits<double>::max_digits10);
  s << v;
  return s.str();
}

std::ofstream OpenOutput(const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  return out;
}

void RunSynth(const SynthOptions& o) {
  SceneSpec spec;
  spec.classes = o.classes;
  spec.height = o.height;
  spec.width = o.width;
  spec.looks = o.looks;
  spec.layout = ParseLayout(o.layout);
  spec.seed = o.seed;
  SaveRaster(GenerateScene(spec), o.out, o.labels);
}

void RunTrain(TrainOptions o, std::ostream& out, std::ostream& err) {
  o.config.mode = ParseTrainingMode(o.mode);
  const CoherencyRaster raster = LoadRaster(o.data, o.labels);
  const std::size_t stride = o.stride ? o.stride : o.config.patch_size;
  const auto patches = ExtractPatches(raster, o.config.patch_size, stride);
  SplitSpec spec;
  spec.quota = o.per_class_ratio > 0.0
                   ? LabeledQuota::Ratio(o.per_class_ratio)
                   : LabeledQuota::Count(o.per_class_count);
  spec.unlabeled_fraction = o.unlabeled_fraction;
  spec.seed = o.config.seed;
  const DataSplit split = SplitPatches(patches, spec);
  for (const auto& w : split.warnings) err << "warning: " << w << '\n';

  out << "epoch,l_labeled,l_unlabeled,l_generated,l_generator\n";
  auto model = Train(o.config, split, [&](std::size_t epoch,
                                          const LossBreakdown& l) {
    out << epoch << ',' << Full(l.l_labeled) << ',' << Full(l.l_unlabeled)
        << ',' << Full(l.l_generated) << ',' << Full(l.l_generator) << '\n';
    out.flush();
  });
  SaveCheckpoint(*model, o.out);
}

void RunEvaluate(const EvaluateOptions& o, std::ostream& out) {
  auto model = LoadCheckpoint(o.model);
  const CoherencyRaster raster = LoadRaster(o.data, o.labels);
  const std::size_t k = model->classes();
  const int max_label = raster.MaxLabel();
  if (max_label > static_cast<int>(k)) {
    throw std::invalid_argument("checkpoint has " + std::to_string(k) +
                                " classes but labels reach " +
                                std::to_string(max_label));
  }
  const std::size_t patch = model->config().patch_size;
  auto patches = ExtractPatches(raster, patch, o.stride ? o.stride : patch);
  std::erase_if(patches, [](const Patch& p) { return p.label == 0; });
  if (patches.empty()) {
    throw std::invalid_argument("no labeled patches to evaluate");
  }
  std::vector<int> labels;
  for (const Patch& p : patches) labels.push_back(p.label);
  const auto preds = Classify(*model, StackPatches(patches));
  const auto cm = ConfusionMatrix::FromPredictions(preds, labels, k);

  const AverageAccuracy aa = ComputeAverageAccuracy(cm);
  out << "class,support,accuracy\n";
  for (std::size_t c = 0; c < k; ++c) {
    out << c + 1 << ',' << cm.RowSum(c) << ','
        << (cm.RowSum(c) ? Full(aa.recall[c]) : "n/a") << '\n';
  }
  out << "OA," << Full(OverallAccuracy(cm)) << '\n';
  out << "AA," << Full(aa.value) << '\n';
  out << "Kappa," << Full(Kappa(cm)) << '\n';
  for (int c : aa.excluded_classes) {
    out << "# class " << c << " has no samples and is excluded from AA\n";
  }
  std::ofstream csv = OpenOutput(o.out);
  WriteConfusionCsv(csv, cm);
}

void RunGenerate(const GenerateOptions& o) {
  if (o.count == 0) throw std::invalid_argument("--count must be positive");
  auto model = LoadCheckpoint(o.model);
  WriteCoherencyFile(TilePatches(GeneratePatches(*model, o.count, o.seed)),
                     o.out);
}

void RunCompare(const CompareOptions& o) {
  const CoherencyRaster real = ReadCoherencyFile(o.real);
  const CoherencyRaster gen = ReadCoherencyFile(o.gen);
  std::vector<HistogramReport> reports;
  const std::pair<std::size_t, const char*> channels[] = {{0, "T11"},
                                                          {3, "T12"}};
  for (const auto& [channel, name] : channels) {
    for (bool imag : {false, true}) {
      reports.push_back(CompareHistograms(ChannelValues(real, channel, imag),
                                          ChannelValues(gen, channel, imag),
                                          o.bins, name, imag ? "im" : "re"));
    }
  }
  std::ofstream csv = OpenOutput(o.out);
  WriteHistogramCsv(csv, reports);
}

void RunPcolor(const PcolorOptions& o) {
  WritePpm(Pcolor(ReadCoherencyFile(o.data)), o.out);
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Complex-valued semi-supervised GAN for PolSAR patches",
               "cvgan"};
  app.require_subcommand(1);
  app.failure_message([](const CLI::App*, const CLI::Error& e) {
    std::string message = e.what();
    std::replace(message.begin(), message.end(), '\n', ' ');
    return "error: " + message + "\n";
  });

  SynthOptions synth;
  CLI::App* s = app.add_subcommand("synth", "Generate a synthetic scene");
  s->add_option("--classes", synth.classes, "Number of classes K")
      ->capture_default_str()
      ->check(CLI::Range(2, kMaxBuiltinClasses));
  s->add_option("--height", synth.height, "Raster height")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  s->add_option("--width", synth.width, "Raster width")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  s->add_option("--looks", synth.looks, "Number of looks L")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  s->add_option("--layout", synth.layout, "Class layout")
      ->capture_default_str()
      ->check(CLI::IsMember({"stripes", "blocks"}));
  s->add_option("--seed", synth.seed, "Random seed")->capture_default_str();
  s->add_option("--out", synth.out, "Coherency raster (CTM1)")->required();
  s->add_option("--labels", synth.labels, "Label raster (LBL1)")->required();

  TrainOptions train;
  CLI::App* t = app.add_subcommand("train", "Train a model");
  t->add_option("--data", train.data, "Coherency raster (CTM1)")->required();
  t->add_option("--labels", train.labels, "Label raster (LBL1)")->required();
  auto* count = t->add_option("--per-class-count", train.per_class_count,
                              "Labeled patches per class")
                    ->capture_default_str()
                    ->check(CLI::PositiveNumber);
  auto* ratio = t->add_option("--per-class-ratio", train.per_class_ratio,
                              "Labeled fraction per class")
                    ->check(CLI::Range(0.0, 1.0));
  count->excludes(ratio);
  t->add_option("--unlabeled-fraction", train.unlabeled_fraction,
                "Fraction of all patches used as unlabeled data")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  t->add_option("--patch", train.config.patch_size, "Patch size")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  t->add_option("--stride", train.stride,
                "Patch extraction stride (0 = patch size)")
      ->capture_default_str();
  t->add_option("--lr", train.config.lr, "Adam learning rate")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  t->add_option("--beta1", train.config.beta1, "Adam beta1")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  t->add_option("--beta2", train.config.beta2, "Adam beta2")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  t->add_option("--epochs", train.config.epochs, "Training epochs")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  t->add_option("--batch", train.config.batch_size, "Sub-batch size")
      ->capture_default_str()
      ->check(CLI::Range(2, 1 << 20));
  t->add_option("--m", train.config.memory,
                "Batches remembered by complex batch normalization")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  t->add_option("--mode", train.mode, "Training mode")
      ->capture_default_str()
      ->check(CLI::IsMember({"semisup", "supervised"}));
  t->add_option("--seed", train.config.seed, "Random seed")
      ->capture_default_str();
  t->add_option("--out", train.out, "Checkpoint path (CVG1)")->required();

  EvaluateOptions eval;
  CLI::App* e = app.add_subcommand("evaluate", "Score a model on a scene");
  e->add_option("--data", eval.data, "Coherency raster (CTM1)")->required();
  e->add_option("--labels", eval.labels, "Label raster (LBL1)")->required();
  e->add_option("--model", eval.model, "Checkpoint (CVG1)")->required();
  e->add_option("--out", eval.out, "Confusion matrix CSV")->required();
  e->add_option("--stride", eval.stride,
                "Patch extraction stride (0 = patch size)")
      ->capture_default_str();

  GenerateOptions gen;
  CLI::App* g = app.add_subcommand("generate", "Sample generated patches");
  g->add_option("--model", gen.model, "Checkpoint (CVG1)")->required();
  g->add_option("--count", gen.count, "Number of patches")
      ->capture_default_str();
  g->add_option("--seed", gen.seed, "Random seed")->capture_default_str();
  g->add_option("--out", gen.out, "Tiled coherency raster (CTM1)")
      ->required();

  CompareOptions cmp;
  CLI::App* c = app.add_subcommand(
      "compare-dist", "Compare T11 and T12 distributions of two rasters");
  c->add_option("--real", cmp.real, "Actual coherency raster")->required();
  c->add_option("--gen", cmp.gen, "Generated coherency raster")->required();
  c->add_option("--bins", cmp.bins, "Histogram bins")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  c->add_option("--out", cmp.out, "Histogram CSV")->required();

  PcolorOptions pc;
  CLI::App* p = app.add_subcommand("pcolor", "Render T11, T22, T33 as RGB");
  p->add_option("--data", pc.data, "Coherency raster (CTM1)")->required();
  p->add_option("--out", pc.out, "Binary PPM image")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& error) {
    return app.exit(error, out, err);
  }

  try {
    if (s->parsed()) RunSynth(synth);
    if (t->parsed()) RunTrain(train, out, err);
    if (e->parsed()) RunEvaluate(eval, out);
    if (g->parsed()) RunGenerate(gen);
    if (c->parsed()) RunCompare(cmp);
    if (p->parsed()) RunPcolor(pc);
  } catch (const std::exception& error) {
    std::string message = error.what();
    std::replace(message.begin(), message.end(), '\n', ' ');
    err << "error: " << message << '\n';
    return 1;
  }
  return 0;
}

}  // namespace cvgan
