// Copyright 2026 The avaeval Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <sstream>
#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "avaeval/ava_data.h"
#include "avaeval/eval_index.h"
#include "avaeval/metrics.h"
#include "generators.h"

namespace avaeval {
namespace {

constexpr int kVideos = 430;
constexpr int kClasses = 80;

void BM_Iou(benchmark::State& state) {
  testing::Rng rng(1);
  std::vector<BoundingBox> boxes;
  for (int i = 0; i < 1024; ++i) boxes.push_back(testing::RandomBox(rng));
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(Iou(boxes[i & 1023], boxes[(i + 1) & 1023]));
    ++i;
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Iou);

void BM_ParseGroundTruth(benchmark::State& state) {
  std::ostringstream out;
  testing::WriteSyntheticGroundTruth(out, state.range(0), 2, kVideos, kClasses);
  const std::string text = out.str();
  const auto vocab = testing::NumberedVocabulary(kClasses);
  for (auto _ : state) {
    std::istringstream in(text);
    std::int64_t n = 0;
    ParseGroundTruth(in, vocab, Strictness::kStrict,
                     [&n](GroundTruthRecord&&) { ++n; });
    benchmark::DoNotOptimize(n);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(text.size()));
}
BENCHMARK(BM_ParseGroundTruth)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_BuildIndex(benchmark::State& state) {
  testing::SyntheticGroundTruth source(3, kVideos, kClasses);
  std::vector<GroundTruthRecord> records;
  for (std::int64_t i = 0; i < state.range(0); ++i) records.push_back(source.Next());
  for (auto _ : state) {
    benchmark::DoNotOptimize(BuildIndex(records).total_records());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BuildIndex)->Arg(100000)->Arg(1000000)->Unit(benchmark::kMillisecond);

// Detections replay the ground-truth stream, so half of them overlap a box.
void BM_Evaluate(benchmark::State& state) {
  const std::int64_t rows = state.range(0);
  std::ostringstream gt_text;
  std::ostringstream det_text;
  testing::WriteSyntheticGroundTruth(gt_text, rows, 4, kVideos, kClasses);
  testing::WriteSyntheticDetections(det_text, rows, 4, kVideos, kClasses);
  const auto vocab = testing::NumberedVocabulary(kClasses);
  std::istringstream gt_in(gt_text.str());
  std::istringstream det_in(det_text.str());
  const EvalIndex index =
      BuildIndex(ReadGroundTruth(gt_in, vocab, Strictness::kStrict));
  const auto det = ReadDetections(det_in, vocab, Strictness::kStrict);
  EvalConfig config;
  config.num_threads = static_cast<int>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(Evaluate(index, det, vocab, config).map_value);
  }
  state.SetItemsProcessed(state.iterations() * rows);
}
BENCHMARK(BM_Evaluate)
    ->Args({100000, 1})
    ->Args({100000, 4})
    ->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace avaeval

BENCHMARK_MAIN();
