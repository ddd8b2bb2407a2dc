#include <benchmark/benchmark.h>

#include "decide/detector.hpp"
#include "decide/kg_builder.hpp"
#include "decide/lexicon.hpp"
#include "decide/matcher.hpp"
#include "decide/recognizer.hpp"
#include "generators.hpp"

namespace {

using namespace decide;

void BM_Recognize(benchmark::State& state) {
  Paragraph p{1, 0,
              "I installed TensorFlow 1.15 with CUDA 10.2 and cuDNN 7.6 on Ubuntu 18.04, but tf-gpu only "
              "works with cuda 10.0. PyTorch 1.4 is fine with Python 3.8 and numpy 1.18.x."};
  for (auto _ : state) benchmark::DoNotOptimize(recognize(p, default_lexicon()));
}
BENCHMARK(BM_Recognize);

void BM_MatchTree(benchmark::State& state) {
  testing::Rng rng(1);
  auto n = static_cast<int>(state.range(0));
  std::vector<testing::MatchingInstance> insts;
  for (int i = 0; i < 32; ++i) insts.push_back(testing::random_matching_instance(rng, n, n, 4 * n + 4));
  std::size_t k = 0;
  for (auto _ : state) {
    const auto& inst = insts[k++ % insts.size()];
    benchmark::DoNotOptimize(match_pairs(inst.components, inst.versions, &inst.tree));
  }
}
BENCHMARK(BM_MatchTree)->Arg(3)->Arg(6)->Arg(12);

void BM_Detect(benchmark::State& state) {
  testing::Rng rng(2);
  std::vector<testing::DetectionInstance> insts;
  for (int i = 0; i < 32; ++i) insts.push_back(testing::random_detection_instance(rng));
  std::size_t k = 0;
  for (auto _ : state) {
    const auto& inst = insts[k++ % insts.size()];
    benchmark::DoNotOptimize(detect(inst.required, inst.local, inst.kg));
  }
}
BENCHMARK(BM_Detect);

void BM_KgRoundTrip(benchmark::State& state) {
  testing::Rng rng(3);
  auto kg = testing::random_kg(rng, 40, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(deserialize_kg(serialize_kg(kg)));
}
BENCHMARK(BM_KgRoundTrip)->Arg(100)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
