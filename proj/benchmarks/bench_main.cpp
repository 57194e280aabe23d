#include <benchmark/benchmark.h>

#include <random>

#include "emoharness/metrics.hpp"
#include "emoharness/prompting.hpp"
#include "emoharness/response_cache.hpp"
#include "emoharness/response_parser.hpp"

using namespace emoharness;

namespace {

DatasetSplit make_train(std::size_t n) {
  std::mt19937_64 rng(1);
  DatasetSplit split;
  split.schema = LabelSchema::english();
  for (std::size_t i = 0; i < n; ++i) {
    LabeledExample ex{"tr-" + std::to_string(i), "sentence number " + std::to_string(i) + " about the weather",
                      LabelSet(5)};
    for (std::size_t k = 0; k < 5; ++k) ex.gold.set(k, rng() % 3 == 0);
    split.examples.push_back(std::move(ex));
  }
  return split;
}

void BM_evaluate(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(3);
  std::vector<LabelSet> gold(n, LabelSet(5)), pred(n, LabelSet(5));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < 5; ++k) {
      gold[i].set(k, rng() & 1U);
      pred[i].set(k, rng() & 1U);
    }
  }
  const auto schema = LabelSchema::english();
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(gold, pred, schema));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_evaluate)->Arg(116)->Arg(2768);

void BM_render_few_shot(benchmark::State& state) {
  const auto train = make_train(1000);
  const auto shots =
      select_examples(train, ExampleSelection(SelectionMethod::seeded_random, static_cast<std::size_t>(state.range(0)), 7));
  for (auto _ : state) {
    benchmark::DoNotOptimize(render_prompt(PromptStrategy::few_shot_tot, shots, "A target sentence.", train.schema));
  }
}
BENCHMARK(BM_render_few_shot)->Arg(6)->Arg(600);

void BM_parse(benchmark::State& state) {
  const std::string raw =
      "Thought 1: the speaker is upset\nThought 2: surprise at the news\nThought 3: -\nThought 4: -\n"
      "Thought 5: settle\nFinal Emotions: Anger, Surprise";
  const auto schema = LabelSchema::english();
  for (auto _ : state) benchmark::DoNotOptimize(parse_emotions(raw, schema, ParsePolicy::lenient));
}
BENCHMARK(BM_parse);

void BM_cache_lookup(benchmark::State& state) {
  ResponseCache cache;
  std::vector<std::string> keys;
  for (int i = 0; i < 10000; ++i) {
    keys.push_back(cache_key("model", std::to_string(i), 0.0, 256));
    cache.insert({keys.back(), "Emotions: Joy", {}, ""});
  }
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(cache.lookup(keys[i++ % keys.size()]));
}
BENCHMARK(BM_cache_lookup);

}  // namespace

BENCHMARK_MAIN();
