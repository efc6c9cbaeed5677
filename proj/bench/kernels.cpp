// Serial reference vs OpenMP kernels on a mid-sized synthetic corpus.
#include <benchmark/benchmark.h>

#include "hitr/diversity.hpp"
#include "hitr/evaluation.hpp"
#include "hitr/lda.hpp"
#include "hitr/parsimonizer.hpp"

namespace {

using namespace hitr;

struct Fixture {
  Corpus corpus;
  TopicModel model;
  std::vector<CountVector> rows;
  std::vector<double> background;
  std::vector<std::string> ids;

  Fixture() {
    SynthConfig sc;
    sc.docs_per_group = 60;
    const auto bench = generate_synthetic(sc);
    PreprocessConfig pre;
    pre.top_k_frequent_removed = 0;
    pre.min_collection_frequency = 1;
    corpus = build_corpus(bench.training, pre);
    LdaConfig lc;
    lc.num_topics = 20;
    lc.gibbs_iterations = 50;
    model = train(corpus, lc);
    for (const auto& d : corpus.docs()) {
      rows.push_back(d.count_vector(corpus.vocab_size()));
      ids.push_back(d.id);
    }
    background = collection_language_model(corpus).to_dense();
  }
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

void BM_ParsimonizeSerial(benchmark::State& st) {
  const auto& f = fixture();
  EmConfig cfg{0.4, 0.01, 50, 1e-6};
  for (auto _ : st) {
    benchmark::DoNotOptimize(serial::parsimonize_all(f.rows, f.background, cfg));
  }
}
void BM_ParsimonizeOmp(benchmark::State& st) {
  const auto& f = fixture();
  EmConfig cfg{0.4, 0.01, 50, 1e-6};
  for (auto _ : st) {
    benchmark::DoNotOptimize(parsimonize_all(f.rows, f.background, cfg));
  }
}

void BM_DistancesSerial(benchmark::State& st) {
  const auto& f = fixture();
  for (auto _ : st) {
    benchmark::DoNotOptimize(serial::topic_distances(f.model.doc_topic));
  }
}
void BM_DistancesOmp(benchmark::State& st) {
  const auto& f = fixture();
  for (auto _ : st) benchmark::DoNotOptimize(topic_distances(f.model.doc_topic));
}

void BM_ScoreSerial(benchmark::State& st) {
  const auto& f = fixture();
  for (auto _ : st) {
    benchmark::DoNotOptimize(serial::score_corpus(f.model.doc_topic, f.ids));
  }
}
void BM_ScoreOmp(benchmark::State& st) {
  const auto& f = fixture();
  for (auto _ : st) {
    benchmark::DoNotOptimize(score_corpus(f.model.doc_topic, f.ids));
  }
}

void BM_InferSerial(benchmark::State& st) {
  const auto& f = fixture();
  for (auto _ : st) {
    benchmark::DoNotOptimize(serial::infer_all(f.model, f.rows, 20, 3));
  }
}
void BM_InferOmp(benchmark::State& st) {
  const auto& f = fixture();
  for (auto _ : st) benchmark::DoNotOptimize(infer_all(f.model, f.rows, 20, 3));
}

}  // namespace

BENCHMARK(BM_ParsimonizeSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ParsimonizeOmp)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DistancesSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DistancesOmp)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ScoreSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ScoreOmp)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_InferSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_InferOmp)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
