#include "doctest.h"

#include <numeric>

#include "helpers.hpp"
#include "hitr/error.hpp"
#include "hitr/lda.hpp"
#include "hitr/parallel.hpp"

using namespace hitr;

namespace {

LdaConfig small_lda(int T = 3) {
  LdaConfig cfg;
  cfg.num_topics = T;
  cfg.gibbs_iterations = 100;
  cfg.seed = 9;
  return cfg;
}

}  // namespace

TEST_CASE("rows are full smoothed distributions") {
  auto corpus = testing::small_corpus();
  auto m = train(corpus, small_lda());
  CHECK(m.num_topics() == 3);
  CHECK(m.vocab_size == corpus.vocab_size());
  CHECK(m.doc_topic.size() == corpus.num_docs());
  for (const auto& t : m.topic_word) {
    CHECK(t.support_size() == corpus.vocab_size());
    CHECK(check_distribution(t.dim(), t.entries()).empty());
  }
  for (const auto& d : m.doc_topic) {
    CHECK(d.support_size() == 3);
    CHECK(check_distribution(3, d.entries()).empty());
  }
  CHECK(m.config.alpha.value() == doctest::Approx(1.0 / 3));
}

TEST_CASE("count tables stay consistent after every sweep") {
  auto corpus = testing::small_corpus();
  const auto tokens = static_cast<std::int64_t>(corpus.total_tokens());
  const auto V = corpus.vocab_size();
  const auto cf = corpus.collection_counts();
  int sweeps = 0;
  train(corpus, small_lda(), [&](const GibbsCounts& g) {
    ++sweeps;
    const auto T = g.num_topics;
    std::int64_t total = 0;
    for (auto n : g.word_topic) {
      CHECK(n >= 0);
      total += n;
    }
    CHECK(total == tokens);
    for (std::size_t w = 0; w < V; w += 37) {
      std::int64_t row = 0;
      for (std::size_t t = 0; t < T; ++t) row += g.word_topic[w * T + t];
      CHECK(row == static_cast<std::int64_t>(cf[w]));
    }
    for (std::size_t d = 0; d < corpus.num_docs(); d += 11) {
      std::int64_t row = 0;
      for (std::size_t t = 0; t < T; ++t) row += g.doc_topic[d * T + t];
      CHECK(row == static_cast<std::int64_t>(corpus.docs()[d].length()));
    }
  });
  CHECK(sweeps == 100);
}

TEST_CASE("same seed, same model; different seed, different model") {
  auto corpus = testing::small_corpus();
  auto a = train(corpus, small_lda());
  auto b = train(corpus, small_lda());
  CHECK(a == b);
  auto cfg = small_lda();
  cfg.seed = 10;
  CHECK_FALSE(train(corpus, cfg) == a);
}

TEST_CASE("planted groups come out as separate topics") {
  auto bench = generate_synthetic(testing::small_synth());
  auto corpus = testing::corpus_of(bench.training);
  auto m = train(corpus, small_lda());
  std::vector<std::string> labels;
  for (const auto& d : corpus.docs()) labels.push_back(*d.label);
  auto pn = cluster_purity_nmi(m.doc_topic, labels);
  CHECK(pn.purity > 0.95);
  CHECK(pn.nmi > 0.9);
}

TEST_CASE("inference recovers the group of a training document") {
  auto corpus = testing::small_corpus();
  auto m = train(corpus, small_lda());
  for (std::size_t d : {0u, 35u, 70u}) {
    auto inf = infer_doc_topics(
        m, corpus.docs()[d].count_vector(corpus.vocab_size()), 50, 4);
    CHECK_FALSE(inf.empty_document);
    CHECK(inf.dist.argmax() == m.doc_topic[d].argmax());
  }
}

TEST_CASE("inference skips words no topic can generate") {
  TopicModel m;
  m.vocab_size = 3;
  m.config.num_topics = 2;
  m.topic_word = {SparseDistribution(3, {{0, 1.0}}),
                  SparseDistribution(3, {{1, 1.0}})};
  auto only_unknown = infer_doc_topics(m, CountVector(3, {{2, 4.0}}), 5, 1);
  CHECK(only_unknown.empty_document);
  CHECK(only_unknown.dist == SparseDistribution::uniform(2));

  auto mixed = infer_doc_topics(m, CountVector(3, {{0, 9.0}, {2, 4.0}}), 5, 1);
  CHECK_FALSE(mixed.empty_document);
  CHECK(mixed.dist.prob(0) > 0.9);
}

TEST_CASE("parallel inference equals the serial reference") {
  auto corpus = testing::small_corpus();
  auto m = train(corpus, small_lda());
  std::vector<CountVector> docs;
  for (const auto& d : corpus.docs()) docs.push_back(d.count_vector(corpus.vocab_size()));
  auto ref = serial::infer_all(m, docs, 20, 77);
  for (int threads : {1, 3}) {
    parallel::set_threads(threads);
    auto par = infer_all(m, docs, 20, 77);
    for (std::size_t d = 0; d < docs.size(); ++d) CHECK(par[d].dist == ref[d].dist);
  }
  parallel::set_threads(0);
  CHECK(infer_doc_topics(m, docs[0], 20, 77).dist == ref[0].dist);
}

TEST_CASE("configuration and input errors") {
  auto corpus = testing::small_corpus();
  auto cfg = small_lda();
  cfg.num_topics = 0;
  CHECK_THROWS_AS(train(corpus, cfg), Error);
  cfg = small_lda();
  cfg.beta = 0.0;
  CHECK_THROWS_AS(train(corpus, cfg), Error);
  cfg = small_lda();
  cfg.alpha = -1.0;
  CHECK_THROWS_AS(train(corpus, cfg), Error);
  auto m = train(corpus, small_lda());
  CHECK_THROWS_AS(infer_doc_topics(m, CountVector(1, {}), 0, 1), Error);
  CHECK_THROWS_AS(
      infer_doc_topics(m, CountVector(corpus.vocab_size() + 5,
                                      {{Index(corpus.vocab_size() + 1), 1.0}}),
                       5, 1),
      Error);
}
