#include "doctest.h"

#include <fstream>
#include <random>

#include "helpers.hpp"
#include "hitr/config.hpp"
#include "hitr/error.hpp"
#include "hitr/io.hpp"

using namespace hitr;
namespace fs = std::filesystem;

TEST_CASE("distributions survive a JSON round trip bit for bit") {
  std::mt19937_64 g(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> w(9);
    for (auto& x : w) x = u(g) < 0.3 ? 0.0 : u(g);
    w[0] += 1e-3;
    auto d = SparseDistribution::from_dense(w);
    auto text = io::distribution_to_json(d).dump();
    CHECK(io::distribution_from_json(io::json::parse(text)) == d);
  }
}

TEST_CASE("corpus round trip keeps emptied flags") {
  std::vector<RawDocument> docs{{"a", "x y y", std::string("l")}, {"b", "z", {}}};
  PreprocessConfig pre;
  pre.top_k_frequent_removed = 0;
  pre.min_collection_frequency = 2;
  auto c = build_corpus(docs, pre);
  auto back = io::corpus_from_json(io::json::parse(io::corpus_to_json(c).dump()));
  CHECK(back == c);
  CHECK(back.docs()[1].emptied);
}

TEST_CASE("model file round trip and shape checks") {
  auto corpus = testing::small_corpus();
  LdaConfig cfg;
  cfg.num_topics = 3;
  cfg.gibbs_iterations = 10;
  auto m = train(corpus, cfg);
  auto j = io::model_to_json(m, corpus);
  auto f = io::model_from_json(io::json::parse(j.dump()));
  CHECK(f.model == m);
  CHECK(f.doc_ids.size() == corpus.num_docs());
  CHECK(&f.scoring_doc_topic() == &f.model.doc_topic);

  j["vocab_size"] = 7;
  CHECK_THROWS_AS(io::model_from_json(j), Error);
}

TEST_CASE("raw documents jsonl") {
  auto dir = testing::scratch("io_raw");
  std::vector<RawDocument> docs{{"1", "hello world", std::string("g")},
                                {"2", "bye", {}}};
  io::write_atomic(dir / "d.jsonl", io::raw_documents_jsonl(docs));
  auto back = io::read_raw_documents(dir / "d.jsonl");
  REQUIRE(back.size() == 2);
  CHECK(back[0].label == std::optional<std::string>("g"));
  CHECK_FALSE(back[1].label.has_value());

  std::ofstream(dir / "bad.jsonl") << "{\"id\": \"1\"\n";
  CHECK_THROWS_AS(io::read_raw_documents(dir / "bad.jsonl"), Error);
  std::ofstream(dir / "noid.jsonl") << "{\"id\": \"\", \"text\": \"x\"}\n";
  CHECK_THROWS_AS(io::read_raw_documents(dir / "noid.jsonl"), Error);
  CHECK_THROWS_AS(io::read_raw_documents(dir / "missing.jsonl"), Error);
}

TEST_CASE("diversity files") {
  auto dir = testing::scratch("io_div");
  std::vector<DiversityScore> s{{"a", 0.125}, {"b", 0.1}};
  io::write_atomic(dir / "s.jsonl", io::diversity_jsonl(s));
  auto back = io::read_diversity(dir / "s.jsonl");
  CHECK(back[1].score == 0.1);
  CHECK(io::diversity_csv(s) == "id,diversity\na,0.125\nb,0.1\n");
}

TEST_CASE("ini parsing") {
  auto ini = parse_ini("# c\n[lda]\ntopics = 7\nseed=3\n\n[tar]\nlambda = 0.2\n"
                       "enabled = false\n[eval]\ntau = 0.05\n");
  CHECK(ini.at("lda.topics") == "7");
  auto cfg = default_toolkit_config();
  apply_ini(ini, cfg);
  CHECK(cfg.pipeline.lda.num_topics == 7);
  CHECK(cfg.pipeline.lda.seed == 3);
  CHECK(cfg.pipeline.tar.em.lambda == 0.2);
  CHECK_FALSE(cfg.pipeline.tar.enabled);
  CHECK(cfg.eval.sparsity_tau == 0.05);
  CHECK(cfg.pipeline.dr.em.lambda == 0.4);

  CHECK_THROWS_AS(parse_ini("[lda\n"), Error);
  CHECK_THROWS_AS(parse_ini("novalue\n"), Error);
  CHECK_THROWS_AS(apply_ini(parse_ini("[lda]\ntopics = many\n"), cfg), Error);
  CHECK_THROWS_AS(apply_ini(parse_ini("[lda]\nbogus = 1\n"), cfg), Error);
  CHECK_THROWS_AS(apply_ini(parse_ini("[tr]\nenabled = maybe\n"), cfg), Error);
}

TEST_CASE("defaults") {
  auto cfg = default_toolkit_config();
  CHECK(cfg.pipeline.dr.em.lambda == 0.4);
  CHECK(cfg.pipeline.tr.em.lambda == 0.7);
  CHECK(cfg.pipeline.tar.em.lambda == 0.03);
  CHECK(cfg.pipeline.tar.em.prune_threshold == 0.01);
  CHECK(cfg.pipeline.lda.num_topics == 100);
  CHECK(cfg.preprocess.top_k_frequent_removed == 100);
  CHECK_FALSE(cfg.preprocess.stopwords.empty());
}
