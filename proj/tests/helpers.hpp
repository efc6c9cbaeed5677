#pragma once

#include <filesystem>
#include <string>

#include "hitr/corpus.hpp"
#include "hitr/evaluation.hpp"

namespace testing {

// A small planted corpus: well separated groups, no general words.
inline hitr::SynthConfig small_synth(std::uint64_t seed = 3) {
  hitr::SynthConfig sc;
  sc.num_groups = 3;
  sc.docs_per_group = 30;
  sc.vocab_size = 300;
  sc.doc_length = 60;
  sc.general_share = 0.0;
  sc.length_spread = 0.0;
  sc.num_diverse_pairs = 3;
  sc.diverse_docs_per_pair = 3;
  sc.nondiverse_docs_per_group = 3;
  sc.seed = seed;
  return sc;
}

inline hitr::Corpus corpus_of(const std::vector<hitr::RawDocument>& docs) {
  hitr::PreprocessConfig pre;
  pre.top_k_frequent_removed = 0;
  pre.min_collection_frequency = 1;
  return hitr::build_corpus(docs, pre);
}

inline hitr::Corpus small_corpus(std::uint64_t seed = 3) {
  return corpus_of(hitr::generate_synthetic(small_synth(seed)).training);
}

inline std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::path(HITR_TEST_TMP) / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testing
