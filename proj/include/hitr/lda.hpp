#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "hitr/corpus.hpp"
#include "hitr/sparse.hpp"

namespace hitr {

struct LdaConfig {
  int num_topics = 100;
  std::optional<double> alpha;  // defaults to 1 / num_topics
  double beta = 0.01;
  int gibbs_iterations = 1000;
  std::uint64_t seed = 1;

  double resolved_alpha() const {
    return alpha.value_or(1.0 / static_cast<double>(num_topics));
  }
  // Throws Error{"InvalidLdaConfig"}.
  void validate() const;
};

// Topic-word rows P(w|t) over the vocabulary and document-topic rows P(t|d)
// over topics. Immutable once built; safe to share across threads.
struct TopicModel {
  std::vector<SparseDistribution> topic_word;
  std::vector<SparseDistribution> doc_topic;
  LdaConfig config;
  std::size_t vocab_size = 0;

  std::size_t num_topics() const noexcept { return topic_word.size(); }
  bool operator==(const TopicModel& o) const {
    return topic_word == o.topic_word && doc_topic == o.doc_topic &&
           vocab_size == o.vocab_size;
  }
};

// Collapsed Gibbs sampling for cfg.gibbs_iterations sweeps; estimates from
// the final state:
//   P(w|t) = (n_tw + beta) / (n_t + V beta)
//   P(t|d) = (n_dt + alpha) / (n_d + T alpha)
// Emptied documents are skipped and get uniform P(t|d).
// Throws Error{"EmptyCorpus"}.
TopicModel train(const Corpus& corpus, const LdaConfig& cfg);

// Observer hook for tests: called after every sweep with the sampler's
// count tables (word-major n_wt, doc-major n_dt).
struct GibbsCounts {
  std::span<const std::int32_t> word_topic;  // V x T
  std::span<const std::int32_t> doc_topic;   // D x T
  std::size_t num_topics;
};
using SweepObserver = std::function<void(const GibbsCounts&)>;
TopicModel train(const Corpus& corpus, const LdaConfig& cfg,
                 const SweepObserver& observer);

struct Inference {
  SparseDistribution dist;
  bool empty_document = false;  // nothing to sample; dist is uniform
};

// Gibbs sampling over one unseen document with topic_word frozen. Tokens
// whose word has zero probability under every topic are ignored.
Inference infer_doc_topics(const TopicModel& model, const CountVector& doc,
                           int iterations, std::uint64_t seed);

// Batch kernel: document r uses random stream r of `seed`, so the result is
// independent of thread count and equal to serial::infer_all.
std::vector<Inference> infer_all(const TopicModel& model,
                                 std::span<const CountVector> docs,
                                 int iterations, std::uint64_t seed);

namespace serial {
std::vector<Inference> infer_all(const TopicModel& model,
                                 std::span<const CountVector> docs,
                                 int iterations, std::uint64_t seed);
}  // namespace serial

}  // namespace hitr
