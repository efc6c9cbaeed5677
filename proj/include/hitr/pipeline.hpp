#pragma once

#include <string>
#include <vector>

#include "hitr/corpus.hpp"
#include "hitr/lda.hpp"
#include "hitr/parsimonizer.hpp"

namespace hitr {

// Hierarchical topic model re-estimation: document re-estimation (DR), topic
// model training, topic re-estimation (TR), topic assignment, and topic
// assignment re-estimation (TAR), always in that order.

struct StageConfig {
  bool enabled = true;
  EmConfig em;
};

inline StageConfig default_dr() { return {true, {0.4, 0.01, 50, 1e-6}}; }
inline StageConfig default_tr() { return {true, {0.7, 0.01, 50, 1e-6}}; }
inline StageConfig default_tar() { return {true, {0.03, 0.01, 50, 1e-6}}; }

// Scale turning probabilities into pseudo-counts for the TR and TAR E-steps.
// The E-step ratio does not depend on it.
inline constexpr double kPseudoCountScale = 1000.0;

struct PipelineConfig {
  StageConfig dr = default_dr();
  StageConfig tr = default_tr();
  StageConfig tar = default_tar();
  LdaConfig lda;
  // Gibbs sweeps used to re-assign topics to documents after TR.
  int assign_iterations = 200;

  void validate() const;
};

struct StageLog {
  std::string stage;
  bool enabled = false;
  std::size_t rows = 0;
  // DR: fraction of tokens removed. TR/TAR: mean over rows of the total
  // variation distance between input and output rows.
  double removed_mass = 0.0;
  double mean_support_before = 0.0;
  double mean_support_after = 0.0;
  double mean_iterations = 0.0;
  std::size_t converged_rows = 0;
};

struct PipelineResult {
  Corpus reestimated_corpus;
  TopicModel model;  // topic_word after TR
  std::vector<SparseDistribution> final_doc_topic;
  std::vector<StageLog> stage_log;
};

// Parsimonizes every document against the collection model, then rewrites
// counts as floor(P(w|d) * |d|) with the original |d|. Zero counts are
// dropped; a document that would lose everything keeps its argmax word with
// count 1. Emptied documents pass through. The vocabulary is unchanged.
Corpus document_reestimate(const Corpus& corpus, const StageConfig& cfg,
                           StageLog* log = nullptr);

// Parsimonizes every topic against the normalized sum of all topics.
TopicModel topic_reestimate(const TopicModel& model, const StageConfig& cfg,
                            StageLog* log = nullptr);

// Parsimonizes every document's topic distribution against the normalized
// sum over documents.
std::vector<SparseDistribution> topic_assignment_reestimate(
    std::span<const SparseDistribution> doc_topic, const StageConfig& cfg,
    StageLog* log = nullptr);

// Re-infers P(t|d) for every corpus document against the model's topics.
std::vector<SparseDistribution> assign_topics(const TopicModel& model,
                                              const Corpus& corpus,
                                              int iterations,
                                              std::uint64_t seed);

// Errors from a stage are rethrown with the stage name prefixed to the
// message ("[tr] ...") and the original code kept.
PipelineResult run_pipeline(const Corpus& corpus, const PipelineConfig& cfg);

}  // namespace hitr
