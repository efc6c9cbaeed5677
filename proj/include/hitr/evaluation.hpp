#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hitr/corpus.hpp"
#include "hitr/lda.hpp"
#include "hitr/sparse.hpp"

namespace hitr {

// ---------------------------------------------------------------------------
// Synthetic diverse / non-diverse benchmark
// ---------------------------------------------------------------------------

struct SynthConfig {
  int num_groups = 10;
  int docs_per_group = 100;
  int vocab_size = 2000;
  int topics_per_group = 2;
  int doc_length = 100;
  int num_diverse_pairs = 5;
  int diverse_docs_per_pair = 10;
  int nondiverse_docs_per_group = 5;
  // Mean share of a document's tokens drawn from a block of general words
  // common to all groups. Each document uses one general theme, at a share
  // drawn uniformly from general_share * [1 - spread, 1 + spread].
  double general_share = 0.5;
  double general_share_spread = 0.5;
  // Document lengths are uniform in doc_length * [1 - spread, 1 + spread].
  double length_spread = 0.5;
  // Fraction of the vocabulary reserved for the general block, split evenly
  // into general_themes Zipf sub-blocks.
  double general_vocab_fraction = 0.05;
  int general_themes = 1;
  std::uint64_t seed = 7;

  // Throws Error{"ConfigInfeasible"}.
  void validate() const;
};

inline const std::string kDiverseLabel = "diverse";
inline const std::string kNonDiverseLabel = "non-diverse";

struct PseudoDocument {
  RawDocument doc;  // label is kDiverseLabel or kNonDiverseLabel
  bool diverse = false;
  std::array<int, 2> source_groups{};
};

struct SyntheticBenchmark {
  std::vector<RawDocument> training;  // label = group name
  std::vector<PseudoDocument> pseudo;
};

// Training documents sampled from planted group distributions over
// disjoint vocabulary blocks (plus the shared general block). Diverse
// pseudo-documents average one fresh document from each group of a
// randomly chosen group pair; non-diverse ones average two fresh documents
// of the same group. Deterministic given cfg.seed.
SyntheticBenchmark generate_synthetic(const SynthConfig& cfg);

// Element-wise average of two count maps, rounded half up; at least one
// token survives.
std::vector<TermCount> average_counts(std::span<const TermCount> a,
                                      std::span<const TermCount> b);

// Entropy (nats) of the planted group mixture behind a pseudo-document.
double planted_entropy(const PseudoDocument& doc);

// Name of synthetic term i: letters only, so the tokenizer keeps it whole.
std::string synthetic_term(std::size_t i);
std::string group_name(int g);

// ---------------------------------------------------------------------------
// Metrics
// ---------------------------------------------------------------------------

struct LabeledScore {
  std::string id;
  double score = 0.0;
  bool positive = false;  // diverse
};

struct RocPoint {
  double threshold;  // +inf for the origin
  double fpr;
  double tpr;
};

struct RocResult {
  std::vector<RocPoint> points;
  double auc = 0.0;
};

// AUC as the probability that a random positive outscores a random
// negative, ties counted 1/2. ROC points sweep the threshold down through
// every distinct score. Throws Error{"SingleClass"}.
RocResult roc_auc(std::span<const LabeledScore> scores);

// Mean number of topics per document with P(t|d) >= tau.
double sparsity(std::span<const SparseDistribution> doc_topic,
                double tau = 0.01);

// NPMI of one word pair from document frequencies over n_docs reference
// documents, with add-one smoothing:
//   p_i = (df_i + 1) / (n_docs + 1),  p_ij = (df_ij + 1) / (n_docs + 1)
// Defined as 0 when p_ij == 1.
double npmi(std::uint64_t df_i, std::uint64_t df_j, std::uint64_t df_ij,
            std::uint64_t n_docs);

// Top-n words of a topic by probability, lower index first on ties.
std::vector<Index> top_words(const SparseDistribution& topic, std::size_t n);

// Sum over topics of the NPMI of every unordered pair among the topic's top
// n words, with document co-occurrence counted in `reference`.
double npmi_coherence(const TopicModel& model, const Corpus& reference,
                      std::size_t top_n = 10);

struct PurityNmi {
  double purity = 0.0;
  double nmi = 0.0;
};

// Clusters documents by argmax topic (lowest index on ties) and compares
// against class labels.
PurityNmi cluster_purity_nmi(std::span<const SparseDistribution> doc_topic,
                             std::span<const std::string> labels);

// Same measures from an explicit cluster assignment.
PurityNmi purity_nmi(std::span<const std::size_t> clusters,
                     std::span<const std::string> labels);

// Gini coefficient of a non-negative vector (0 = perfectly even).
double gini(std::span<const double> values);

// Sum over documents of P(t|d), per topic.
std::vector<double> topic_mass(std::span<const SparseDistribution> doc_topic);

struct EvalReport {
  RocResult roc;
  std::optional<double> sparsity;
  std::optional<double> coherence;
  std::optional<double> purity;
  std::optional<double> nmi;
};

}  // namespace hitr
