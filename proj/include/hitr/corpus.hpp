#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hitr/sparse.hpp"

namespace hitr {

struct RawDocument {
  std::string id;
  std::string text;
  std::optional<std::string> label;
};

// Bijective term <-> index mapping; indices contiguous from 0.
class Vocabulary {
 public:
  Vocabulary() = default;
  // Throws Error{"DuplicateTerm"} if a term repeats.
  explicit Vocabulary(std::vector<std::string> terms);

  std::size_t size() const noexcept { return terms_.size(); }
  const std::string& term(Index i) const { return terms_.at(i); }
  const std::vector<std::string>& terms() const noexcept { return terms_; }
  std::optional<Index> find(std::string_view term) const;

  bool operator==(const Vocabulary& o) const { return terms_ == o.terms_; }

 private:
  std::vector<std::string> terms_;
  std::unordered_map<std::string, Index> index_;
};

struct TermCount {
  Index term;
  std::uint32_t count;
  bool operator==(const TermCount&) const = default;
};

struct Document {
  std::string id;
  std::optional<std::string> label;
  std::vector<TermCount> counts;  // sorted by term, counts > 0
  // Set when preprocessing removed every token; the document stays in the
  // corpus so ids remain stable downstream.
  bool emptied = false;

  std::uint64_t length() const;
  CountVector count_vector(std::size_t vocab_size) const;
  bool operator==(const Document&) const = default;
};

class Corpus {
 public:
  Corpus() = default;
  // Validates term ranges, positive counts, sorted order and unique ids.
  Corpus(Vocabulary vocab, std::vector<Document> docs);

  const Vocabulary& vocabulary() const noexcept { return vocab_; }
  const std::vector<Document>& docs() const noexcept { return docs_; }
  std::size_t num_docs() const noexcept { return docs_.size(); }
  std::size_t vocab_size() const noexcept { return vocab_.size(); }
  std::uint64_t total_tokens() const noexcept { return total_tokens_; }

  // Per-term collection frequency.
  std::vector<std::uint64_t> collection_counts() const;

  bool operator==(const Corpus& o) const {
    return vocab_ == o.vocab_ && docs_ == o.docs_;
  }

 private:
  Vocabulary vocab_;
  std::vector<Document> docs_;
  std::uint64_t total_tokens_ = 0;
};

struct PreprocessConfig {
  bool lowercase = true;
  std::set<std::string, std::less<>> stopwords;
  int top_k_frequent_removed = 100;
  int min_collection_frequency = 5;

  void validate() const;
};

// The stopword list bundled with the toolkit (data/stopwords.txt).
std::set<std::string, std::less<>> default_stopwords();
std::set<std::string, std::less<>> load_stopwords(const std::string& path);

// Maximal runs of letters; everything else separates tokens. ASCII letters
// are lowercased when `lowercase` is set. Multi-byte UTF-8 sequences count as
// letters except for the Latin-1 symbol range, the multiplication and
// division signs, and the General Punctuation block.
std::vector<std::string> tokenize(std::string_view text, bool lowercase = true);

// Pipeline: stopwords, then the top-k most frequent terms (ties broken
// lexicographically), then terms below min_collection_frequency. Vocabulary
// terms are sorted lexicographically.
// Throws Error{"AllDocumentsEmpty"} / Error{"EmptyInput"}.
Corpus build_corpus(const std::vector<RawDocument>& docs,
                    const PreprocessConfig& cfg);

// Maximum-likelihood collection model P(w) = cf(w) / total_tokens.
// Throws Error{"EmptyCorpus"}.
SparseDistribution collection_language_model(const Corpus& corpus);

// Space-separated tokens, each term repeated count times.
std::string detokenize(const Corpus& corpus, const Document& doc);

}  // namespace hitr
