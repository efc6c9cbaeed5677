#include "hitr/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_set>

#include "hitr/error.hpp"

namespace hitr {

namespace detail {
// Generated from data/stopwords.txt at configure time.
const char* bundled_stopwords_text();
}  // namespace detail

Vocabulary::Vocabulary(std::vector<std::string> terms)
    : terms_(std::move(terms)) {
  index_.reserve(terms_.size());
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (!index_.emplace(terms_[i], static_cast<Index>(i)).second) {
      throw data_error("DuplicateTerm", "duplicate vocabulary term '" +
                                            terms_[i] + "'");
    }
  }
}

std::optional<Index> Vocabulary::find(std::string_view term) const {
  auto it = index_.find(std::string(term));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::uint64_t Document::length() const {
  std::uint64_t n = 0;
  for (const auto& c : counts) n += c.count;
  return n;
}

CountVector Document::count_vector(std::size_t vocab_size) const {
  std::vector<CountEntry> entries;
  entries.reserve(counts.size());
  for (const auto& c : counts) {
    entries.push_back({c.term, static_cast<double>(c.count)});
  }
  return CountVector(vocab_size, std::move(entries));
}

Corpus::Corpus(Vocabulary vocab, std::vector<Document> docs)
    : vocab_(std::move(vocab)), docs_(std::move(docs)) {
  std::unordered_set<std::string> ids;
  for (const auto& d : docs_) {
    if (d.id.empty()) {
      throw data_error("InvalidDocument", "document id must be nonempty");
    }
    if (!ids.insert(d.id).second) {
      throw data_error("DuplicateId", "duplicate document id '" + d.id + "'");
    }
    for (std::size_t k = 0; k < d.counts.size(); ++k) {
      const auto& c = d.counts[k];
      if (c.term >= vocab_.size() || c.count == 0 ||
          (k > 0 && d.counts[k - 1].term >= c.term)) {
        throw data_error("InvalidDocument",
                         "malformed counts in document '" + d.id + "'");
      }
      total_tokens_ += c.count;
    }
  }
}

std::vector<std::uint64_t> Corpus::collection_counts() const {
  std::vector<std::uint64_t> cf(vocab_.size(), 0);
  for (const auto& d : docs_) {
    for (const auto& c : d.counts) cf[c.term] += c.count;
  }
  return cf;
}

void PreprocessConfig::validate() const {
  if (top_k_frequent_removed < 0) {
    throw config_error("InvalidPreprocessConfig",
                       "top_k_frequent_removed must be >= 0");
  }
  if (min_collection_frequency < 1) {
    throw config_error("InvalidPreprocessConfig",
                       "min_collection_frequency must be >= 1");
  }
}

namespace {

std::set<std::string, std::less<>> parse_stopwords(std::istream& in) {
  std::set<std::string, std::less<>> words;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) {
      line.pop_back();
    }
    if (!line.empty() && line.front() != '#') words.insert(line);
  }
  return words;
}

bool is_ascii_letter(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

// Length of the UTF-8 sequence starting at lead byte c, or 0 if c cannot
// start one.
int utf8_length(unsigned char c) {
  if (c >= 0xF0 && c <= 0xF4) return 4;
  if (c >= 0xE0) return c <= 0xEF ? 3 : 0;
  if (c >= 0xC2) return 2;
  return 0;
}

bool is_letter_codepoint(char32_t cp) {
  if (cp < 0xC0) return false;  // Latin-1 controls and symbols
  if (cp == 0xD7 || cp == 0xF7) return false;
  if (cp >= 0x2000 && cp <= 0x206F) return false;  // General Punctuation
  if (cp >= 0x3000 && cp <= 0x303F) return false;  // CJK punctuation
  if (cp == 0xFEFF) return false;                  // BOM
  return true;
}

}  // namespace

std::set<std::string, std::less<>> default_stopwords() {
  std::istringstream in(detail::bundled_stopwords_text());
  return parse_stopwords(in);
}

std::set<std::string, std::less<>> load_stopwords(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw config_error("IoError", "cannot open stopword file '" + path + "'");
  }
  return parse_stopwords(in);
}

std::vector<std::string> tokenize(std::string_view text, bool lowercase) {
  std::vector<std::string> tokens;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) tokens.push_back(std::move(cur));
    cur.clear();
  };
  std::size_t i = 0;
  while (i < text.size()) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (c < 0x80) {
      if (is_ascii_letter(c)) {
        cur.push_back(lowercase && c <= 'Z' ? static_cast<char>(c + 32)
                                            : static_cast<char>(c));
      } else {
        flush();
      }
      ++i;
      continue;
    }
    const int len = utf8_length(c);
    bool valid = len > 0 && i + len <= text.size();
    char32_t cp = len == 2 ? (c & 0x1F) : len == 3 ? (c & 0x0F) : (c & 0x07);
    for (int k = 1; valid && k < len; ++k) {
      const auto cc = static_cast<unsigned char>(text[i + k]);
      if ((cc & 0xC0) != 0x80) valid = false;
      cp = (cp << 6) | (cc & 0x3F);
    }
    if (!valid) {
      flush();
      ++i;
      continue;
    }
    if (is_letter_codepoint(cp)) {
      cur.append(text.substr(i, len));
    } else {
      flush();
    }
    i += len;
  }
  flush();
  return tokens;
}

Corpus build_corpus(const std::vector<RawDocument>& docs,
                    const PreprocessConfig& cfg) {
  cfg.validate();
  if (docs.empty()) {
    throw data_error("EmptyInput", "corpus needs at least one document");
  }

  std::vector<std::vector<std::string>> tokenized;
  tokenized.reserve(docs.size());
  std::map<std::string, std::uint64_t, std::less<>> cf;
  for (const auto& d : docs) {
    auto tokens = tokenize(d.text, cfg.lowercase);
    std::erase_if(tokens, [&](const std::string& t) {
      return cfg.stopwords.contains(t);
    });
    for (const auto& t : tokens) ++cf[t];
    tokenized.push_back(std::move(tokens));
  }

  std::vector<std::pair<std::uint64_t, std::string_view>> by_freq;
  by_freq.reserve(cf.size());
  for (const auto& [term, n] : cf) by_freq.emplace_back(n, term);
  std::sort(by_freq.begin(), by_freq.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  std::set<std::string, std::less<>> removed;
  const auto k = std::min<std::size_t>(cfg.top_k_frequent_removed,
                                       by_freq.size());
  for (std::size_t i = 0; i < k; ++i) removed.emplace(by_freq[i].second);

  std::vector<std::string> terms;
  for (const auto& [term, n] : cf) {
    if (!removed.contains(term) &&
        n >= static_cast<std::uint64_t>(cfg.min_collection_frequency)) {
      terms.push_back(term);
    }
  }
  Vocabulary vocab(std::move(terms));

  std::vector<Document> out;
  out.reserve(docs.size());
  bool any_tokens = false;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    std::map<Index, std::uint32_t> counts;
    for (const auto& t : tokenized[d]) {
      if (auto idx = vocab.find(t)) ++counts[*idx];
    }
    Document doc{docs[d].id, docs[d].label, {}, counts.empty()};
    doc.counts.reserve(counts.size());
    for (const auto& [term, n] : counts) doc.counts.push_back({term, n});
    any_tokens = any_tokens || !counts.empty();
    out.push_back(std::move(doc));
  }
  if (!any_tokens) {
    throw data_error("AllDocumentsEmpty",
                     "preprocessing removed every token from every document");
  }
  return Corpus(std::move(vocab), std::move(out));
}

SparseDistribution collection_language_model(const Corpus& corpus) {
  if (corpus.total_tokens() == 0) {
    throw data_error("EmptyCorpus", "corpus has no tokens");
  }
  const auto cf = corpus.collection_counts();
  const double total = static_cast<double>(corpus.total_tokens());
  std::vector<ProbEntry> entries;
  for (std::size_t w = 0; w < cf.size(); ++w) {
    if (cf[w] > 0) {
      entries.push_back({static_cast<Index>(w), static_cast<double>(cf[w]) / total});
    }
  }
  return SparseDistribution::unchecked(cf.size(), std::move(entries));
}

std::string detokenize(const Corpus& corpus, const Document& doc) {
  std::string text;
  for (const auto& c : doc.counts) {
    for (std::uint32_t k = 0; k < c.count; ++k) {
      if (!text.empty()) text.push_back(' ');
      text += corpus.vocabulary().term(c.term);
    }
  }
  return text;
}

}  // namespace hitr
