#include "hitr/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <unordered_map>

#include "hitr/error.hpp"
#include "hitr/rng.hpp"

namespace hitr {

void SynthConfig::validate() const {
  auto fail = [](const std::string& what) {
    throw config_error("ConfigInfeasible", what);
  };
  if (num_groups < 2) fail("need at least 2 groups");
  if (docs_per_group < 1 || doc_length < 1 || topics_per_group < 1 ||
      diverse_docs_per_pair < 0 || nondiverse_docs_per_group < 0 ||
      num_diverse_pairs < 0) {
    fail("counts must be positive");
  }
  if (vocab_size < num_groups) fail("vocab_size must be >= num_groups");
  if (general_themes < 1) fail("general_themes must be positive");
  if (!(general_share_spread >= 0.0 && general_share_spread <= 1.0) ||
      !(length_spread >= 0.0 && length_spread < 1.0)) {
    fail("spreads must be in [0, 1]");
  }
  const long long max_pairs =
      static_cast<long long>(num_groups) * (num_groups - 1) / 2;
  if (num_diverse_pairs > max_pairs) fail("more diverse pairs than group pairs");
  if (!(general_share >= 0.0 && general_share < 1.0)) {
    fail("general_share must be in [0, 1)");
  }
  if (!(general_vocab_fraction >= 0.0 && general_vocab_fraction < 1.0)) {
    fail("general_vocab_fraction must be in [0, 1)");
  }
  const auto general = static_cast<long long>(
      std::lround(vocab_size * general_vocab_fraction));
  if (vocab_size - general < static_cast<long long>(num_groups) * topics_per_group) {
    fail("vocabulary too small for the requested groups");
  }
}

std::string synthetic_term(std::size_t i) {
  // "w" followed by a fixed-width base-26 code; no collision with stopwords.
  std::string s(4, 'a');
  for (int k = 3; k >= 0; --k) {
    s[k] = static_cast<char>('a' + i % 26);
    i /= 26;
  }
  return "w" + s;
}

std::string group_name(int g) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "g%02d", g);
  return buf;
}

std::vector<TermCount> average_counts(std::span<const TermCount> a,
                                      std::span<const TermCount> b) {
  std::map<Index, std::uint64_t> sum;
  for (const auto& c : a) sum[c.term] += c.count;
  for (const auto& c : b) sum[c.term] += c.count;
  std::vector<TermCount> out;
  Index best = 0;
  std::uint64_t best_n = 0;
  for (const auto& [term, n] : sum) {
    if (n > best_n) best = term, best_n = n;
    const auto avg = static_cast<std::uint32_t>((n + 1) / 2);
    if (avg > 0) out.push_back({term, avg});
  }
  if (out.empty() && best_n > 0) out.push_back({best, 1});
  return out;
}

double planted_entropy(const PseudoDocument& doc) {
  return doc.source_groups[0] == doc.source_groups[1] ? 0.0 : std::log(2.0);
}

namespace {

constexpr double kNoiseShare = 0.05;

// Zipf(1) weights over [begin, end), scaled to `mass`.
void add_zipf(std::vector<double>& w, std::size_t begin, std::size_t end,
              double mass) {
  if (begin >= end || mass <= 0.0) return;
  double z = 0.0;
  for (std::size_t k = begin; k < end; ++k) z += 1.0 / (k - begin + 1);
  for (std::size_t k = begin; k < end; ++k) {
    w[k] += mass * (1.0 / (k - begin + 1)) / z;
  }
}

struct PlantedModel {
  std::vector<std::vector<double>> general;  // cumulative, per theme
  // cumulative, per group, per subtopic
  std::vector<std::vector<std::vector<double>>> specific;
  std::vector<double> noise;  // cumulative, uniform over non-general terms
  double general_share = 0.0;
  double share_spread = 0.0;
  double length_spread = 0.0;
};

std::vector<double> cumulate(const std::vector<double>& w) {
  std::vector<double> cum(w.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) cum[k] = acc += w[k];
  return cum;
}

PlantedModel plant(const SynthConfig& cfg) {
  const auto V = static_cast<std::size_t>(cfg.vocab_size);
  const auto general =
      static_cast<std::size_t>(std::lround(V * cfg.general_vocab_fraction));
  const auto blocks =
      static_cast<std::size_t>(cfg.num_groups) * cfg.topics_per_group;
  const auto block_size = (V - general) / blocks;

  PlantedModel m;
  m.general_share = cfg.general_share;
  m.share_spread = cfg.general_share_spread;
  m.length_spread = cfg.length_spread;
  const auto themes = static_cast<std::size_t>(cfg.general_themes);
  const auto theme_size = general / themes;
  for (std::size_t k = 0; k < themes && theme_size > 0; ++k) {
    std::vector<double> g(V, 0.0);
    add_zipf(g, k * theme_size, (k + 1) * theme_size, 1.0);
    m.general.push_back(cumulate(g));
  }
  for (int grp = 0; grp < cfg.num_groups; ++grp) {
    std::vector<std::vector<double>> subs;
    for (int s = 0; s < cfg.topics_per_group; ++s) {
      const auto b = static_cast<std::size_t>(grp) * cfg.topics_per_group + s;
      std::vector<double> w(V, 0.0);
      add_zipf(w, general + b * block_size, general + (b + 1) * block_size, 1.0);
      subs.push_back(cumulate(w));
    }
    m.specific.push_back(std::move(subs));
  }
  std::vector<double> n(V, 0.0);
  for (std::size_t k = general; k < V; ++k) n[k] = 1.0;
  m.noise = cumulate(n);
  return m;
}

Index draw(const std::vector<double>& cumulative, Rng& rng) {
  const double u = rng.uniform() * cumulative.back();
  auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  if (it == cumulative.end()) --it;
  return static_cast<Index>(it - cumulative.begin());
}

// Each document takes its general words from one randomly chosen theme at
// a share drawn uniformly from general_share * [1 - spread, 1 + spread],
// and mixes its group's subtopics with uniformly drawn weights.
std::vector<Index> sample_tokens(const PlantedModel& m, int group,
                                 int doc_length, Rng& rng) {
  const auto spread = static_cast<std::uint64_t>(
      std::floor(doc_length * m.length_spread));
  const auto len = static_cast<std::size_t>(doc_length - spread +
                                            rng.below(2 * spread + 1));
  const std::vector<double>* theme = nullptr;
  double share = 0.0;
  if (!m.general.empty() && m.general_share > 0.0) {
    theme = &m.general[rng.below(m.general.size())];
    share = std::min(0.95, m.general_share *
                               (1.0 + m.share_spread * (2.0 * rng.uniform() - 1.0)));
  }
  const auto& subs = m.specific[group];
  std::vector<double> mix(subs.size());
  double acc = 0.0;
  for (auto& w : mix) w = acc += rng.uniform();
  std::vector<Index> tokens;
  tokens.reserve(len);
  for (std::size_t i = 0; i < std::max<std::size_t>(len, 1); ++i) {
    const double u = rng.uniform();
    if (theme && u < share) {
      tokens.push_back(draw(*theme, rng));
    } else if (u < share + (1.0 - share) * kNoiseShare) {
      tokens.push_back(draw(m.noise, rng));
    } else {
      tokens.push_back(draw(subs[draw(mix, rng)], rng));
    }
  }
  return tokens;
}

std::vector<TermCount> bag(std::span<const Index> tokens) {
  std::map<Index, std::uint32_t> m;
  for (auto t : tokens) ++m[t];
  std::vector<TermCount> out;
  for (const auto& [t, n] : m) out.push_back({t, n});
  return out;
}

std::string render(std::span<const Index> tokens) {
  std::string text;
  for (auto t : tokens) {
    if (!text.empty()) text.push_back(' ');
    text += synthetic_term(t);
  }
  return text;
}

std::string render(std::span<const TermCount> counts) {
  std::string text;
  for (const auto& c : counts) {
    for (std::uint32_t k = 0; k < c.count; ++k) {
      if (!text.empty()) text.push_back(' ');
      text += synthetic_term(c.term);
    }
  }
  return text;
}

}  // namespace

SyntheticBenchmark generate_synthetic(const SynthConfig& cfg) {
  cfg.validate();
  const auto model = plant(cfg);
  SyntheticBenchmark out;

  Rng train_rng(cfg.seed, 1);
  for (int g = 0; g < cfg.num_groups; ++g) {
    for (int i = 0; i < cfg.docs_per_group; ++i) {
      char id[32];
      std::snprintf(id, sizeof id, "%s-d%04d", group_name(g).c_str(), i);
      const auto tokens =
          sample_tokens(model, g, cfg.doc_length, train_rng);
      out.training.push_back({id, render(tokens), group_name(g)});
    }
  }

  std::vector<std::pair<int, int>> pairs;
  for (int a = 0; a < cfg.num_groups; ++a) {
    for (int b = a + 1; b < cfg.num_groups; ++b) pairs.emplace_back(a, b);
  }
  Rng pair_rng(cfg.seed, 2);
  for (std::size_t i = pairs.size(); i > 1; --i) {
    std::swap(pairs[i - 1], pairs[pair_rng.below(i)]);
  }
  pairs.resize(cfg.num_diverse_pairs);

  Rng pseudo_rng(cfg.seed, 3);
  int next_id = 0;
  auto make = [&](int ga, int gb, bool diverse) {
    const auto a = bag(sample_tokens(model, ga, cfg.doc_length, pseudo_rng));
    const auto b = bag(sample_tokens(model, gb, cfg.doc_length, pseudo_rng));
    char id[32];
    std::snprintf(id, sizeof id, "pseudo-%04d", next_id++);
    PseudoDocument p;
    p.doc = {id, render(average_counts(a, b)),
             diverse ? kDiverseLabel : kNonDiverseLabel};
    p.diverse = diverse;
    p.source_groups = {ga, gb};
    out.pseudo.push_back(std::move(p));
  };
  for (const auto& [a, b] : pairs) {
    for (int i = 0; i < cfg.diverse_docs_per_pair; ++i) make(a, b, true);
  }
  for (int g = 0; g < cfg.num_groups; ++g) {
    for (int i = 0; i < cfg.nondiverse_docs_per_group; ++i) make(g, g, false);
  }
  return out;
}

RocResult roc_auc(std::span<const LabeledScore> scores) {
  std::vector<double> pos, neg;
  for (const auto& s : scores) {
    if (!std::isfinite(s.score)) {
      throw data_error("InvalidScore", "non-finite score for '" + s.id + "'");
    }
    (s.positive ? pos : neg).push_back(s.score);
  }
  if (pos.empty() || neg.empty()) {
    throw data_error("SingleClass", "ROC needs both positive and negative labels");
  }
  std::sort(neg.begin(), neg.end());
  // Twice the Mann-Whitney U statistic, kept integral.
  std::uint64_t twice_u = 0;
  for (double p : pos) {
    const auto lo = std::lower_bound(neg.begin(), neg.end(), p);
    const auto hi = std::upper_bound(lo, neg.end(), p);
    twice_u += 2 * static_cast<std::uint64_t>(lo - neg.begin()) +
               static_cast<std::uint64_t>(hi - lo);
  }
  RocResult r;
  r.auc = static_cast<double>(twice_u) /
          (2.0 * static_cast<double>(pos.size()) *
           static_cast<double>(neg.size()));

  std::vector<std::pair<double, bool>> sorted;
  sorted.reserve(scores.size());
  for (const auto& s : scores) sorted.emplace_back(s.score, s.positive);
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  const double P = static_cast<double>(pos.size());
  const double N = static_cast<double>(neg.size());
  r.points.push_back({std::numeric_limits<double>::infinity(), 0.0, 0.0});
  std::size_t tp = 0, fp = 0;
  for (std::size_t i = 0; i < sorted.size();) {
    const double threshold = sorted[i].first;
    for (; i < sorted.size() && sorted[i].first == threshold; ++i) {
      (sorted[i].second ? tp : fp)++;
    }
    r.points.push_back({threshold, static_cast<double>(fp) / N,
                        static_cast<double>(tp) / P});
  }
  return r;
}

double sparsity(std::span<const SparseDistribution> doc_topic, double tau) {
  if (doc_topic.empty()) return 0.0;
  std::size_t total = 0;
  for (const auto& row : doc_topic) {
    for (const auto& e : row.entries()) total += e.prob >= tau ? 1 : 0;
  }
  return static_cast<double>(total) / static_cast<double>(doc_topic.size());
}

double npmi(std::uint64_t df_i, std::uint64_t df_j, std::uint64_t df_ij,
            std::uint64_t n_docs) {
  const double denom = static_cast<double>(n_docs) + 1.0;
  const double p_i = (static_cast<double>(df_i) + 1.0) / denom;
  const double p_j = (static_cast<double>(df_j) + 1.0) / denom;
  const double p_ij = (static_cast<double>(df_ij) + 1.0) / denom;
  if (p_ij >= 1.0) return 0.0;
  return std::log(p_ij / (p_i * p_j)) / -std::log(p_ij);
}

std::vector<Index> top_words(const SparseDistribution& topic, std::size_t n) {
  std::vector<ProbEntry> e(topic.entries().begin(), topic.entries().end());
  const auto k = std::min(n, e.size());
  std::partial_sort(e.begin(), e.begin() + k, e.end(),
                    [](const ProbEntry& a, const ProbEntry& b) {
                      return a.prob != b.prob ? a.prob > b.prob
                                              : a.index < b.index;
                    });
  std::vector<Index> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back(e[i].index);
  return out;
}

double npmi_coherence(const TopicModel& model, const Corpus& reference,
                      std::size_t top_n) {
  if (top_n < 2) {
    throw config_error("InvalidEvalConfig", "coherence needs top_n >= 2");
  }
  if (reference.num_docs() == 0) {
    throw data_error("EmptyCorpus", "coherence reference corpus is empty");
  }
  std::vector<std::vector<Index>> tops;
  std::unordered_map<Index, std::vector<std::uint32_t>> postings;
  for (const auto& topic : model.topic_word) {
    tops.push_back(top_words(topic, top_n));
    for (auto w : tops.back()) postings.try_emplace(w);
  }
  for (std::uint32_t d = 0; d < reference.num_docs(); ++d) {
    for (const auto& c : reference.docs()[d].counts) {
      if (auto it = postings.find(c.term); it != postings.end()) {
        it->second.push_back(d);
      }
    }
  }
  const auto D = reference.num_docs();
  std::vector<double> per_topic(tops.size(), 0.0);
  const auto T = static_cast<std::ptrdiff_t>(tops.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t t = 0; t < T; ++t) {
    const auto& words = tops[t];
    double s = 0.0;
    for (std::size_t i = 0; i < words.size(); ++i) {
      const auto& a = postings.at(words[i]);
      for (std::size_t j = i + 1; j < words.size(); ++j) {
        const auto& b = postings.at(words[j]);
        std::uint64_t both = 0;
        for (std::size_t x = 0, y = 0; x < a.size() && y < b.size();) {
          if (a[x] < b[y]) {
            ++x;
          } else if (b[y] < a[x]) {
            ++y;
          } else {
            ++both, ++x, ++y;
          }
        }
        s += npmi(a.size(), b.size(), both, D);
      }
    }
    per_topic[t] = s;
  }
  double total = 0.0;
  for (double s : per_topic) total += s;
  return total;
}

PurityNmi purity_nmi(std::span<const std::size_t> clusters,
                     std::span<const std::string> labels) {
  if (clusters.size() != labels.size()) {
    throw data_error("ShapeMismatch", "clusters and labels differ in length");
  }
  if (clusters.empty()) {
    throw data_error("EmptyInput", "no documents to cluster");
  }
  std::map<std::size_t, std::map<std::string, std::size_t>> table;
  std::map<std::string, std::size_t> class_size;
  for (std::size_t d = 0; d < clusters.size(); ++d) {
    ++table[clusters[d]][labels[d]];
    ++class_size[labels[d]];
  }
  const double N = static_cast<double>(clusters.size());
  PurityNmi r;
  double mi = 0.0, h_cluster = 0.0, h_class = 0.0;
  for (const auto& [c, row] : table) {
    std::size_t best = 0, size = 0;
    for (const auto& [label, n] : row) {
      best = std::max(best, n);
      size += n;
    }
    r.purity += static_cast<double>(best);
    const double pc = static_cast<double>(size) / N;
    h_cluster -= pc * std::log(pc);
    for (const auto& [label, n] : row) {
      const double pj = static_cast<double>(n) / N;
      const double pk = static_cast<double>(class_size[label]) / N;
      mi += pj * std::log(pj / (pc * pk));
    }
  }
  for (const auto& [label, n] : class_size) {
    const double pk = static_cast<double>(n) / N;
    h_class -= pk * std::log(pk);
  }
  r.purity /= N;
  const double h = h_cluster + h_class;
  r.nmi = h > 0.0 ? std::clamp(2.0 * mi / h, 0.0, 1.0) : 1.0;
  return r;
}

PurityNmi cluster_purity_nmi(std::span<const SparseDistribution> doc_topic,
                             std::span<const std::string> labels) {
  std::vector<std::size_t> clusters;
  clusters.reserve(doc_topic.size());
  for (const auto& row : doc_topic) clusters.push_back(row.argmax());
  return purity_nmi(clusters, labels);
}

double gini(std::span<const double> values) {
  if (values.empty()) return 0.0;
  std::vector<double> x(values.begin(), values.end());
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double weighted = 0.0, total = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    weighted += (2.0 * static_cast<double>(i + 1) - n - 1.0) * x[i];
    total += x[i];
  }
  return total > 0.0 ? weighted / (n * total) : 0.0;
}

std::vector<double> topic_mass(std::span<const SparseDistribution> doc_topic) {
  if (doc_topic.empty()) return {};
  std::vector<double> mass(doc_topic.front().dim(), 0.0);
  for (const auto& row : doc_topic) {
    for (const auto& e : row.entries()) mass[e.index] += e.prob;
  }
  return mass;
}

}  // namespace hitr
