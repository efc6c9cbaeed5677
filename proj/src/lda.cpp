#include "hitr/lda.hpp"

#include <string>

#include "hitr/error.hpp"
#include "hitr/parallel.hpp"
#include "hitr/rng.hpp"

namespace hitr {

void LdaConfig::validate() const {
  auto fail = [](const std::string& what) {
    throw config_error("InvalidLdaConfig", what);
  };
  if (num_topics < 1) fail("num_topics must be positive");
  if (alpha && !(*alpha > 0.0)) fail("alpha must be positive");
  if (!(beta > 0.0)) fail("beta must be positive");
  if (gibbs_iterations < 1) fail("gibbs_iterations must be positive");
}

namespace {

// Draws an index from unnormalized cumulative weights.
std::size_t sample_cumulative(std::span<const double> cumulative, Rng& rng) {
  const double u = rng.uniform() * cumulative.back();
  std::size_t t = 0;
  while (t + 1 < cumulative.size() && cumulative[t] <= u) ++t;
  return t;
}

struct Sampler {
  std::size_t num_topics;
  std::size_t vocab_size;
  std::vector<std::size_t> doc_begin;  // token offsets, size D + 1
  std::vector<Index> words;
  std::vector<std::uint32_t> topics;
  std::vector<std::int32_t> n_wt;  // V x T
  std::vector<std::int32_t> n_dt;  // D x T
  std::vector<std::int32_t> n_t;
};

Sampler make_sampler(const Corpus& corpus, std::size_t T, Rng& rng) {
  Sampler s{T, corpus.vocab_size(), {}, {}, {}, {}, {}, {}};
  const auto D = corpus.num_docs();
  s.doc_begin.reserve(D + 1);
  s.doc_begin.push_back(0);
  for (const auto& doc : corpus.docs()) {
    for (const auto& c : doc.counts) {
      s.words.insert(s.words.end(), c.count, c.term);
    }
    s.doc_begin.push_back(s.words.size());
  }
  s.topics.resize(s.words.size());
  s.n_wt.assign(s.vocab_size * T, 0);
  s.n_dt.assign(D * T, 0);
  s.n_t.assign(T, 0);
  for (std::size_t d = 0; d < D; ++d) {
    for (std::size_t i = s.doc_begin[d]; i < s.doc_begin[d + 1]; ++i) {
      const auto t = static_cast<std::uint32_t>(rng.below(T));
      s.topics[i] = t;
      ++s.n_wt[s.words[i] * T + t];
      ++s.n_dt[d * T + t];
      ++s.n_t[t];
    }
  }
  return s;
}

void sweep(Sampler& s, double alpha, double beta, Rng& rng,
           std::vector<double>& cumulative) {
  const auto T = s.num_topics;
  const double v_beta = static_cast<double>(s.vocab_size) * beta;
  const auto D = s.doc_begin.size() - 1;
  for (std::size_t d = 0; d < D; ++d) {
    std::int32_t* doc = &s.n_dt[d * T];
    for (std::size_t i = s.doc_begin[d]; i < s.doc_begin[d + 1]; ++i) {
      std::int32_t* word = &s.n_wt[s.words[i] * T];
      const auto old_t = s.topics[i];
      --word[old_t];
      --doc[old_t];
      --s.n_t[old_t];
      double acc = 0.0;
      for (std::size_t t = 0; t < T; ++t) {
        acc += (doc[t] + alpha) * (word[t] + beta) / (s.n_t[t] + v_beta);
        cumulative[t] = acc;
      }
      const auto new_t = static_cast<std::uint32_t>(
          sample_cumulative(cumulative, rng));
      s.topics[i] = new_t;
      ++word[new_t];
      ++doc[new_t];
      ++s.n_t[new_t];
    }
  }
}

}  // namespace

TopicModel train(const Corpus& corpus, const LdaConfig& cfg) {
  return train(corpus, cfg, nullptr);
}

TopicModel train(const Corpus& corpus, const LdaConfig& cfg,
                 const SweepObserver& observer) {
  cfg.validate();
  if (corpus.total_tokens() == 0) {
    throw data_error("EmptyCorpus", "LDA needs at least one non-empty document");
  }
  const auto T = static_cast<std::size_t>(cfg.num_topics);
  const auto V = corpus.vocab_size();
  const auto D = corpus.num_docs();
  const double alpha = cfg.resolved_alpha();
  const double beta = cfg.beta;

  Rng rng(cfg.seed);
  Sampler s = make_sampler(corpus, T, rng);
  std::vector<double> cumulative(T);
  for (int it = 0; it < cfg.gibbs_iterations; ++it) {
    sweep(s, alpha, beta, rng, cumulative);
    if (observer) observer(GibbsCounts{s.n_wt, s.n_dt, T});
  }

  TopicModel model;
  model.config = cfg;
  model.config.alpha = alpha;
  model.vocab_size = V;
  model.topic_word.reserve(T);
  const double v_beta = static_cast<double>(V) * beta;
  for (std::size_t t = 0; t < T; ++t) {
    std::vector<ProbEntry> row(V);
    const double denom = s.n_t[t] + v_beta;
    for (std::size_t w = 0; w < V; ++w) {
      row[w] = {static_cast<Index>(w), (s.n_wt[w * T + t] + beta) / denom};
    }
    model.topic_word.push_back(SparseDistribution::unchecked(V, std::move(row)));
  }
  model.doc_topic.reserve(D);
  const double t_alpha = static_cast<double>(T) * alpha;
  for (std::size_t d = 0; d < D; ++d) {
    const auto len = s.doc_begin[d + 1] - s.doc_begin[d];
    if (len == 0) {
      model.doc_topic.push_back(SparseDistribution::uniform(T));
      continue;
    }
    std::vector<ProbEntry> row(T);
    const double denom = static_cast<double>(len) + t_alpha;
    for (std::size_t t = 0; t < T; ++t) {
      row[t] = {static_cast<Index>(t), (s.n_dt[d * T + t] + alpha) / denom};
    }
    model.doc_topic.push_back(SparseDistribution::unchecked(T, std::move(row)));
  }
  return model;
}

namespace {

// Word-major copy of P(w|t) restricted to what inference needs.
std::vector<double> word_topic_table(const TopicModel& model) {
  const auto T = model.num_topics();
  std::vector<double> phi(model.vocab_size * T, 0.0);
  for (std::size_t t = 0; t < T; ++t) {
    for (const auto& e : model.topic_word[t].entries()) {
      phi[e.index * T + t] = e.prob;
    }
  }
  return phi;
}

Inference infer_one(std::span<const double> phi, std::size_t T, double alpha,
                    const CountVector& doc, int iterations, Rng& rng) {
  std::vector<Index> words;
  for (const auto& c : doc.entries()) {
    if (c.index * T + T > phi.size()) {
      throw data_error("ShapeMismatch", "document term outside vocabulary");
    }
    bool known = false;
    for (std::size_t t = 0; t < T && !known; ++t) {
      known = phi[c.index * T + t] > 0.0;
    }
    if (!known) continue;
    // Pseudo-counts are rounded to whole tokens.
    const auto n = static_cast<std::size_t>(c.count + 0.5);
    words.insert(words.end(), n, c.index);
  }
  if (words.empty()) {
    return {SparseDistribution::uniform(T), true};
  }
  std::vector<std::uint32_t> z(words.size());
  std::vector<std::int32_t> n_t(T, 0);
  for (auto& t : z) {
    t = static_cast<std::uint32_t>(rng.below(T));
    ++n_t[t];
  }
  std::vector<double> cumulative(T);
  for (int it = 0; it < iterations; ++it) {
    for (std::size_t i = 0; i < words.size(); ++i) {
      const double* row = &phi[words[i] * T];
      --n_t[z[i]];
      double acc = 0.0;
      for (std::size_t t = 0; t < T; ++t) {
        acc += (n_t[t] + alpha) * row[t];
        cumulative[t] = acc;
      }
      z[i] = static_cast<std::uint32_t>(sample_cumulative(cumulative, rng));
      ++n_t[z[i]];
    }
  }
  std::vector<ProbEntry> out(T);
  const double denom =
      static_cast<double>(words.size()) + static_cast<double>(T) * alpha;
  for (std::size_t t = 0; t < T; ++t) {
    out[t] = {static_cast<Index>(t), (n_t[t] + alpha) / denom};
  }
  return {SparseDistribution::unchecked(T, std::move(out)), false};
}

void check_infer_args(const TopicModel& model, int iterations) {
  if (model.num_topics() == 0) {
    throw data_error("ShapeMismatch", "model has no topics");
  }
  if (iterations < 1) {
    throw config_error("InvalidLdaConfig", "inference iterations must be positive");
  }
}

}  // namespace

Inference infer_doc_topics(const TopicModel& model, const CountVector& doc,
                           int iterations, std::uint64_t seed) {
  check_infer_args(model, iterations);
  const auto phi = word_topic_table(model);
  Rng rng(seed, 0);
  return infer_one(phi, model.num_topics(), model.config.resolved_alpha(), doc,
                   iterations, rng);
}

std::vector<Inference> infer_all(const TopicModel& model,
                                 std::span<const CountVector> docs,
                                 int iterations, std::uint64_t seed) {
  check_infer_args(model, iterations);
  const auto phi = word_topic_table(model);
  const auto T = model.num_topics();
  const double alpha = model.config.resolved_alpha();
  std::vector<Inference> out(docs.size());
  parallel::ExceptionSlot failure;
  const auto n = static_cast<std::ptrdiff_t>(docs.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t d = 0; d < n; ++d) {
    failure.run([&] {
      Rng rng(seed, static_cast<std::uint64_t>(d));
      out[d] = infer_one(phi, T, alpha, docs[d], iterations, rng);
    });
  }
  failure.rethrow();
  return out;
}

namespace serial {

std::vector<Inference> infer_all(const TopicModel& model,
                                 std::span<const CountVector> docs,
                                 int iterations, std::uint64_t seed) {
  check_infer_args(model, iterations);
  const auto phi = word_topic_table(model);
  std::vector<Inference> out;
  out.reserve(docs.size());
  for (std::size_t d = 0; d < docs.size(); ++d) {
    Rng rng(seed, d);
    out.push_back(infer_one(phi, model.num_topics(),
                            model.config.resolved_alpha(), docs[d], iterations,
                            rng));
  }
  return out;
}

}  // namespace serial

}  // namespace hitr
