#include "hitr/pipeline.hpp"

#include <algorithm>
#include <cmath>

#include "hitr/error.hpp"
#include "hitr/rng.hpp"

namespace hitr {

void PipelineConfig::validate() const {
  for (const auto* stage : {&dr, &tr, &tar}) {
    if (stage->enabled) stage->em.validate();
  }
  lda.validate();
  if (assign_iterations < 1) {
    throw config_error("InvalidPipelineConfig",
                       "assign_iterations must be positive");
  }
}

namespace {

// floor() with a small allowance so that products which are integral in
// exact arithmetic (ML estimate times length) do not drop to the integer
// below through rounding.
std::uint32_t floor_count(double x) {
  return static_cast<std::uint32_t>(std::floor(x + 1e-9));
}

double total_variation(const SparseDistribution& a,
                       const SparseDistribution& b) {
  double tv = 0.0;
  const auto ea = a.entries();
  const auto eb = b.entries();
  std::size_t i = 0, j = 0;
  while (i < ea.size() || j < eb.size()) {
    if (j == eb.size() || (i < ea.size() && ea[i].index < eb[j].index)) {
      tv += ea[i++].prob;
    } else if (i == ea.size() || eb[j].index < ea[i].index) {
      tv += eb[j++].prob;
    } else {
      tv += std::abs(ea[i++].prob - eb[j++].prob);
    }
  }
  return 0.5 * tv;
}

// Normalized element-wise sum of rows.
std::vector<double> pooled_background(
    std::span<const SparseDistribution> rows, std::size_t dim) {
  std::vector<double> bg(dim, 0.0);
  for (const auto& row : rows) {
    for (const auto& e : row.entries()) bg[e.index] += e.prob;
  }
  double total = 0.0;
  for (double v : bg) total += v;
  if (!(total > 0.0)) {
    throw data_error("EmptyInput", "no probability mass to pool");
  }
  for (double& v : bg) v /= total;
  return bg;
}

std::vector<SparseDistribution> reestimate_rows(
    std::span<const SparseDistribution> rows, std::size_t dim,
    const StageConfig& cfg, const char* stage, StageLog* log) {
  cfg.em.validate();
  const auto bg = pooled_background(rows, dim);
  std::vector<CountVector> pseudo;
  pseudo.reserve(rows.size());
  for (const auto& r : rows) {
    pseudo.push_back(CountVector::scaled(r, kPseudoCountScale));
  }
  auto outcomes = parsimonize_all(pseudo, bg, cfg.em);
  std::vector<SparseDistribution> out;
  out.reserve(rows.size());
  StageLog l{stage, true, rows.size()};
  for (std::size_t r = 0; r < rows.size(); ++r) {
    l.removed_mass += total_variation(rows[r], outcomes[r].dist);
    l.mean_support_before += static_cast<double>(rows[r].support_size());
    l.mean_support_after +=
        static_cast<double>(outcomes[r].dist.support_size());
    l.mean_iterations += outcomes[r].iterations;
    l.converged_rows += outcomes[r].converged ? 1 : 0;
    out.push_back(std::move(outcomes[r].dist));
  }
  if (!rows.empty()) {
    const auto n = static_cast<double>(rows.size());
    l.removed_mass /= n;
    l.mean_support_before /= n;
    l.mean_support_after /= n;
    l.mean_iterations /= n;
  }
  if (log) *log = l;
  return out;
}

double mean_support(std::span<const SparseDistribution> rows) {
  if (rows.empty()) return 0.0;
  double s = 0.0;
  for (const auto& r : rows) s += static_cast<double>(r.support_size());
  return s / static_cast<double>(rows.size());
}

template <class F>
auto in_stage(const char* stage, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    throw Error(e.kind(), e.code(), std::string("[") + stage + "] " + e.what());
  }
}

}  // namespace

Corpus document_reestimate(const Corpus& corpus, const StageConfig& cfg,
                           StageLog* log) {
  cfg.em.validate();
  const auto background = collection_language_model(corpus).to_dense();
  const auto V = corpus.vocab_size();

  std::vector<std::size_t> rows;  // non-empty document positions
  std::vector<CountVector> counts;
  for (std::size_t d = 0; d < corpus.num_docs(); ++d) {
    if (corpus.docs()[d].counts.empty()) continue;
    rows.push_back(d);
    counts.push_back(corpus.docs()[d].count_vector(V));
  }
  auto outcomes = parsimonize_all(counts, background, cfg.em);

  std::vector<Document> docs = corpus.docs();
  StageLog l{"dr", true, rows.size()};
  std::uint64_t kept_tokens = 0;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    Document& doc = docs[rows[r]];
    const double len = static_cast<double>(doc.length());
    l.mean_support_before += static_cast<double>(doc.counts.size());
    const auto& dist = outcomes[r].dist;
    std::vector<TermCount> next;
    for (const auto& e : dist.entries()) {
      const auto tf = floor_count(e.prob * len);
      if (tf > 0) next.push_back({e.index, tf});
    }
    if (next.empty()) next.push_back({dist.argmax(), 1});
    for (const auto& c : next) kept_tokens += c.count;
    l.mean_support_after += static_cast<double>(next.size());
    l.mean_iterations += outcomes[r].iterations;
    l.converged_rows += outcomes[r].converged ? 1 : 0;
    doc.counts = std::move(next);
  }
  if (!rows.empty()) {
    const auto n = static_cast<double>(rows.size());
    l.mean_support_before /= n;
    l.mean_support_after /= n;
    l.mean_iterations /= n;
  }
  l.removed_mass = 1.0 - static_cast<double>(kept_tokens) /
                             static_cast<double>(corpus.total_tokens());
  if (log) *log = l;
  return Corpus(corpus.vocabulary(), std::move(docs));
}

TopicModel topic_reestimate(const TopicModel& model, const StageConfig& cfg,
                            StageLog* log) {
  TopicModel out = model;
  out.topic_word =
      reestimate_rows(model.topic_word, model.vocab_size, cfg, "tr", log);
  return out;
}

std::vector<SparseDistribution> topic_assignment_reestimate(
    std::span<const SparseDistribution> doc_topic, const StageConfig& cfg,
    StageLog* log) {
  if (doc_topic.empty()) return {};
  const auto T = doc_topic.front().dim();
  for (const auto& row : doc_topic) {
    if (row.dim() != T) {
      throw data_error("ShapeMismatch", "doc_topic rows differ in dimension");
    }
  }
  return reestimate_rows(doc_topic, T, cfg, "tar", log);
}

std::vector<SparseDistribution> assign_topics(const TopicModel& model,
                                              const Corpus& corpus,
                                              int iterations,
                                              std::uint64_t seed) {
  std::vector<CountVector> docs;
  docs.reserve(corpus.num_docs());
  for (const auto& d : corpus.docs()) {
    docs.push_back(d.count_vector(corpus.vocab_size()));
  }
  auto inferred = infer_all(model, docs, iterations, seed);
  std::vector<SparseDistribution> out;
  out.reserve(inferred.size());
  for (auto& inf : inferred) out.push_back(std::move(inf.dist));
  return out;
}

PipelineResult run_pipeline(const Corpus& corpus, const PipelineConfig& cfg) {
  cfg.validate();
  PipelineResult result;

  StageLog dr_log{"dr", false, corpus.num_docs()};
  result.reestimated_corpus = in_stage("dr", [&] {
    return cfg.dr.enabled ? document_reestimate(corpus, cfg.dr, &dr_log)
                          : corpus;
  });
  result.stage_log.push_back(dr_log);

  result.model =
      in_stage("lda", [&] { return train(result.reestimated_corpus, cfg.lda); });
  StageLog lda_log{"lda", true, result.model.doc_topic.size()};
  lda_log.mean_support_before = lda_log.mean_support_after =
      mean_support(result.model.doc_topic);
  lda_log.mean_iterations = cfg.lda.gibbs_iterations;
  result.stage_log.push_back(lda_log);

  StageLog tr_log{"tr", false, result.model.num_topics()};
  std::vector<SparseDistribution> doc_topic;
  if (cfg.tr.enabled) {
    in_stage("tr", [&] {
      result.model = topic_reestimate(result.model, cfg.tr, &tr_log);
    });
    StageLog assign_log{"assign", true, corpus.num_docs()};
    const auto seed = splitmix64(cfg.lda.seed ^ 0xA5516E0ULL);
    doc_topic = in_stage("assign", [&] {
      return assign_topics(result.model, result.reestimated_corpus,
                           cfg.assign_iterations, seed);
    });
    assign_log.mean_support_before = mean_support(result.model.doc_topic);
    assign_log.mean_support_after = mean_support(doc_topic);
    assign_log.mean_iterations = cfg.assign_iterations;
    assign_log.removed_mass = 0.0;
    result.stage_log.push_back(tr_log);
    result.stage_log.push_back(assign_log);
    result.model.doc_topic = doc_topic;
  } else {
    doc_topic = result.model.doc_topic;
    result.stage_log.push_back(tr_log);
  }

  StageLog tar_log{"tar", false, doc_topic.size()};
  if (cfg.tar.enabled) {
    result.final_doc_topic = in_stage("tar", [&] {
      return topic_assignment_reestimate(doc_topic, cfg.tar, &tar_log);
    });
  } else {
    result.final_doc_topic = std::move(doc_topic);
  }
  result.stage_log.push_back(tar_log);
  return result;
}

}  // namespace hitr
