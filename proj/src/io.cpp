#include "hitr/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "hitr/error.hpp"

namespace hitr::io {

namespace fs = std::filesystem;

namespace {

Error format_error(const std::string& what) {
  return data_error("BadFormat", what);
}

template <class T>
T get_field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw format_error(std::string("missing field '") + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw format_error(std::string("bad field '") + key + "': " + e.what());
  }
}

}  // namespace

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw data_error("IoError", "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json(const fs::path& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw format_error("'" + path.string() + "': " + e.what());
  }
}

std::string dump(const json& j) { return j.dump() + "\n"; }

void write_atomic(const fs::path& path, const std::string& data) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw data_error("IoError", "cannot write '" + tmp.string() + "'");
    }
    out << data;
    out.flush();
    if (!out) throw data_error("IoError", "write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    throw data_error("IoError", "cannot rename onto '" + path.string() +
                                    "': " + ec.message());
  }
}

std::vector<RawDocument> read_raw_documents(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw data_error("IoError", "cannot open '" + path.string() + "'");
  std::vector<RawDocument> docs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw format_error(path.string() + ":" + std::to_string(lineno) + ": " +
                         e.what());
    }
    RawDocument d;
    d.id = get_field<std::string>(j, "id");
    d.text = get_field<std::string>(j, "text");
    if (j.contains("label") && !j["label"].is_null()) {
      d.label = get_field<std::string>(j, "label");
    }
    if (d.id.empty()) {
      throw data_error("InvalidDocument", path.string() + ":" +
                                              std::to_string(lineno) +
                                              ": empty id");
    }
    docs.push_back(std::move(d));
  }
  return docs;
}

std::string raw_documents_jsonl(const std::vector<RawDocument>& docs) {
  std::string out;
  for (const auto& d : docs) {
    json j{{"id", d.id},
           {"text", d.text},
           {"label", d.label ? json(*d.label) : json(nullptr)}};
    out += j.dump();
    out.push_back('\n');
  }
  return out;
}

json corpus_to_json(const Corpus& corpus) {
  json docs = json::array();
  for (const auto& d : corpus.docs()) {
    json counts = json::array();
    for (const auto& c : d.counts) counts.push_back({c.term, c.count});
    json jd{{"id", d.id},
            {"label", d.label ? json(*d.label) : json(nullptr)},
            {"counts", std::move(counts)}};
    if (d.emptied) jd["emptied"] = true;
    docs.push_back(std::move(jd));
  }
  return {{"vocab", corpus.vocabulary().terms()}, {"docs", std::move(docs)}};
}

Corpus corpus_from_json(const json& j) {
  Vocabulary vocab(get_field<std::vector<std::string>>(j, "vocab"));
  std::vector<Document> docs;
  for (const auto& jd : get_field<json>(j, "docs")) {
    Document d;
    d.id = get_field<std::string>(jd, "id");
    if (jd.contains("label") && !jd["label"].is_null()) {
      d.label = get_field<std::string>(jd, "label");
    }
    for (const auto& c : get_field<json>(jd, "counts")) {
      if (!c.is_array() || c.size() != 2) throw format_error("bad count pair");
      d.counts.push_back({c[0].get<Index>(), c[1].get<std::uint32_t>()});
    }
    d.emptied = jd.value("emptied", false);
    docs.push_back(std::move(d));
  }
  return Corpus(std::move(vocab), std::move(docs));
}

json distribution_to_json(const SparseDistribution& d) {
  json entries = json::array();
  for (const auto& e : d.entries()) entries.push_back({e.index, e.prob});
  return {{"dim", d.dim()}, {"entries", std::move(entries)}};
}

SparseDistribution distribution_from_json(const json& j) {
  const auto dim = get_field<std::size_t>(j, "dim");
  std::vector<ProbEntry> entries;
  for (const auto& e : get_field<json>(j, "entries")) {
    if (!e.is_array() || e.size() != 2) throw format_error("bad entry pair");
    entries.push_back({e[0].get<Index>(), e[1].get<double>()});
  }
  return SparseDistribution(dim, std::move(entries));
}

json lda_config_to_json(const LdaConfig& cfg) {
  return {{"num_topics", cfg.num_topics},
          {"alpha", cfg.resolved_alpha()},
          {"beta", cfg.beta},
          {"gibbs_iterations", cfg.gibbs_iterations},
          {"seed", cfg.seed}};
}

LdaConfig lda_config_from_json(const json& j) {
  LdaConfig cfg;
  cfg.num_topics = get_field<int>(j, "num_topics");
  cfg.alpha = get_field<double>(j, "alpha");
  cfg.beta = get_field<double>(j, "beta");
  cfg.gibbs_iterations = get_field<int>(j, "gibbs_iterations");
  cfg.seed = get_field<std::uint64_t>(j, "seed");
  return cfg;
}

namespace {

json rows_to_json(const std::vector<SparseDistribution>& rows) {
  json a = json::array();
  for (const auto& r : rows) a.push_back(distribution_to_json(r));
  return a;
}

std::vector<SparseDistribution> rows_from_json(const json& a) {
  std::vector<SparseDistribution> rows;
  rows.reserve(a.size());
  for (const auto& r : a) rows.push_back(distribution_from_json(r));
  return rows;
}

std::vector<std::string> doc_ids(const Corpus& corpus) {
  std::vector<std::string> ids;
  ids.reserve(corpus.num_docs());
  for (const auto& d : corpus.docs()) ids.push_back(d.id);
  return ids;
}

}  // namespace

json model_to_json(const TopicModel& model, const Corpus& corpus) {
  return {{"config", lda_config_to_json(model.config)},
          {"vocab_size", model.vocab_size},
          {"vocab", corpus.vocabulary().terms()},
          {"doc_ids", doc_ids(corpus)},
          {"topic_word", rows_to_json(model.topic_word)},
          {"doc_topic", rows_to_json(model.doc_topic)}};
}

json stage_log_to_json(const StageLog& l) {
  return {{"stage", l.stage},
          {"enabled", l.enabled},
          {"rows", l.rows},
          {"removed_mass", l.removed_mass},
          {"mean_support_before", l.mean_support_before},
          {"mean_support_after", l.mean_support_after},
          {"mean_iterations", l.mean_iterations},
          {"converged_rows", l.converged_rows}};
}

json result_to_json(const PipelineResult& result) {
  json j = model_to_json(result.model, result.reestimated_corpus);
  j["final_doc_topic"] = rows_to_json(result.final_doc_topic);
  json log = json::array();
  for (const auto& l : result.stage_log) log.push_back(stage_log_to_json(l));
  j["stage_log"] = std::move(log);
  return j;
}

ModelFile model_from_json(const json& j) {
  ModelFile f;
  f.model.config = lda_config_from_json(get_field<json>(j, "config"));
  f.model.vocab_size = get_field<std::size_t>(j, "vocab_size");
  f.model.topic_word = rows_from_json(get_field<json>(j, "topic_word"));
  f.model.doc_topic = rows_from_json(get_field<json>(j, "doc_topic"));
  if (j.contains("vocab")) f.vocab = get_field<std::vector<std::string>>(j, "vocab");
  if (j.contains("doc_ids")) {
    f.doc_ids = get_field<std::vector<std::string>>(j, "doc_ids");
  }
  if (j.contains("final_doc_topic")) {
    f.final_doc_topic = rows_from_json(j["final_doc_topic"]);
  }
  if (j.contains("stage_log")) {
    for (const auto& l : j["stage_log"]) {
      StageLog s;
      s.stage = get_field<std::string>(l, "stage");
      s.enabled = get_field<bool>(l, "enabled");
      s.rows = get_field<std::size_t>(l, "rows");
      s.removed_mass = get_field<double>(l, "removed_mass");
      s.mean_support_before = get_field<double>(l, "mean_support_before");
      s.mean_support_after = get_field<double>(l, "mean_support_after");
      s.mean_iterations = get_field<double>(l, "mean_iterations");
      s.converged_rows = get_field<std::size_t>(l, "converged_rows");
      f.stage_log.push_back(std::move(s));
    }
  }
  for (const auto& row : f.model.topic_word) {
    if (row.dim() != f.model.vocab_size) {
      throw data_error("ShapeMismatch", "topic_word row dimension != vocab_size");
    }
  }
  const auto T = f.model.topic_word.size();
  for (const auto* rows : {&f.model.doc_topic, &f.final_doc_topic}) {
    for (const auto& row : *rows) {
      if (row.dim() != T) {
        throw data_error("ShapeMismatch", "doc_topic row dimension != topics");
      }
    }
  }
  if (!f.doc_ids.empty() && f.doc_ids.size() != f.model.doc_topic.size()) {
    throw data_error("ShapeMismatch", "doc_ids and doc_topic differ in length");
  }
  return f;
}

std::string diversity_jsonl(const std::vector<DiversityScore>& scores) {
  std::string out;
  for (const auto& s : scores) {
    out += json{{"id", s.doc_id}, {"diversity", s.score}}.dump();
    out.push_back('\n');
  }
  return out;
}

std::string diversity_csv(const std::vector<DiversityScore>& scores) {
  std::string out = "id,diversity\n";
  for (const auto& s : scores) {
    // json's number formatting gives the shortest round-trip form.
    out += s.doc_id + "," + json(s.score).dump() + "\n";
  }
  return out;
}

std::vector<DiversityScore> read_diversity(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw data_error("IoError", "cannot open '" + path.string() + "'");
  std::vector<DiversityScore> scores;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = json::parse(line);
      scores.push_back({get_field<std::string>(j, "id"),
                        get_field<double>(j, "diversity")});
    } catch (const json::parse_error& e) {
      throw format_error(path.string() + ": " + e.what());
    }
  }
  return scores;
}

json report_to_json(const EvalReport& r) {
  json roc = json::array();
  for (const auto& p : r.roc.points) {
    roc.push_back({std::isfinite(p.threshold) ? json(p.threshold) : json(nullptr),
                   p.fpr, p.tpr});
  }
  json j{{"auc", r.roc.auc}, {"roc", std::move(roc)}};
  j["sparsity"] = r.sparsity ? json(*r.sparsity) : json(nullptr);
  j["coherence"] = r.coherence ? json(*r.coherence) : json(nullptr);
  j["purity"] = r.purity ? json(*r.purity) : json(nullptr);
  j["nmi"] = r.nmi ? json(*r.nmi) : json(nullptr);
  return j;
}

std::string roc_csv(const RocResult& roc) {
  std::string out = "threshold,fpr,tpr\n";
  for (const auto& p : roc.points) {
    out += (std::isfinite(p.threshold) ? json(p.threshold).dump() : "inf") +
           "," + json(p.fpr).dump() + "," + json(p.tpr).dump() + "\n";
  }
  return out;
}

}  // namespace hitr::io
