#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "hitr/corpus.hpp"
#include "hitr/diversity.hpp"
#include "hitr/evaluation.hpp"
#include "hitr/lda.hpp"
#include "hitr/pipeline.hpp"

namespace hitr::io {

using nlohmann::json;

// Raw corpus JSON Lines: {"id": str, "text": str, "label": str|null}.
std::vector<RawDocument> read_raw_documents(const std::filesystem::path& path);
std::string raw_documents_jsonl(const std::vector<RawDocument>& docs);

// {"vocab": [...], "docs": [{"id", "label", "counts": [[idx, n], ...]}]}.
// Emptied documents additionally carry "emptied": true.
json corpus_to_json(const Corpus& corpus);
Corpus corpus_from_json(const json& j);

// {"dim": n, "entries": [[idx, prob], ...]}
json distribution_to_json(const SparseDistribution& d);
SparseDistribution distribution_from_json(const json& j);

json lda_config_to_json(const LdaConfig& cfg);
LdaConfig lda_config_from_json(const json& j);

// A topic model plus the names that make it readable on its own.
struct ModelFile {
  TopicModel model;
  std::vector<std::string> vocab;
  std::vector<std::string> doc_ids;
  // Present for pipeline results only.
  std::vector<SparseDistribution> final_doc_topic;
  std::vector<StageLog> stage_log;

  // final_doc_topic when present, otherwise the model's doc_topic.
  const std::vector<SparseDistribution>& scoring_doc_topic() const {
    return final_doc_topic.empty() ? model.doc_topic : final_doc_topic;
  }
};

// {"config", "vocab_size", "vocab", "doc_ids", "topic_word", "doc_topic"}.
json model_to_json(const TopicModel& model, const Corpus& corpus);
// Model JSON plus "final_doc_topic" and "stage_log".
json result_to_json(const PipelineResult& result);
ModelFile model_from_json(const json& j);

json stage_log_to_json(const StageLog& log);

// {"id": str, "diversity": float} per line.
std::string diversity_jsonl(const std::vector<DiversityScore>& scores);
std::string diversity_csv(const std::vector<DiversityScore>& scores);
std::vector<DiversityScore> read_diversity(const std::filesystem::path& path);

json report_to_json(const EvalReport& report);
// threshold,fpr,tpr
std::string roc_csv(const RocResult& roc);

std::string read_file(const std::filesystem::path& path);
json read_json(const std::filesystem::path& path);
// Writes to a sibling temp file, then renames over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& data);
std::string dump(const json& j);

}  // namespace hitr::io
