#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "hitr/corpus.hpp"
#include "hitr/pipeline.hpp"

namespace hitr {

// Key-value config with [section] headers; '#' and ';' start comments.
// Keys are addressed as "section.key".
using IniValues = std::map<std::string, std::string>;

IniValues parse_ini(const std::string& text);
IniValues load_ini(const std::filesystem::path& path);

struct EvalConfig {
  double sparsity_tau = 0.01;
  int coherence_top_n = 10;
};

// Everything a command may read from a config file.
struct ToolkitConfig {
  PreprocessConfig preprocess;
  PipelineConfig pipeline;
  EvalConfig eval;
};

ToolkitConfig default_toolkit_config();

// Applies recognised keys:
//   [dr] [tr] [tar]  enabled lambda threshold max_iterations tol
//   [lda]            topics alpha beta iterations seed assign_iterations
//   [eval]           tau top_n
//   [preprocess]     lowercase top_k min_count stopwords
// Unknown keys or unparsable values throw Error{"BadConfig"}.
void apply_ini(const IniValues& ini, ToolkitConfig& cfg);

}  // namespace hitr
