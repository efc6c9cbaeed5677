#include "hitr/config.hpp"

#include <charconv>
#include <sstream>

#include "hitr/error.hpp"
#include "hitr/io.hpp"

namespace hitr {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

Error bad_config(const std::string& what) {
  return config_error("BadConfig", what);
}

template <class T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const auto* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw bad_config("bad value '" + value + "' for " + key);
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") {
    return true;
  }
  if (value == "false" || value == "0" || value == "no" || value == "off") {
    return false;
  }
  throw bad_config("bad boolean '" + value + "' for " + key);
}

bool apply_stage(const std::string& key, const std::string& field,
                 const std::string& value, StageConfig& stage) {
  if (field == "enabled") {
    stage.enabled = parse_bool(key, value);
  } else if (field == "lambda") {
    stage.em.lambda = parse_number<double>(key, value);
  } else if (field == "threshold") {
    stage.em.prune_threshold = parse_number<double>(key, value);
  } else if (field == "max_iterations") {
    stage.em.max_iterations = parse_number<int>(key, value);
  } else if (field == "tol") {
    stage.em.convergence_tol = parse_number<double>(key, value);
  } else {
    return false;
  }
  return true;
}

}  // namespace

IniValues parse_ini(const std::string& text) {
  IniValues values;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw bad_config("line " + std::to_string(lineno) + ": bad section");
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw bad_config("line " + std::to_string(lineno) + ": expected key = value");
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    values[section.empty() ? key : section + "." + key] = value;
  }
  return values;
}

IniValues load_ini(const std::filesystem::path& path) {
  try {
    return parse_ini(io::read_file(path));
  } catch (const Error& e) {
    if (e.code() == "IoError") throw config_error("IoError", e.what());
    throw;
  }
}

ToolkitConfig default_toolkit_config() {
  ToolkitConfig cfg;
  cfg.preprocess.stopwords = default_stopwords();
  return cfg;
}

void apply_ini(const IniValues& ini, ToolkitConfig& cfg) {
  for (const auto& [key, value] : ini) {
    const auto dot = key.find('.');
    const auto section = dot == std::string::npos ? "" : key.substr(0, dot);
    const auto field = dot == std::string::npos ? key : key.substr(dot + 1);
    bool known = false;
    if (section == "dr") {
      known = apply_stage(key, field, value, cfg.pipeline.dr);
    } else if (section == "tr") {
      known = apply_stage(key, field, value, cfg.pipeline.tr);
    } else if (section == "tar") {
      known = apply_stage(key, field, value, cfg.pipeline.tar);
    } else if (section == "lda") {
      auto& lda = cfg.pipeline.lda;
      known = true;
      if (field == "topics") {
        lda.num_topics = parse_number<int>(key, value);
      } else if (field == "alpha") {
        lda.alpha = parse_number<double>(key, value);
      } else if (field == "beta") {
        lda.beta = parse_number<double>(key, value);
      } else if (field == "iterations") {
        lda.gibbs_iterations = parse_number<int>(key, value);
      } else if (field == "seed") {
        lda.seed = parse_number<std::uint64_t>(key, value);
      } else if (field == "assign_iterations") {
        cfg.pipeline.assign_iterations = parse_number<int>(key, value);
      } else {
        known = false;
      }
    } else if (section == "eval") {
      known = true;
      if (field == "tau") {
        cfg.eval.sparsity_tau = parse_number<double>(key, value);
      } else if (field == "top_n") {
        cfg.eval.coherence_top_n = parse_number<int>(key, value);
      } else {
        known = false;
      }
    } else if (section == "preprocess") {
      known = true;
      if (field == "lowercase") {
        cfg.preprocess.lowercase = parse_bool(key, value);
      } else if (field == "top_k") {
        cfg.preprocess.top_k_frequent_removed = parse_number<int>(key, value);
      } else if (field == "min_count") {
        cfg.preprocess.min_collection_frequency = parse_number<int>(key, value);
      } else if (field == "stopwords") {
        cfg.preprocess.stopwords = load_stopwords(value);
      } else {
        known = false;
      }
    }
    if (!known) throw bad_config("unknown config key '" + key + "'");
  }
}

}  // namespace hitr
