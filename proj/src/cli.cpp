#include "hitr/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <memory>
#include <optional>
#include <set>
#include <sstream>

#include "CLI11.hpp"

#include "hitr/config.hpp"
#include "hitr/diversity.hpp"
#include "hitr/error.hpp"
#include "hitr/evaluation.hpp"
#include "hitr/io.hpp"
#include "hitr/parallel.hpp"
#include "hitr/pipeline.hpp"

#ifndef HITR_VERSION
#define HITR_VERSION "dev"
#endif

namespace hitr::cli {

namespace fs = std::filesystem;
using io::json;

namespace {

// ---------------------------------------------------------------------------
// Resolved command settings. Each one round-trips through the manifest's
// config_snapshot, which is what `replay` executes.
// ---------------------------------------------------------------------------

struct GenSpec {
  SynthConfig synth;
  fs::path out_dir;
};

struct TrainSpec {
  std::vector<fs::path> inputs;
  ToolkitConfig cfg;
  fs::path out;
  std::optional<fs::path> corpus_out;
  // hitr only
  std::optional<fs::path> reestimated_out;
};

struct DiversitySpec {
  fs::path result;
  fs::path out;
  std::optional<fs::path> csv;
};

struct EvaluateSpec {
  fs::path scores;
  std::vector<fs::path> labels;
  std::optional<fs::path> result;
  std::optional<fs::path> reference;
  EvalConfig eval;
  fs::path out;
  std::optional<fs::path> roc_csv;
};

json opt_path(const std::optional<fs::path>& p) {
  return p ? json(p->string()) : json(nullptr);
}

std::optional<fs::path> path_opt(const json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  return fs::path(j[key].get<std::string>());
}

std::vector<std::string> path_strings(const std::vector<fs::path>& paths) {
  std::vector<std::string> s;
  for (const auto& p : paths) s.push_back(p.string());
  return s;
}

json synth_to_json(const SynthConfig& c) {
  return {{"num_groups", c.num_groups},
          {"docs_per_group", c.docs_per_group},
          {"vocab_size", c.vocab_size},
          {"topics_per_group", c.topics_per_group},
          {"doc_length", c.doc_length},
          {"num_diverse_pairs", c.num_diverse_pairs},
          {"diverse_docs_per_pair", c.diverse_docs_per_pair},
          {"nondiverse_docs_per_group", c.nondiverse_docs_per_group},
          {"general_share", c.general_share},
          {"general_share_spread", c.general_share_spread},
          {"length_spread", c.length_spread},
          {"general_vocab_fraction", c.general_vocab_fraction},
          {"general_themes", c.general_themes},
          {"seed", c.seed}};
}

SynthConfig synth_from_json(const json& j) {
  SynthConfig c;
  c.num_groups = j.at("num_groups");
  c.docs_per_group = j.at("docs_per_group");
  c.vocab_size = j.at("vocab_size");
  c.topics_per_group = j.at("topics_per_group");
  c.doc_length = j.at("doc_length");
  c.num_diverse_pairs = j.at("num_diverse_pairs");
  c.diverse_docs_per_pair = j.at("diverse_docs_per_pair");
  c.nondiverse_docs_per_group = j.at("nondiverse_docs_per_group");
  c.general_share = j.at("general_share");
  c.general_share_spread = j.at("general_share_spread");
  c.length_spread = j.at("length_spread");
  c.general_vocab_fraction = j.at("general_vocab_fraction");
  c.general_themes = j.at("general_themes");
  c.seed = j.at("seed");
  return c;
}

json stage_to_json(const StageConfig& s) {
  return {{"enabled", s.enabled},
          {"lambda", s.em.lambda},
          {"threshold", s.em.prune_threshold},
          {"max_iterations", s.em.max_iterations},
          {"tol", s.em.convergence_tol}};
}

StageConfig stage_from_json(const json& j) {
  StageConfig s;
  s.enabled = j.at("enabled");
  s.em.lambda = j.at("lambda");
  s.em.prune_threshold = j.at("threshold");
  s.em.max_iterations = j.at("max_iterations");
  s.em.convergence_tol = j.at("tol");
  return s;
}

json toolkit_to_json(const ToolkitConfig& c) {
  const auto& p = c.preprocess;
  return {{"preprocess",
           {{"lowercase", p.lowercase},
            {"top_k", p.top_k_frequent_removed},
            {"min_count", p.min_collection_frequency},
            {"stopwords", std::vector<std::string>(p.stopwords.begin(),
                                                   p.stopwords.end())}}},
          {"dr", stage_to_json(c.pipeline.dr)},
          {"tr", stage_to_json(c.pipeline.tr)},
          {"tar", stage_to_json(c.pipeline.tar)},
          {"lda", io::lda_config_to_json(c.pipeline.lda)},
          {"assign_iterations", c.pipeline.assign_iterations},
          {"eval",
           {{"tau", c.eval.sparsity_tau}, {"top_n", c.eval.coherence_top_n}}}};
}

ToolkitConfig toolkit_from_json(const json& j) {
  ToolkitConfig c;
  const auto& p = j.at("preprocess");
  c.preprocess.lowercase = p.at("lowercase");
  c.preprocess.top_k_frequent_removed = p.at("top_k");
  c.preprocess.min_collection_frequency = p.at("min_count");
  for (const auto& w : p.at("stopwords")) {
    c.preprocess.stopwords.insert(w.get<std::string>());
  }
  c.pipeline.dr = stage_from_json(j.at("dr"));
  c.pipeline.tr = stage_from_json(j.at("tr"));
  c.pipeline.tar = stage_from_json(j.at("tar"));
  c.pipeline.lda = io::lda_config_from_json(j.at("lda"));
  c.pipeline.assign_iterations = j.at("assign_iterations");
  c.eval.sparsity_tau = j.at("eval").at("tau");
  c.eval.coherence_top_n = j.at("eval").at("top_n");
  return c;
}

json train_to_json(const TrainSpec& s) {
  return {{"inputs", path_strings(s.inputs)},
          {"config", toolkit_to_json(s.cfg)},
          {"out", s.out.string()},
          {"corpus_out", opt_path(s.corpus_out)},
          {"reestimated_out", opt_path(s.reestimated_out)}};
}

TrainSpec train_from_json(const json& j) {
  TrainSpec s;
  for (const auto& p : j.at("inputs")) s.inputs.emplace_back(p.get<std::string>());
  s.cfg = toolkit_from_json(j.at("config"));
  s.out = j.at("out").get<std::string>();
  s.corpus_out = path_opt(j, "corpus_out");
  s.reestimated_out = path_opt(j, "reestimated_out");
  return s;
}

json diversity_to_json(const DiversitySpec& s) {
  return {{"result", s.result.string()},
          {"out", s.out.string()},
          {"csv", opt_path(s.csv)}};
}

DiversitySpec diversity_from_json(const json& j) {
  return {j.at("result").get<std::string>(), j.at("out").get<std::string>(),
          path_opt(j, "csv")};
}

json evaluate_to_json(const EvaluateSpec& s) {
  return {{"scores", s.scores.string()},
          {"labels", path_strings(s.labels)},
          {"result", opt_path(s.result)},
          {"reference", opt_path(s.reference)},
          {"eval", {{"tau", s.eval.sparsity_tau}, {"top_n", s.eval.coherence_top_n}}},
          {"out", s.out.string()},
          {"roc_csv", opt_path(s.roc_csv)}};
}

EvaluateSpec evaluate_from_json(const json& j) {
  EvaluateSpec s;
  s.scores = j.at("scores").get<std::string>();
  for (const auto& p : j.at("labels")) s.labels.emplace_back(p.get<std::string>());
  s.result = path_opt(j, "result");
  s.reference = path_opt(j, "reference");
  s.eval.sparsity_tau = j.at("eval").at("tau");
  s.eval.coherence_top_n = j.at("eval").at("top_n");
  s.out = j.at("out").get<std::string>();
  s.roc_csv = path_opt(j, "roc_csv");
  return s;
}

// ---------------------------------------------------------------------------
// Manifest
// ---------------------------------------------------------------------------

void write_manifest(const fs::path& path, const std::string& command,
                    const json& snapshot, std::uint64_t seed,
                    const std::vector<std::string>& inputs,
                    const std::vector<std::string>& outputs,
                    std::chrono::steady_clock::time_point start) {
  const std::chrono::duration<double> wall =
      std::chrono::steady_clock::now() - start;
  json m{{"command", command},
         {"toolkit_version", HITR_VERSION},
         {"config_snapshot", snapshot},
         {"seed", seed},
         {"inputs", inputs},
         {"outputs", outputs},
         {"wall_time_seconds", wall.count()}};
  io::write_atomic(path, m.dump(2) + "\n");
}

fs::path manifest_path(const fs::path& out) {
  fs::path p = out;
  p += ".manifest.json";
  return p;
}

// ---------------------------------------------------------------------------
// Command bodies
// ---------------------------------------------------------------------------

int exec_gen(const GenSpec& s, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  const auto bench = generate_synthetic(s.synth);
  std::vector<RawDocument> pseudo;
  pseudo.reserve(bench.pseudo.size());
  for (const auto& p : bench.pseudo) pseudo.push_back(p.doc);
  const auto train_path = s.out_dir / "train.jsonl";
  const auto pseudo_path = s.out_dir / "pseudo.jsonl";
  io::write_atomic(train_path, io::raw_documents_jsonl(bench.training));
  io::write_atomic(pseudo_path, io::raw_documents_jsonl(pseudo));
  write_manifest(s.out_dir / "gen-corpus.manifest.json", "gen-corpus",
                 {{"synth", synth_to_json(s.synth)},
                  {"out_dir", s.out_dir.string()}},
                 s.synth.seed, {}, {train_path.string(), pseudo_path.string()},
                 start);
  out << "wrote " << bench.training.size() << " training and "
      << pseudo.size() << " pseudo documents to " << s.out_dir.string()
      << "\n";
  return kOk;
}

Corpus load_corpus(const std::vector<fs::path>& inputs,
                   const PreprocessConfig& pre) {
  std::vector<RawDocument> docs;
  for (const auto& p : inputs) {
    auto part = io::read_raw_documents(p);
    docs.insert(docs.end(), std::make_move_iterator(part.begin()),
                std::make_move_iterator(part.end()));
  }
  return build_corpus(docs, pre);
}

int exec_train(const TrainSpec& s, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  const auto corpus = load_corpus(s.inputs, s.cfg.preprocess);
  const auto model = train(corpus, s.cfg.pipeline.lda);
  io::write_atomic(s.out, io::dump(io::model_to_json(model, corpus)));
  std::vector<std::string> outputs{s.out.string()};
  if (s.corpus_out) {
    io::write_atomic(*s.corpus_out, io::dump(io::corpus_to_json(corpus)));
    outputs.push_back(s.corpus_out->string());
  }
  write_manifest(manifest_path(s.out), "train", train_to_json(s),
                 s.cfg.pipeline.lda.seed, path_strings(s.inputs), outputs,
                 start);
  out << "trained " << model.num_topics() << " topics on "
      << corpus.num_docs() << " documents (" << corpus.vocab_size()
      << " terms); wrote " << s.out.string() << "\n";
  return kOk;
}

int exec_hitr(const TrainSpec& s, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  const auto corpus = load_corpus(s.inputs, s.cfg.preprocess);
  const auto result = run_pipeline(corpus, s.cfg.pipeline);
  io::write_atomic(s.out, io::dump(io::result_to_json(result)));
  std::vector<std::string> outputs{s.out.string()};
  if (s.corpus_out) {
    io::write_atomic(*s.corpus_out, io::dump(io::corpus_to_json(corpus)));
    outputs.push_back(s.corpus_out->string());
  }
  if (s.reestimated_out) {
    io::write_atomic(*s.reestimated_out,
                     io::dump(io::corpus_to_json(result.reestimated_corpus)));
    outputs.push_back(s.reestimated_out->string());
  }
  write_manifest(manifest_path(s.out), "hitr", train_to_json(s),
                 s.cfg.pipeline.lda.seed, path_strings(s.inputs), outputs,
                 start);
  for (const auto& l : result.stage_log) {
    out << std::left << std::setw(7) << l.stage
        << (l.enabled ? "on " : "off") << "  removed_mass=" << l.removed_mass
        << "  support " << l.mean_support_before << " -> "
        << l.mean_support_after << "\n";
  }
  out << "wrote " << s.out.string() << "\n";
  return kOk;
}

int exec_diversity(const DiversitySpec& s, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  const auto file = io::model_from_json(io::read_json(s.result));
  const auto& rows = file.scoring_doc_topic();
  if (file.doc_ids.size() != rows.size()) {
    throw data_error("ShapeMismatch",
                     "result has " + std::to_string(rows.size()) +
                         " topic rows but " +
                         std::to_string(file.doc_ids.size()) + " document ids");
  }
  const auto scores = score_corpus(rows, file.doc_ids);
  io::write_atomic(s.out, io::diversity_jsonl(scores));
  std::vector<std::string> outputs{s.out.string()};
  if (s.csv) {
    io::write_atomic(*s.csv, io::diversity_csv(scores));
    outputs.push_back(s.csv->string());
  }
  write_manifest(manifest_path(s.out), "diversity", diversity_to_json(s),
                 file.model.config.seed, {s.result.string()}, outputs, start);
  out << "scored " << scores.size() << " documents; wrote " << s.out.string()
      << "\n";
  return kOk;
}

int exec_evaluate(const EvaluateSpec& s, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  std::map<std::string, std::string> labels;
  for (const auto& p : s.labels) {
    for (const auto& d : io::read_raw_documents(p)) {
      if (d.label) labels[d.id] = *d.label;
    }
  }
  const auto is_diversity_label = [](const std::string& l) {
    return l == kDiverseLabel || l == kNonDiverseLabel;
  };

  EvalReport report;
  std::vector<LabeledScore> labeled;
  for (const auto& sc : io::read_diversity(s.scores)) {
    auto it = labels.find(sc.doc_id);
    if (it != labels.end() && is_diversity_label(it->second)) {
      labeled.push_back({sc.doc_id, sc.score, it->second == kDiverseLabel});
    }
  }
  report.roc = roc_auc(labeled);

  std::vector<std::string> inputs{s.scores.string()};
  for (const auto& p : s.labels) inputs.push_back(p.string());
  std::uint64_t seed = 0;
  if (s.result) {
    inputs.push_back(s.result->string());
    const auto file = io::model_from_json(io::read_json(*s.result));
    seed = file.model.config.seed;
    const auto& rows = file.scoring_doc_topic();
    report.sparsity = sparsity(rows, s.eval.sparsity_tau);

    std::vector<SparseDistribution> class_rows;
    std::vector<std::string> classes;
    for (std::size_t d = 0; d < file.doc_ids.size() && d < rows.size(); ++d) {
      auto it = labels.find(file.doc_ids[d]);
      if (it != labels.end() && !is_diversity_label(it->second)) {
        class_rows.push_back(rows[d]);
        classes.push_back(it->second);
      }
    }
    if (!classes.empty()) {
      const auto pn = cluster_purity_nmi(class_rows, classes);
      report.purity = pn.purity;
      report.nmi = pn.nmi;
    }
    if (s.reference) {
      inputs.push_back(s.reference->string());
      const auto ref = io::corpus_from_json(io::read_json(*s.reference));
      if (ref.vocab_size() != file.model.vocab_size) {
        throw data_error("ShapeMismatch",
                         "reference vocabulary differs from the model's");
      }
      report.coherence =
          npmi_coherence(file.model, ref, s.eval.coherence_top_n);
    }
  }

  io::write_atomic(s.out, io::dump(io::report_to_json(report)));
  std::vector<std::string> outputs{s.out.string()};
  if (s.roc_csv) {
    io::write_atomic(*s.roc_csv, io::roc_csv(report.roc));
    outputs.push_back(s.roc_csv->string());
  }
  write_manifest(manifest_path(s.out), "evaluate", evaluate_to_json(s), seed,
                 inputs, outputs, start);
  out << "auc=" << report.roc.auc;
  if (report.sparsity) out << " sparsity=" << *report.sparsity;
  if (report.coherence) out << " coherence=" << *report.coherence;
  if (report.purity) out << " purity=" << *report.purity << " nmi=" << *report.nmi;
  out << "\n";
  return kOk;
}

int exec_inspect(const fs::path& model_path,
                 const std::optional<fs::path>& compare, std::size_t top_n,
                 std::ostream& out) {
  const auto before = io::model_from_json(io::read_json(model_path));
  std::optional<io::ModelFile> after;
  if (compare) after = io::model_from_json(io::read_json(*compare));
  auto words = [&](const io::ModelFile& f, std::size_t t) {
    std::string line;
    for (auto w : top_words(f.model.topic_word.at(t), top_n)) {
      if (!line.empty()) line.push_back(' ');
      line += w < f.vocab.size() ? f.vocab[w] : "#" + std::to_string(w);
    }
    return line;
  };
  for (std::size_t t = 0; t < before.model.num_topics(); ++t) {
    if (after) {
      out << "topic " << t << " before: " << words(before, t) << "\n";
      out << "topic " << t << " after:  "
          << (t < after->model.num_topics() ? words(*after, t) : "") << "\n";
    } else {
      out << "topic " << t << ": " << words(before, t) << "\n";
    }
  }
  return kOk;
}

int exec_replay(const fs::path& manifest, std::ostream& out) {
  const auto m = io::read_json(manifest);
  const auto command = m.at("command").get<std::string>();
  const auto& snap = m.at("config_snapshot");
  if (command == "gen-corpus") {
    return exec_gen({synth_from_json(snap.at("synth")),
                     snap.at("out_dir").get<std::string>()},
                    out);
  }
  if (command == "train") return exec_train(train_from_json(snap), out);
  if (command == "hitr") return exec_hitr(train_from_json(snap), out);
  if (command == "diversity") {
    return exec_diversity(diversity_from_json(snap), out);
  }
  if (command == "evaluate") return exec_evaluate(evaluate_from_json(snap), out);
  throw config_error("BadManifest", "unknown command '" + command + "'");
}

// ---------------------------------------------------------------------------
// Flag plumbing: defaults < --config file < explicit flags.
// ---------------------------------------------------------------------------

class Overrides {
 public:
  explicit Overrides(CLI::App* app) : app_(app) {}

  template <class T, class Set>
  CLI::Option* option(const std::string& names, const std::string& desc,
                      Set set) {
    auto value = std::make_shared<T>();
    auto* opt = app_->add_option(names, *value, desc);
    hooks_.push_back([opt, value, set](ToolkitConfig& c) {
      if (opt->count() > 0) set(c, *value);
    });
    return opt;
  }

  template <class Set>
  CLI::Option* toggle(const std::string& names, const std::string& desc,
                      Set set) {
    auto value = std::make_shared<bool>(false);
    auto* opt = app_->add_flag(names, *value, desc);
    hooks_.push_back([opt, value, set](ToolkitConfig& c) {
      if (opt->count() > 0) set(c, *value);
    });
    return opt;
  }

  void apply(ToolkitConfig& c) const {
    for (const auto& h : hooks_) h(c);
  }

 private:
  CLI::App* app_;
  std::vector<std::function<void(ToolkitConfig&)>> hooks_;
};

const auto kPositive = CLI::PositiveNumber;

void add_preprocess_flags(Overrides& ov) {
  ov.option<int>("--top-k", "remove the k most frequent terms (default 100)",
                 [](ToolkitConfig& c, int v) {
                   c.preprocess.top_k_frequent_removed = v;
                 })
      ->check(CLI::NonNegativeNumber);
  ov.option<int>("--min-count",
                 "drop terms with fewer occurrences (default 5)",
                 [](ToolkitConfig& c, int v) {
                   c.preprocess.min_collection_frequency = v;
                 })
      ->check(kPositive);
  ov.option<std::string>("--stopwords", "stopword file, one word per line",
                         [](ToolkitConfig& c, const std::string& p) {
                           c.preprocess.stopwords = load_stopwords(p);
                         });
  ov.toggle("--lowercase,!--no-lowercase", "lowercase tokens (default on)",
            [](ToolkitConfig& c, bool v) { c.preprocess.lowercase = v; });
}

void add_lda_flags(Overrides& ov) {
  ov.option<int>("--topics", "number of topics (default 100)",
                 [](ToolkitConfig& c, int v) { c.pipeline.lda.num_topics = v; })
      ->check(kPositive);
  ov.option<double>("--alpha", "document-topic prior (default 1/topics)",
                    [](ToolkitConfig& c, double v) { c.pipeline.lda.alpha = v; })
      ->check(kPositive);
  ov.option<double>("--beta", "topic-word prior (default 0.01)",
                    [](ToolkitConfig& c, double v) { c.pipeline.lda.beta = v; })
      ->check(kPositive);
  ov.option<int>("--iterations", "Gibbs sweeps (default 1000)",
                 [](ToolkitConfig& c, int v) {
                   c.pipeline.lda.gibbs_iterations = v;
                 })
      ->check(kPositive);
  ov.option<std::uint64_t>(
      "--seed", "random seed (default 1)",
      [](ToolkitConfig& c, std::uint64_t v) { c.pipeline.lda.seed = v; });
}

void add_stage_flags(Overrides& ov, const std::string& name,
                     StageConfig PipelineConfig::*stage) {
  ov.toggle("--" + name + ",!--no-" + name, "enable the " + name + " stage",
            [stage](ToolkitConfig& c, bool v) { (c.pipeline.*stage).enabled = v; });
  ov.option<double>("--lambda-" + name, "mixing weight for " + name,
                    [stage](ToolkitConfig& c, double v) {
                      (c.pipeline.*stage).em.lambda = v;
                    });
  ov.option<double>("--threshold-" + name, "pruning threshold for " + name,
                    [stage](ToolkitConfig& c, double v) {
                      (c.pipeline.*stage).em.prune_threshold = v;
                    });
}

void add_em_flags(Overrides& ov) {
  ov.option<double>("--threshold", "pruning threshold for every stage",
                    [](ToolkitConfig& c, double v) {
                      for (auto* s : {&c.pipeline.dr, &c.pipeline.tr,
                                      &c.pipeline.tar}) {
                        s->em.prune_threshold = v;
                      }
                    });
  ov.option<int>("--em-iterations", "EM iteration cap for every stage",
                 [](ToolkitConfig& c, int v) {
                   for (auto* s : {&c.pipeline.dr, &c.pipeline.tr,
                                   &c.pipeline.tar}) {
                     s->em.max_iterations = v;
                   }
                 })
      ->check(kPositive);
  ov.option<double>("--em-tol", "EM convergence tolerance for every stage",
                    [](ToolkitConfig& c, double v) {
                      for (auto* s : {&c.pipeline.dr, &c.pipeline.tr,
                                      &c.pipeline.tar}) {
                        s->em.convergence_tol = v;
                      }
                    });
  ov.option<int>("--assign-iterations",
                 "Gibbs sweeps when re-assigning topics after TR",
                 [](ToolkitConfig& c, int v) {
                   c.pipeline.assign_iterations = v;
                 })
      ->check(kPositive);
}

void add_eval_flags(Overrides& ov) {
  ov.option<double>("--tau", "sparsity threshold (default 0.01)",
                    [](ToolkitConfig& c, double v) { c.eval.sparsity_tau = v; });
  ov.option<int>("--top-n", "top words per topic for coherence (default 10)",
                 [](ToolkitConfig& c, int v) { c.eval.coherence_top_n = v; })
      ->check(CLI::Range(2, 1000000));
}

ToolkitConfig resolve(const std::string& config_path, const Overrides& ov) {
  ToolkitConfig cfg = default_toolkit_config();
  if (!config_path.empty()) apply_ini(load_ini(config_path), cfg);
  ov.apply(cfg);
  return cfg;
}

void apply_threads(int threads) {
  if (threads > 0) {
    parallel::set_threads(threads);
    return;
  }
  if (const char* env = std::getenv("HITR_THREADS")) {
    try {
      parallel::set_threads(std::stoi(env));
    } catch (const std::exception&) {
      throw config_error("BadConfig", std::string("bad HITR_THREADS '") + env + "'");
    }
  }
}

std::string one_line(std::string s) {
  for (auto& c : s) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

int report_error(std::ostream& err, const std::string& code,
                 const std::string& message, int exit_code) {
  err << "error[" << code << "]: " << one_line(message) << "\n";
  return exit_code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Hierarchical topic model re-estimation toolkit", "hitr-cli"};
  app.require_subcommand(1);
  app.set_version_flag("--version", HITR_VERSION);
  int threads = 0;
  app.add_option("--threads", threads,
                 "worker threads (falls back to HITR_THREADS)");

  std::function<int()> action;

  // gen-corpus
  auto* gen = app.add_subcommand("gen-corpus",
                                 "generate the synthetic diversity benchmark");
  GenSpec gen_spec;
  auto& sc = gen_spec.synth;
  gen->add_option("--groups", sc.num_groups, "number of groups");
  gen->add_option("--docs-per-group", sc.docs_per_group, "training docs per group");
  gen->add_option("--vocab", sc.vocab_size, "vocabulary size");
  gen->add_option("--doc-length", sc.doc_length, "mean document length");
  gen->add_option("--diverse-pairs", sc.num_diverse_pairs, "group pairs");
  gen->add_option("--diverse-per-pair", sc.diverse_docs_per_pair,
                  "diverse pseudo-documents per pair");
  gen->add_option("--nondiverse-per-group", sc.nondiverse_docs_per_group,
                  "non-diverse pseudo-documents per group");
  gen->add_option("--topics-per-group", sc.topics_per_group,
                  "planted subtopics per group");
  gen->add_option("--general-share", sc.general_share,
                  "mean share of general words per document");
  gen->add_option("--general-spread", sc.general_share_spread,
                  "relative spread of the general share");
  gen->add_option("--length-spread", sc.length_spread,
                  "relative spread of document lengths");
  gen->add_option("--general-vocab", sc.general_vocab_fraction,
                  "fraction of the vocabulary that is general");
  gen->add_option("--general-themes", sc.general_themes,
                  "number of general word themes");
  gen->add_option("--seed", sc.seed, "random seed");
  gen->add_option("--out", gen_spec.out_dir, "output directory")->required();
  gen->add_option("--threads", threads, "worker threads");
  gen->callback([&] { action = [&] { return exec_gen(gen_spec, out); }; });

  // train / hitr share corpus and LDA flags
  struct CorpusCommand {
    CLI::App* app;
    std::unique_ptr<Overrides> ov;
    std::string config;
    TrainSpec spec;
  };
  auto make_corpus_command = [&](const std::string& name,
                                 const std::string& desc) {
    auto cmd = std::make_unique<CorpusCommand>();
    cmd->app = app.add_subcommand(name, desc);
    cmd->ov = std::make_unique<Overrides>(cmd->app);
    cmd->app->add_option("--input", cmd->spec.inputs, "corpus JSONL (repeatable)")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->app->add_option("--config", cmd->config, "key-value config file");
    cmd->app->add_option("--out", cmd->spec.out, "output JSON")->required();
    cmd->app->add_option("--corpus-out", cmd->spec.corpus_out,
                         "write the preprocessed corpus JSON");
    cmd->app->add_option("--threads", threads, "worker threads");
    add_preprocess_flags(*cmd->ov);
    add_lda_flags(*cmd->ov);
    return cmd;
  };
  auto train_cmd = make_corpus_command("train", "preprocess a corpus and train LDA");
  auto hitr_cmd = make_corpus_command("hitr", "run the DR/LDA/TR/TAR pipeline");
  add_stage_flags(*hitr_cmd->ov, "dr", &PipelineConfig::dr);
  add_stage_flags(*hitr_cmd->ov, "tr", &PipelineConfig::tr);
  add_stage_flags(*hitr_cmd->ov, "tar", &PipelineConfig::tar);
  add_em_flags(*hitr_cmd->ov);
  hitr_cmd->app->add_option("--reestimated-out", hitr_cmd->spec.reestimated_out,
                            "write the post-DR corpus JSON");
  train_cmd->app->callback([&] {
    action = [&] {
      train_cmd->spec.cfg = resolve(train_cmd->config, *train_cmd->ov);
      return exec_train(train_cmd->spec, out);
    };
  });
  hitr_cmd->app->callback([&] {
    action = [&] {
      hitr_cmd->spec.cfg = resolve(hitr_cmd->config, *hitr_cmd->ov);
      return exec_hitr(hitr_cmd->spec, out);
    };
  });

  // diversity
  auto* div = app.add_subcommand("diversity", "score topical diversity");
  DiversitySpec div_spec;
  div->add_option("--result", div_spec.result, "model or pipeline result JSON")
      ->required()
      ->check(CLI::ExistingFile);
  div->add_option("--out", div_spec.out, "scores JSONL")->required();
  div->add_option("--csv", div_spec.csv, "also write scores as CSV");
  div->add_option("--threads", threads, "worker threads");
  div->callback([&] { action = [&] { return exec_diversity(div_spec, out); }; });

  // evaluate
  auto* ev = app.add_subcommand("evaluate", "compute evaluation metrics");
  EvaluateSpec ev_spec;
  Overrides ev_ov(ev);
  std::string ev_config;
  ev->add_option("--scores", ev_spec.scores, "diversity scores JSONL")
      ->required()
      ->check(CLI::ExistingFile);
  ev->add_option("--labels", ev_spec.labels,
                 "JSONL documents whose labels are used (repeatable)")
      ->required()
      ->check(CLI::ExistingFile);
  ev->add_option("--result", ev_spec.result,
                 "model or result JSON for sparsity, purity and coherence");
  ev->add_option("--reference", ev_spec.reference,
                 "corpus JSON used as the coherence reference");
  ev->add_option("--config", ev_config, "key-value config file");
  ev->add_option("--out", ev_spec.out, "report JSON")->required();
  ev->add_option("--roc-csv", ev_spec.roc_csv, "also write the ROC curve");
  ev->add_option("--threads", threads, "worker threads");
  add_eval_flags(ev_ov);
  ev->callback([&] {
    action = [&] {
      ev_spec.eval = resolve(ev_config, ev_ov).eval;
      return exec_evaluate(ev_spec, out);
    };
  });

  // inspect-topics
  auto* insp = app.add_subcommand("inspect-topics", "print top words per topic");
  std::string insp_model;
  std::optional<fs::path> insp_compare;
  std::size_t insp_top = 10;
  insp->add_option("--model", insp_model, "model or result JSON")
      ->required()
      ->check(CLI::ExistingFile);
  insp->add_option("--compare", insp_compare,
                   "second model (e.g. after TR) shown below each topic");
  insp->add_option("--top-n", insp_top, "words per topic")->check(kPositive);
  insp->callback([&] {
    action = [&] { return exec_inspect(insp_model, insp_compare, insp_top, out); };
  });

  // replay
  auto* rep = app.add_subcommand("replay", "re-run a command from its manifest");
  std::string rep_manifest;
  rep->add_option("--manifest", rep_manifest, "manifest JSON")
      ->required()
      ->check(CLI::ExistingFile);
  rep->add_option("--threads", threads, "worker threads");
  rep->callback([&] { action = [&] { return exec_replay(rep_manifest, out); }; });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << HITR_VERSION << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    return report_error(err, "UsageError", e.what(), kConfigError);
  }

  try {
    apply_threads(threads);
    return action ? action() : kOk;
  } catch (const Error& e) {
    const int code = e.kind() == ErrorKind::Config ? kConfigError
                     : e.kind() == ErrorKind::Data ? kDataError
                                                   : kInternalError;
    return report_error(err, e.code(), e.what(), code);
  } catch (const json::exception& e) {
    return report_error(err, "BadFormat", e.what(), kDataError);
  } catch (const fs::filesystem_error& e) {
    return report_error(err, "IoError", e.what(), kDataError);
  } catch (const std::exception& e) {
    return report_error(err, "InternalError", e.what(), kInternalError);
  }
}

int main(int argc, const char* const* argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace hitr::cli
