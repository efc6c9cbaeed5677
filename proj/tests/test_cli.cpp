#include "doctest.h"

#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "hitr/cli.hpp"
#include "hitr/io.hpp"

using namespace hitr;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) { return io::read_file(p); }

// Small benchmark written once per test case.
fs::path small_benchmark(const std::string& name) {
  auto dir = testing::scratch(name);
  auto r = run({"gen-corpus", "--groups", "3", "--docs-per-group", "20",
                "--vocab", "200", "--doc-length", "40", "--diverse-pairs", "3",
                "--diverse-per-pair", "3", "--nondiverse-per-group", "3",
                "--seed", "4", "--out", (dir / "data").string()});
  REQUIRE(r.code == 0);
  return dir;
}

std::vector<std::string> hitr_args(const fs::path& dir, const std::string& out) {
  return {"hitr", "--input", (dir / "data/train.jsonl").string(),
          "--input", (dir / "data/pseudo.jsonl").string(),
          "--top-k", "0", "--min-count", "1", "--topics", "3",
          "--iterations", "30", "--assign-iterations", "10",
          "--out", (dir / out).string()};
}

}  // namespace

TEST_CASE("help and version exit cleanly") {
  CHECK(run({"--help"}).code == 0);
  auto v = run({"--version"});
  CHECK(v.code == 0);
  CHECK_FALSE(v.out.empty());
}

TEST_CASE("usage errors exit with code 2") {
  auto r = run({"train"});
  CHECK(r.code == 2);
  CHECK(r.err.rfind("error[UsageError]", 0) == 0);
  CHECK(run({"no-such-command"}).code == 2);
  CHECK(run({"gen-corpus"}).code == 2);
}

TEST_CASE("gen-corpus writes training and pseudo documents") {
  auto dir = small_benchmark("cli_gen");
  auto train = io::read_raw_documents(dir / "data/train.jsonl");
  auto pseudo = io::read_raw_documents(dir / "data/pseudo.jsonl");
  CHECK(train.size() == 60);
  CHECK(pseudo.size() == 18);
  CHECK(fs::exists(dir / "data/gen-corpus.manifest.json"));
}

TEST_CASE("full command chain") {
  auto dir = small_benchmark("cli_chain");
  auto args = hitr_args(dir, "result.json");
  args.insert(args.end(), {"--reestimated-out", (dir / "re.json").string(),
                           "--corpus-out", (dir / "corpus.json").string()});
  auto h = run(args);
  REQUIRE(h.code == 0);
  CHECK(h.out.find("tar") != std::string::npos);
  auto result = io::model_from_json(io::read_json(dir / "result.json"));
  CHECK(result.stage_log.size() == 5);
  CHECK(result.final_doc_topic.size() == 78);
  CHECK(fs::exists(dir / "re.json"));

  auto d = run({"diversity", "--result", (dir / "result.json").string(),
                "--out", (dir / "scores.jsonl").string(), "--csv",
                (dir / "scores.csv").string()});
  REQUIRE(d.code == 0);
  CHECK(io::read_diversity(dir / "scores.jsonl").size() == 78);

  auto e = run({"evaluate", "--scores", (dir / "scores.jsonl").string(),
                "--labels", (dir / "data/train.jsonl").string(), "--labels",
                (dir / "data/pseudo.jsonl").string(), "--result",
                (dir / "result.json").string(), "--reference",
                (dir / "corpus.json").string(), "--out",
                (dir / "report.json").string(), "--roc-csv",
                (dir / "roc.csv").string()});
  REQUIRE(e.code == 0);
  auto report = io::read_json(dir / "report.json");
  CHECK(report["auc"].get<double>() >= 0.0);
  CHECK(report["sparsity"].is_number());
  CHECK(report["coherence"].is_number());
  CHECK(report["purity"].is_number());

  auto i = run({"inspect-topics", "--model", (dir / "result.json").string(),
                "--top-n", "3"});
  CHECK(i.code == 0);
  CHECK(i.out.find("topic 2:") != std::string::npos);
}

TEST_CASE("replay reproduces outputs byte for byte") {
  auto dir = small_benchmark("cli_replay");
  REQUIRE(run(hitr_args(dir, "result.json")).code == 0);
  const auto first = slurp(dir / "result.json");
  fs::remove(dir / "result.json");
  auto r = run({"replay", "--manifest", (dir / "result.json.manifest.json").string()});
  REQUIRE(r.code == 0);
  CHECK(slurp(dir / "result.json") == first);
}

TEST_CASE("config file sits between defaults and flags") {
  auto dir = small_benchmark("cli_config");
  std::ofstream(dir / "c.ini") << "[lda]\ntopics = 4\nseed = 9\n[tar]\nlambda = 0.2\n";
  auto args = hitr_args(dir, "result.json");
  args.insert(args.end(), {"--config", (dir / "c.ini").string(), "--seed", "11"});
  REQUIRE(run(args).code == 0);
  auto m = io::read_json(dir / "result.json.manifest.json");
  auto snap = m.dump();
  auto result = io::model_from_json(io::read_json(dir / "result.json"));
  CHECK(result.model.num_topics() == 3);  // --topics flag wins over the file
  CHECK(result.model.config.seed == 11);
  CHECK(snap.find("0.2") != std::string::npos);
}

TEST_CASE("bad inputs map to exit codes") {
  auto dir = small_benchmark("cli_errors");
  std::ofstream(dir / "bad.jsonl") << "not json\n";
  auto r = run({"train", "--input", (dir / "bad.jsonl").string(), "--out",
                (dir / "m.json").string()});
  CHECK(r.code == 3);
  CHECK(r.err.rfind("error[", 0) == 0);

  auto args = hitr_args(dir, "x.json");
  args.insert(args.end(), {"--lambda-tar", "0"});
  CHECK(run(args).code == 2);

  std::ofstream(dir / "c.ini") << "[lda]\nnope = 1\n";
  args = hitr_args(dir, "x.json");
  args.insert(args.end(), {"--config", (dir / "c.ini").string()});
  CHECK(run(args).code == 2);

  CHECK(run({"diversity", "--result", (dir / "missing.json").string(), "--out",
             (dir / "s.jsonl").string()})
            .code != 0);
}

TEST_CASE("gen-corpus replay regenerates identical files") {
  auto dir = testing::scratch("cli_gen_replay");
  const auto data = (dir / "data").string();
  REQUIRE(run({"gen-corpus", "--groups", "2", "--docs-per-group", "5", "--vocab",
               "100", "--diverse-pairs", "1", "--diverse-per-pair", "2",
               "--general-spread", "0.2", "--length-spread", "0.1", "--out", data})
              .code == 0);
  const auto first = slurp(dir / "data/train.jsonl");
  fs::remove(dir / "data/train.jsonl");
  REQUIRE(run({"replay", "--manifest", data + "/gen-corpus.manifest.json"}).code == 0);
  CHECK(slurp(dir / "data/train.jsonl") == first);
}
