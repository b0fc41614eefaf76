#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "cplogic/cli.hpp"
#include "testutil.hpp"

using namespace cplogic;
using namespace cplogic::testutil;

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return CliResult{code, out.str(), err.str()};
}

std::string temp_file(const std::string& name) { return "/tmp/cplogic_test_" + name; }

}  // namespace

TEST_CASE("check reports stratification and validity with exit codes") {
  CliResult ok = cli({"check", corpus_path("window.cpl")});
  CHECK(ok.code == 0);
  CHECK(ok.out.find("parse OK") != std::string::npos);
  CHECK(ok.out.find("stratified: yes") != std::string::npos);
  CHECK(ok.out.find("VALID") != std::string::npos);

  CliResult bad = cli({"check", corpus_path("win_game.cpl")});
  CHECK(bad.code == 2);
  CHECK(bad.out.find("stratified: no") != std::string::npos);
  CHECK(bad.out.find("INVALID (no execution model)") != std::string::npos);

  CliResult msgs = cli({"check", corpus_path("messages.cpl")});
  CHECK(msgs.code == 0);
  CHECK(msgs.out.find("stratified: yes") != std::string::npos);
  CHECK(msgs.out.find("VALID") != std::string::npos);

  CliResult all = cli({"check", corpus_path("paresis.cpl"), "--all-contexts"});
  CHECK(all.code == 0);
  CHECK(all.out.find("context {}: VALID") != std::string::npos);
  CHECK(all.out.find("context {syphilis}: VALID") != std::string::npos);
}

TEST_CASE("exit code contract: usage 1, input errors 1, semantic errors 2") {
  CHECK(cli({"frobnicate"}).code == 1);
  CHECK(cli({"query", corpus_path("window.cpl")}).code == 1);  // missing -q
  CHECK(cli({"check", "/nonexistent.cpl"}).code == 1);
  CHECK(cli({"query", corpus_path("win_game.cpl"), "-q", "win(white)"}).code == 2);
  CHECK(cli({"query", corpus_path("window.cpl"), "-q", "break"}).code == 0);

  std::string bad = temp_file("bad.cpl");
  std::ofstream(bad) << "pred p/0. (p:0.6) or (p:0.5).\n";
  CHECK(cli({"check", bad}).code == 1);
  std::remove(bad.c_str());
}

TEST_CASE("query prints the exact rational and a decimal") {
  CliResult r = cli({"query", corpus_path("window.cpl"), "-q", "break"});
  CHECK(r.code == 0);
  CHECK(r.out == "19/25\t0.760000\n");

  CliResult both = cli({"query", corpus_path("pneumonia.cpl"), "--context", "infection", "-q",
                        "pneumonia & ~angina", "--semantics", "both"});
  CHECK(both.code == 0);
  CHECK(both.out == "8/25\t0.320000\n");

  CliResult trivial = cli({"query", corpus_path("window.cpl"), "-q", "true"});
  CHECK(trivial.out == "1\t1.000000\n");

  CliResult digits = cli({"query", corpus_path("window.cpl"), "-q", "break", "--digits", "2"});
  CHECK(digits.out == "19/25\t0.76\n");

  CliResult all = cli({"query", corpus_path("paresis.cpl"), "--all-contexts", "-q", "paresis"});
  CHECK(all.code == 0);
  CHECK(all.out == "{}\t0\t0.000000\n{syphilis}\t1/4\t0.250000\n");
}

TEST_CASE("dist emits the sorted TSV table") {
  CliResult r = cli({"dist", corpus_path("pneumonia.cpl"), "--context", "infection",
                     "--semantics", "both"});
  CHECK(r.code == 0);
  CHECK(r.out == read_file(corpus_path("pneumonia.golden")));

  CliResult empty = cli({"dist", corpus_path("coin.cpl")});
  CHECK(empty.code == 0);
  CHECK(empty.out == "{}\t1\t1.000000\n");
}

TEST_CASE("tree enumeration reports one distribution for the window story") {
  CliResult r = cli({"tree", corpus_path("window.cpl"), "--policy", "all"});
  CHECK(r.code == 0);
  CHECK(r.out.find("distinct distributions: 1") != std::string::npos);

  CliResult seeded = cli({"tree", corpus_path("window.cpl"), "--policy", "seed:42"});
  CHECK(seeded.code == 0);
  CHECK(seeded.out.find("19/25") == std::string::npos);  // summary lists full states
  CHECK(seeded.out.find("23/50") != std::string::npos);

  CliResult invalid = cli({"tree", corpus_path("win_game.cpl"), "--policy", "all"});
  CHECK(invalid.code == 2);

  CliResult bad_policy = cli({"tree", corpus_path("window.cpl"), "--policy", "newest"});
  CHECK(bad_policy.code == 1);

  CliResult dot = cli({"tree", corpus_path("paresis.cpl"), "--context", "syphilis",
                       "--dump-tree", "dot"});
  CHECK(dot.code == 0);
  CHECK(dot.out.find("digraph") != std::string::npos);

  CliResult weak = cli({"tree", corpus_path("fever_treatment.cpl"), "--context", "pneumonia",
                        "--mode", "weak", "--dump-tree", "json"});
  CHECK(weak.code == 0);
  CHECK(weak.out.find("\"event\":0") != std::string::npos);
  // The JSON dump is well formed.
  nlohmann::json parsed = nlohmann::json::parse(weak.out, nullptr, false);
  CHECK(!parsed.is_discarded());
  CHECK(parsed["children"].size() == 2);
}

TEST_CASE("dist over all contexts emits per-context sections") {
  CliResult r = cli({"dist", corpus_path("paresis.cpl"), "--all-contexts"});
  CHECK(r.code == 0);
  CHECK(r.out.find("# context {}") != std::string::npos);
  CHECK(r.out.find("# context {syphilis}") != std::string::npos);
  CHECK(r.out.find("{paresis,syphilis}\t1/4\t0.250000") != std::string::npos);
}

TEST_CASE("ground dumps rules with their ids") {
  CliResult r = cli({"ground", corpus_path("hospital_days.cpl")});
  CHECK(r.code == 0);
  CHECK(r.out.find("% r0") != std::string::npos);
  CHECK(r.out.find("(pneumonia(2):4/5) <- pneumonia(1).") != std::string::npos);
  CHECK(r.out.find("pneumonia(4)") == std::string::npos);
}

TEST_CASE("import-bn emits a theory the query pipeline accepts") {
  std::string out_path = temp_file("sprinkler.cpl");
  CliResult imp = cli({"import-bn", corpus_path("sprinkler.json"), "-o", out_path});
  CHECK(imp.code == 0);
  CliResult q = cli({"query", out_path, "-q", "wet", "--semantics", "both"});
  CHECK(q.code == 0);
  CHECK(q.out == "579/1250\t0.463200\n");
  std::remove(out_path.c_str());
}

TEST_CASE("intervene rewrites and the result is queryable") {
  std::string out_path = temp_file("dialysis.cpl");
  CliResult r = cli({"intervene", corpus_path("kidney.cpl"), "--script",
                     corpus_path("dialysis.json"), "-o", out_path});
  CHECK(r.code == 0);
  CliResult q = cli({"query", out_path, "--context", "kidney_tumor,dialysis", "-q", "death"});
  CHECK(q.code == 0);
  CHECK(q.out == "119/2000\t0.059500\n");
  std::remove(out_path.c_str());

  CliResult flags = cli({"intervene", corpus_path("kidney.cpl"), "--remove", "3", "--add",
                         "(death:1/100) <- dialysis."});
  CHECK(flags.code == 0);
  CHECK(flags.out.find("(death:1/100) <- dialysis.") != std::string::npos);
  CHECK(flags.out.find("(death:9/10)") == std::string::npos);
}

TEST_CASE("wfs traces are dumped as JSON lines") {
  std::string trace = temp_file("trace.jsonl");
  CliResult r = cli({"dist", corpus_path("choice_loop.cpl"), "--semantics", "instances",
                     "--trace-wfs", trace});
  CHECK(r.code == 0);
  std::string text = read_file(trace);
  CHECK(text.find("\"selection\"") != std::string::npos);
  CHECK(text.find("make_true") != std::string::npos);
  CHECK(std::count(text.begin(), text.end(), '\n') == 2);
  std::remove(trace.c_str());
}

TEST_CASE("node cap environment override") {
  setenv("CPLOGIC_NODE_CAP", "2", 1);
  CliResult r = cli({"dist", corpus_path("window.cpl")});
  unsetenv("CPLOGIC_NODE_CAP");
  CHECK(r.code == 2);
  CHECK(r.err.find("ResourceLimit") != std::string::npos);
}

TEST_CASE("corpus run checks every bundled theory") {
  CliResult r = cli({"corpus", "run", CPLOGIC_CORPUS_DIR});
  CHECK(r.code == 0);
  CHECK(r.out.find("FAIL") == std::string::npos);
  CHECK(r.out.find("PASS window.cpl") != std::string::npos);
  CHECK(r.out.find("golden=ok") != std::string::npos);
}
