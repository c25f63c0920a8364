#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

#include "rulescore/cli.hpp"
#include "test_support.hpp"

using namespace rulescore;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "rulescore");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

// Runs the installed binary through the shell and returns its exit status.
int run_binary(const std::string& args) {
  std::string cmd = std::string(RULESCORE_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / "rulescore_cli_test") {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name, const std::string& content) const {
    std::ofstream(path / name) << content;
    return (path / name).string();
  }
};

const char* kRules = R"({"task": "regression", "default_prediction": 22.5,
  "rules": [{"conditions": [{"feature": 12, "kind": "interval", "lower": null, "upper": 9.5}], "prediction": 30},
            {"conditions": [{"feature": 5, "kind": "interval", "lower": 6.5, "upper": null}], "prediction": 35}]})";

std::string housing() { return testing::data_dir() + "/housing_synth.csv"; }

}  // namespace

TEST_CASE("validate-rules accepts a well-formed file") {
  TempDir tmp;
  std::string path = tmp.file("rules.json", kRules);
  Result r = run_cli({"validate-rules", path});
  CHECK(r.code == 0);
  CHECK(r.out.find("ok, task regression, 2 rules, interpretability index 2") != std::string::npos);
  CHECK(run_binary("validate-rules " + path) == 0);

  std::string bad = tmp.file("bad.json", R"({"task": "regression", "default_prediction": 0,
    "rules": [{"conditions": [{"feature": 0, "kind": "box"}], "prediction": 1}]})");
  Result b = run_cli({"validate-rules", bad});
  CHECK(b.code == 2);
  CHECK(b.err.find("rules[0]") != std::string::npos);
}

TEST_CASE("evaluate with a single algorithm is a usage error") {
  Result r = run_cli({"evaluate", "--data", housing(), "--target", "MEDV", "--algos", "cart"});
  CHECK(r.code == 1);
  CHECK(r.err.find("need >= 2 algorithms") != std::string::npos);
  CHECK(run_binary("evaluate --data " + housing() + " --target MEDV --algos cart") == 1);
}

TEST_CASE("score-rules on identical files prints 1.0") {
  TempDir tmp;
  std::string a = tmp.file("a.json", kRules);
  std::string b = tmp.file("b.json", kRules);
  Result r = run_cli({"score-rules", "--data", housing(), "--target", "MEDV", "--rules", a, "--rules2", b});
  CHECK(r.code == 0);
  CHECK(r.out == "1.0\n");
}

TEST_CASE("usage and data errors map to exit codes") {
  CHECK(run_cli({}).code == 1);
  CHECK(run_cli({"evaluate", "--data", housing(), "--algos", "cart,sirus-lite", "--weights", "1,2"}).code == 1);
  CHECK(run_cli({"--folds", "1", "evaluate", "--data", housing(), "--algos", "cart,sirus-lite"}).code == 1);
  CHECK(run_cli({"evaluate", "--data", "/nonexistent.csv", "--algos", "cart,sirus-lite"}).code == 2);
  CHECK(run_cli({"--help"}).code == 0);
}

TEST_CASE("evaluate writes the report files") {
  TempDir tmp;
  std::string out = (tmp.path / "report").string();
  Result r = run_cli({"--folds", "2", "--out", out, "evaluate", "--data", housing(), "--target", "MEDV", "--algos",
                      "cart,sirus-lite", "--sirus-trees", "20"});
  CHECK(r.code == 0);
  for (const char* f : {"report.json", "scores.csv", "summary.md", "boxplot_data.csv"}) {
    CHECK(fs::exists(fs::path(out) / f));
  }
}

TEST_CASE("make-folds lists test rows and stability halves") {
  Result r = run_cli({"--folds", "3", "make-folds", "--n", "10", "--name", "toy"});
  CHECK(r.code == 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  CHECK(line == "fold,row,role");
  std::size_t test = 0, half = 0;
  while (std::getline(in, line)) {
    if (line.find(",test") != std::string::npos) ++test;
    if (line.find(",half") != std::string::npos) ++half;
  }
  CHECK(test == 10);
  CHECK(half == 20);
  CHECK(run_cli({"make-folds"}).code == 1);
}
