// End-to-end checks of the installed command line: exit codes, file outputs,
// and reproducibility. Runs the real binary via std::system.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

const std::string kCli = EEM_CLI_PATH;
const std::string kData = EEM_DATA_DIR;

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name, const std::string& contents = "") {
    path = "cli_" + name;
    if (!contents.empty()) {
      std::ofstream out(path);
      out << contents;
    }
  }
  ~TempFile() { std::remove(path.c_str()); }
};

int run(const std::string& args, const std::string& stdout_file = "") {
  std::string cmd = kCli + " " + args;
  if (!stdout_file.empty()) cmd += " > " + stdout_file;
  cmd += " 2> cli_stderr.log";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int count_lines_starting(const std::string& text, char c) {
  int count = 0;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty() && line[0] == c) ++count;
  return count;
}

}  // namespace

TEST_CASE("train and predict round trip on the bundled blobs") {
  TempFile model("model.json");
  CHECK(run("train --data " + kData + "/blobs.libsvm --algo eem --activation rbf"
            " --h 40 --seed 9 --model " + model.path) == 0);
  std::ifstream check(model.path);
  CHECK(check.good());

  TempFile out("pred.txt");
  CHECK(run("predict --data " + kData + "/blobs.libsvm --model " + model.path,
            out.path) == 0);
  const std::string pred = slurp(out.path);
  CHECK(count_lines_starting(pred, '+') + count_lines_starting(pred, '-') == 200);
}

TEST_CASE("training is byte-reproducible under a fixed seed") {
  TempFile a("model_a.json");
  TempFile b("model_b.json");
  CHECK(run("train --data " + kData + "/blobs.libsvm --algo eekm --gamma 0.5"
            " --h 20 --seed 4 --model " + a.path) == 0);
  CHECK(run("train --data " + kData + "/blobs.libsvm --algo eekm --gamma 0.5"
            " --h 20 --seed 4 --model " + b.path) == 0);
  CHECK(slurp(a.path) == slurp(b.path));
  CHECK(!slurp(a.path).empty());
}

TEST_CASE("probability output stays within [0,1] and matches the labels") {
  TempFile model("model_p.json");
  REQUIRE(run("train --data " + kData + "/blobs.libsvm --algo eem --activation rbf"
              " --h 30 --seed 2 --model " + model.path) == 0);
  TempFile out("proba.txt");
  CHECK(run("predict --data " + kData + "/blobs.libsvm --model " + model.path +
            " --proba", out.path) == 0);
  std::istringstream in(slurp(out.path));
  int label;
  double p;
  int rows = 0;
  while (in >> label >> p) {
    CHECK(p >= 0.0);
    CHECK(p <= 1.0);
    ++rows;
  }
  CHECK(rows == 200);
}

TEST_CASE("costs shift predictions toward the positive class") {
  TempFile model("model_c.json");
  REQUIRE(run("train --data " + kData + "/blobs.libsvm --algo eem --activation sig"
              " --h 10 --seed 3 --model " + model.path) == 0);
  TempFile plain("plain.txt");
  TempFile costed("costed.txt");
  REQUIRE(run("predict --data " + kData + "/blobs.libsvm --model " + model.path,
              plain.path) == 0);
  REQUIRE(run("predict --data " + kData + "/blobs.libsvm --model " + model.path +
              " --costs 10,1", costed.path) == 0);
  CHECK(count_lines_starting(slurp(costed.path), '+') >=
        count_lines_starting(slurp(plain.path), '+'));
}

TEST_CASE("single-class data exits with the input-error code") {
  TempFile data("single.libsvm", "+1 1:0.5 2:1.0\n+1 1:0.25 2:0.5\n+1 1:1.0 2:2.0\n");
  TempFile model("model_s.json");
  CHECK(run("train --data " + data.path + " --algo eem --activation rbf --h 5"
            " --seed 1 --model " + model.path) == 2);
}

TEST_CASE("degenerate covariance exits with the numerical-error code") {
  // two identical points per class: zero covariance everywhere
  TempFile data("degen.libsvm", "+1 1:1\n+1 1:1\n-1 1:-1\n-1 1:-1\n");
  TempFile model("model_d.json");
  CHECK(run("train --data " + data.path + " --algo eem --activation nsig --h 4"
            " --seed 1 --model " + model.path) == 3);
  // the documented escape hatch
  CHECK(run("train --data " + data.path + " --algo eem --activation nsig --h 4"
            " --seed 1 --jitter 1e-6 --model " + model.path) == 0);
}

TEST_CASE("missing input file exits with the input-error code") {
  TempFile model("model_m.json");
  CHECK(run("train --data no_such_file.libsvm --algo eem --h 5 --seed 1 --model " +
            model.path) == 2);
}

TEST_CASE("mismatched prediction dimensions exit with the input-error code") {
  TempFile model("model_dim.json");
  REQUIRE(run("train --data " + kData + "/blobs.libsvm --algo eem --activation rbf"
              " --h 8 --seed 5 --model " + model.path) == 0);
  TempFile narrow("narrow.libsvm", "+1 1:0.5\n-1 1:-0.5\n");
  CHECK(run("predict --data " + narrow.path + " --model " + model.path) == 2);
}

TEST_CASE("evaluate prints a report line per config and honors --out") {
  TempFile report("report.json");
  TempFile out("eval.txt");
  CHECK(run("evaluate --data " + kData + "/blobs.libsvm --algo eem --activation rbf"
            " --grid-h 10,20 -k 4 --repeats 1 --seed 6 --out " + report.path,
            out.path) == 0);
  const std::string text = slurp(out.path);
  CHECK(text.find("eem rbf h=10") != std::string::npos);
  CHECK(text.find("eem rbf h=20") != std::string::npos);
  CHECK(text.find("best:") != std::string::npos);
  CHECK(slurp(report.path).find("fold_gmeans") != std::string::npos);
}

TEST_CASE("tune prints the chosen config") {
  TempFile out("tune.txt");
  CHECK(run("tune --data " + kData + "/blobs.libsvm --algo eem --activation rbf"
            " --grid-h 5,25 --method dcs-gauss --seed 8", out.path) == 0);
  CHECK(slurp(out.path).find("chosen:") != std::string::npos);

  TempFile out2("tune_kde.txt");
  CHECK(run("tune --data " + kData + "/blobs.libsvm --algo eem --activation rbf"
            " --grid-h 5,25 --method dcs-kde --seed 8", out2.path) == 0);
  CHECK(slurp(out2.path).find("chosen:") != std::string::npos);
}

TEST_CASE("spearman experiment emits one tsv row per dimension") {
  TempFile out("spearman.tsv");
  CHECK(run("experiment spearman --data " + kData + "/blobs.libsvm --dims 1,3,7"
            " --n-projections 4 --n-operators 6 --seed 3 --out " + out.path) == 0);
  const std::string tsv = slurp(out.path);
  std::istringstream in(tsv);
  std::string line;
  int rows = -1;  // header
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 3);
}

TEST_CASE("stability experiment emits the sweep table") {
  TempFile out("stability.tsv");
  CHECK(run("experiment stability --data " + kData + "/blobs.libsvm --algo eem"
            " --activation rbf --h-values 5,10 -k 3 --repeats 1 --seed 2 --out " +
            out.path) == 0);
  CHECK(slurp(out.path).find("h\tgmean_mean") != std::string::npos);
}

TEST_CASE("bench reports a positive training time") {
  TempFile out("bench.txt");
  CHECK(run("experiment bench --data " + kData + "/blobs.libsvm --algo eem"
            " --activation rbf --h 15 --seed 2", out.path) == 0);
  CHECK(slurp(out.path).find("train_seconds_median3=") != std::string::npos);
}

