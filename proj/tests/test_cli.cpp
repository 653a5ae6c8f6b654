// End-to-end checks of the command line tool: these run the real binary in a
// subprocess and inspect exit codes, the key=value summaries and the TSV
// outputs. The binary path comes in through IMH_CLI_PATH.
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "imh/rng.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path& work_dir() {
  static const fs::path dir = [] {
    const fs::path d = fs::temp_directory_path() / "imh_cli_tests";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

CliResult run_cli(const std::string& args) {
  const fs::path out_path = work_dir() / "stdout.txt";
  const fs::path err_path = work_dir() / "stderr.txt";
  const std::string command = std::string("\"") + IMH_CLI_PATH + "\" " + args +
                              " > " + out_path.string() + " 2> " +
                              err_path.string();
  const int status = std::system(command.c_str());
  CliResult result;
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  result.out = slurp(out_path);
  result.err = slurp(err_path);
  return result;
}

std::map<std::string, std::string> kv(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const std::size_t eq = line.find('=');
    if (eq != std::string::npos) out[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return out;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) out.push_back(line);
  return out;
}

std::vector<std::string> fields_of(const std::string& line) {
  std::vector<std::string> out;
  std::size_t at = 0;
  while (at <= line.size()) {
    const std::size_t tab = line.find('\t', at);
    out.push_back(line.substr(at, tab == std::string::npos ? tab : tab - at));
    if (tab == std::string::npos) break;
    at = tab + 1;
  }
  return out;
}

// Three well separated labelled blobs, label in the last column.
fs::path labelled_csv() {
  static const fs::path path = [] {
    const fs::path p = work_dir() / "data.csv";
    imh::Rng rng(9);
    std::ofstream out(p);
    out.precision(6);
    out.setf(std::ios::fixed);
    for (int i = 0; i < 60; ++i) {
      const int cls = i % 3;
      const double c = 20.0 * cls;
      out << c + 0.5 * rng.normal() << "," << c + 0.5 * rng.normal() << ","
          << 0.5 * rng.normal() << "," << cls << "\n";
    }
    return p;
  }();
  return path;
}

fs::path query_csv() {
  static const fs::path path = [] {
    const fs::path p = work_dir() / "queries.csv";
    imh::Rng rng(10);
    std::ofstream out(p);
    out.precision(6);
    out.setf(std::ios::fixed);
    for (int i = 0; i < 6; ++i) {
      const int cls = i % 3;
      const double c = 20.0 * cls;
      out << c + 0.5 * rng.normal() << "," << c + 0.5 * rng.normal() << ","
          << 0.5 * rng.normal() << "," << cls << "\n";
    }
    return p;
  }();
  return path;
}

fs::path unlabelled_csv() {
  static const fs::path path = [] {
    const fs::path p = work_dir() / "plain.csv";
    imh::Rng rng(11);
    std::ofstream out(p);
    out.precision(6);
    out.setf(std::ios::fixed);
    for (int i = 0; i < 24; ++i) {
      const double c = 15.0 * (i % 2);
      out << c + 0.4 * rng.normal() << "," << c + 0.4 * rng.normal() << ","
          << 0.4 * rng.normal() << "\n";
    }
    return p;
  }();
  return path;
}

std::string path_of(const char* name) { return (work_dir() / name).string(); }

double as_double(const std::map<std::string, std::string>& map,
                 const std::string& key) {
  REQUIRE(map.contains(key));
  return std::stod(map.at(key));
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("train prints a key=value summary and is byte-deterministic") {
  const std::string args = "train --data " + labelled_csv().string() +
                           " --csv-labels --backend pca -m 9 -k 3 --bits 2"
                           " --ci -o " + path_of("det.imh");
  const CliResult first = run_cli(args);
  REQUIRE(first.exit_code == 0);
  const std::string model_bytes = slurp(work_dir() / "det.imh");
  const CliResult second = run_cli(args);
  CHECK(second.exit_code == 0);
  CHECK(second.out == first.out);
  CHECK(slurp(work_dir() / "det.imh") == model_bytes);

  const auto keys = kv(first.out);
  CHECK(keys.at("status") == "ok");
  CHECK(keys.at("command") == "train");
  CHECK(keys.at("algo") == "imh");
  CHECK(keys.at("n") == "60");
  CHECK(keys.at("d") == "3");
  CHECK(keys.at("backend") == "pca");
  CHECK(keys.at("base_method") == "kmeans");
  CHECK(keys.at("m") == "9");
  CHECK(keys.at("k") == "3");
  CHECK(keys.at("bits") == "2");
  CHECK(as_double(keys, "sigma") > 0.0);
  CHECK(keys.at("sigma_floored") == "0");
  CHECK(keys.at("itq") == "0");
  CHECK(keys.at("supervised") == "0");
  for (const char* field : {"base_seconds", "embed_seconds", "encode_seconds",
                            "train_seconds"})
    CHECK(keys.at(field) == "0.000");  // --ci zeroes every wall-clock field
}

TEST_CASE("named seeds default to the documented values") {
  const std::string common = "train --data " + labelled_csv().string() +
                             " --csv-labels --backend tsne -m 9 -k 3 --bits 4"
                             " --tsne-iters 120 --itq --itq-iters 20"
                             " --test-count 10 --ci -o " + path_of("seed.imh");
  const CliResult bare = run_cli(common);
  REQUIRE(bare.exit_code == 0);
  const std::string bare_model = slurp(work_dir() / "seed.imh");

  const CliResult spelled = run_cli(
      common + " --kmeans-seed 1 --tsne-seed 2 --itq-seed 3 --split-seed 4");
  REQUIRE(spelled.exit_code == 0);
  CHECK(spelled.out == bare.out);
  CHECK(slurp(work_dir() / "seed.imh") == bare_model);

  const auto keys = kv(bare.out);
  CHECK(keys.at("itq") == "1");
  const double initial = as_double(keys, "tsne_initial_kl");
  const double final_kl = as_double(keys, "tsne_final_kl");
  CHECK(final_kl <= initial);

  // The LSH draw seed defaults to 5.
  const std::string lsh = "train --data " + labelled_csv().string() +
                          " --csv-labels --algo lsh --bits 8 --ci -o " +
                          path_of("lsh.imhl");
  REQUIRE(run_cli(lsh).exit_code == 0);
  const std::string lsh_model = slurp(work_dir() / "lsh.imhl");
  REQUIRE(run_cli(lsh + " --lsh-seed 5").exit_code == 0);
  CHECK(slurp(work_dir() / "lsh.imhl") == lsh_model);
}

TEST_CASE("eval reports radius-suffixed metrics and writes the pr curve") {
  REQUIRE(run_cli("train --data " + labelled_csv().string() +
                  " --csv-labels --backend pca -m 9 -k 3 --bits 3 --ci -o " +
                  path_of("eval.imh")).exit_code == 0);

  const CliResult eval = run_cli(
      "eval --data " + labelled_csv().string() + " --csv-labels --model " +
      path_of("eval.imh") + " --test-count 15 --radius 2 --cutoffs 1,5,10"
      " --out " + path_of("pr.tsv") + " --ci");
  REQUIRE(eval.exit_code == 0);
  const auto keys = kv(eval.out);
  CHECK(keys.at("status") == "ok");
  CHECK(keys.at("command") == "eval");
  CHECK(keys.at("db") == "45");
  CHECK(keys.at("queries") == "15");
  CHECK(keys.at("bits") == "3");
  CHECK(keys.at("ground_truth") == "labels");
  CHECK(keys.at("radius") == "2");
  CHECK(std::stoul(keys.at("queries_used")) +
            std::stoul(keys.at("queries_skipped")) == 15);
  CHECK(as_double(keys, "map") > 0.0);
  CHECK(as_double(keys, "map") <= 1.0);
  for (const char* field : {"precision_r2", "recall_r2", "f1_r2"}) {
    const double v = as_double(keys, field);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }

  const std::vector<std::string> pr = lines_of(slurp(work_dir() / "pr.tsv"));
  REQUIRE(pr.size() == 4);
  CHECK(pr[0] == "# cutoff\tprecision\trecall");
  CHECK(fields_of(pr[1])[0] == "1");
  CHECK(fields_of(pr[2])[0] == "5");
  CHECK(fields_of(pr[3])[0] == "10");

  // Label ground truth is refused when the data carries no labels.
  const CliResult no_labels = run_cli(
      "eval --data " + unlabelled_csv().string() + " --model " +
      path_of("eval.imh") + " --test-count 6 --ci");
  CHECK(no_labels.exit_code == 1);
  CHECK(no_labels.err.find("label ground truth") != std::string::npos);
}

TEST_CASE("euclidean ground truth works without labels") {
  REQUIRE(run_cli("train --data " + unlabelled_csv().string() +
                  " --backend pca -m 6 -k 2 --bits 3 --ci -o " +
                  path_of("plain.imh")).exit_code == 0);
  const CliResult eval = run_cli(
      "eval --data " + unlabelled_csv().string() + " --model " +
      path_of("plain.imh") +
      " --test-count 6 --gt euclidean --fraction 0.1 --radius 1 --ci");
  REQUIRE(eval.exit_code == 0);
  const auto keys = kv(eval.out);
  CHECK(keys.at("ground_truth") == "euclidean");
  CHECK(keys.at("db") == "18");
  CHECK(keys.at("queries") == "6");
  CHECK(as_double(keys, "map") > 0.0);
}

TEST_CASE("sweep emits one grid row per combination, nan for failures") {
  const CliResult sweep = run_cli(
      "sweep --data " + labelled_csv().string() +
      " --csv-labels --test-count 15 --backends pca,lsh --m-grid 9"
      " --k-grid 3 --bits-grid 2,40 --ci --out " + path_of("sweep.tsv"));
  REQUIRE(sweep.exit_code == 0);

  const std::vector<std::string> rows = lines_of(slurp(work_dir() / "sweep.tsv"));
  REQUIRE(rows.size() == 5);
  CHECK(rows[0] ==
        "# backend\tbase_method\tm\tk\tbits\tmap\tf1_r\ttrain_seconds"
        "\tencode_seconds");
  bool saw_failure = false;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const std::vector<std::string> cols = fields_of(rows[i]);
    REQUIRE(cols.size() == 9);
    CHECK(cols[2] == "9");
    CHECK(cols[3] == "3");
    if (cols[0] == "pca" && cols[4] == "40") {
      // Infeasible width: the row stays in the grid with nan metrics.
      CHECK(cols[5] == "nan");
      CHECK(cols[6] == "nan");
      saw_failure = true;
    } else {
      CHECK(std::stod(cols[5]) > 0.0);
    }
    if (cols[0] == "lsh") CHECK(cols[1] == "-");
  }
  CHECK(saw_failure);
  CHECK(sweep.err.find("failed:") != std::string::npos);

  // Without --out the table goes to stdout.
  const CliResult to_stdout = run_cli(
      "sweep --data " + labelled_csv().string() +
      " --csv-labels --test-count 15 --backends lsh --m-grid 9 --k-grid 3"
      " --bits-grid 4 --ci");
  REQUIRE(to_stdout.exit_code == 0);
  CHECK(lines_of(to_stdout.out).at(0).starts_with("# backend\t"));
}

TEST_CASE("a config file fills in defaults and explicit flags win") {
  const fs::path cfg = work_dir() / "train.ini";
  std::ofstream(cfg) << "[train]\nbits=2\nbase-size=9\n";

  const std::string tail = " train --data " + labelled_csv().string() +
                           " --csv-labels --backend pca -k 3 --ci -o " +
                           path_of("cfg.imh");
  const CliResult from_config = run_cli("--config " + cfg.string() + tail);
  REQUIRE(from_config.exit_code == 0);
  CHECK(kv(from_config.out).at("bits") == "2");
  CHECK(kv(from_config.out).at("m") == "9");

  const CliResult overridden =
      run_cli("--config " + cfg.string() + tail + " --bits 3");
  REQUIRE(overridden.exit_code == 0);
  CHECK(kv(overridden.out).at("bits") == "3");  // flag beats config
  CHECK(kv(overridden.out).at("m") == "9");
}

TEST_CASE("error classes map to distinct exit codes") {
  CHECK(run_cli("train --no-such-flag").exit_code == 1);
  CHECK(run_cli("").exit_code == 1);  // a subcommand is required

  const CliResult missing =
      run_cli("train --data " + path_of("missing.csv"));
  CHECK(missing.exit_code == 2);
  CHECK(missing.err.find("error:") != std::string::npos);

  const fs::path ragged = work_dir() / "ragged.csv";
  std::ofstream(ragged) << "1,2\n3\n";
  CHECK(run_cli("train --data " + ragged.string()).exit_code == 2);

  const CliResult bad_k = run_cli(
      "train --data " + labelled_csv().string() +
      " --csv-labels --backend pca -m 5 -k 9 --bits 2");
  CHECK(bad_k.exit_code == 1);
  CHECK(bad_k.err.find("error:") != std::string::npos);

  CHECK(run_cli("eval --data " + labelled_csv().string() +
                " --csv-labels --model " + path_of("absent.imh") +
                " --test-count 5").exit_code == 2);
}

TEST_CASE("linear baselines run end to end through the cli") {
  const CliResult pcah = run_cli(
      "train --data " + labelled_csv().string() +
      " --csv-labels --algo pcah --bits 3 --ci -o " + path_of("pcah.imhl"));
  REQUIRE(pcah.exit_code == 0);
  CHECK(kv(pcah.out).at("algo") == "pcah");
  CHECK(kv(pcah.out).at("bits") == "3");

  // eval detects the linear format from the file itself.
  const CliResult eval = run_cli(
      "eval --data " + labelled_csv().string() + " --csv-labels --model " +
      path_of("pcah.imhl") + " --test-count 15 --radius 1 --cutoffs 5 --ci");
  REQUIRE(eval.exit_code == 0);
  CHECK(kv(eval.out).at("bits") == "3");
  CHECK(kv(eval.out).count("f1_r1") == 1);
}

TEST_CASE("supervised training flows through the cli") {
  const CliResult train = run_cli(
      "train --data " + labelled_csv().string() +
      " --csv-labels --supervised --m-per-class 3 --bits 2 --embed-width 3"
      " --backend pca -k 3 --ci -o " + path_of("sup.imh"));
  REQUIRE(train.exit_code == 0);
  const auto keys = kv(train.out);
  CHECK(keys.at("supervised") == "1");
  CHECK(keys.at("base_method") == "per_class_kmeans");
  CHECK(keys.at("m") == "9");

  const CliResult eval = run_cli(
      "eval --data " + labelled_csv().string() + " --csv-labels --model " +
      path_of("sup.imh") + " --test-count 15 --radius 0 --cutoffs 10 --ci");
  REQUIRE(eval.exit_code == 0);
  CHECK(as_double(kv(eval.out), "map") > 0.0);
}

TEST_CASE("codes written at train time are reused by eval") {
  REQUIRE(run_cli("train --data " + labelled_csv().string() +
                  " --csv-labels --backend pca -m 9 -k 3 --bits 3 --ci -o " +
                  path_of("withcodes.imh") + " --codes-out " +
                  path_of("db.imhc")).exit_code == 0);

  const CliResult eval = run_cli(
      "eval --data " + labelled_csv().string() + " --csv-labels"
      " --query-data " + query_csv().string() + " --query-csv-labels"
      " --model " + path_of("withcodes.imh") + " --codes " +
      path_of("db.imhc") + " --radius 1 --cutoffs 5 --ci");
  REQUIRE(eval.exit_code == 0);
  CHECK(kv(eval.out).at("db") == "60");
  CHECK(kv(eval.out).at("queries") == "6");

  // A stale codes file is rejected when its row count disagrees.
  const CliResult stale = run_cli(
      "eval --data " + labelled_csv().string() + " --csv-labels --model " +
      path_of("withcodes.imh") + " --codes " + path_of("db.imhc") +
      " --test-count 15 --ci");
  CHECK(stale.exit_code == 1);
  CHECK(stale.err.find("code count") != std::string::npos);
}

TEST_CASE("validate-prototype prints one row per instance") {
  const CliResult result = run_cli("validate-prototype --trials 2000 --seed 7");
  REQUIRE(result.exit_code == 0);
  const std::vector<std::string> rows = lines_of(result.out);
  REQUIRE(rows.size() >= 3);
  CHECK(rows[0].starts_with("# n\tr\tclusters"));
  const auto keys = kv(result.out);
  CHECK(keys.at("trials") == "2000");
  CHECK(keys.at("status") == "ok");
}

TEST_CASE("wall-clock fields are consistent without --ci") {
  const CliResult train = run_cli(
      "train --data " + labelled_csv().string() +
      " --csv-labels --backend tsne -m 9 -k 3 --bits 4 --tsne-iters 200 -o " +
      path_of("timed.imh"));
  REQUIRE(train.exit_code == 0);
  const auto keys = kv(train.out);
  const double base = as_double(keys, "base_seconds");
  const double embed = as_double(keys, "embed_seconds");
  const double encode = as_double(keys, "encode_seconds");
  const double total = as_double(keys, "train_seconds");
  CHECK(base >= 0.0);
  CHECK(embed >= 0.0);
  CHECK(encode >= 0.0);
  CHECK(base + embed + encode <= total * 1.05 + 0.02);
}

TEST_SUITE_END();
