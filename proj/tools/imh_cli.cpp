// Command line front end: train, eval, sweep, validate-prototype.
//
// Exit codes: 0 success, 1 bad arguments, 2 bad input files, 3 numerical
// failure. Summaries are key=value lines on stdout; tables are TSV with a
// '#'-prefixed header. With --ci every wall-clock field prints as 0.000 so
// repeated runs are byte-identical.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "imh/baselines.hpp"
#include "imh/dataset.hpp"
#include "imh/eval.hpp"
#include "imh/inductive.hpp"
#include "imh/parallel.hpp"
#include "imh/prototype.hpp"
#include "imh/serialize.hpp"
#include "imh/supervised.hpp"

namespace {

using imh::ArgumentError;
using imh::FeatureMatrix;

std::string fmt_value(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_seconds(double v, bool ci) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.3f", ci ? 0.0 : v);
  return buf;
}

double elapsed(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

std::vector<std::size_t> parse_size_list(const std::string& text,
                                         const char* what) {
  std::vector<std::size_t> out;
  std::size_t at = 0;
  while (at <= text.size()) {
    const std::size_t comma = text.find(',', at);
    const std::string tok =
        text.substr(at, comma == std::string::npos ? comma : comma - at);
    try {
      out.push_back(static_cast<std::size_t>(std::stoull(tok)));
    } catch (const std::exception&) {
      throw ArgumentError(std::string(what) + ": cannot parse '" + tok + "'");
    }
    if (comma == std::string::npos) break;
    at = comma + 1;
  }
  if (out.empty()) throw ArgumentError(std::string(what) + ": empty list");
  return out;
}

std::vector<std::string> parse_string_list(const std::string& text) {
  std::vector<std::string> out;
  std::size_t at = 0;
  while (at <= text.size()) {
    const std::size_t comma = text.find(',', at);
    out.push_back(
        text.substr(at, comma == std::string::npos ? comma : comma - at));
    if (comma == std::string::npos) break;
    at = comma + 1;
  }
  return out;
}

// Shared dataset options. Either an IDX image/label pair or a single file
// whose format comes from --format or the extension.
struct DataArgs {
  std::string data;
  std::string images;
  std::string labels;
  std::string format = "auto";
  bool csv_labels = false;
  std::size_t limit = 0;
};

void add_data_args(CLI::App* cmd, DataArgs& args, const std::string& prefix) {
  const std::string dash = prefix.empty() ? "--" : "--" + prefix + "-";
  cmd->add_option(dash + "data", args.data,
                  "Dataset file (.csv, .fvecs or .bvecs)");
  cmd->add_option(dash + "images", args.images, "IDX image file");
  cmd->add_option(dash + "labels", args.labels, "IDX label file");
  cmd->add_option(dash + "format", args.format,
                  "Force the format: csv, fvecs, bvecs")
      ->check(CLI::IsMember({"auto", "csv", "fvecs", "bvecs"}));
  cmd->add_flag(dash + "csv-labels", args.csv_labels,
                "Treat the last CSV column as a class label");
  cmd->add_option(dash + "limit", args.limit, "Keep only the first N rows");
}

FeatureMatrix truncate_rows(FeatureMatrix x, std::size_t limit) {
  if (limit == 0 || limit >= x.size()) return x;
  FeatureMatrix out;
  out.data = imh::Matrix(limit, x.dim());
  std::copy_n(x.data.data().begin(), limit * x.dim(), out.data.data().begin());
  if (x.has_labels())
    out.labels.assign(x.labels.begin(), x.labels.begin() + limit);
  return out;
}

FeatureMatrix load_data(const DataArgs& args, const char* who) {
  if (!args.images.empty() || !args.labels.empty()) {
    if (args.images.empty() || args.labels.empty())
      throw ArgumentError(std::string(who) +
                          ": IDX input needs both --images and --labels");
    return truncate_rows(imh::load_idx(args.images, args.labels), args.limit);
  }
  if (args.data.empty())
    throw ArgumentError(std::string(who) + ": no dataset given");

  std::string format = args.format;
  if (format == "auto") {
    const std::string ext = std::filesystem::path(args.data).extension();
    if (ext == ".csv") format = "csv";
    else if (ext == ".fvecs") format = "fvecs";
    else if (ext == ".bvecs") format = "bvecs";
    else
      throw ArgumentError(std::string(who) + ": cannot infer format of '" +
                          args.data + "', pass --format");
  }
  const std::optional<std::size_t> limit =
      args.limit ? std::optional<std::size_t>(args.limit) : std::nullopt;
  if (format == "fvecs") return imh::load_fvecs(args.data, limit);
  if (format == "bvecs") return imh::load_bvecs(args.data, limit);
  return truncate_rows(imh::load_csv(args.data, args.csv_labels), args.limit);
}

// Model options shared by train and sweep.
struct ModelArgs {
  std::string backend = "tsne";
  std::string base_method = "kmeans";
  std::size_t m = 400;
  int k = 5;
  std::size_t bits = 64;
  double lambda = 2.0;
  double sigma = 0.0;  // 0 = estimate
  bool itq = false;
  int itq_iters = 50;
  bool supervised = false;
  std::size_t m_per_class = 0;
  std::size_t embed_width = 0;
  int kmeans_iters = 100;
  double perplexity = 30.0;
  int tsne_iters = 1000;
  std::uint64_t kmeans_seed = 1;
  std::uint64_t tsne_seed = 2;
  std::uint64_t itq_seed = 3;
};

void add_model_args(CLI::App* cmd, ModelArgs& args) {
  cmd->add_option("--backend", args.backend,
                  "Embedding backend: le_base, le_relaxed, tsne, pca")
      ->check(CLI::IsMember({"le_base", "le_relaxed", "tsne", "pca"}));
  cmd->add_option("--base-method", args.base_method,
                  "Base selection: random, kmedians, kmeans, per_class_kmeans")
      ->check(CLI::IsMember(
          {"random", "kmedians", "kmeans", "per_class_kmeans"}));
  cmd->add_option("-m,--base-size", args.m, "Number of base centers");
  cmd->add_option("-k,--neighbors", args.k, "Extension neighborhood size");
  cmd->add_option("-b,--bits", args.bits, "Code width in bits");
  cmd->add_option("--lambda", args.lambda, "Relaxed LE coupling strength");
  cmd->add_option("--sigma", args.sigma, "Kernel width (0 = estimate)");
  cmd->add_flag("--itq", args.itq, "Learn an ITQ rotation");
  cmd->add_option("--itq-iters", args.itq_iters, "ITQ alternation rounds");
  cmd->add_flag("--supervised", args.supervised,
                "Supervised variant with an LDA projection");
  cmd->add_option("--m-per-class", args.m_per_class,
                  "Centers per class for per-class selection");
  cmd->add_option("--embed-width", args.embed_width,
                  "Supervised pre-projection width (0 = max(2*bits, 16))");
  cmd->add_option("--kmeans-iters", args.kmeans_iters, "k-means iteration cap");
  cmd->add_option("--perplexity", args.perplexity, "t-SNE perplexity");
  cmd->add_option("--tsne-iters", args.tsne_iters, "t-SNE iterations");
  cmd->add_option("--kmeans-seed", args.kmeans_seed, "Base selection seed");
  cmd->add_option("--tsne-seed", args.tsne_seed, "t-SNE init seed");
  cmd->add_option("--itq-seed", args.itq_seed, "ITQ rotation seed");
}

imh::TrainConfig to_train_config(const ModelArgs& args) {
  imh::TrainConfig cfg;
  cfg.base_method = imh::base_method_from_string(args.base_method);
  cfg.backend = imh::backend_from_string(args.backend);
  cfg.m = args.m;
  cfg.k = args.k;
  cfg.bits = args.bits;
  cfg.lambda = args.lambda;
  if (args.sigma != 0.0) cfg.sigma = args.sigma;
  cfg.use_itq = args.itq;
  cfg.itq_iters = args.itq_iters;
  cfg.itq_seed = args.itq_seed;
  cfg.m_per_class = args.m_per_class;
  cfg.kmeans.max_iters = args.kmeans_iters;
  cfg.kmeans.seed = args.kmeans_seed;
  cfg.tsne.perplexity = args.perplexity;
  cfg.tsne.iters = args.tsne_iters;
  cfg.tsne.seed = args.tsne_seed;
  return cfg;
}

imh::SupervisedConfig to_supervised_config(const ModelArgs& args) {
  imh::SupervisedConfig cfg;
  cfg.m_per_class = args.m_per_class ? args.m_per_class : 100;
  cfg.code_bits = args.bits;
  cfg.embed_width = args.embed_width;
  cfg.backend = imh::backend_from_string(args.backend);
  cfg.k = args.k;
  cfg.lambda = args.lambda;
  if (args.sigma != 0.0) cfg.sigma = args.sigma;
  cfg.use_itq = args.itq;
  cfg.itq_iters = args.itq_iters;
  cfg.itq_seed = args.itq_seed;
  cfg.kmeans.max_iters = args.kmeans_iters;
  cfg.kmeans.seed = args.kmeans_seed;
  cfg.tsne.perplexity = args.perplexity;
  cfg.tsne.iters = args.tsne_iters;
  cfg.tsne.seed = args.tsne_seed;
  return cfg;
}

std::vector<std::size_t> default_cutoffs(std::size_t n) {
  std::vector<std::size_t> cuts;
  for (std::size_t c : {1ul, 5ul, 10ul, 50ul, 100ul, 500ul, 1000ul, 5000ul,
                        10000ul, 50000ul})
    if (c <= n) cuts.push_back(c);
  if (cuts.empty() || cuts.back() != n) cuts.push_back(n);
  return cuts;
}

struct TrainCli {
  DataArgs data;
  ModelArgs model;
  std::size_t test_count = 0;
  std::uint64_t split_seed = 4;
  std::string algo = "imh";
  std::uint64_t lsh_seed = 5;
  std::string model_out = "model.imh";
  std::string codes_out;
  int threads = 0;
  bool ci = false;
};

void run_train(const TrainCli& cli) {
  imh::parallel::set_threads(cli.threads);
  FeatureMatrix all = load_data(cli.data, "train");
  FeatureMatrix train_part = std::move(all);
  if (cli.test_count > 0) {
    auto [tr, te] = imh::split_train_test(train_part, cli.test_count,
                                          cli.split_seed);
    train_part = std::move(tr);
  }

  std::cout << "status=ok\ncommand=train\nalgo=" << cli.algo << "\n";
  std::cout << "n=" << train_part.size() << "\nd=" << train_part.dim() << "\n";

  const auto t0 = std::chrono::steady_clock::now();
  if (cli.algo == "imh") {
    imh::TrainReport report;
    imh::HashModel model;
    if (cli.model.supervised)
      model = imh::imhs_train(train_part, to_supervised_config(cli.model));
    else
      model = imh::train(train_part, to_train_config(cli.model), &report);
    const double train_seconds = elapsed(t0);
    imh::save_model(model, std::filesystem::path(cli.model_out));

    double encode_seconds = 0.0;
    if (!cli.codes_out.empty()) {
      const auto e0 = std::chrono::steady_clock::now();
      const imh::BinaryCodes codes = imh::encode(train_part, model);
      encode_seconds = elapsed(e0);
      imh::save_codes(codes, std::filesystem::path(cli.codes_out));
      std::cout << "codes=" << cli.codes_out << "\n";
    }

    std::cout << "backend=" << imh::to_string(model.backend)
              << "\nbase_method=" << imh::to_string(model.base.method)
              << "\nm=" << model.base.size() << "\nk=" << model.k
              << "\nbits=" << model.code_bits()
              << "\nsigma=" << fmt_value(model.sigma)
              << "\nsigma_floored=" << (report.sigma_floored ? 1 : 0)
              << "\nitq=" << (model.has_rotation() ? 1 : 0)
              << "\nsupervised=" << (model.has_projection() ? 1 : 0)
              << "\nmodel=" << cli.model_out << "\n";
    if (cli.model.backend == "tsne" && !cli.model.supervised)
      std::cout << "tsne_initial_kl=" << fmt_value(report.tsne.initial_kl)
                << "\ntsne_final_kl=" << fmt_value(report.tsne.final_kl)
                << "\n";
    std::cout << "base_seconds=" << fmt_seconds(report.base_seconds, cli.ci)
              << "\nembed_seconds=" << fmt_seconds(report.embed_seconds, cli.ci)
              << "\nencode_seconds=" << fmt_seconds(encode_seconds, cli.ci)
              << "\ntrain_seconds=" << fmt_seconds(train_seconds, cli.ci)
              << "\n";
    return;
  }

  imh::LinearHashModel model;
  if (cli.algo == "pcah")
    model = imh::pcah_train(train_part, cli.model.bits);
  else
    model = imh::lsh_train(train_part.dim(), cli.model.bits, cli.lsh_seed);
  const double train_seconds = elapsed(t0);
  imh::save_linear(model, std::filesystem::path(cli.model_out));

  double encode_seconds = 0.0;
  if (!cli.codes_out.empty()) {
    const auto e0 = std::chrono::steady_clock::now();
    const imh::BinaryCodes codes = imh::linear_encode(train_part, model);
    encode_seconds = elapsed(e0);
    imh::save_codes(codes, std::filesystem::path(cli.codes_out));
    std::cout << "codes=" << cli.codes_out << "\n";
  }
  std::cout << "bits=" << model.projection.cols() << "\nmodel=" << cli.model_out
            << "\nencode_seconds=" << fmt_seconds(encode_seconds, cli.ci)
            << "\ntrain_seconds=" << fmt_seconds(train_seconds, cli.ci) << "\n";
}

bool is_linear_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw imh::IoError("cannot open for reading: " + path.string());
  char magic[4] = {};
  in.read(magic, 4);
  return in.gcount() == 4 && magic[0] == 'I' && magic[1] == 'M' &&
         magic[2] == 'H' && magic[3] == 'L';
}

struct EvalCli {
  DataArgs data;
  DataArgs query;
  std::string model_path = "model.imh";
  std::string codes_path;
  std::size_t test_count = 0;
  std::uint64_t split_seed = 4;
  std::string gt = "labels";
  double fraction = 0.02;
  int radius = 2;
  std::string cutoffs;
  std::string out;
  int threads = 0;
  bool ci = false;
};

imh::GroundTruth make_ground_truth(const std::string& mode, double fraction,
                                   const FeatureMatrix& db,
                                   const FeatureMatrix& queries) {
  if (mode == "labels") {
    if (!db.has_labels() || !queries.has_labels())
      throw ArgumentError("label ground truth needs labels on both sides");
    return imh::label_ground_truth(db.labels, queries.labels);
  }
  return imh::euclidean_ground_truth(db.data, queries.data, fraction);
}

void run_eval(const EvalCli& cli) {
  imh::parallel::set_threads(cli.threads);

  FeatureMatrix db, queries;
  if (cli.test_count > 0) {
    FeatureMatrix all = load_data(cli.data, "eval");
    std::tie(db, queries) =
        imh::split_train_test(all, cli.test_count, cli.split_seed);
  } else {
    db = load_data(cli.data, "eval");
    queries = load_data(cli.query, "eval (queries)");
  }

  const auto t0 = std::chrono::steady_clock::now();
  imh::BinaryCodes db_codes, query_codes;
  if (is_linear_model(cli.model_path)) {
    const imh::LinearHashModel model = imh::load_linear(cli.model_path);
    db_codes = cli.codes_path.empty()
                   ? imh::linear_encode(db, model)
                   : imh::load_codes(std::filesystem::path(cli.codes_path));
    query_codes = imh::linear_encode(queries, model);
  } else {
    const imh::HashModel model =
        imh::load_model(std::filesystem::path(cli.model_path));
    db_codes = cli.codes_path.empty()
                   ? imh::encode(db, model)
                   : imh::load_codes(std::filesystem::path(cli.codes_path));
    query_codes = imh::encode(queries, model);
  }
  const double encode_seconds = elapsed(t0);
  if (db_codes.size() != db.size())
    throw ArgumentError("eval: code count differs from database size");

  const imh::GroundTruth gt =
      make_ground_truth(cli.gt, cli.fraction, db, queries);
  const std::vector<std::size_t> cutoffs =
      cli.cutoffs.empty() ? default_cutoffs(db.size())
                          : parse_size_list(cli.cutoffs, "--cutoffs");

  const auto e0 = std::chrono::steady_clock::now();
  const imh::MetricsReport report =
      imh::evaluate(db_codes, query_codes, gt, cli.radius, cutoffs);
  const double eval_seconds = elapsed(e0);

  std::cout << "status=ok\ncommand=eval\n"
            << "db=" << db.size() << "\nqueries=" << queries.size()
            << "\nbits=" << db_codes.bits() << "\nground_truth=" << cli.gt
            << "\nqueries_used=" << report.queries_used
            << "\nqueries_skipped=" << report.queries_skipped
            << "\nradius=" << report.radius << "\nmap=" << fmt_value(report.map)
            << "\nprecision_r" << report.radius << "="
            << fmt_value(report.lookup.precision) << "\nrecall_r"
            << report.radius << "=" << fmt_value(report.lookup.recall)
            << "\nf1_r" << report.radius << "=" << fmt_value(report.lookup.f1)
            << "\nencode_seconds=" << fmt_seconds(encode_seconds, cli.ci)
            << "\neval_seconds=" << fmt_seconds(eval_seconds, cli.ci) << "\n";

  if (!cli.out.empty()) {
    std::ofstream tsv(cli.out);
    if (!tsv) throw imh::IoError("cannot open for writing: " + cli.out);
    tsv << "# cutoff\tprecision\trecall\n";
    for (const imh::PrPoint& p : report.pr_curve)
      tsv << p.cutoff << "\t" << fmt_value(p.precision) << "\t"
          << fmt_value(p.recall) << "\n";
    if (!tsv) throw imh::IoError("write failed: " + cli.out);
  }
}

struct SweepCli {
  DataArgs data;
  std::size_t test_count = 1000;
  std::uint64_t split_seed = 4;
  ModelArgs model;
  std::string backends = "tsne";
  std::string m_grid = "400";
  std::string k_grid = "5";
  std::string bits_grid = "64";
  std::string gt = "labels";
  double fraction = 0.02;
  int radius = 2;
  std::string out;
  std::uint64_t lsh_seed = 5;
  int threads = 0;
  bool ci = false;
};

void run_sweep(const SweepCli& cli) {
  imh::parallel::set_threads(cli.threads);
  FeatureMatrix all = load_data(cli.data, "sweep");
  auto [db, queries] =
      imh::split_train_test(all, cli.test_count, cli.split_seed);
  const imh::GroundTruth gt =
      make_ground_truth(cli.gt, cli.fraction, db, queries);
  const std::vector<std::size_t> cutoffs = {10};

  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!cli.out.empty()) {
    file.open(cli.out);
    if (!file) throw imh::IoError("cannot open for writing: " + cli.out);
    out = &file;
  }
  *out << "# backend\tbase_method\tm\tk\tbits\tmap\tf1_r\ttrain_seconds"
       << "\tencode_seconds\n";

  for (const std::string& backend : parse_string_list(cli.backends))
    for (std::size_t m : parse_size_list(cli.m_grid, "--m-grid"))
      for (std::size_t k : parse_size_list(cli.k_grid, "--k-grid"))
        for (std::size_t bits : parse_size_list(cli.bits_grid, "--bits-grid")) {
          imh::BinaryCodes db_codes, query_codes;
          double train_seconds = 0.0, encode_seconds = 0.0;
          std::string method = cli.model.base_method;

          try {
          if (backend == "pcah" || backend == "lsh") {
            const auto t0 = std::chrono::steady_clock::now();
            const imh::LinearHashModel lin =
                backend == "pcah" ? imh::pcah_train(db, bits)
                                  : imh::lsh_train(db.dim(), bits, cli.lsh_seed);
            train_seconds = elapsed(t0);
            const auto e0 = std::chrono::steady_clock::now();
            db_codes = imh::linear_encode(db, lin);
            query_codes = imh::linear_encode(queries, lin);
            encode_seconds = elapsed(e0);
            method = "-";
          } else {
            ModelArgs margs = cli.model;
            margs.backend = backend;
            margs.m = m;
            margs.k = static_cast<int>(k);
            margs.bits = bits;
            const auto t0 = std::chrono::steady_clock::now();
            const imh::HashModel model = imh::train(db, to_train_config(margs));
            train_seconds = elapsed(t0);
            const auto e0 = std::chrono::steady_clock::now();
            db_codes = imh::encode(db, model);
            query_codes = imh::encode(queries, model);
            encode_seconds = elapsed(e0);
          }

          const imh::MetricsReport report =
              imh::evaluate(db_codes, query_codes, gt, cli.radius, cutoffs);
          *out << backend << "\t" << method << "\t" << m << "\t" << k << "\t"
               << bits << "\t" << fmt_value(report.map) << "\t"
               << fmt_value(report.lookup.f1) << "\t"
               << fmt_seconds(train_seconds, cli.ci) << "\t"
               << fmt_seconds(encode_seconds, cli.ci) << "\n";
          } catch (const std::exception& fail) {
            // A combination that cannot run still gets its grid row so the
            // sweep covers every point; the reason goes to stderr.
            *out << backend << "\t" << method << "\t" << m << "\t" << k << "\t"
                 << bits << "\tnan\tnan\t" << fmt_seconds(train_seconds, cli.ci)
                 << "\t" << fmt_seconds(encode_seconds, cli.ci) << "\n";
            std::cerr << "sweep: " << backend << " m=" << m << " k=" << k
                      << " bits=" << bits << " failed: " << fail.what() << "\n";
          }
        }
  if (!out->good()) throw imh::IoError("sweep: write failed");
}

struct ValidateCli {
  std::size_t trials = 20000;
  std::uint64_t seed = 7;
  int threads = 0;
};

int run_validate(const ValidateCli& cli) {
  imh::parallel::set_threads(cli.threads);
  const std::vector<imh::Lemma2Instance> instances = {
      {.n = 200, .r = 4, .clusters = 16, .seed = 11},
      {.n = 400, .r = 8, .clusters = 32, .seed = 12},
      {.n = 800, .r = 2, .clusters = 10, .seed = 13},
      {.n = 300, .r = 16, .clusters = 24, .seed = 14},
  };
  const imh::Lemma2Report report =
      imh::validate_lemma2(instances, cli.trials, cli.seed);

  std::cout << "# n\tr\tclusters\tepsilon\tmax_bias_se\tmean_sq_err\tbound"
            << "\tbias_ok\tvariance_ok\n";
  for (const imh::Lemma2Row& row : report.rows)
    std::cout << row.instance.n << "\t" << row.instance.r << "\t"
              << row.instance.clusters << "\t" << fmt_value(row.epsilon) << "\t"
              << fmt_value(row.max_bias_over_se) << "\t"
              << fmt_value(row.mean_sq_err) << "\t"
              << fmt_value(row.variance_bound) << "\t" << row.bias_ok << "\t"
              << row.variance_ok << "\n";
  std::cout << "trials=" << report.trials << "\n"
            << "status=" << (report.all_ok ? "ok" : "violated") << "\n";
  return report.all_ok ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Inductive manifold hashing"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read options from a key=value file");

  TrainCli train_cli;
  CLI::App* train_cmd = app.add_subcommand("train", "Train a hash model");
  add_data_args(train_cmd, train_cli.data, "");
  add_model_args(train_cmd, train_cli.model);
  train_cmd->add_option("--test-count", train_cli.test_count,
                        "Hold out this many rows before training");
  train_cmd->add_option("--split-seed", train_cli.split_seed, "Holdout seed");
  train_cmd->add_option("--algo", train_cli.algo,
                        "imh, pcah (PCA baseline) or lsh (random hyperplanes)")
      ->check(CLI::IsMember({"imh", "pcah", "lsh"}));
  train_cmd->add_option("--lsh-seed", train_cli.lsh_seed, "LSH draw seed");
  train_cmd->add_option("-o,--model-out", train_cli.model_out, "Model file");
  train_cmd->add_option("--codes-out", train_cli.codes_out,
                        "Also encode the training rows into this file");
  train_cmd->add_option("--threads", train_cli.threads, "Worker thread count");
  train_cmd->add_flag("--ci", train_cli.ci, "Deterministic output mode");

  EvalCli eval_cli;
  CLI::App* eval_cmd = app.add_subcommand("eval", "Evaluate retrieval quality");
  add_data_args(eval_cmd, eval_cli.data, "");
  add_data_args(eval_cmd, eval_cli.query, "query");
  eval_cmd->add_option("--model", eval_cli.model_path, "Model file");
  eval_cmd->add_option("--codes", eval_cli.codes_path,
                       "Precomputed database codes");
  eval_cmd->add_option("--test-count", eval_cli.test_count,
                       "Split off this many rows as queries");
  eval_cmd->add_option("--split-seed", eval_cli.split_seed, "Split seed");
  eval_cmd->add_option("--gt", eval_cli.gt, "Ground truth: labels or euclidean")
      ->check(CLI::IsMember({"labels", "euclidean"}));
  eval_cmd->add_option("--fraction", eval_cli.fraction,
                       "Relevant fraction for euclidean ground truth");
  eval_cmd->add_option("--radius", eval_cli.radius, "Lookup Hamming radius");
  eval_cmd->add_option("--cutoffs", eval_cli.cutoffs,
                       "Comma-separated PR curve cutoffs");
  eval_cmd->add_option("--out", eval_cli.out, "Write the PR curve TSV here");
  eval_cmd->add_option("--threads", eval_cli.threads, "Worker thread count");
  eval_cmd->add_flag("--ci", eval_cli.ci, "Deterministic output mode");

  SweepCli sweep_cli;
  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "Grid over backends, m, k and bits");
  add_data_args(sweep_cmd, sweep_cli.data, "");
  add_model_args(sweep_cmd, sweep_cli.model);
  sweep_cmd->add_option("--test-count", sweep_cli.test_count,
                        "Rows held out as queries");
  sweep_cmd->add_option("--split-seed", sweep_cli.split_seed, "Split seed");
  sweep_cmd->add_option("--backends", sweep_cli.backends,
                        "Comma list; may include pcah and lsh");
  sweep_cmd->add_option("--m-grid", sweep_cli.m_grid, "Comma list of m");
  sweep_cmd->add_option("--k-grid", sweep_cli.k_grid, "Comma list of k");
  sweep_cmd->add_option("--bits-grid", sweep_cli.bits_grid,
                        "Comma list of code widths");
  sweep_cmd->add_option("--gt", sweep_cli.gt, "Ground truth: labels or euclidean")
      ->check(CLI::IsMember({"labels", "euclidean"}));
  sweep_cmd->add_option("--fraction", sweep_cli.fraction,
                        "Relevant fraction for euclidean ground truth");
  sweep_cmd->add_option("--radius", sweep_cli.radius, "Lookup Hamming radius");
  sweep_cmd->add_option("--out", sweep_cli.out, "Write the TSV here");
  sweep_cmd->add_option("--lsh-seed", sweep_cli.lsh_seed, "LSH draw seed");
  sweep_cmd->add_option("--threads", sweep_cli.threads, "Worker thread count");
  sweep_cmd->add_flag("--ci", sweep_cli.ci, "Deterministic output mode");

  ValidateCli validate_cli;
  CLI::App* validate_cmd = app.add_subcommand(
      "validate-prototype", "Monte Carlo check of the sampling estimator");
  validate_cmd->add_option("--trials", validate_cli.trials, "Trials per instance");
  validate_cmd->add_option("--seed", validate_cli.seed, "Sampling seed");
  validate_cmd->add_option("--threads", validate_cli.threads,
                           "Worker thread count");

  try {
    app.parse(argc, argv);
    if (app.got_subcommand(train_cmd)) run_train(train_cli);
    else if (app.got_subcommand(eval_cmd)) run_eval(eval_cli);
    else if (app.got_subcommand(sweep_cmd)) run_sweep(sweep_cli);
    else if (app.got_subcommand(validate_cmd)) return run_validate(validate_cli);
    return 0;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const imh::ArgumentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const imh::FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const imh::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const imh::NumericError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
