#include "combo/cli.hpp"

#include "combo/base_learners.hpp"
#include "combo/classifier_combination.hpp"
#include "combo/cluster_combination.hpp"
#include "combo/data_eval.hpp"
#include "combo/detector_combination.hpp"
#include "combo/score_combination.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>

namespace combo::cli {

namespace fs = std::filesystem;

namespace {

/// Raised for failures while writing outputs (exit code 3).
struct IoFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Collects output files; anything written is removed unless commit() runs.
class OutputSet {
 public:
  OutputSet() = default;
  OutputSet(const OutputSet&) = delete;
  OutputSet& operator=(const OutputSet&) = delete;
  ~OutputSet() {
    if (committed_) return;
    std::error_code ec;
    for (const auto& p : written_) fs::remove(p, ec);
  }

  void write(const fs::path& path, const std::string& content) {
    const fs::path tmp = path.string() + ".tmp";
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw IoFailure("cannot open '" + path.string() + "' for writing");
      out.write(content.data(), static_cast<std::streamsize>(content.size()));
      if (!out) {
        std::error_code ec;
        fs::remove(tmp, ec);
        throw IoFailure("write to '" + path.string() + "' failed");
      }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
      fs::remove(tmp, ec);
      throw IoFailure("cannot move output into '" + path.string() + "'");
    }
    written_.push_back(path);
  }

  void commit() { committed_ = true; }

 private:
  std::vector<fs::path> written_;
  bool committed_ = false;
};

struct CommonOptions {
  std::uint64_t seed = 0;
  bool has_header = false;
  std::string label_column;
};

void add_common(CLI::App* app, CommonOptions& c, bool with_label) {
  app->add_option("--seed", c.seed, "Random seed (unsigned 64-bit)")->capture_default_str();
  app->add_flag("--has-header", c.has_header, "Input CSV files start with a header row");
  if (with_label) {
    app->add_option("--label-column", c.label_column, "Label column: header name or zero-based index");
  }
}

/// Zero-based position of --label-column in `path`, or `fallback` when the
/// flag is absent.
std::optional<Index> label_position(const std::string& path, const CommonOptions& c, std::optional<Index> fallback) {
  const auto first_row = read_csv_first_row(path);
  const Index width = static_cast<Index>(first_row.size());
  if (c.label_column.empty()) return fallback;
  if (std::all_of(c.label_column.begin(), c.label_column.end(), ::isdigit)) {
    const Index idx = static_cast<Index>(std::stoll(c.label_column));
    if (idx >= width) throw Error(Errc::MissingColumn, "label column index " + c.label_column + " out of range");
    return idx;
  }
  if (!c.has_header) throw Error(Errc::MissingColumn, "label column '" + c.label_column + "' needs --has-header");
  const auto it = std::find(first_row.begin(), first_row.end(), c.label_column);
  if (it == first_row.end()) throw Error(Errc::MissingColumn, "no column named '" + c.label_column + "'");
  return static_cast<Index>(it - first_row.begin());
}

Index column_count(const std::string& path) { return static_cast<Index>(read_csv_first_row(path).size()); }

CsvOptions csv_options(const CommonOptions& c, std::optional<Index> label_index) {
  CsvOptions o;
  o.has_header = c.has_header;
  if (label_index) o.label_column = *label_index;
  return o;
}

/// Loads a test file; the label column is dropped when the file has the
/// same width as the training file.
LabeledDataset load_test(const std::string& path, const CommonOptions& c, Index train_width,
                         std::optional<Index> label_index) {
  const bool has_label = label_index && column_count(path) == train_width;
  return load_csv(path, csv_options(c, has_label ? label_index : std::nullopt));
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& token : split_spec_list(text)) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size()) throw Error(Errc::InvalidParameter, "bad number '" + token + "' in list");
    out.push_back(v);
  }
  return out;
}

std::string column_csv(const std::string& header, const Vector& values) {
  std::string out = header + "\n";
  for (Index i = 0; i < values.size(); ++i) out += format_number(values(i)) + "\n";
  return out;
}

Vector to_vector(const std::vector<double>& v) { return Eigen::Map<const Vector>(v.data(), static_cast<Index>(v.size())); }

// ---------------------------------------------------------------------------
// combine
// ---------------------------------------------------------------------------

struct CombineOptions {
  CommonOptions common;
  std::string input;
  std::string output;
  std::string method;
  std::string normalize = "none";
  Index buckets = 0;
  bool shuffle_buckets = false;
  std::string weights;
};

BucketPlan bucket_plan(Index m, Index buckets, bool shuffle, std::uint64_t seed) {
  if (buckets < 1) throw Error(Errc::InvalidParameter, "--buckets is required for aom/moa and must be >= 1");
  return shuffle ? BucketPlan::random(m, buckets, seed) : BucketPlan::contiguous(m, buckets);
}

void cmd_combine(const CombineOptions& o) {
  const LabeledDataset ds = load_csv(o.input, csv_options(o.common, std::nullopt));
  Matrix scores = ds.X;
  validate_matrix(scores);
  if (o.normalize == "zscore") scores = standardize(fit_standardizer(scores), scores);
  Vector combined;
  if (o.method == "average") {
    std::optional<Vector> w;
    if (!o.weights.empty()) w = to_vector(parse_list(o.weights));
    combined = average(scores, w);
  } else if (!o.weights.empty()) {
    throw Error(Errc::InvalidParameter, "--weights only applies to --method average");
  } else if (o.method == "max") {
    combined = maximization(scores);
  } else if (o.method == "median") {
    combined = median(scores);
  } else if (o.method == "aom") {
    combined = aom(scores, bucket_plan(scores.cols(), o.buckets, o.shuffle_buckets, o.common.seed));
  } else {
    combined = moa(scores, bucket_plan(scores.cols(), o.buckets, o.shuffle_buckets, o.common.seed));
  }
  OutputSet out;
  out.write(o.output, column_csv("score", combined));
  out.commit();
}

// ---------------------------------------------------------------------------
// classify
// ---------------------------------------------------------------------------

struct ClassifyOptions {
  CommonOptions common;
  std::string train;
  std::string test;
  std::string output;
  std::string method;
  std::string base;
  std::string meta = "logreg";
  std::string weights;
  Index k_local = 10;
  Index n_select = 0;
  Index n_folds = 4;
  bool keep_original = false;
  bool proba = false;
};

ClassifierPool build_pool(const std::string& specs) {
  ClassifierPool pool;
  for (const auto& spec : split_spec_list(specs)) pool.add(make_classifier(spec));
  return pool;
}

std::unique_ptr<Classifier> build_combiner(const std::string& method, ClassifierPool pool, Index k_local,
                                           Index n_select, Index n_folds, bool keep_original,
                                           const std::string& meta, const std::string& weights,
                                           std::uint64_t seed) {
  if (method == "average") return std::make_unique<AverageClassifier>(std::move(pool));
  if (method == "majority") {
    std::optional<Vector> w;
    if (!weights.empty()) w = to_vector(parse_list(weights));
    return std::make_unique<MajorityVoteClassifier>(std::move(pool), w);
  }
  if (method == "dcs") return std::make_unique<DcsClassifier>(std::move(pool), k_local);
  if (method == "des") {
    const Index m = pool.size();
    return std::make_unique<DesClassifier>(std::move(pool), k_local, n_select > 0 ? n_select : (m + 1) / 2);
  }
  return std::make_unique<StackingClassifier>(std::move(pool), make_classifier(meta), n_folds, keep_original, seed);
}

void cmd_classify(const ClassifyOptions& o) {
  const Index train_width = column_count(o.train);
  const auto label_index = label_position(o.train, o.common, train_width - 1);
  const LabeledDataset train = load_csv(o.train, csv_options(o.common, label_index));
  const LabeledDataset test = load_test(o.test, o.common, train_width, label_index);
  if (test.X.cols() != train.X.cols()) {
    throw Error(Errc::ShapeMismatch, "test file has " + std::to_string(test.X.cols()) + " features, train has " +
                                         std::to_string(train.X.cols()));
  }
  auto model = build_combiner(o.method, build_pool(o.base), o.k_local, o.n_select, o.n_folds, o.keep_original,
                              o.meta, o.weights, o.common.seed);
  model->fit(train.X, *train.y);
  const Matrix proba = model->predict_proba(test.X);
  const Labels pred = argmax_rows(proba);

  std::string csv = "label";
  if (o.proba) {
    for (const auto& name : train.label_names) csv += ",proba_" + name;
  }
  csv += "\n";
  for (Index i = 0; i < pred.size(); ++i) {
    csv += train.label_names[static_cast<std::size_t>(pred(i))];
    if (o.proba) {
      for (Index c = 0; c < proba.cols(); ++c) csv += "," + format_number(proba(i, c));
    }
    csv += "\n";
  }
  OutputSet out;
  out.write(o.output, csv);
  out.commit();
}

// ---------------------------------------------------------------------------
// cluster
// ---------------------------------------------------------------------------

struct ClusterOptions {
  CommonOptions common;
  std::string input;
  std::string output;
  std::string method;
  Index m = 10;
  Index k_final = 0;
  Index k_min = 0;
  Index k_max = 0;
  std::string linkage = "single";
  Index reference = 0;
};

void cmd_cluster(const ClusterOptions& o) {
  const LabeledDataset ds = load_csv(o.input, csv_options(o.common, label_position(o.input, o.common, std::nullopt)));
  const Index n = ds.X.rows();
  if (o.k_final < 1) throw Error(Errc::InvalidParameter, "--k-final must be >= 1");
  if (o.k_final > n) {
    throw Error(Errc::KTooLarge, "--k-final " + std::to_string(o.k_final) + " exceeds " + std::to_string(n) + " rows");
  }
  if (o.m < 1) throw Error(Errc::InvalidParameter, "--m must be >= 1");
  const Index k_min = o.k_min > 0 ? o.k_min : o.k_final;
  const Index k_max = o.k_max > 0 ? o.k_max : (o.method == "eac" ? std::min(n, o.k_final + 4) : k_min);
  if (k_min > k_max || k_max > n) throw Error(Errc::KTooLarge, "base k range [" + std::to_string(k_min) + ", " +
                                                                   std::to_string(k_max) + "] invalid for " +
                                                                   std::to_string(n) + " rows");
  std::mt19937_64 rng(o.common.seed);
  std::uniform_int_distribution<Index> draw(k_min, k_max);
  std::vector<Partition> partitions;
  for (Index r = 0; r < o.m; ++r) {
    const Index k = draw(rng);
    KMeans km(k, o.common.seed + static_cast<std::uint64_t>(r));
    partitions.emplace_back(km.fit(ds.X));
  }
  Partition result = o.method == "eac"
                         ? eac_cluster(eac_coassociation(partitions), o.k_final,
                                       o.linkage == "average" ? Linkage::Average : Linkage::Single)
                         : ensemble_partitions(partitions, o.reference);
  std::string csv = "cluster\n";
  for (Index i = 0; i < result.size(); ++i) csv += std::to_string(result.labels()(i)) + "\n";
  OutputSet out;
  out.write(o.output, csv);
  out.commit();
}

// ---------------------------------------------------------------------------
// detect
// ---------------------------------------------------------------------------

struct DetectOptions {
  CommonOptions common;
  std::string train;
  std::string test;
  std::string output;
  std::string method;
  std::string base;
  std::string meta = "logreg:0.1:1000";
  std::string target = "max";
  Index n_top = 1;
  Index k_region = 0;
  Index buckets = 0;
  bool shuffle_buckets = false;
};

DetectorPool build_detectors(const std::string& specs) {
  DetectorPool pool;
  for (const auto& spec : split_spec_list(specs)) pool.add(make_detector(spec));
  return pool;
}

void cmd_detect(const DetectOptions& o) {
  const bool labelled = !o.common.label_column.empty();
  if (o.method == "xgbod" && !labelled) {
    throw Error(Errc::InvalidParameter, "labels required: --method xgbod needs --label-column for the train file");
  }
  const Index train_width = column_count(o.train);
  const auto label_index = label_position(o.train, o.common, std::nullopt);
  const LabeledDataset train = load_csv(o.train, csv_options(o.common, label_index));
  const LabeledDataset test = load_test(o.test, o.common, train_width, label_index);
  if (test.X.cols() != train.X.cols()) {
    throw Error(Errc::ShapeMismatch, "test file has " + std::to_string(test.X.cols()) + " features, train has " +
                                         std::to_string(train.X.cols()));
  }

  DetectorPool pool = build_detectors(o.base);
  Vector scores;
  if (o.method == "lscp") {
    const Index k_region = o.k_region > 0 ? o.k_region : Lscp::default_k_region(train.X.rows());
    Lscp model(std::move(pool), k_region, o.n_top,
               o.target == "avg" ? PseudoTarget::AvgOfScores : PseudoTarget::MaxOfScores);
    model.fit(train.X);
    scores = model.decision_scores(test.X);
  } else if (o.method == "xgbod") {
    Xgbod model(std::move(pool), make_classifier(o.meta));
    model.fit(train.X, *train.y);
    scores = model.decision_scores(test.X);
  } else {
    pool.fit(train.X);
    const auto std_ = fit_standardizer(pool.decision_scores(train.X));
    const Matrix test_norm = standardize(std_, pool.decision_scores(test.X));
    if (o.method == "average") {
      scores = average(test_norm);
    } else if (o.method == "max") {
      scores = maximization(test_norm);
    } else if (o.method == "aom") {
      scores = aom(test_norm, bucket_plan(test_norm.cols(), o.buckets, o.shuffle_buckets, o.common.seed));
    } else {
      scores = moa(test_norm, bucket_plan(test_norm.cols(), o.buckets, o.shuffle_buckets, o.common.seed));
    }
  }
  OutputSet out;
  out.write(o.output, column_csv("score", scores));
  out.commit();
}

// ---------------------------------------------------------------------------
// benchmark
// ---------------------------------------------------------------------------

struct BenchmarkOptions {
  CommonOptions common;
  std::string output;
  Index n = 300;
  double noise = 0.25;
  double test_fraction = 0.3;
  std::string combiners = "average,majority,dcs";
  std::string pool = "knn:5,knn:10,knn:15,knn:20,knn:25";
  std::string single = "knn:15";
  Index k_local = 10;
  Index grid = 100;
};

void cmd_benchmark(const BenchmarkOptions& o) {
  std::error_code ec;
  fs::create_directories(o.output, ec);
  if (ec || !fs::is_directory(o.output)) {
    throw Error(Errc::InvalidParameter, "output directory '" + o.output + "' cannot be created");
  }
  {
    const fs::path probe = fs::path(o.output) / ".combo_write_probe";
    std::ofstream p(probe);
    if (!p) throw Error(Errc::InvalidParameter, "output directory '" + o.output + "' is not writable");
    p.close();
    fs::remove(probe, ec);
  }
  if (o.grid < 2) throw Error(Errc::InvalidParameter, "--grid must be >= 2");

  const LabeledDataset ds = generate_two_arcs(o.n, o.noise, o.common.seed);
  const Split split = train_test_split(ds, SplitSpec{o.test_fraction, o.common.seed, true});

  // Grid over the bounding box of all points plus a 10% margin; row 0 is
  // the top edge (largest x1).
  const Eigen::RowVector2d lo = ds.X.colwise().minCoeff();
  const Eigen::RowVector2d hi = ds.X.colwise().maxCoeff();
  const Eigen::RowVector2d margin = 0.1 * (hi - lo);
  const Eigen::RowVector2d g_lo = lo - margin;
  const Eigen::RowVector2d g_hi = hi + margin;
  const Index g = o.grid;
  Matrix grid(g * g, 2);
  for (Index r = 0; r < g; ++r) {
    for (Index c = 0; c < g; ++c) {
      grid(r * g + c, 0) = g_lo(0) + (g_hi(0) - g_lo(0)) * static_cast<double>(c) / static_cast<double>(g - 1);
      grid(r * g + c, 1) = g_hi(1) - (g_hi(1) - g_lo(1)) * static_cast<double>(r) / static_cast<double>(g - 1);
    }
  }

  struct Entry {
    std::string name;
    std::unique_ptr<Classifier> model;
  };
  std::vector<Entry> entries;
  entries.push_back({o.single, make_classifier(o.single)});
  for (const auto& method : split_spec_list(o.combiners)) {
    static const std::vector<std::string> known = {"average", "majority", "dcs", "des", "stacking"};
    if (std::find(known.begin(), known.end(), method) == known.end()) {
      throw Error(Errc::InvalidParameter, "unknown combiner '" + method + "'");
    }
    entries.push_back({method, build_combiner(method, build_pool(o.pool), o.k_local, 0, 4, false, "logreg", "",
                                              o.common.seed)});
  }

  OutputSet out;
  std::string acc_csv = "method,accuracy\n";
  for (auto& e : entries) {
    e.model->fit(split.train.X, *split.train.y, 2);
    const double acc = accuracy(*split.test.y, e.model->predict(split.test.X));
    acc_csv += e.name + "," + format_number(acc) + "\n";

    const Labels cells = e.model->predict(grid);
    std::string grid_csv;
    std::string pgm = "P5\n" + std::to_string(g) + " " + std::to_string(g) + "\n255\n";
    for (Index r = 0; r < g; ++r) {
      for (Index c = 0; c < g; ++c) {
        const int label = cells(r * g + c);
        grid_csv += (c > 0 ? "," : "") + std::to_string(label);
        pgm += static_cast<char>(label == 0 ? 0 : 255);
      }
      grid_csv += "\n";
    }
    std::string stem = e.name;
    std::replace(stem.begin(), stem.end(), ':', '_');
    out.write(fs::path(o.output) / ("grid_" + stem + ".csv"), grid_csv);
    out.write(fs::path(o.output) / ("grid_" + stem + ".pgm"), pgm);
  }
  out.write(fs::path(o.output) / "accuracy.csv", acc_csv);
  out.commit();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"combo: combine classifiers, clusterings, outlier detectors and raw scores"};
  app.name("combo");
  app.require_subcommand(1);

  const std::vector<std::string> score_methods = {"average", "max", "median", "aom", "moa"};

  CombineOptions combine;
  auto* c = app.add_subcommand("combine", "Aggregate a score matrix (rows = samples, columns = models)");
  c->add_option("--input", combine.input, "Score matrix CSV")->required()->check(CLI::ExistingFile);
  c->add_option("--output", combine.output, "Combined score CSV")->required();
  c->add_option("--method", combine.method, "Aggregator")->required()->check(CLI::IsMember(score_methods));
  c->add_option("--normalize", combine.normalize, "Column normalization before combining")
      ->check(CLI::IsMember({"none", "zscore"}))
      ->capture_default_str();
  c->add_option("--buckets", combine.buckets, "Bucket count for aom/moa")->check(CLI::PositiveNumber);
  c->add_flag("--shuffle-buckets", combine.shuffle_buckets, "Shuffle models into buckets using --seed");
  c->add_option("--weights", combine.weights, "Comma-separated non-negative weights (average only)");
  add_common(c, combine.common, false);

  ClassifyOptions classify;
  auto* k = app.add_subcommand("classify", "Fit a classifier combination and label a test set");
  k->add_option("--train", classify.train, "Training CSV with a label column")->required()->check(CLI::ExistingFile);
  k->add_option("--test", classify.test, "Test CSV")->required()->check(CLI::ExistingFile);
  k->add_option("--output", classify.output, "Predicted label CSV")->required();
  k->add_option("--method", classify.method, "Combiner")
      ->required()
      ->check(CLI::IsMember({"average", "majority", "dcs", "des", "stacking"}));
  k->add_option("--base", classify.base, "Base classifiers, e.g. knn:5,nb,logreg:0.1:500,tree:3,dummy")->required();
  k->add_option("--k-local", classify.k_local, "Neighborhood size for dcs/des")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  k->add_option("--n-select", classify.n_select, "Members kept by des (default: half the pool, rounded up)")
      ->check(CLI::PositiveNumber);
  k->add_option("--n-folds", classify.n_folds, "Cross-fitting folds for stacking")->capture_default_str();
  k->add_option("--meta", classify.meta, "Meta classifier spec for stacking")->capture_default_str();
  k->add_flag("--keep-original", classify.keep_original, "Stacking: append raw features to meta-features");
  k->add_option("--weights", classify.weights, "Comma-separated vote weights (majority only)");
  k->add_flag("--proba", classify.proba, "Also write per-class probability columns");
  add_common(k, classify.common, true);

  ClusterOptions cluster;
  auto* u = app.add_subcommand("cluster", "Combine k-means partitions into a consensus clustering");
  u->add_option("--input", cluster.input, "Unlabelled CSV")->required()->check(CLI::ExistingFile);
  u->add_option("--output", cluster.output, "Cluster label CSV")->required();
  u->add_option("--method", cluster.method, "Consensus method")->required()->check(CLI::IsMember({"eac", "ensemble"}));
  u->add_option("--m", cluster.m, "Number of base k-means runs (seeds seed..seed+m-1)")->capture_default_str();
  u->add_option("--k-final", cluster.k_final, "Number of consensus clusters")->required();
  u->add_option("--k-min", cluster.k_min, "Smallest base k (default: k-final)");
  u->add_option("--k-max", cluster.k_max, "Largest base k (default: k-final+4 for eac, k-min for ensemble)");
  u->add_option("--linkage", cluster.linkage, "EAC linkage")
      ->check(CLI::IsMember({"single", "average"}))
      ->capture_default_str();
  u->add_option("--reference", cluster.reference, "Reference run for label alignment")->capture_default_str();
  add_common(u, cluster.common, true);

  DetectOptions detect;
  auto* d = app.add_subcommand("detect", "Combine outlier detectors and score a test set");
  d->add_option("--train", detect.train, "Training CSV")->required()->check(CLI::ExistingFile);
  d->add_option("--test", detect.test, "Test CSV")->required()->check(CLI::ExistingFile);
  d->add_option("--output", detect.output, "Outlier score CSV")->required();
  d->add_option("--method", detect.method, "Combiner")
      ->required()
      ->check(CLI::IsMember({"average", "max", "aom", "moa", "lscp", "xgbod"}));
  d->add_option("--base", detect.base, "Base detectors, e.g. knnd:5,knnd:10")->required();
  d->add_option("--n-top", detect.n_top, "LSCP: detectors averaged after selection")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  d->add_option("--k-region", detect.k_region, "LSCP local region size (default min(30, n/2))")
      ->check(CLI::PositiveNumber);
  d->add_option("--target", detect.target, "LSCP pseudo target")
      ->check(CLI::IsMember({"max", "avg"}))
      ->capture_default_str();
  d->add_option("--meta", detect.meta, "XGBOD meta classifier spec")->capture_default_str();
  d->add_option("--buckets", detect.buckets, "Bucket count for aom/moa")->check(CLI::PositiveNumber);
  d->add_flag("--shuffle-buckets", detect.shuffle_buckets, "Shuffle detectors into buckets using --seed");
  add_common(d, detect.common, true);

  BenchmarkOptions bench;
  auto* b = app.add_subcommand("benchmark", "Two-arcs comparison of a single kNN against kNN-pool combiners");
  b->add_option("--output", bench.output, "Output directory")->required();
  b->add_option("--n", bench.n, "Number of points")->check(CLI::Range(Index{2}, Index{1000000}))->capture_default_str();
  b->add_option("--noise", bench.noise, "Gaussian noise std")->check(CLI::NonNegativeNumber)->capture_default_str();
  b->add_option("--test-fraction", bench.test_fraction, "Held-out fraction in (0,1)")->capture_default_str();
  b->add_option("--combiners", bench.combiners, "Combiners over the pool: average,majority,dcs,des,stacking")
      ->capture_default_str();
  b->add_option("--pool", bench.pool, "Pool members")->capture_default_str();
  b->add_option("--single", bench.single, "Stand-alone reference model")->capture_default_str();
  b->add_option("--k-local", bench.k_local, "DCS/DES neighborhood size")->check(CLI::PositiveNumber)->capture_default_str();
  b->add_option("--grid", bench.grid, "Decision-grid resolution per axis")->capture_default_str();
  b->add_option("--seed", bench.common.seed, "Random seed (unsigned 64-bit)")->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    if (c->parsed()) cmd_combine(combine);
    if (k->parsed()) cmd_classify(classify);
    if (u->parsed()) cmd_cluster(cluster);
    if (d->parsed()) cmd_detect(detect);
    if (b->parsed()) cmd_benchmark(bench);
  } catch (const IoFailure& e) {
    err << "combo: " << e.what() << "\n";
    return kIo;
  } catch (const Error& e) {
    err << "combo: " << e.what() << "\n";
    return e.code() == Errc::IoError ? kIo : kUsage;
  } catch (const std::exception& e) {
    err << "combo: " << e.what() << "\n";
    return kUsage;
  }
  return kOk;
}

}  // namespace combo::cli
