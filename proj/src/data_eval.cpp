#include "combo/data_eval.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>
#include <unordered_map>

namespace combo {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  std::string out = s.substr(first, last - first + 1);
  if (out.size() >= 2 && out.front() == '"' && out.back() == '"') out = out.substr(1, out.size() - 2);
  return out;
}

std::vector<std::string> split_fields(const std::string& line, char delimiter) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(delimiter, start);
    out.push_back(trim(line.substr(start, pos == std::string::npos ? std::string::npos : pos - start)));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

bool parse_double(const std::string& token, double& value) {
  if (token.empty()) return false;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  return ec == std::errc() && ptr == last && std::isfinite(value);
}

double choose2(double x) { return x * (x - 1.0) / 2.0; }

}  // namespace

LabeledDataset parse_csv(const std::string& text, const CsvOptions& options) {
  std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (trim(line).empty()) continue;
    auto fields = split_fields(line, options.delimiter);
    if (options.has_header && header.empty()) {
      header = std::move(fields);
      continue;
    }
    rows.emplace_back(line_no, std::move(fields));
  }
  if (rows.empty()) throw Error(Errc::EmptyMatrix, "CSV contains no data rows");

  const std::size_t width = options.has_header ? header.size() : rows.front().second.size();
  for (const auto& [no, fields] : rows) {
    if (fields.size() != width) {
      throw Error(Errc::RaggedRows, "line " + std::to_string(no) + " has " + std::to_string(fields.size()) +
                                        " fields, expected " + std::to_string(width));
    }
  }

  std::optional<std::size_t> label_col;
  if (options.label_column) {
    if (const auto* name = std::get_if<std::string>(&*options.label_column)) {
      if (!options.has_header) throw Error(Errc::MissingColumn, "label column '" + *name + "' needs a header row");
      const auto it = std::find(header.begin(), header.end(), *name);
      if (it == header.end()) throw Error(Errc::MissingColumn, "no column named '" + *name + "'");
      label_col = static_cast<std::size_t>(it - header.begin());
    } else {
      const Index idx = std::get<Index>(*options.label_column);
      if (idx < 0 || static_cast<std::size_t>(idx) >= width) {
        throw Error(Errc::MissingColumn, "label column index " + std::to_string(idx) + " out of range");
      }
      label_col = static_cast<std::size_t>(idx);
    }
  }

  const Index n = static_cast<Index>(rows.size());
  const Index d = static_cast<Index>(width) - (label_col ? 1 : 0);
  if (d < 1) throw Error(Errc::EmptyMatrix, "CSV has no feature columns");

  LabeledDataset ds;
  ds.X.resize(n, d);
  for (std::size_t c = 0; c < width; ++c) {
    if (label_col && c == *label_col) continue;
    ds.feature_names.push_back(options.has_header ? header[c] : "x" + std::to_string(ds.feature_names.size()));
  }
  Labels y(label_col ? n : 0);
  std::unordered_map<std::string, int> label_ids;
  for (Index i = 0; i < n; ++i) {
    const auto& [no, fields] = rows[static_cast<std::size_t>(i)];
    Index j = 0;
    for (std::size_t c = 0; c < width; ++c) {
      if (label_col && c == *label_col) {
        const auto [it, inserted] = label_ids.emplace(fields[c], static_cast<int>(ds.label_names.size()));
        if (inserted) ds.label_names.push_back(fields[c]);
        y(i) = it->second;
        continue;
      }
      double value = 0.0;
      if (!parse_double(fields[c], value)) {
        throw Error(Errc::ParseError, "line " + std::to_string(no) + ", column " + std::to_string(c + 1) +
                                          ": cannot parse '" + fields[c] + "' as a finite number");
      }
      ds.X(i, j++) = value;
    }
  }
  if (label_col) ds.y = std::move(y);
  return ds;
}

LabeledDataset load_csv(const std::string& path, const CsvOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str(), options);
}

std::vector<std::string> read_csv_first_row(const std::string& path, char delimiter) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot open '" + path + "'");
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (first && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    first = false;
    if (!trim(line).empty()) return split_fields(line, delimiter);
  }
  throw Error(Errc::EmptyMatrix, "'" + path + "' is empty");
}

std::string format_number(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

std::string to_csv(const LabeledDataset& ds, char delimiter) {
  std::string out;
  for (Index j = 0; j < ds.X.cols(); ++j) {
    if (j > 0) out += delimiter;
    out += static_cast<std::size_t>(j) < ds.feature_names.size() ? ds.feature_names[static_cast<std::size_t>(j)]
                                                                   : "x" + std::to_string(j);
  }
  if (ds.y) out += std::string(1, delimiter) + "label";
  out += '\n';
  for (Index i = 0; i < ds.X.rows(); ++i) {
    for (Index j = 0; j < ds.X.cols(); ++j) {
      if (j > 0) out += delimiter;
      out += format_number(ds.X(i, j));
    }
    if (ds.y) {
      out += delimiter;
      const int c = (*ds.y)(i);
      out += static_cast<std::size_t>(c) < ds.label_names.size() ? ds.label_names[static_cast<std::size_t>(c)]
                                                                   : std::to_string(c);
    }
    out += '\n';
  }
  return out;
}

void save_csv(const std::string& path, const LabeledDataset& ds, char delimiter) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::IoError, "cannot write '" + path + "'");
  out << to_csv(ds, delimiter);
  if (!out) throw Error(Errc::IoError, "write to '" + path + "' failed");
}

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

LabeledDataset generate_two_arcs(Index n, double noise_std, std::uint64_t seed) {
  if (n < 2) throw Error(Errc::InvalidParameter, "two arcs needs n >= 2");
  if (!(noise_std >= 0)) throw Error(Errc::InvalidParameter, "noise_std must be >= 0");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, std::numbers::pi);
  std::normal_distribution<double> noise(0.0, 1.0);
  LabeledDataset ds;
  ds.X.resize(n, 2);
  Labels y(n);
  const Index first = (n + 1) / 2;
  for (Index i = 0; i < n; ++i) {
    const double t = angle(rng);
    if (i < first) {
      ds.X(i, 0) = std::cos(t);
      ds.X(i, 1) = std::sin(t);
      y(i) = 0;
    } else {
      ds.X(i, 0) = 1.0 - std::cos(t);
      ds.X(i, 1) = 0.5 - std::sin(t);
      y(i) = 1;
    }
    ds.X(i, 0) += noise_std * noise(rng);
    ds.X(i, 1) += noise_std * noise(rng);
  }
  ds.y = std::move(y);
  ds.label_names = {"0", "1"};
  ds.feature_names = {"x0", "x1"};
  return ds;
}

LabeledDataset generate_blobs(Index n, const std::vector<BlobCenter>& centers, std::uint64_t seed) {
  if (centers.empty()) throw Error(Errc::InvalidParameter, "need at least one blob center");
  if (n < 1) throw Error(Errc::InvalidParameter, "blobs need n >= 1");
  const Index d = centers.front().coords.size();
  for (const auto& c : centers) {
    if (c.coords.size() != d || d < 1) throw Error(Errc::ShapeMismatch, "blob centers differ in dimension");
    if (!(c.std >= 0)) throw Error(Errc::InvalidParameter, "blob std must be >= 0");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  const Index n_centers = static_cast<Index>(centers.size());
  LabeledDataset ds;
  ds.X.resize(n, d);
  Labels y(n);
  Index row = 0;
  for (Index c = 0; c < n_centers; ++c) {
    const Index size = n / n_centers + (c < n % n_centers ? 1 : 0);
    const auto& center = centers[static_cast<std::size_t>(c)];
    for (Index t = 0; t < size; ++t, ++row) {
      for (Index j = 0; j < d; ++j) ds.X(row, j) = center.coords(j) + center.std * noise(rng);
      y(row) = static_cast<int>(c);
    }
  }
  ds.y = std::move(y);
  for (Index c = 0; c < n_centers; ++c) ds.label_names.push_back(std::to_string(c));
  for (Index j = 0; j < d; ++j) ds.feature_names.push_back("x" + std::to_string(j));
  return ds;
}

LabeledDataset generate_inliers_outliers(Index n_inliers, Index n_outliers, std::uint64_t seed) {
  if (n_inliers < 1 || n_outliers < 1) throw Error(Errc::InvalidParameter, "need at least one inlier and one outlier");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> box(-6.0, 6.0);
  LabeledDataset ds;
  ds.X.resize(n_inliers + n_outliers, 2);
  Labels y(n_inliers + n_outliers);
  for (Index i = 0; i < n_inliers; ++i) {
    ds.X(i, 0) = normal(rng);
    ds.X(i, 1) = normal(rng);
    y(i) = 0;
  }
  for (Index i = n_inliers; i < n_inliers + n_outliers; ++i) {
    double a = 0.0;
    double b = 0.0;
    do {
      a = box(rng);
      b = box(rng);
    } while (a * a + b * b < 9.0);
    ds.X(i, 0) = a;
    ds.X(i, 1) = b;
    y(i) = 1;
  }
  ds.y = std::move(y);
  ds.label_names = {"0", "1"};
  ds.feature_names = {"x0", "x1"};
  return ds;
}

// ---------------------------------------------------------------------------
// Splitting
// ---------------------------------------------------------------------------

Split train_test_split(const LabeledDataset& ds, const SplitSpec& spec) {
  const Index n = ds.X.rows();
  if (!(spec.test_fraction > 0.0 && spec.test_fraction < 1.0)) {
    throw Error(Errc::DegenerateSplit, "test_fraction must lie in (0, 1)");
  }
  const Index n_test = static_cast<Index>(std::llround(static_cast<double>(n) * spec.test_fraction));
  const Index n_train = n - n_test;
  if (n_test < 1 || n_train < 1) {
    throw Error(Errc::DegenerateSplit, "split of " + std::to_string(n) + " rows leaves an empty half");
  }
  std::vector<Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Index{0});
  if (spec.shuffle) {
    std::mt19937_64 rng(spec.seed);
    std::shuffle(perm.begin(), perm.end(), rng);
  }
  Split out;
  out.train_index.assign(perm.begin(), perm.begin() + n_train);
  out.test_index.assign(perm.begin() + n_train, perm.end());
  auto take = [&](const std::vector<Index>& idx) {
    LabeledDataset part;
    part.X = ds.X(idx, Eigen::all);
    if (ds.y) part.y = Labels((*ds.y)(idx));
    part.label_names = ds.label_names;
    part.feature_names = ds.feature_names;
    return part;
  };
  out.train = take(out.train_index);
  out.test = take(out.test_index);
  return out;
}

// ---------------------------------------------------------------------------
// Metrics
// ---------------------------------------------------------------------------

double accuracy(const Labels& y_true, const Labels& y_pred) {
  if (y_true.size() != y_pred.size()) throw Error(Errc::LengthMismatch, "label vectors differ in length");
  if (y_true.size() == 0) throw Error(Errc::EmptyMatrix, "no labels to score");
  return static_cast<double>((y_true.array() == y_pred.array()).count()) / static_cast<double>(y_true.size());
}

double roc_auc(const Labels& y_true, const Vector& scores) {
  if (y_true.size() != scores.size()) throw Error(Errc::LengthMismatch, "labels and scores differ in length");
  if (((y_true.array() != 0) && (y_true.array() != 1)).any()) {
    throw Error(Errc::NonBinaryLabels, "roc_auc needs 0/1 labels");
  }
  const Index n = y_true.size();
  const Index n_pos = (y_true.array() == 1).count();
  const Index n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0) throw Error(Errc::SingleClass, "roc_auc needs both classes");
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(), [&](Index a, Index b) { return scores(a) < scores(b); });
  double pos_rank_sum = 0.0;
  for (Index start = 0; start < n;) {
    Index stop = start;
    while (stop < n && scores(order[static_cast<std::size_t>(stop)]) == scores(order[static_cast<std::size_t>(start)])) {
      ++stop;
    }
    const double mid_rank = (static_cast<double>(start + 1) + static_cast<double>(stop)) / 2.0;
    for (Index t = start; t < stop; ++t) {
      if (y_true(order[static_cast<std::size_t>(t)]) == 1) pos_rank_sum += mid_rank;
    }
    start = stop;
  }
  const double p = static_cast<double>(n_pos);
  return (pos_rank_sum - p * (p + 1.0) / 2.0) / (p * static_cast<double>(n_neg));
}

double adjusted_rand_index(const Labels& a, const Labels& b) {
  if (a.size() != b.size()) throw Error(Errc::LengthMismatch, "partitions differ in length");
  const Index n = a.size();
  if (n == 0) throw Error(Errc::EmptyMatrix, "no labels to compare");
  if (n == 1) return 1.0;
  std::map<std::pair<int, int>, Index> joint;
  std::map<int, Index> row;
  std::map<int, Index> col;
  for (Index i = 0; i < n; ++i) {
    ++joint[{a(i), b(i)}];
    ++row[a(i)];
    ++col[b(i)];
  }
  double index = 0.0;
  for (const auto& [key, count] : joint) index += choose2(static_cast<double>(count));
  double sum_a = 0.0;
  for (const auto& [key, count] : row) sum_a += choose2(static_cast<double>(count));
  double sum_b = 0.0;
  for (const auto& [key, count] : col) sum_b += choose2(static_cast<double>(count));
  const double expected = sum_a * sum_b / choose2(static_cast<double>(n));
  const double max_index = (sum_a + sum_b) / 2.0;
  if (max_index == expected) return 1.0;
  return (index - expected) / (max_index - expected);
}

}  // namespace combo
