#ifndef COMBO_DATA_EVAL_HPP
#define COMBO_DATA_EVAL_HPP

#include "combo/core.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace combo {

struct LabeledDataset {
  Matrix X;
  std::optional<Labels> y;
  /// label_names[c] is the original text of class c.
  std::vector<std::string> label_names;
  /// Feature column names (from the header, when present).
  std::vector<std::string> feature_names;
};

struct CsvOptions {
  bool has_header = false;
  /// Column name (requires a header) or zero-based index.
  std::optional<std::variant<std::string, Index>> label_column;
  char delimiter = ',';
};

/// Parses numeric CSV. The label column, if any, is mapped to dense
/// integers in first-appearance order.
LabeledDataset parse_csv(const std::string& text, const CsvOptions& options = {});
LabeledDataset load_csv(const std::string& path, const CsvOptions& options = {});

/// Trimmed fields of the first non-empty line of a CSV file.
std::vector<std::string> read_csv_first_row(const std::string& path, char delimiter = ',');

/// Shortest round-trip decimal representation of a double.
std::string format_number(double value);

/// Features first, then a `label` column (original names) when y is set.
std::string to_csv(const LabeledDataset& ds, char delimiter = ',');
void save_csv(const std::string& path, const LabeledDataset& ds, char delimiter = ',');

/// Two interleaving half circles of radius 1: the upper arc centred at the
/// origin (class 0) and the lower arc centred at (1, 0.5) (class 1), with
/// uniform random angles and Gaussian coordinate noise. The first
/// ceil(n/2) rows belong to class 0.
LabeledDataset generate_two_arcs(Index n, double noise_std, std::uint64_t seed);

struct BlobCenter {
  Vector coords;
  double std = 1.0;
};

/// Isotropic Gaussian blobs; the first n mod c centers get one extra point.
LabeledDataset generate_blobs(Index n, const std::vector<BlobCenter>& centers, std::uint64_t seed);

/// Standard-normal 2-d inliers followed by outliers drawn uniformly on
/// [-6, 6]^2 outside the radius-3 disc; y = 1 marks outliers.
LabeledDataset generate_inliers_outliers(Index n_inliers, Index n_outliers, std::uint64_t seed);

struct SplitSpec {
  double test_fraction = 0.3;
  std::uint64_t seed = 0;
  bool shuffle = true;
};

struct Split {
  LabeledDataset train;
  LabeledDataset test;
  std::vector<Index> train_index;
  std::vector<Index> test_index;
};

/// Seeded Fisher-Yates shuffle, then the last round(n * test_fraction)
/// rows form the test half.
Split train_test_split(const LabeledDataset& ds, const SplitSpec& spec);

double accuracy(const Labels& y_true, const Labels& y_pred);

/// Mann-Whitney AUC with half credit for ties.
double roc_auc(const Labels& y_true, const Vector& scores);

double adjusted_rand_index(const Labels& a, const Labels& b);

}  // namespace combo

#endif  // COMBO_DATA_EVAL_HPP
