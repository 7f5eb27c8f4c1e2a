#ifndef COMBO_BASE_LEARNERS_HPP
#define COMBO_BASE_LEARNERS_HPP

// Small reference estimators used to exercise the combiners. They favour
// exactness and determinism over speed: exact kNN, full-batch gradient
// descent, exhaustive-threshold CART, plain Lloyd iterations.

#include "combo/core.hpp"
#include "combo/estimator.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace combo {

/// Class-frequency histogram of the k nearest training labels.
class KnnClassifier final : public Classifier {
 public:
  explicit KnnClassifier(Index k) : k_(k) {}

  Index k() const { return k_; }
  std::unique_ptr<Classifier> clone_unfitted() const override;
  std::string name() const override;

 protected:
  void fit_impl(const Matrix& X, const Labels& y, int n_classes) override;
  Matrix predict_proba_impl(const Matrix& X) const override;

 private:
  Index k_;
  Matrix train_X_;
  Labels train_y_;
};

/// Gaussian naive Bayes, evaluated in log space.
class GaussianNB final : public Classifier {
 public:
  static constexpr double kDefaultVarianceFloor = 1e-9;

  explicit GaussianNB(double variance_floor = kDefaultVarianceFloor) : var_floor_(variance_floor) {}

  const Matrix& means() const { return means_; }
  const Matrix& variances() const { return vars_; }
  const Vector& priors() const { return priors_; }

  std::unique_ptr<Classifier> clone_unfitted() const override;
  std::string name() const override { return "nb"; }

 protected:
  void fit_impl(const Matrix& X, const Labels& y, int n_classes) override;
  Matrix predict_proba_impl(const Matrix& X) const override;

 private:
  double var_floor_;
  Matrix means_;  // n_classes x d
  Matrix vars_;   // n_classes x d
  Vector priors_;
};

namespace logistic {

/// Mean binary cross-entropy of sigmoid(b + X w) against targets in {0,1}.
/// `params` is laid out as [b, w_1, ..., w_d].
double loss(const Vector& params, const Matrix& X, const Vector& targets);

/// Analytic gradient of loss() with respect to params.
Vector gradient(const Vector& params, const Matrix& X, const Vector& targets);

}  // namespace logistic

/// One-vs-rest logistic regression trained by full-batch gradient descent
/// from zero weights. Inputs are z-scored internally with a train-fitted
/// ColumnStandardizer.
class LogisticRegression final : public Classifier {
 public:
  LogisticRegression(double learning_rate = 0.1, int n_iters = 500)
      : learning_rate_(learning_rate), n_iters_(n_iters) {}

  /// (d+1) x n_classes; column c holds [b, w] of the class-c model in
  /// standardized feature space.
  const Matrix& weights() const { return weights_; }

  std::unique_ptr<Classifier> clone_unfitted() const override;
  std::string name() const override;

 protected:
  void fit_impl(const Matrix& X, const Labels& y, int n_classes) override;
  Matrix predict_proba_impl(const Matrix& X) const override;

 private:
  double learning_rate_;
  int n_iters_;
  ColumnStandardizer<double> scaler_;
  Matrix weights_;
};

/// Greedy CART with Gini impurity. Thresholds sit at midpoints between
/// consecutive distinct values; samples with x <= threshold go left.
class DecisionTree final : public Classifier {
 public:
  struct Node {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    int depth = 0;
    Vector proba;
  };

  explicit DecisionTree(int max_depth = 5, Index min_samples_split = 2)
      : max_depth_(max_depth), min_samples_split_(min_samples_split) {}

  const std::vector<Node>& nodes() const { return nodes_; }
  int depth() const;

  std::unique_ptr<Classifier> clone_unfitted() const override;
  std::string name() const override;

 protected:
  void fit_impl(const Matrix& X, const Labels& y, int n_classes) override;
  Matrix predict_proba_impl(const Matrix& X) const override;

 private:
  int build(const Matrix& X, const Labels& y, std::vector<Index>& idx, int depth);

  int max_depth_;
  Index min_samples_split_;
  int n_classes_fit_ = 0;
  std::vector<Node> nodes_;
};

/// Always predicts the most frequent training class (lowest on ties).
class MajorityClassClassifier final : public Classifier {
 public:
  std::unique_ptr<Classifier> clone_unfitted() const override;
  std::string name() const override { return "dummy"; }

 protected:
  void fit_impl(const Matrix& X, const Labels& y, int n_classes) override;
  Matrix predict_proba_impl(const Matrix& X) const override;

 private:
  Vector row_;
};

/// Lloyd's k-means from k distinct seeded points. An empty cluster is
/// re-seeded at the point farthest from its assigned centroid.
class KMeans {
 public:
  KMeans(Index k, std::uint64_t seed, int max_iters = 100) : k_(k), seed_(seed), max_iters_(max_iters) {}

  Labels fit(const Matrix& X);

  Index k() const { return k_; }
  std::uint64_t seed() const { return seed_; }
  const Matrix& centroids() const { return centroids_; }
  /// Inertia after every assignment step.
  const std::vector<double>& inertia_history() const { return inertia_; }
  double inertia() const { return inertia_.empty() ? 0.0 : inertia_.back(); }

 private:
  Index k_;
  std::uint64_t seed_;
  int max_iters_;
  Matrix centroids_;
  std::vector<double> inertia_;
};

/// Outlier score = Euclidean distance to the k-th nearest training point.
/// Training rows scored against themselves count as their own neighbor.
class KnnDetector final : public Detector {
 public:
  explicit KnnDetector(Index k) : k_(k) {}

  Index k() const { return k_; }
  std::unique_ptr<Detector> clone_unfitted() const override;
  std::string name() const override;

 protected:
  void fit_impl(const Matrix& X) override;
  Vector decision_scores_impl(const Matrix& X) const override;

 private:
  Index k_;
  Matrix train_X_;
};

// ---------------------------------------------------------------------------
// Learner spec strings: `knn:5`, `nb`, `logreg:0.1:500`, `tree:3`,
// `dummy`, `kmeans:4`, `knnd:10`.
// ---------------------------------------------------------------------------

std::unique_ptr<Classifier> make_classifier(const std::string& spec);
std::unique_ptr<Detector> make_detector(const std::string& spec);
KMeans make_kmeans(const std::string& spec, std::uint64_t seed);

/// Splits a comma-separated list, rejecting empty tokens.
std::vector<std::string> split_spec_list(const std::string& list);

}  // namespace combo

#endif  // COMBO_BASE_LEARNERS_HPP
