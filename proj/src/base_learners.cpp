#include "combo/base_learners.hpp"

#include <limits>
#include <numeric>
#include <random>
#include <set>

namespace combo {

namespace {

std::vector<Index> class_counts(const Labels& y, int n_classes) {
  std::vector<Index> counts(static_cast<std::size_t>(n_classes), 0);
  for (Index i = 0; i < y.size(); ++i) ++counts[static_cast<std::size_t>(y(i))];
  return counts;
}

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

}  // namespace

// ---------------------------------------------------------------------------
// KnnClassifier
// ---------------------------------------------------------------------------

std::unique_ptr<Classifier> KnnClassifier::clone_unfitted() const { return std::make_unique<KnnClassifier>(k_); }

std::string KnnClassifier::name() const { return "knn:" + std::to_string(k_); }

void KnnClassifier::fit_impl(const Matrix& X, const Labels& y, int /*n_classes*/) {
  if (k_ < 1 || k_ > X.rows()) {
    throw Error(Errc::KTooLarge, "knn k=" + std::to_string(k_) + " with " + std::to_string(X.rows()) + " samples");
  }
  train_X_ = X;
  train_y_ = y;
}

Matrix KnnClassifier::predict_proba_impl(const Matrix& X) const {
  Matrix out = Matrix::Zero(X.rows(), n_classes());
  const double share = 1.0 / static_cast<double>(k_);
  for (Index i = 0; i < X.rows(); ++i) {
    for (Index j : nearest_neighbors(train_X_, X.row(i), k_)) out(i, train_y_(j)) += share;
  }
  return out;
}

// ---------------------------------------------------------------------------
// GaussianNB
// ---------------------------------------------------------------------------

std::unique_ptr<Classifier> GaussianNB::clone_unfitted() const { return std::make_unique<GaussianNB>(var_floor_); }

void GaussianNB::fit_impl(const Matrix& X, const Labels& y, int n_classes) {
  const auto counts = class_counts(y, n_classes);
  for (int c = 0; c < n_classes; ++c) {
    if (counts[static_cast<std::size_t>(c)] == 0) {
      throw Error(Errc::MissingClass, "class " + std::to_string(c) + " has no training samples");
    }
  }
  const Index d = X.cols();
  means_ = Matrix::Zero(n_classes, d);
  vars_ = Matrix::Zero(n_classes, d);
  priors_.resize(n_classes);
  for (Index i = 0; i < X.rows(); ++i) means_.row(y(i)) += X.row(i);
  for (int c = 0; c < n_classes; ++c) {
    means_.row(c) /= static_cast<double>(counts[static_cast<std::size_t>(c)]);
    priors_(c) = static_cast<double>(counts[static_cast<std::size_t>(c)]) / static_cast<double>(X.rows());
  }
  for (Index i = 0; i < X.rows(); ++i) vars_.row(y(i)) += (X.row(i) - means_.row(y(i))).array().square().matrix();
  for (int c = 0; c < n_classes; ++c) {
    vars_.row(c) /= static_cast<double>(counts[static_cast<std::size_t>(c)]);
    vars_.row(c) = vars_.row(c).cwiseMax(var_floor_);
  }
}

Matrix GaussianNB::predict_proba_impl(const Matrix& X) const {
  const Index n_cls = means_.rows();
  Matrix out(X.rows(), n_cls);
  const double log_2pi = std::log(2.0 * 3.14159265358979323846);
  for (Index i = 0; i < X.rows(); ++i) {
    Vector log_joint(n_cls);
    for (Index c = 0; c < n_cls; ++c) {
      const auto diff = (X.row(i) - means_.row(c)).array();
      const auto var = vars_.row(c).array();
      log_joint(c) = std::log(priors_(c)) - 0.5 * (var.log() + log_2pi + diff.square() / var).sum();
    }
    const double top = log_joint.maxCoeff();
    const Vector w = (log_joint.array() - top).exp().matrix();
    out.row(i) = (w / w.sum()).transpose();
  }
  return out;
}

// ---------------------------------------------------------------------------
// LogisticRegression
// ---------------------------------------------------------------------------

namespace logistic {

double loss(const Vector& params, const Matrix& X, const Vector& targets) {
  const Vector z = (X * params.tail(X.cols())).array() + params(0);
  double total = 0.0;
  for (Index i = 0; i < z.size(); ++i) {
    // log(1 + e^z) - t z, computed stably
    const double zi = z(i);
    const double softplus = zi > 0 ? zi + std::log1p(std::exp(-zi)) : std::log1p(std::exp(zi));
    total += softplus - targets(i) * zi;
  }
  return total / static_cast<double>(z.size());
}

Vector gradient(const Vector& params, const Matrix& X, const Vector& targets) {
  const Vector z = (X * params.tail(X.cols())).array() + params(0);
  Vector residual(z.size());
  for (Index i = 0; i < z.size(); ++i) residual(i) = sigmoid(z(i)) - targets(i);
  Vector g(params.size());
  const double n = static_cast<double>(z.size());
  g(0) = residual.sum() / n;
  g.tail(X.cols()) = X.transpose() * residual / n;
  return g;
}

}  // namespace logistic

std::unique_ptr<Classifier> LogisticRegression::clone_unfitted() const {
  return std::make_unique<LogisticRegression>(learning_rate_, n_iters_);
}

std::string LogisticRegression::name() const {
  return "logreg:" + std::to_string(learning_rate_) + ":" + std::to_string(n_iters_);
}

void LogisticRegression::fit_impl(const Matrix& X, const Labels& y, int n_classes) {
  std::set<int> present(y.data(), y.data() + y.size());
  if (present.size() < 2) throw Error(Errc::SingleClass, "logistic regression needs at least two classes");
  if (n_iters_ < 0 || !(learning_rate_ > 0)) {
    throw Error(Errc::InvalidParameter, "logistic regression needs n_iters >= 0 and learning_rate > 0");
  }
  scaler_ = fit_standardizer(X);
  const Matrix Z = standardize(scaler_, X);
  weights_ = Matrix::Zero(X.cols() + 1, n_classes);
  for (int c = 0; c < n_classes; ++c) {
    const Vector targets = (y.array() == c).cast<double>().matrix();
    Vector params = Vector::Zero(X.cols() + 1);
    for (int it = 0; it < n_iters_; ++it) params -= learning_rate_ * logistic::gradient(params, Z, targets);
    weights_.col(c) = params;
  }
}

Matrix LogisticRegression::predict_proba_impl(const Matrix& X) const {
  const Matrix Z = standardize(scaler_, X);
  const Index d = Z.cols();
  Matrix logits = Z * weights_.bottomRows(d);
  logits.rowwise() += weights_.row(0);
  Matrix out(X.rows(), weights_.cols());
  for (Index i = 0; i < X.rows(); ++i) {
    for (Index c = 0; c < out.cols(); ++c) out(i, c) = sigmoid(logits(i, c));
    const double s = out.row(i).sum();
    if (s > 0) {
      out.row(i) /= s;
    } else {
      out.row(i).setConstant(1.0 / static_cast<double>(out.cols()));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// DecisionTree
// ---------------------------------------------------------------------------

std::unique_ptr<Classifier> DecisionTree::clone_unfitted() const {
  return std::make_unique<DecisionTree>(max_depth_, min_samples_split_);
}

std::string DecisionTree::name() const { return "tree:" + std::to_string(max_depth_); }

int DecisionTree::depth() const {
  int d = 0;
  for (const auto& node : nodes_) d = std::max(d, node.depth);
  return d;
}

void DecisionTree::fit_impl(const Matrix& X, const Labels& y, int n_classes) {
  if (max_depth_ < 0) throw Error(Errc::InvalidParameter, "max_depth must be >= 0");
  n_classes_fit_ = n_classes;
  nodes_.clear();
  std::vector<Index> idx(static_cast<std::size_t>(X.rows()));
  std::iota(idx.begin(), idx.end(), Index{0});
  build(X, y, idx, 0);
}

int DecisionTree::build(const Matrix& X, const Labels& y, std::vector<Index>& idx, int depth) {
  const int self = static_cast<int>(nodes_.size());
  nodes_.emplace_back();
  Vector hist = Vector::Zero(n_classes_fit_);
  for (Index i : idx) hist(y(i)) += 1.0;
  const double n = static_cast<double>(idx.size());
  nodes_[self].depth = depth;
  nodes_[self].proba = hist / n;

  const bool pure = (hist.array() > 0).count() <= 1;
  if (pure || depth >= max_depth_ || static_cast<Index>(idx.size()) < min_samples_split_) return self;

  // Maximize sum_c l_c^2 / n_l + sum_c r_c^2 / n_r, which minimizes the
  // size-weighted Gini impurity of the children.
  double best_score = -1.0;
  int best_feature = -1;
  double best_threshold = 0.0;
  std::vector<Index> order = idx;
  for (Index f = 0; f < X.cols(); ++f) {
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return X(a, f) < X(b, f); });
    Vector left = Vector::Zero(n_classes_fit_);
    for (std::size_t pos = 0; pos + 1 < order.size(); ++pos) {
      left(y(order[pos])) += 1.0;
      const double here = X(order[pos], f);
      const double next = X(order[pos + 1], f);
      if (!(here < next)) continue;
      const double n_left = static_cast<double>(pos + 1);
      const double n_right = n - n_left;
      const Vector right = hist - left;
      const double score = left.squaredNorm() / n_left + right.squaredNorm() / n_right;
      if (score > best_score) {
        best_score = score;
        best_feature = static_cast<int>(f);
        best_threshold = here + (next - here) / 2.0;
      }
    }
  }
  if (best_feature < 0) return self;

  std::vector<Index> left_idx;
  std::vector<Index> right_idx;
  for (Index i : idx) (X(i, best_feature) <= best_threshold ? left_idx : right_idx).push_back(i);
  const int l = build(X, y, left_idx, depth + 1);
  const int r = build(X, y, right_idx, depth + 1);
  nodes_[self].feature = best_feature;
  nodes_[self].threshold = best_threshold;
  nodes_[self].left = l;
  nodes_[self].right = r;
  return self;
}

Matrix DecisionTree::predict_proba_impl(const Matrix& X) const {
  Matrix out(X.rows(), n_classes_fit_);
  for (Index i = 0; i < X.rows(); ++i) {
    int node = 0;
    while (nodes_[node].feature >= 0) {
      const auto& nd = nodes_[node];
      node = X(i, nd.feature) <= nd.threshold ? nd.left : nd.right;
    }
    out.row(i) = nodes_[node].proba.transpose();
  }
  return out;
}

// ---------------------------------------------------------------------------
// MajorityClassClassifier
// ---------------------------------------------------------------------------

std::unique_ptr<Classifier> MajorityClassClassifier::clone_unfitted() const {
  return std::make_unique<MajorityClassClassifier>();
}

void MajorityClassClassifier::fit_impl(const Matrix& /*X*/, const Labels& y, int n_classes) {
  const auto counts = class_counts(y, n_classes);
  const auto top = std::max_element(counts.begin(), counts.end()) - counts.begin();
  row_ = Vector::Zero(n_classes);
  row_(top) = 1.0;
}

Matrix MajorityClassClassifier::predict_proba_impl(const Matrix& X) const {
  return row_.transpose().replicate(X.rows(), 1);
}

// ---------------------------------------------------------------------------
// KMeans
// ---------------------------------------------------------------------------

Labels KMeans::fit(const Matrix& X) {
  validate_matrix(X);
  const Index n = X.rows();
  if (k_ < 1 || k_ > n) {
    throw Error(Errc::KTooLarge, "kmeans k=" + std::to_string(k_) + " with " + std::to_string(n) + " samples");
  }
  if (max_iters_ < 1) throw Error(Errc::InvalidParameter, "kmeans max_iters must be >= 1");

  std::mt19937_64 rng(seed_);
  std::vector<Index> all(static_cast<std::size_t>(n));
  std::iota(all.begin(), all.end(), Index{0});
  std::shuffle(all.begin(), all.end(), rng);
  centroids_.resize(k_, X.cols());
  for (Index c = 0; c < k_; ++c) centroids_.row(c) = X.row(all[static_cast<std::size_t>(c)]);

  inertia_.clear();
  Labels labels = Labels::Constant(n, -1);
  Vector cost(n);
  for (int it = 0; it < max_iters_; ++it) {
    Labels next(n);
    for (Index i = 0; i < n; ++i) {
      Index best = 0;
      double best_d = squared_distance(X.row(i), centroids_.row(0));
      for (Index c = 1; c < k_; ++c) {
        const double d = squared_distance(X.row(i), centroids_.row(c));
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      next(i) = static_cast<int>(best);
      cost(i) = best_d;
    }
    inertia_.push_back(cost.sum());
    const bool converged = (next.array() == labels.array()).all();
    labels = next;
    if (converged) break;

    Matrix sums = Matrix::Zero(k_, X.cols());
    std::vector<Index> sizes(static_cast<std::size_t>(k_), 0);
    for (Index i = 0; i < n; ++i) {
      sums.row(labels(i)) += X.row(i);
      ++sizes[static_cast<std::size_t>(labels(i))];
    }
    std::vector<bool> taken(static_cast<std::size_t>(n), false);
    for (Index c = 0; c < k_; ++c) {
      if (sizes[static_cast<std::size_t>(c)] > 0) {
        centroids_.row(c) = sums.row(c) / static_cast<double>(sizes[static_cast<std::size_t>(c)]);
        continue;
      }
      Index far = -1;
      for (Index i = 0; i < n; ++i) {
        if (!taken[static_cast<std::size_t>(i)] && (far < 0 || cost(i) > cost(far))) far = i;
      }
      taken[static_cast<std::size_t>(far)] = true;
      centroids_.row(c) = X.row(far);
    }
  }
  return labels;
}

// ---------------------------------------------------------------------------
// KnnDetector
// ---------------------------------------------------------------------------

std::unique_ptr<Detector> KnnDetector::clone_unfitted() const { return std::make_unique<KnnDetector>(k_); }

std::string KnnDetector::name() const { return "knnd:" + std::to_string(k_); }

void KnnDetector::fit_impl(const Matrix& X) {
  if (k_ < 1 || k_ > X.rows()) {
    throw Error(Errc::KTooLarge, "knnd k=" + std::to_string(k_) + " with " + std::to_string(X.rows()) + " samples");
  }
  train_X_ = X;
}

Vector KnnDetector::decision_scores_impl(const Matrix& X) const {
  Vector out(X.rows());
  for (Index i = 0; i < X.rows(); ++i) {
    const auto nn = nearest_neighbors(train_X_, X.row(i), k_);
    out(i) = std::sqrt(squared_distance(train_X_.row(nn.back()), X.row(i)));
  }
  return out;
}

}  // namespace combo
