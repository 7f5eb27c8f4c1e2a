#include "combo/classifier_combination.hpp"

#include <numeric>
#include <random>

namespace combo {

// ---------------------------------------------------------------------------
// ClassifierPool
// ---------------------------------------------------------------------------

ClassifierPool::ClassifierPool(std::vector<std::unique_ptr<Classifier>> members, bool pre_fitted)
    : members_(std::move(members)), pre_fitted_(pre_fitted) {
  for (const auto& m : members_) {
    if (!m) throw Error(Errc::InvalidParameter, "null pool member");
    if (pre_fitted_ && !m->state().ready()) {
      throw Error(Errc::NotFitted, "pre-fitted pool member '" + m->name() + "' is not fitted");
    }
  }
}

void ClassifierPool::add(std::unique_ptr<Classifier> member) {
  if (!member) throw Error(Errc::InvalidParameter, "null pool member");
  members_.push_back(std::move(member));
}

void ClassifierPool::fit(const Matrix& X, const Labels& y, std::optional<int> n_classes) {
  if (members_.empty()) throw Error(Errc::InvalidParameter, "classifier pool is empty");
  validate_matrix(X);
  validate_labels(y, X.rows());
  if (pre_fitted_) return;
  for (std::size_t j = 0; j < members_.size(); ++j) {
    try {
      members_[j]->fit(X, y, n_classes);
    } catch (const std::exception& e) {
      throw Error(Errc::BaseFitFailure, "member " + std::to_string(j) + " (" + members_[j]->name() + "): " + e.what());
    }
  }
}

bool ClassifierPool::fitted() const {
  return !members_.empty() &&
         std::all_of(members_.begin(), members_.end(), [](const auto& m) { return m->state().ready(); });
}

int ClassifierPool::n_classes() const {
  if (!fitted()) throw Error(Errc::NotFitted, "classifier pool is not fitted");
  const int c = members_.front()->n_classes();
  for (const auto& m : members_) {
    if (m->n_classes() != c) throw Error(Errc::ShapeMismatch, "pool members disagree on the number of classes");
  }
  return c;
}

Eigen::MatrixXi ClassifierPool::predict_all(const Matrix& X) const {
  Eigen::MatrixXi out(X.rows(), size());
  for (Index j = 0; j < size(); ++j) out.col(j) = (*this)[j].predict(X);
  return out;
}

std::vector<Matrix> ClassifierPool::predict_proba_all(const Matrix& X) const {
  std::vector<Matrix> out;
  out.reserve(members_.size());
  for (const auto& m : members_) out.push_back(m->predict_proba(X));
  return out;
}

ClassifierPool ClassifierPool::clone_unfitted() const {
  std::vector<std::unique_ptr<Classifier>> copies;
  copies.reserve(members_.size());
  for (const auto& m : members_) copies.push_back(m->clone_unfitted());
  return ClassifierPool(std::move(copies));
}

namespace {

void fit_pool_for(ClassifierPool& pool, const Matrix& X, const Labels& y, int n_classes) {
  pool.fit(X, y, n_classes);
  if (pool.n_classes() != n_classes) {
    throw Error(Errc::ShapeMismatch, "pool predicts " + std::to_string(pool.n_classes()) +
                                         " classes but the combiner was fitted for " + std::to_string(n_classes));
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Heuristic aggregation
// ---------------------------------------------------------------------------

Matrix average_proba(const ClassifierPool& pool, const Matrix& X) {
  const auto probas = pool.predict_proba_all(X);
  Matrix sum = probas.front();
  for (std::size_t j = 1; j < probas.size(); ++j) sum += probas[j];
  return sum / static_cast<double>(probas.size());
}

Matrix vote_proba(const Eigen::MatrixXi& label_matrix, const std::optional<Vector>& weights, int n_classes) {
  const Index m = label_matrix.cols();
  if (label_matrix.rows() == 0 || m == 0) throw Error(Errc::EmptyMatrix, "label matrix is empty");
  Vector w = Vector::Ones(m);
  if (weights) {
    if (weights->size() != m) {
      throw Error(Errc::ShapeMismatch, std::to_string(weights->size()) + " weights for " + std::to_string(m) + " voters");
    }
    if (((weights->array() < 0) || !weights->array().isFinite()).any()) {
      throw Error(Errc::InvalidParameter, "vote weights must be finite and non-negative");
    }
    w = *weights;
  }
  const double total = w.sum();
  if (!(total > 0)) throw Error(Errc::AllZeroWeights, "vote weights sum to zero");
  Matrix out = Matrix::Zero(label_matrix.rows(), n_classes);
  for (Index i = 0; i < label_matrix.rows(); ++i) {
    for (Index j = 0; j < m; ++j) {
      const int c = label_matrix(i, j);
      if (c < 0 || c >= n_classes) {
        throw Error(Errc::InvalidParameter, "label " + std::to_string(c) + " outside " + std::to_string(n_classes) + " classes");
      }
      out(i, c) += w(j);
    }
  }
  return out / total;
}

Labels majority_vote(const Eigen::MatrixXi& label_matrix, const std::optional<Vector>& weights,
                     std::optional<int> n_classes) {
  const int classes = n_classes.value_or(label_matrix.size() == 0 ? 0 : label_matrix.maxCoeff() + 1);
  return argmax_rows(vote_proba(label_matrix, weights, classes));
}

std::unique_ptr<Classifier> AverageClassifier::clone_unfitted() const {
  return std::make_unique<AverageClassifier>(pool_.clone_unfitted());
}

void AverageClassifier::fit_impl(const Matrix& X, const Labels& y, int n_classes) {
  fit_pool_for(pool_, X, y, n_classes);
}

Matrix AverageClassifier::predict_proba_impl(const Matrix& X) const { return average_proba(pool_, X); }

std::unique_ptr<Classifier> MajorityVoteClassifier::clone_unfitted() const {
  return std::make_unique<MajorityVoteClassifier>(pool_.clone_unfitted(), weights_);
}

void MajorityVoteClassifier::fit_impl(const Matrix& X, const Labels& y, int n_classes) {
  if (weights_ && weights_->size() != pool_.size()) {
    throw Error(Errc::ShapeMismatch, "vote weights do not match the pool size");
  }
  fit_pool_for(pool_, X, y, n_classes);
}

Matrix MajorityVoteClassifier::predict_proba_impl(const Matrix& X) const {
  return vote_proba(pool_.predict_all(X), weights_, n_classes());
}

// ---------------------------------------------------------------------------
// Local-accuracy selection
// ---------------------------------------------------------------------------

void LocalAccuracySelector::fit_impl(const Matrix& X, const Labels& y, int n_classes) {
  if (k_local_ < 1) throw Error(Errc::InvalidParameter, "k_local must be >= 1");
  if (k_local_ > X.rows()) {
    throw Error(Errc::KTooLarge, "k_local=" + std::to_string(k_local_) + " exceeds " + std::to_string(X.rows()) +
                                     " training samples");
  }
  fit_pool_for(pool_, X, y, n_classes);
  train_X_ = X;
  train_y_ = y;
  train_pred_ = pool_.predict_all(X);
}

Eigen::VectorXi LocalAccuracySelector::local_correct(const Eigen::Ref<const Eigen::RowVectorXd>& query) const {
  Eigen::VectorXi correct = Eigen::VectorXi::Zero(pool_.size());
  for (Index t : nearest_neighbors(train_X_, query, k_local_)) {
    for (Index j = 0; j < pool_.size(); ++j) {
      if (train_pred_(t, j) == train_y_(t)) ++correct(j);
    }
  }
  return correct;
}

std::vector<Index> LocalAccuracySelector::ranked_members(const Eigen::Ref<const Eigen::RowVectorXd>& query) const {
  const Eigen::VectorXi correct = local_correct(query);
  std::vector<Index> order(static_cast<std::size_t>(pool_.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return correct(a) > correct(b); });
  return order;
}

std::vector<Index> DcsClassifier::selected_members(const Matrix& X) const {
  state().require_ready("dcs");
  std::vector<Index> out(static_cast<std::size_t>(X.rows()));
  for (Index i = 0; i < X.rows(); ++i) out[static_cast<std::size_t>(i)] = ranked_members(X.row(i)).front();
  return out;
}

std::unique_ptr<Classifier> DcsClassifier::clone_unfitted() const {
  return std::make_unique<DcsClassifier>(pool_.clone_unfitted(), k_local_);
}

Matrix DcsClassifier::predict_proba_impl(const Matrix& X) const {
  const auto probas = pool_.predict_proba_all(X);
  Matrix out(X.rows(), n_classes());
  for (Index i = 0; i < X.rows(); ++i) {
    out.row(i) = probas[static_cast<std::size_t>(ranked_members(X.row(i)).front())].row(i);
  }
  return out;
}

std::unique_ptr<Classifier> DesClassifier::clone_unfitted() const {
  return std::make_unique<DesClassifier>(pool_.clone_unfitted(), k_local_, n_select_);
}

void DesClassifier::fit_impl(const Matrix& X, const Labels& y, int n_classes) {
  if (n_select_ < 1 || n_select_ > pool_.size()) {
    throw Error(Errc::InvalidParameter, "n_select=" + std::to_string(n_select_) + " outside [1, " +
                                            std::to_string(pool_.size()) + "]");
  }
  LocalAccuracySelector::fit_impl(X, y, n_classes);
}

Matrix DesClassifier::predict_proba_impl(const Matrix& X) const {
  const Eigen::MatrixXi preds = pool_.predict_all(X);
  Matrix out = Matrix::Zero(X.rows(), n_classes());
  const double share = 1.0 / static_cast<double>(n_select_);
  for (Index i = 0; i < X.rows(); ++i) {
    const auto ranked = ranked_members(X.row(i));
    for (Index s = 0; s < n_select_; ++s) out(i, preds(i, ranked[static_cast<std::size_t>(s)])) += share;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Stacking
// ---------------------------------------------------------------------------

std::vector<Index> assign_folds(Index n, Index n_folds, std::uint64_t seed) {
  if (n_folds < 2 || n_folds > n) {
    throw Error(Errc::FoldTooSmall, std::to_string(n_folds) + " folds for " + std::to_string(n) + " samples");
  }
  std::vector<Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Index{0});
  std::mt19937_64 rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<Index> fold_of(static_cast<std::size_t>(n));
  const Index base = n / n_folds;
  const Index extra = n % n_folds;
  Index pos = 0;
  for (Index f = 0; f < n_folds; ++f) {
    const Index size = base + (f < extra ? 1 : 0);
    for (Index t = 0; t < size; ++t) fold_of[static_cast<std::size_t>(perm[static_cast<std::size_t>(pos + t)])] = f;
    pos += size;
  }
  return fold_of;
}

Index StackingClassifier::meta_width(Index d) const {
  return pool_.size() * n_classes() + (keep_original_ ? d : 0);
}

std::unique_ptr<Classifier> StackingClassifier::clone_unfitted() const {
  return std::make_unique<StackingClassifier>(pool_.clone_unfitted(), meta_->clone_unfitted(), n_folds_, keep_original_,
                                              seed_);
}

void StackingClassifier::fit_impl(const Matrix& X, const Labels& y, int n_classes) {
  if (pool_.size() == 0) throw Error(Errc::InvalidParameter, "classifier pool is empty");
  const Index n = X.rows();
  const Index d = X.cols();
  const Index m = pool_.size();
  const Index width = m * n_classes + (keep_original_ ? d : 0);
  train_meta_.resize(n, width);

  if (pool_.pre_fitted()) {
    fold_of_.assign(static_cast<std::size_t>(n), 0);
    const auto probas = pool_.predict_proba_all(X);
    for (Index j = 0; j < m; ++j) {
      if (probas[static_cast<std::size_t>(j)].cols() != n_classes) {
        throw Error(Errc::ShapeMismatch, "pre-fitted member " + std::to_string(j) + " has a different class count");
      }
      train_meta_.middleCols(j * n_classes, n_classes) = probas[static_cast<std::size_t>(j)];
    }
  } else {
    fold_of_ = assign_folds(n, n_folds_, seed_);
    for (Index f = 0; f < n_folds_; ++f) {
      std::vector<Index> in_idx;
      std::vector<Index> out_idx;
      for (Index i = 0; i < n; ++i) (fold_of_[static_cast<std::size_t>(i)] == f ? out_idx : in_idx).push_back(i);
      const Matrix X_in = X(in_idx, Eigen::all);
      const Labels y_in = y(in_idx);
      const Matrix X_out = X(out_idx, Eigen::all);
      for (Index j = 0; j < m; ++j) {
        auto member = pool_[j].clone_unfitted();
        try {
          member->fit(X_in, y_in, n_classes);
        } catch (const std::exception& e) {
          throw Error(Errc::BaseFitFailure,
                      "member " + std::to_string(j) + " on fold " + std::to_string(f) + ": " + e.what());
        }
        const Matrix p = member->predict_proba(X_out);
        for (std::size_t r = 0; r < out_idx.size(); ++r) {
          train_meta_.block(out_idx[r], j * n_classes, 1, n_classes) = p.row(static_cast<Index>(r));
        }
      }
    }
    pool_.fit(X, y, n_classes);
  }
  if (keep_original_) train_meta_.rightCols(d) = X;
  meta_->fit(train_meta_, y, n_classes);
}

Matrix StackingClassifier::meta_features(const Matrix& X) const {
  state().require_ready("stacking");
  const Index c = n_classes();
  Matrix out(X.rows(), meta_width(X.cols()));
  const auto probas = pool_.predict_proba_all(X);
  for (Index j = 0; j < pool_.size(); ++j) out.middleCols(j * c, c) = probas[static_cast<std::size_t>(j)];
  if (keep_original_) out.rightCols(X.cols()) = X;
  return out;
}

Matrix StackingClassifier::predict_proba_impl(const Matrix& X) const { return meta_->predict_proba(meta_features(X)); }

}  // namespace combo
