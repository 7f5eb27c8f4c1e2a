#include "combo/detector_combination.hpp"

#include "combo/base_learners.hpp"

#include <limits>
#include <numeric>

namespace combo {

DetectorPool::DetectorPool(std::vector<std::unique_ptr<Detector>> members, bool pre_fitted)
    : members_(std::move(members)), pre_fitted_(pre_fitted) {
  for (const auto& m : members_) {
    if (!m) throw Error(Errc::InvalidParameter, "null pool member");
    if (pre_fitted_ && !m->state().ready()) {
      throw Error(Errc::NotFitted, "pre-fitted pool member '" + m->name() + "' is not fitted");
    }
  }
}

void DetectorPool::add(std::unique_ptr<Detector> member) {
  if (!member) throw Error(Errc::InvalidParameter, "null pool member");
  members_.push_back(std::move(member));
}

void DetectorPool::fit(const Matrix& X) {
  if (members_.empty()) throw Error(Errc::InvalidParameter, "detector pool is empty");
  validate_matrix(X);
  if (pre_fitted_) return;
  for (std::size_t j = 0; j < members_.size(); ++j) {
    try {
      members_[j]->fit(X);
    } catch (const Error& e) {
      if (e.code() == Errc::KTooLarge) throw;
      throw Error(Errc::BaseFitFailure, "member " + std::to_string(j) + " (" + members_[j]->name() + "): " + e.what());
    } catch (const std::exception& e) {
      throw Error(Errc::BaseFitFailure, "member " + std::to_string(j) + " (" + members_[j]->name() + "): " + e.what());
    }
  }
}

bool DetectorPool::fitted() const {
  return !members_.empty() &&
         std::all_of(members_.begin(), members_.end(), [](const auto& m) { return m->state().ready(); });
}

Matrix DetectorPool::decision_scores(const Matrix& X) const {
  if (!fitted()) throw Error(Errc::NotFitted, "detector pool is not fitted");
  Matrix out(X.rows(), size());
  for (Index j = 0; j < size(); ++j) out.col(j) = (*this)[j].decision_scores(X);
  return out;
}

Vector pseudo_ground_truth(const Matrix& scores_norm, PseudoTarget mode) {
  if (scores_norm.rows() == 0 || scores_norm.cols() == 0) throw Error(Errc::EmptyMatrix, "score matrix is empty");
  Vector out(scores_norm.rows());
  for (Index i = 0; i < scores_norm.rows(); ++i) {
    out(i) = mode == PseudoTarget::MaxOfScores ? scores_norm.row(i).maxCoeff() : scores_norm.row(i).mean();
  }
  return out;
}

double pearson(const Vector& a, const Vector& b) {
  const double n = static_cast<double>(a.size());
  const Vector da = a.array() - a.sum() / n;
  const Vector db = b.array() - b.sum() / n;
  const double saa = da.squaredNorm();
  const double sbb = db.squaredNorm();
  if (!(saa > 0) || !(sbb > 0)) return std::numeric_limits<double>::quiet_NaN();
  return da.dot(db) / std::sqrt(saa * sbb);
}

// ---------------------------------------------------------------------------
// LSCP
// ---------------------------------------------------------------------------

Index Lscp::default_k_region(Index n_train) { return std::max<Index>(1, std::min<Index>(30, n_train / 2)); }

void Lscp::fit(const Matrix& X_train) {
  validate_matrix(X_train);
  if (pool_.size() < 2) throw Error(Errc::InvalidParameter, "LSCP needs at least two detectors");
  if (n_top_ < 1 || n_top_ > pool_.size()) {
    throw Error(Errc::InvalidParameter, "n_top=" + std::to_string(n_top_) + " outside [1, " +
                                            std::to_string(pool_.size()) + "]");
  }
  if (k_region_ < 1) throw Error(Errc::InvalidParameter, "k_region must be >= 1");
  if (k_region_ > X_train.rows()) {
    throw Error(Errc::KTooLarge, "k_region=" + std::to_string(k_region_) + " exceeds " +
                                     std::to_string(X_train.rows()) + " training samples");
  }
  pool_.fit(X_train);
  const Matrix raw = pool_.decision_scores(X_train);
  standardizer_ = fit_standardizer(raw);
  train_scores_norm_ = standardize(standardizer_, raw);
  pseudo_target_ = pseudo_ground_truth(train_scores_norm_, target_);
  train_X_ = X_train;
  state_.phase = Phase::Fitted;
  state_.n_features_expected = X_train.cols();
}

std::vector<Index> Lscp::ranked_detectors(const Eigen::Ref<const Eigen::RowVectorXd>& query) const {
  state_.require_ready("lscp");
  const auto region = nearest_neighbors(train_X_, query, k_region_);
  const Vector target = pseudo_target_(region);
  std::vector<double> corr(static_cast<std::size_t>(pool_.size()));
  for (Index j = 0; j < pool_.size(); ++j) {
    const Vector col = train_scores_norm_.col(j)(region);
    corr[static_cast<std::size_t>(j)] = pearson(col, target);
  }
  std::vector<Index> order(corr.size());
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    const double ca = corr[static_cast<std::size_t>(a)];
    const double cb = corr[static_cast<std::size_t>(b)];
    if (std::isnan(cb)) return !std::isnan(ca);
    if (std::isnan(ca)) return false;
    return ca > cb;
  });
  return order;
}

Vector Lscp::decision_scores(const Matrix& X) const {
  state_.require_ready("lscp");
  validate_matrix(X);
  state_.require_features("lscp", X.cols());
  const Matrix test_norm = standardize(standardizer_, pool_.decision_scores(X));
  Vector out(X.rows());
  std::vector<bool> chosen(static_cast<std::size_t>(pool_.size()));
  for (Index i = 0; i < X.rows(); ++i) {
    const auto ranked = ranked_detectors(X.row(i));
    std::fill(chosen.begin(), chosen.end(), false);
    for (Index t = 0; t < n_top_; ++t) chosen[static_cast<std::size_t>(ranked[static_cast<std::size_t>(t)])] = true;
    // Sum in pool order so n_top = m reproduces the plain column mean.
    double acc = 0.0;
    for (Index j = 0; j < pool_.size(); ++j) {
      if (chosen[static_cast<std::size_t>(j)]) acc += test_norm(i, j);
    }
    out(i) = acc / static_cast<double>(n_top_);
  }
  return out;
}

// ---------------------------------------------------------------------------
// XGBOD
// ---------------------------------------------------------------------------

Xgbod::Xgbod(DetectorPool pool, std::unique_ptr<Classifier> meta)
    : pool_(std::move(pool)), meta_(meta ? std::move(meta) : std::make_unique<LogisticRegression>(0.1, 1000)) {}

void Xgbod::fit(const Matrix& X_train, const Labels& y_train) {
  validate_matrix(X_train);
  validate_labels(y_train, X_train.rows());
  if ((y_train.array() > 1).any()) throw Error(Errc::NonBinaryLabels, "labels must be 0 (inlier) or 1 (outlier)");
  pool_.fit(X_train);
  standardizer_ = fit_standardizer(pool_.decision_scores(X_train));
  state_.phase = Phase::Fitted;
  state_.n_features_expected = X_train.cols();
  meta_->fit(transform(X_train), y_train, 2);
}

Matrix Xgbod::transform(const Matrix& X) const {
  state_.require_ready("xgbod");
  validate_matrix(X);
  state_.require_features("xgbod", X.cols());
  Matrix out(X.rows(), X.cols() + pool_.size());
  out.leftCols(X.cols()) = X;
  out.rightCols(pool_.size()) = standardize(standardizer_, pool_.decision_scores(X));
  return out;
}

Matrix Xgbod::predict_proba(const Matrix& X) const {
  state_.require_ready("xgbod");
  return meta_->predict_proba(transform(X));
}

Vector Xgbod::decision_scores(const Matrix& X) const { return predict_proba(X).col(1); }

}  // namespace combo
