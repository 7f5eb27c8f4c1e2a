#ifndef COMBO_DETECTOR_COMBINATION_HPP
#define COMBO_DETECTOR_COMBINATION_HPP

#include "combo/core.hpp"
#include "combo/estimator.hpp"

#include <memory>
#include <vector>

namespace combo {

class DetectorPool {
 public:
  DetectorPool() = default;
  explicit DetectorPool(std::vector<std::unique_ptr<Detector>> members, bool pre_fitted = false);

  DetectorPool(DetectorPool&&) noexcept = default;
  DetectorPool& operator=(DetectorPool&&) noexcept = default;

  void add(std::unique_ptr<Detector> member);

  Index size() const { return static_cast<Index>(members_.size()); }
  bool pre_fitted() const { return pre_fitted_; }
  Detector& operator[](Index i) { return *members_[static_cast<std::size_t>(i)]; }
  const Detector& operator[](Index i) const { return *members_[static_cast<std::size_t>(i)]; }

  void fit(const Matrix& X);
  bool fitted() const;

  /// n x m raw score matrix, columns in pool order.
  Matrix decision_scores(const Matrix& X) const;

 private:
  std::vector<std::unique_ptr<Detector>> members_;
  bool pre_fitted_ = false;
};

enum class PseudoTarget { MaxOfScores, AvgOfScores };

/// Per-row max (or mean) of standardized detector scores.
Vector pseudo_ground_truth(const Matrix& scores_norm, PseudoTarget mode);

/// Pearson correlation; NaN when either side has zero variance.
double pearson(const Vector& a, const Vector& b);

/// Locally selective combination of detectors.
///
/// Training scores are z-scored per detector and collapsed into a pseudo
/// target. For each query the k_region nearest training points form the
/// local region; detectors are ranked by the Pearson correlation between
/// their standardized training scores and the pseudo target on that region
/// (NaN last, lower index first on ties), and the query score is the mean
/// standardized test score of the n_top best detectors.
class Lscp {
 public:
  Lscp(DetectorPool pool, Index k_region, Index n_top = 1, PseudoTarget target = PseudoTarget::MaxOfScores)
      : pool_(std::move(pool)), k_region_(k_region), n_top_(n_top), target_(target) {}

  void fit(const Matrix& X_train);
  Vector decision_scores(const Matrix& X) const;

  /// Detectors in rank order for a single query row.
  std::vector<Index> ranked_detectors(const Eigen::Ref<const Eigen::RowVectorXd>& query) const;

  const DetectorPool& pool() const { return pool_; }
  const EstimatorState& state() const { return state_; }
  const ColumnStandardizer<double>& standardizer() const { return standardizer_; }
  const Matrix& train_scores_norm() const { return train_scores_norm_; }
  const Vector& pseudo_target() const { return pseudo_target_; }

  /// min(30, n_train / 2), at least 1.
  static Index default_k_region(Index n_train);

 private:
  DetectorPool pool_;
  Index k_region_;
  Index n_top_;
  PseudoTarget target_;
  EstimatorState state_;
  ColumnStandardizer<double> standardizer_;
  Matrix train_X_;
  Matrix train_scores_norm_;
  Vector pseudo_target_;
};

/// Semi-supervised detector combination: raw features augmented with the
/// standardized detector scores feed a supervised meta classifier. The
/// outlier score is the meta probability of class 1.
class Xgbod {
 public:
  /// A null meta selects the default logistic regression.
  explicit Xgbod(DetectorPool pool, std::unique_ptr<Classifier> meta = nullptr);

  void fit(const Matrix& X_train, const Labels& y_train);
  Matrix transform(const Matrix& X) const;
  Matrix predict_proba(const Matrix& X) const;
  Vector decision_scores(const Matrix& X) const;

  const DetectorPool& pool() const { return pool_; }
  const Classifier& meta() const { return *meta_; }
  const EstimatorState& state() const { return state_; }
  const ColumnStandardizer<double>& standardizer() const { return standardizer_; }

 private:
  DetectorPool pool_;
  std::unique_ptr<Classifier> meta_;
  EstimatorState state_;
  ColumnStandardizer<double> standardizer_;
};

}  // namespace combo

#endif  // COMBO_DETECTOR_COMBINATION_HPP
