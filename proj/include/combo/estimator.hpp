#ifndef COMBO_ESTIMATOR_HPP
#define COMBO_ESTIMATOR_HPP

#include "combo/core.hpp"

#include <memory>
#include <optional>
#include <string>

namespace combo {

/// Supervised estimator contract shared by base learners and combiners.
///
/// fit() is skipped once the estimator has been marked pre-fitted; the
/// predict family requires Fitted or PreFitted. predict() is always the
/// lowest-index argmax of predict_proba().
class Classifier {
 public:
  virtual ~Classifier() = default;

  /// n_classes, when given, declares the label space (labels must lie in it).
  void fit(const Matrix& X, const Labels& y, std::optional<int> n_classes = std::nullopt);
  Matrix predict_proba(const Matrix& X) const;
  Labels predict(const Matrix& X) const;
  Labels fit_predict(const Matrix& X, const Labels& y);

  /// Declares an already-fitted estimator as pre-trained: later fit() calls
  /// leave its learned state untouched.
  void mark_pre_fitted();

  int n_classes() const { return n_classes_; }
  const EstimatorState& state() const { return state_; }

  /// Fresh, unfitted copy carrying the same hyperparameters.
  virtual std::unique_ptr<Classifier> clone_unfitted() const = 0;
  virtual std::string name() const = 0;

 protected:
  virtual void fit_impl(const Matrix& X, const Labels& y, int n_classes) = 0;
  virtual Matrix predict_proba_impl(const Matrix& X) const = 0;

 private:
  EstimatorState state_;
  int n_classes_ = 0;
};

/// Unsupervised outlier detector; higher scores are more anomalous.
class Detector {
 public:
  virtual ~Detector() = default;

  void fit(const Matrix& X);
  Vector decision_scores(const Matrix& X) const;
  Vector fit_predict(const Matrix& X);
  void mark_pre_fitted();

  const EstimatorState& state() const { return state_; }

  virtual std::unique_ptr<Detector> clone_unfitted() const = 0;
  virtual std::string name() const = 0;

 protected:
  virtual void fit_impl(const Matrix& X) = 0;
  virtual Vector decision_scores_impl(const Matrix& X) const = 0;

 private:
  EstimatorState state_;
};

}  // namespace combo

#endif  // COMBO_ESTIMATOR_HPP
