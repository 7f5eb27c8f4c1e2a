#ifndef COMBO_CLASSIFIER_COMBINATION_HPP
#define COMBO_CLASSIFIER_COMBINATION_HPP

#include "combo/core.hpp"
#include "combo/estimator.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

namespace combo {

/// Ordered collection of base classifiers. A pre-fitted pool is never
/// retrained; its members must already be fitted.
class ClassifierPool {
 public:
  ClassifierPool() = default;
  explicit ClassifierPool(std::vector<std::unique_ptr<Classifier>> members, bool pre_fitted = false);

  ClassifierPool(ClassifierPool&&) noexcept = default;
  ClassifierPool& operator=(ClassifierPool&&) noexcept = default;

  void add(std::unique_ptr<Classifier> member);

  Index size() const { return static_cast<Index>(members_.size()); }
  bool pre_fitted() const { return pre_fitted_; }
  Classifier& operator[](Index i) { return *members_[static_cast<std::size_t>(i)]; }
  const Classifier& operator[](Index i) const { return *members_[static_cast<std::size_t>(i)]; }

  /// Fits every member on (X, y) unless the pool is pre-fitted. Member
  /// failures surface as BaseFitFailure naming the member index.
  void fit(const Matrix& X, const Labels& y, std::optional<int> n_classes = std::nullopt);

  bool fitted() const;
  /// Shared label-space size; throws if members disagree or are unfitted.
  int n_classes() const;

  /// n x m matrix of member predictions.
  Eigen::MatrixXi predict_all(const Matrix& X) const;
  std::vector<Matrix> predict_proba_all(const Matrix& X) const;

  /// Unfitted copies of every member, pre_fitted cleared.
  ClassifierPool clone_unfitted() const;

 private:
  std::vector<std::unique_ptr<Classifier>> members_;
  bool pre_fitted_ = false;
};

/// Elementwise mean of member probabilities.
Matrix average_proba(const ClassifierPool& pool, const Matrix& X);

/// Weighted plurality over the columns of an n x m label matrix; ties go to
/// the smallest class.
Labels majority_vote(const Eigen::MatrixXi& label_matrix, const std::optional<Vector>& weights = std::nullopt,
                     std::optional<int> n_classes = std::nullopt);

/// Weighted vote fractions behind majority_vote (rows sum to 1).
Matrix vote_proba(const Eigen::MatrixXi& label_matrix, const std::optional<Vector>& weights, int n_classes);

// ---------------------------------------------------------------------------

class AverageClassifier final : public Classifier {
 public:
  explicit AverageClassifier(ClassifierPool pool) : pool_(std::move(pool)) {}

  const ClassifierPool& pool() const { return pool_; }
  std::unique_ptr<Classifier> clone_unfitted() const override;
  std::string name() const override { return "average"; }

 protected:
  void fit_impl(const Matrix& X, const Labels& y, int n_classes) override;
  Matrix predict_proba_impl(const Matrix& X) const override;

 private:
  ClassifierPool pool_;
};

class MajorityVoteClassifier final : public Classifier {
 public:
  explicit MajorityVoteClassifier(ClassifierPool pool, std::optional<Vector> weights = std::nullopt)
      : pool_(std::move(pool)), weights_(std::move(weights)) {}

  const ClassifierPool& pool() const { return pool_; }
  std::unique_ptr<Classifier> clone_unfitted() const override;
  std::string name() const override { return "majority"; }

 protected:
  void fit_impl(const Matrix& X, const Labels& y, int n_classes) override;
  Matrix predict_proba_impl(const Matrix& X) const override;

 private:
  ClassifierPool pool_;
  std::optional<Vector> weights_;
};

/// Shared machinery for the local-accuracy selectors: retains the training
/// set and each member's training predictions, and scores members by the
/// number of correct predictions among the k_local Euclidean neighbors.
class LocalAccuracySelector : public Classifier {
 public:
  const ClassifierPool& pool() const { return pool_; }
  Index k_local() const { return k_local_; }

  /// Number of correct member predictions in the query's neighborhood, one
  /// entry per member.
  Eigen::VectorXi local_correct(const Eigen::Ref<const Eigen::RowVectorXd>& query) const;

  /// Members ordered by descending local accuracy, lower index first on ties.
  std::vector<Index> ranked_members(const Eigen::Ref<const Eigen::RowVectorXd>& query) const;

 protected:
  LocalAccuracySelector(ClassifierPool pool, Index k_local) : pool_(std::move(pool)), k_local_(k_local) {}

  void fit_impl(const Matrix& X, const Labels& y, int n_classes) override;

  ClassifierPool pool_;
  Index k_local_;
  Matrix train_X_;
  Labels train_y_;
  Eigen::MatrixXi train_pred_;
};

/// Dynamic classifier selection by overall local accuracy.
class DcsClassifier final : public LocalAccuracySelector {
 public:
  DcsClassifier(ClassifierPool pool, Index k_local) : LocalAccuracySelector(std::move(pool), k_local) {}

  /// Index of the member chosen for each query row.
  std::vector<Index> selected_members(const Matrix& X) const;

  std::unique_ptr<Classifier> clone_unfitted() const override;
  std::string name() const override { return "dcs"; }

 protected:
  Matrix predict_proba_impl(const Matrix& X) const override;
};

/// Dynamic ensemble selection: vote among the n_select locally best members.
class DesClassifier final : public LocalAccuracySelector {
 public:
  DesClassifier(ClassifierPool pool, Index k_local, Index n_select)
      : LocalAccuracySelector(std::move(pool), k_local), n_select_(n_select) {}

  Index n_select() const { return n_select_; }
  std::unique_ptr<Classifier> clone_unfitted() const override;
  std::string name() const override { return "des"; }

 protected:
  void fit_impl(const Matrix& X, const Labels& y, int n_classes) override;
  Matrix predict_proba_impl(const Matrix& X) const override;

 private:
  Index n_select_;
};

/// Stacked generalization over cross-fitted member probabilities.
///
/// Rows are shuffled with `seed`, cut into n_folds contiguous blocks, and
/// each member is trained on all blocks but one to predict the held-out
/// block. The meta learner is fitted on those out-of-fold probabilities
/// (plus the raw features when keep_original is set), then the members are
/// refitted on the full training set for prediction. A pre-fitted pool
/// skips cross-fitting and feeds its own predictions to the meta learner.
class StackingClassifier final : public Classifier {
 public:
  StackingClassifier(ClassifierPool pool, std::unique_ptr<Classifier> meta, Index n_folds = 4,
                     bool keep_original = false, std::uint64_t seed = 0)
      : pool_(std::move(pool)), meta_(std::move(meta)), n_folds_(n_folds), keep_original_(keep_original), seed_(seed) {}

  const ClassifierPool& pool() const { return pool_; }
  const Classifier& meta() const { return *meta_; }

  /// Meta-feature layout: member j's class-c probability lands in column
  /// j * n_classes + c, followed by the raw features when keep_original.
  Matrix meta_features(const Matrix& X) const;
  const Matrix& train_meta_features() const { return train_meta_; }
  /// Fold id of every training row from the last fit.
  const std::vector<Index>& fold_of() const { return fold_of_; }

  std::unique_ptr<Classifier> clone_unfitted() const override;
  std::string name() const override { return "stacking"; }

 protected:
  void fit_impl(const Matrix& X, const Labels& y, int n_classes) override;
  Matrix predict_proba_impl(const Matrix& X) const override;

 private:
  Index meta_width(Index d) const;

  ClassifierPool pool_;
  std::unique_ptr<Classifier> meta_;
  Index n_folds_;
  bool keep_original_;
  std::uint64_t seed_;
  Matrix train_meta_;
  std::vector<Index> fold_of_;
};

/// Contiguous fold assignment over a seeded shuffle; fold sizes differ by
/// at most one.
std::vector<Index> assign_folds(Index n, Index n_folds, std::uint64_t seed);

}  // namespace combo

#endif  // COMBO_CLASSIFIER_COMBINATION_HPP
