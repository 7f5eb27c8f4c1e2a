#include "combo/core.hpp"
#include "combo/estimator.hpp"

namespace combo {

const char* errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::NonFinite: return "NonFinite";
    case Errc::EmptyMatrix: return "EmptyMatrix";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::AllZeroWeights: return "AllZeroWeights";
    case Errc::InvalidPartition: return "InvalidPartition";
    case Errc::InvalidParameter: return "InvalidParameter";
    case Errc::LabelShapeMismatch: return "LabelShapeMismatch";
    case Errc::BaseFitFailure: return "BaseFitFailure";
    case Errc::NotFitted: return "NotFitted";
    case Errc::KTooLarge: return "KTooLarge";
    case Errc::FoldTooSmall: return "FoldTooSmall";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::EmptyEnsemble: return "EmptyEnsemble";
    case Errc::NonBinaryLabels: return "NonBinaryLabels";
    case Errc::MissingClass: return "MissingClass";
    case Errc::SingleClass: return "SingleClass";
    case Errc::ParseError: return "ParseError";
    case Errc::MissingColumn: return "MissingColumn";
    case Errc::RaggedRows: return "RaggedRows";
    case Errc::DegenerateSplit: return "DegenerateSplit";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

NonFiniteError::NonFiniteError(Index row, Index col)
    : Error(Errc::NonFinite, "non-finite value at (" + std::to_string(row) + "," + std::to_string(col) + ")"),
      row_(row),
      col_(col) {}

void validate_labels(const Labels& y, Index expected_rows) {
  if (y.size() != expected_rows) {
    throw Error(Errc::LabelShapeMismatch,
                std::to_string(y.size()) + " labels for " + std::to_string(expected_rows) + " rows");
  }
  for (Index i = 0; i < y.size(); ++i) {
    if (y(i) < 0) throw Error(Errc::InvalidParameter, "negative label at index " + std::to_string(i));
  }
}

int infer_n_classes(const Labels& y) { return y.size() == 0 ? 0 : y.maxCoeff() + 1; }

Matrix one_hot(const Labels& y, int n_classes) {
  Matrix out = Matrix::Zero(y.size(), n_classes);
  for (Index i = 0; i < y.size(); ++i) out(i, y(i)) = 1.0;
  return out;
}

void EstimatorState::require_ready(const char* who) const {
  if (!ready()) throw Error(Errc::NotFitted, std::string(who) + " used before fit");
}

void EstimatorState::require_features(const char* who, Index d) const {
  if (n_features_expected && *n_features_expected != d) {
    throw Error(Errc::ShapeMismatch, std::string(who) + " expects " + std::to_string(*n_features_expected) +
                                         " features, got " + std::to_string(d));
  }
}

// ---------------------------------------------------------------------------

void Classifier::fit(const Matrix& X, const Labels& y, std::optional<int> n_classes) {
  if (state_.phase == Phase::PreFitted) return;
  validate_matrix(X);
  validate_labels(y, X.rows());
  const int inferred = infer_n_classes(y);
  const int classes = n_classes.value_or(inferred);
  if (classes < inferred) {
    throw Error(Errc::InvalidParameter, "label " + std::to_string(inferred - 1) + " outside declared " +
                                            std::to_string(classes) + " classes");
  }
  fit_impl(X, y, classes);
  n_classes_ = classes;
  state_.phase = Phase::Fitted;
  state_.n_features_expected = X.cols();
}

Matrix Classifier::predict_proba(const Matrix& X) const {
  state_.require_ready(name().c_str());
  validate_matrix(X);
  state_.require_features(name().c_str(), X.cols());
  return predict_proba_impl(X);
}

Labels Classifier::predict(const Matrix& X) const { return argmax_rows(predict_proba(X)); }

Labels Classifier::fit_predict(const Matrix& X, const Labels& y) {
  fit(X, y);
  return predict(X);
}

void Classifier::mark_pre_fitted() {
  state_.require_ready(name().c_str());
  state_.phase = Phase::PreFitted;
}

void Detector::fit(const Matrix& X) {
  if (state_.phase == Phase::PreFitted) return;
  validate_matrix(X);
  fit_impl(X);
  state_.phase = Phase::Fitted;
  state_.n_features_expected = X.cols();
}

Vector Detector::decision_scores(const Matrix& X) const {
  state_.require_ready(name().c_str());
  validate_matrix(X);
  state_.require_features(name().c_str(), X.cols());
  return decision_scores_impl(X);
}

Vector Detector::fit_predict(const Matrix& X) {
  fit(X);
  return decision_scores(X);
}

void Detector::mark_pre_fitted() {
  state_.require_ready(name().c_str());
  state_.phase = Phase::PreFitted;
}

}  // namespace combo
