#ifndef COMBO_CORE_HPP
#define COMBO_CORE_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace combo {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// n_samples x n_features design matrix, or n_samples x n_models score matrix.
using Matrix = MatrixX<double>;
using Vector = VectorX<double>;
/// Dense non-negative integer labels (class, cluster or outlier flag).
using Labels = Eigen::VectorXi;
using Index = Eigen::Index;

enum class Errc {
  NonFinite,
  EmptyMatrix,
  ShapeMismatch,
  AllZeroWeights,
  InvalidPartition,
  InvalidParameter,
  LabelShapeMismatch,
  BaseFitFailure,
  NotFitted,
  KTooLarge,
  FoldTooSmall,
  LengthMismatch,
  EmptyEnsemble,
  NonBinaryLabels,
  MissingClass,
  SingleClass,
  ParseError,
  MissingColumn,
  RaggedRows,
  DegenerateSplit,
  IoError,
};

const char* errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// Raised by validate_matrix; carries the offending cell.
class NonFiniteError : public Error {
 public:
  NonFiniteError(Index row, Index col);
  Index row() const noexcept { return row_; }
  Index col() const noexcept { return col_; }

 private:
  Index row_;
  Index col_;
};

/// Throws EmptyMatrix for a 0-row or 0-column matrix and NonFiniteError on
/// the first NaN/inf in row-major scan order.
template <typename Derived>
void validate_matrix(const Eigen::MatrixBase<Derived>& m) {
  if (m.rows() == 0 || m.cols() == 0) {
    throw Error(Errc::EmptyMatrix, "matrix has shape " + std::to_string(m.rows()) + "x" +
                                       std::to_string(m.cols()));
  }
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (!std::isfinite(static_cast<double>(m(i, j)))) throw NonFiniteError(i, j);
    }
  }
}

void validate_labels(const Labels& y, Index expected_rows);

/// Number of classes implied by the labels, i.e. max(y) + 1.
int infer_n_classes(const Labels& y);

/// Row-wise argmax; ties resolve to the lowest column.
template <typename Derived>
Labels argmax_rows(const Eigen::MatrixBase<Derived>& p) {
  Labels out(p.rows());
  for (Index i = 0; i < p.rows(); ++i) {
    Index best = 0;
    for (Index j = 1; j < p.cols(); ++j) {
      if (p(i, j) > p(i, best)) best = j;
    }
    out(i) = static_cast<int>(best);
  }
  return out;
}

/// One-hot probability rows for hard labels.
Matrix one_hot(const Labels& y, int n_classes);

// ---------------------------------------------------------------------------
// Column standardization (population std, degenerate columns map to 0)
// ---------------------------------------------------------------------------

template <typename Scalar>
struct ColumnStandardizer {
  VectorX<Scalar> means;
  VectorX<Scalar> stds;

  Index cols() const { return means.size(); }
  bool degenerate(Index j) const { return !(stds(j) > Scalar(0)); }
};

template <typename Derived>
ColumnStandardizer<typename Derived::Scalar> fit_standardizer(const Eigen::MatrixBase<Derived>& s) {
  using Scalar = typename Derived::Scalar;
  if (s.rows() == 0 || s.cols() == 0) throw Error(Errc::EmptyMatrix, "cannot fit standardizer");
  ColumnStandardizer<Scalar> out;
  out.means.resize(s.cols());
  out.stds.resize(s.cols());
  const Scalar n = static_cast<Scalar>(s.rows());
  for (Index j = 0; j < s.cols(); ++j) {
    Scalar sum = 0;
    for (Index i = 0; i < s.rows(); ++i) sum += s(i, j);
    const Scalar mean = sum / n;
    Scalar ss = 0;
    for (Index i = 0; i < s.rows(); ++i) {
      const Scalar d = s(i, j) - mean;
      ss += d * d;
    }
    out.means(j) = mean;
    out.stds(j) = std::sqrt(ss / n);
  }
  return out;
}

template <typename Scalar, typename Derived>
MatrixX<Scalar> standardize(const ColumnStandardizer<Scalar>& std_, const Eigen::MatrixBase<Derived>& s) {
  if (s.cols() != std_.cols()) {
    throw Error(Errc::ShapeMismatch, "standardizer fitted on " + std::to_string(std_.cols()) +
                                         " columns, got " + std::to_string(s.cols()));
  }
  MatrixX<Scalar> out(s.rows(), s.cols());
  for (Index j = 0; j < s.cols(); ++j) {
    const bool flat = std_.degenerate(j);
    for (Index i = 0; i < s.rows(); ++i) {
      out(i, j) = flat ? Scalar(0) : (s(i, j) - std_.means(j)) / std_.stds(j);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Euclidean neighbor search. Every module measures distance through here.
// ---------------------------------------------------------------------------

template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar squared_distance(const Eigen::MatrixBase<DerivedA>& a,
                                           const Eigen::MatrixBase<DerivedB>& b) {
  return (a - b).squaredNorm();
}

/// Indices of the k training rows nearest to `query`, ordered by
/// (distance, index). Requires 1 <= k <= train.rows().
template <typename DerivedT, typename DerivedQ>
std::vector<Index> nearest_neighbors(const Eigen::MatrixBase<DerivedT>& train,
                                     const Eigen::MatrixBase<DerivedQ>& query, Index k) {
  using Scalar = typename DerivedT::Scalar;
  const Index n = train.rows();
  if (k < 1 || k > n) {
    throw Error(Errc::KTooLarge, "k=" + std::to_string(k) + " outside [1, " + std::to_string(n) + "]");
  }
  std::vector<std::pair<Scalar, Index>> dist(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) dist[static_cast<std::size_t>(i)] = {squared_distance(train.row(i), query), i};
  std::partial_sort(dist.begin(), dist.begin() + k, dist.end());
  std::vector<Index> out(static_cast<std::size_t>(k));
  for (Index i = 0; i < k; ++i) out[static_cast<std::size_t>(i)] = dist[static_cast<std::size_t>(i)].second;
  return out;
}

// ---------------------------------------------------------------------------
// Estimator lifecycle
// ---------------------------------------------------------------------------

enum class Phase { Unfitted, Fitted, PreFitted };

struct EstimatorState {
  Phase phase = Phase::Unfitted;
  std::optional<Index> n_features_expected;

  bool ready() const { return phase != Phase::Unfitted; }
  void require_ready(const char* who) const;
  void require_features(const char* who, Index d) const;
};

}  // namespace combo

#endif  // COMBO_CORE_HPP
