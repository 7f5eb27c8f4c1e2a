#ifndef COMBO_SCORE_COMBINATION_HPP
#define COMBO_SCORE_COMBINATION_HPP

// Stateless aggregation of an n_samples x n_models score matrix into one
// score per sample. Inputs are combined as given; z-score them first with
// standardize() when model scales differ.

#include "combo/core.hpp"

#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

namespace combo {

/// Partition of model indices {0..m-1} into buckets for aom/moa.
struct BucketPlan {
  std::vector<std::vector<Index>> buckets;

  Index n_buckets() const { return static_cast<Index>(buckets.size()); }

  /// Contiguous groups of near-equal size; the first m mod b are one larger.
  static BucketPlan contiguous(Index n_models, Index n_buckets);
  /// Same sizes as contiguous(), over a seeded shuffle of the indices.
  static BucketPlan random(Index n_models, Index n_buckets, std::uint64_t seed);

  /// Throws InvalidPartition unless the buckets are non-empty, disjoint and
  /// cover exactly {0..n_models-1}.
  void validate(Index n_models) const;
};

namespace detail {

inline BucketPlan chunk(const std::vector<Index>& order, Index n_buckets) {
  const Index m = static_cast<Index>(order.size());
  if (n_buckets < 1 || n_buckets > m) {
    throw Error(Errc::InvalidPartition,
                "bucket count " + std::to_string(n_buckets) + " outside [1, " + std::to_string(m) + "]");
  }
  BucketPlan plan;
  const Index base = m / n_buckets;
  const Index extra = m % n_buckets;
  Index pos = 0;
  for (Index b = 0; b < n_buckets; ++b) {
    const Index size = base + (b < extra ? 1 : 0);
    plan.buckets.emplace_back(order.begin() + pos, order.begin() + pos + size);
    pos += size;
  }
  return plan;
}

template <typename Derived>
void require_scores(const Eigen::MatrixBase<Derived>& s) {
  if (s.rows() == 0 || s.cols() == 0) throw Error(Errc::EmptyMatrix, "score matrix is empty");
}

}  // namespace detail

inline BucketPlan BucketPlan::contiguous(Index n_models, Index n_buckets) {
  std::vector<Index> order(static_cast<std::size_t>(std::max<Index>(n_models, 0)));
  std::iota(order.begin(), order.end(), Index{0});
  return detail::chunk(order, n_buckets);
}

inline BucketPlan BucketPlan::random(Index n_models, Index n_buckets, std::uint64_t seed) {
  std::vector<Index> order(static_cast<std::size_t>(std::max<Index>(n_models, 0)));
  std::iota(order.begin(), order.end(), Index{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  return detail::chunk(order, n_buckets);
}

inline void BucketPlan::validate(Index n_models) const {
  if (buckets.empty() || n_buckets() > n_models) {
    throw Error(Errc::InvalidPartition, "need between 1 and " + std::to_string(n_models) + " buckets");
  }
  std::vector<bool> seen(static_cast<std::size_t>(n_models), false);
  Index total = 0;
  for (const auto& bucket : buckets) {
    if (bucket.empty()) throw Error(Errc::InvalidPartition, "empty bucket");
    for (Index j : bucket) {
      if (j < 0 || j >= n_models || seen[static_cast<std::size_t>(j)]) {
        throw Error(Errc::InvalidPartition, "model index " + std::to_string(j) + " out of range or repeated");
      }
      seen[static_cast<std::size_t>(j)] = true;
      ++total;
    }
  }
  if (total != n_models) throw Error(Errc::InvalidPartition, "buckets do not cover every model");
}

/// Row mean, or weighted mean sum_j w_j S_ij / sum_j w_j. Summation runs in
/// column order, so average(S) equals aom(S, m singleton buckets) exactly.
template <typename Derived>
VectorX<typename Derived::Scalar> average(const Eigen::MatrixBase<Derived>& s,
                                          const std::optional<VectorX<typename Derived::Scalar>>& weights = std::nullopt) {
  using Scalar = typename Derived::Scalar;
  detail::require_scores(s);
  VectorX<Scalar> out(s.rows());
  if (!weights) {
    const Scalar m = static_cast<Scalar>(s.cols());
    for (Index i = 0; i < s.rows(); ++i) {
      Scalar acc = 0;
      for (Index j = 0; j < s.cols(); ++j) acc += s(i, j);
      out(i) = acc / m;
    }
    return out;
  }
  const auto& w = *weights;
  if (w.size() != s.cols()) {
    throw Error(Errc::ShapeMismatch, std::to_string(w.size()) + " weights for " + std::to_string(s.cols()) + " models");
  }
  Scalar total = 0;
  for (Index j = 0; j < w.size(); ++j) {
    if (!(w(j) >= Scalar(0)) || !std::isfinite(static_cast<double>(w(j)))) {
      throw Error(Errc::InvalidParameter, "weights must be finite and non-negative");
    }
    total += w(j);
  }
  if (!(total > Scalar(0))) throw Error(Errc::AllZeroWeights, "weights sum to zero");
  for (Index i = 0; i < s.rows(); ++i) {
    Scalar acc = 0;
    for (Index j = 0; j < s.cols(); ++j) acc += w(j) * s(i, j);
    out(i) = acc / total;
  }
  return out;
}

template <typename Derived>
VectorX<typename Derived::Scalar> maximization(const Eigen::MatrixBase<Derived>& s) {
  detail::require_scores(s);
  VectorX<typename Derived::Scalar> out(s.rows());
  for (Index i = 0; i < s.rows(); ++i) {
    auto best = s(i, 0);
    for (Index j = 1; j < s.cols(); ++j) best = std::max(best, s(i, j));
    out(i) = best;
  }
  return out;
}

/// Per-row median; the mean of the two middle values when m is even.
template <typename Derived>
VectorX<typename Derived::Scalar> median(const Eigen::MatrixBase<Derived>& s) {
  using Scalar = typename Derived::Scalar;
  detail::require_scores(s);
  VectorX<Scalar> out(s.rows());
  std::vector<Scalar> row(static_cast<std::size_t>(s.cols()));
  const std::size_t m = row.size();
  for (Index i = 0; i < s.rows(); ++i) {
    for (Index j = 0; j < s.cols(); ++j) row[static_cast<std::size_t>(j)] = s(i, j);
    std::sort(row.begin(), row.end());
    out(i) = m % 2 == 1 ? row[m / 2] : (row[m / 2 - 1] + row[m / 2]) / Scalar(2);
  }
  return out;
}

/// Average of maximum: mean over buckets of the within-bucket maximum.
template <typename Derived>
VectorX<typename Derived::Scalar> aom(const Eigen::MatrixBase<Derived>& s, const BucketPlan& plan) {
  using Scalar = typename Derived::Scalar;
  detail::require_scores(s);
  plan.validate(s.cols());
  VectorX<Scalar> out(s.rows());
  const Scalar b = static_cast<Scalar>(plan.n_buckets());
  for (Index i = 0; i < s.rows(); ++i) {
    Scalar acc = 0;
    for (const auto& bucket : plan.buckets) {
      Scalar best = s(i, bucket.front());
      for (Index j : bucket) best = std::max(best, s(i, j));
      acc += best;
    }
    out(i) = acc / b;
  }
  return out;
}

/// Maximum of average: max over buckets of the within-bucket mean.
template <typename Derived>
VectorX<typename Derived::Scalar> moa(const Eigen::MatrixBase<Derived>& s, const BucketPlan& plan) {
  using Scalar = typename Derived::Scalar;
  detail::require_scores(s);
  plan.validate(s.cols());
  VectorX<Scalar> out(s.rows());
  for (Index i = 0; i < s.rows(); ++i) {
    Scalar best = 0;
    bool first = true;
    for (const auto& bucket : plan.buckets) {
      Scalar acc = 0;
      for (Index j : bucket) acc += s(i, j);
      const Scalar mean = acc / static_cast<Scalar>(bucket.size());
      best = first ? mean : std::max(best, mean);
      first = false;
    }
    out(i) = best;
  }
  return out;
}

}  // namespace combo

#endif  // COMBO_SCORE_COMBINATION_HPP
