#ifndef COMBO_CLUSTER_COMBINATION_HPP
#define COMBO_CLUSTER_COMBINATION_HPP

// Consensus clustering: label alignment + voting (clusterer ensemble) and
// evidence accumulation over the co-association matrix (EAC).

#include "combo/core.hpp"

#include <vector>

namespace combo {

/// Cluster labels compacted to {0..k-1}, preserving the order of the
/// original ids.
class Partition {
 public:
  Partition() = default;
  explicit Partition(const Labels& raw);

  const Labels& labels() const { return labels_; }
  Index size() const { return labels_.size(); }
  int k() const { return k_; }

 private:
  Labels labels_;
  int k_ = 0;
};

/// counts(p, q) = |{i : a_i = p and b_i = q}|.
using ContingencyMatrix = Eigen::Matrix<Index, Eigen::Dynamic, Eigen::Dynamic>;

ContingencyMatrix build_contingency(const Partition& a, const Partition& b);

/// Minimum-cost perfect assignment on a square cost matrix; returns
/// row -> column. O(k^3) shortest augmenting path with potentials.
std::vector<Index> solve_assignment(const Matrix& cost);

struct Alignment {
  /// mapping[p] = label assigned to base cluster p. Base clusters left
  /// without a reference partner receive fresh ids k_ref, k_ref + 1, ...
  std::vector<int> mapping;
  /// Base labels rewritten through `mapping` (not compacted).
  Labels aligned;
  /// Objects whose aligned label equals the reference label.
  Index agreement = 0;
};

/// Relabels `base` to maximize agreement with `reference` via optimal
/// assignment on the zero-padded contingency matrix.
Alignment align_labels(const Partition& base, const Partition& reference);

/// Aligns every partition to partitions[reference_index] and takes a
/// per-object plurality vote. Labels are renumbered by first appearance
/// before alignment, so vote ties go to the reference cluster that appears
/// earliest and the result does not depend on the input label ids. The
/// output uses the reference partition's labels.
Partition ensemble_partitions(const std::vector<Partition>& partitions, Index reference_index = 0);

/// C(i, j) = fraction of partitions that put i and j in the same cluster.
Matrix eac_coassociation(const std::vector<Partition>& partitions);

enum class Linkage { Single, Average };

/// Agglomerative clustering on D = 1 - C until k_final clusters remain.
/// Merge ties pick the lexicographically smallest (i, j) pair of cluster
/// ids, where a cluster's id is its smallest member index. Output labels
/// are numbered by each cluster's smallest member.
Partition eac_cluster(const Matrix& coassociation, Index k_final, Linkage linkage = Linkage::Single);

}  // namespace combo

#endif  // COMBO_CLUSTER_COMBINATION_HPP
