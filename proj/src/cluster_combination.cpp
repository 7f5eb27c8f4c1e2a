#include "combo/cluster_combination.hpp"

#include <limits>
#include <map>

namespace combo {

Partition::Partition(const Labels& raw) : labels_(raw.size()) {
  std::map<int, int> ids;
  for (Index i = 0; i < raw.size(); ++i) {
    if (raw(i) < 0) throw Error(Errc::InvalidParameter, "negative cluster label at index " + std::to_string(i));
    ids.emplace(raw(i), 0);
  }
  int next = 0;
  for (auto& [id, compact] : ids) compact = next++;
  for (Index i = 0; i < raw.size(); ++i) labels_(i) = ids[raw(i)];
  k_ = next;
}

ContingencyMatrix build_contingency(const Partition& a, const Partition& b) {
  if (a.size() != b.size()) {
    throw Error(Errc::LengthMismatch, "partitions of length " + std::to_string(a.size()) + " and " +
                                          std::to_string(b.size()));
  }
  ContingencyMatrix counts = ContingencyMatrix::Zero(a.k(), b.k());
  for (Index i = 0; i < a.size(); ++i) ++counts(a.labels()(i), b.labels()(i));
  return counts;
}

std::vector<Index> solve_assignment(const Matrix& cost) {
  const Index n = cost.rows();
  if (cost.cols() != n) throw Error(Errc::ShapeMismatch, "assignment cost matrix must be square");
  if (n == 0) return {};
  const double inf = std::numeric_limits<double>::infinity();
  // 1-based potentials; column 0 is a virtual source.
  std::vector<double> u(static_cast<std::size_t>(n + 1), 0.0);
  std::vector<double> v(static_cast<std::size_t>(n + 1), 0.0);
  std::vector<Index> row_of(static_cast<std::size_t>(n + 1), 0);
  std::vector<Index> way(static_cast<std::size_t>(n + 1), 0);
  for (Index i = 1; i <= n; ++i) {
    row_of[0] = i;
    Index j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(n + 1), inf);
    std::vector<bool> used(static_cast<std::size_t>(n + 1), false);
    do {
      used[static_cast<std::size_t>(j0)] = true;
      const Index i0 = row_of[static_cast<std::size_t>(j0)];
      double delta = inf;
      Index j1 = 0;
      for (Index j = 1; j <= n; ++j) {
        const auto sj = static_cast<std::size_t>(j);
        if (used[sj]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] - v[sj];
        if (cur < minv[sj]) {
          minv[sj] = cur;
          way[sj] = j0;
        }
        if (minv[sj] < delta) {
          delta = minv[sj];
          j1 = j;
        }
      }
      for (Index j = 0; j <= n; ++j) {
        const auto sj = static_cast<std::size_t>(j);
        if (used[sj]) {
          u[static_cast<std::size_t>(row_of[sj])] += delta;
          v[sj] -= delta;
        } else {
          minv[sj] -= delta;
        }
      }
      j0 = j1;
    } while (row_of[static_cast<std::size_t>(j0)] != 0);
    do {
      const Index j1 = way[static_cast<std::size_t>(j0)];
      row_of[static_cast<std::size_t>(j0)] = row_of[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<Index> col_of_row(static_cast<std::size_t>(n), 0);
  for (Index j = 1; j <= n; ++j) col_of_row[static_cast<std::size_t>(row_of[static_cast<std::size_t>(j)] - 1)] = j - 1;
  return col_of_row;
}

Alignment align_labels(const Partition& base, const Partition& reference) {
  const ContingencyMatrix counts = build_contingency(base, reference);
  const Index k_base = base.k();
  const Index k_ref = reference.k();
  const Index size = std::max(k_base, k_ref);
  Matrix cost = Matrix::Zero(size, size);
  cost.topLeftCorner(k_base, k_ref) = -counts.cast<double>();
  const auto assigned = solve_assignment(cost);

  Alignment out;
  out.mapping.assign(static_cast<std::size_t>(k_base), 0);
  int fresh = static_cast<int>(k_ref);
  for (Index p = 0; p < k_base; ++p) {
    const Index q = assigned[static_cast<std::size_t>(p)];
    out.mapping[static_cast<std::size_t>(p)] = q < k_ref ? static_cast<int>(q) : fresh++;
  }
  out.aligned.resize(base.size());
  for (Index i = 0; i < base.size(); ++i) {
    out.aligned(i) = out.mapping[static_cast<std::size_t>(base.labels()(i))];
    if (out.aligned(i) == reference.labels()(i)) ++out.agreement;
  }
  return out;
}

namespace {

// Renumbers clusters in order of first appearance. Any bijective relabeling
// of the input gives the same result, which keeps alignment and vote
// tie-breaks independent of the ids a clusterer happened to emit.
Partition first_appearance(const Partition& p, std::vector<int>* original = nullptr) {
  std::vector<int> canon(static_cast<std::size_t>(p.k()), -1);
  Labels out(p.size());
  int next = 0;
  for (Index i = 0; i < p.size(); ++i) {
    int& c = canon[static_cast<std::size_t>(p.labels()(i))];
    if (c < 0) c = next++;
    out(i) = c;
  }
  if (original) {
    original->assign(canon.size(), 0);
    for (std::size_t l = 0; l < canon.size(); ++l) (*original)[static_cast<std::size_t>(canon[l])] = static_cast<int>(l);
  }
  return Partition(out);
}

}  // namespace

Partition ensemble_partitions(const std::vector<Partition>& partitions, Index reference_index) {
  if (partitions.empty()) throw Error(Errc::EmptyEnsemble, "no partitions to combine");
  if (reference_index < 0 || reference_index >= static_cast<Index>(partitions.size())) {
    throw Error(Errc::InvalidParameter, "reference index " + std::to_string(reference_index) + " out of range");
  }
  std::vector<int> ref_original;
  const Partition ref = first_appearance(partitions[static_cast<std::size_t>(reference_index)], &ref_original);
  Eigen::MatrixXi votes(ref.size(), static_cast<Index>(partitions.size()));
  for (std::size_t j = 0; j < partitions.size(); ++j) {
    if (partitions[j].size() != ref.size()) throw Error(Errc::LengthMismatch, "partitions cover different numbers of objects");
    votes.col(static_cast<Index>(j)) = align_labels(first_appearance(partitions[j]), ref).aligned;
  }
  const int n_labels = votes.maxCoeff() + 1;
  Labels out(ref.size());
  std::vector<int> tally(static_cast<std::size_t>(n_labels));
  for (Index i = 0; i < votes.rows(); ++i) {
    std::fill(tally.begin(), tally.end(), 0);
    for (Index j = 0; j < votes.cols(); ++j) ++tally[static_cast<std::size_t>(votes(i, j))];
    const int winner = static_cast<int>(std::max_element(tally.begin(), tally.end()) - tally.begin());
    // Back to the reference's own ids; clusters without a reference partner keep their fresh id.
    out(i) = winner < ref.k() ? ref_original[static_cast<std::size_t>(winner)] : winner;
  }
  return Partition(out);
}

Matrix eac_coassociation(const std::vector<Partition>& partitions) {
  if (partitions.empty()) throw Error(Errc::EmptyEnsemble, "no partitions to accumulate");
  const Index n = partitions.front().size();
  Eigen::MatrixXi together = Eigen::MatrixXi::Zero(n, n);
  for (const auto& p : partitions) {
    if (p.size() != n) throw Error(Errc::LengthMismatch, "partitions cover different numbers of objects");
    const Labels& l = p.labels();
    for (Index i = 0; i < n; ++i) {
      for (Index j = i; j < n; ++j) {
        if (l(i) == l(j)) ++together(i, j);
      }
    }
  }
  const double m = static_cast<double>(partitions.size());
  Matrix c(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i; j < n; ++j) {
      c(i, j) = static_cast<double>(together(i, j)) / m;
      c(j, i) = c(i, j);
    }
  }
  return c;
}

Partition eac_cluster(const Matrix& coassociation, Index k_final, Linkage linkage) {
  const Index n = coassociation.rows();
  if (n == 0 || coassociation.cols() != n) throw Error(Errc::ShapeMismatch, "co-association matrix must be square");
  if (k_final < 1) throw Error(Errc::InvalidParameter, "k_final must be >= 1");
  if (k_final > n) {
    throw Error(Errc::KTooLarge, "k_final=" + std::to_string(k_final) + " exceeds " + std::to_string(n) + " objects");
  }
  Matrix dist = Matrix::Ones(n, n) - coassociation;
  std::vector<bool> active(static_cast<std::size_t>(n), true);
  std::vector<Index> size(static_cast<std::size_t>(n), 1);
  std::vector<Index> owner(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) owner[static_cast<std::size_t>(i)] = i;

  for (Index clusters = n; clusters > k_final; --clusters) {
    Index bi = -1;
    Index bj = -1;
    double best = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < n; ++i) {
      if (!active[static_cast<std::size_t>(i)]) continue;
      for (Index j = i + 1; j < n; ++j) {
        if (active[static_cast<std::size_t>(j)] && (bi < 0 || dist(i, j) < best)) {
          best = dist(i, j);
          bi = i;
          bj = j;
        }
      }
    }
    const double ni = static_cast<double>(size[static_cast<std::size_t>(bi)]);
    const double nj = static_cast<double>(size[static_cast<std::size_t>(bj)]);
    for (Index t = 0; t < n; ++t) {
      if (!active[static_cast<std::size_t>(t)] || t == bi || t == bj) continue;
      const double merged = linkage == Linkage::Single ? std::min(dist(bi, t), dist(bj, t))
                                                       : (ni * dist(bi, t) + nj * dist(bj, t)) / (ni + nj);
      dist(bi, t) = merged;
      dist(t, bi) = merged;
    }
    active[static_cast<std::size_t>(bj)] = false;
    size[static_cast<std::size_t>(bi)] += size[static_cast<std::size_t>(bj)];
    for (auto& o : owner) {
      if (o == bj) o = bi;
    }
  }
  Labels raw(n);
  for (Index i = 0; i < n; ++i) raw(i) = static_cast<int>(owner[static_cast<std::size_t>(i)]);
  return Partition(raw);
}

}  // namespace combo
