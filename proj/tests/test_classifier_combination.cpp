#include "combo/base_learners.hpp"
#include "combo/classifier_combination.hpp"
#include "combo/data_eval.hpp"

#include "oracles.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace combo;

namespace {

ClassifierPool pool_of(std::initializer_list<const char*> specs) {
  ClassifierPool pool;
  for (const char* s : specs) pool.add(make_classifier(s));
  return pool;
}

std::unique_ptr<Classifier> constant(int label) {
  return std::make_unique<test::FunctionClassifier>([label](const Eigen::RowVectorXd&) { return label; }, 2);
}

Labels to_labels(std::initializer_list<int> v) {
  Labels y(static_cast<Index>(v.size()));
  Index i = 0;
  for (int x : v) y(i++) = x;
  return y;
}

struct Instance {
  Matrix X_train, X_test;
  Labels y_train;
};

Instance random_instance(std::mt19937_64& rng, Index n_train, Index n_test, int classes) {
  Instance in;
  in.X_train = test::random_matrix(rng, n_train, 2);
  in.X_test = test::random_matrix(rng, n_test, 2);
  in.y_train = test::random_labels(rng, n_train, classes);
  return in;
}

std::vector<std::vector<int>> member_rows(const Eigen::MatrixXi& pred) {
  std::vector<std::vector<int>> out(static_cast<std::size_t>(pred.cols()));
  for (Index j = 0; j < pred.cols(); ++j) {
    for (Index i = 0; i < pred.rows(); ++i) out[static_cast<std::size_t>(j)].push_back(pred(i, j));
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Pool

TEST(ClassifierPool, FitsEveryMember) {
  std::mt19937_64 rng(1);
  const Matrix X = test::random_matrix(rng, 10, 2);
  const Labels y = test::random_labels(rng, 10, 2);
  ClassifierPool pool = pool_of({"knn:3", "nb", "tree:2"});
  EXPECT_FALSE(pool.fitted());
  pool.fit(X, y);
  EXPECT_TRUE(pool.fitted());
  for (Index j = 0; j < 3; ++j) EXPECT_EQ(pool[j].state().phase, Phase::Fitted);
  EXPECT_EQ(pool.predict_all(X).cols(), 3);
}

TEST(ClassifierPool, PreFittedIsUntouched) {
  std::mt19937_64 rng(2);
  const Matrix X = test::random_matrix(rng, 30, 2);
  const Labels y = test::random_labels(rng, 30, 2);
  std::vector<std::unique_ptr<Classifier>> members;
  members.push_back(make_classifier("tree:3"));
  members.push_back(make_classifier("logreg:0.1:50"));
  for (auto& m : members) m->fit(X, y);
  ClassifierPool pool(std::move(members), true);
  const Matrix before0 = pool[0].predict_proba(X);
  const Matrix before1 = pool[1].predict_proba(X);

  const Matrix X2 = test::random_matrix(rng, 30, 2);
  const Labels y2 = test::random_labels(rng, 30, 2);
  pool.fit(X2, y2);
  EXPECT_EQ(pool[0].predict_proba(X), before0);
  EXPECT_EQ(pool[1].predict_proba(X), before1);
}

TEST(ClassifierPool, Errors) {
  ClassifierPool pool = pool_of({"knn:1"});
  Labels short_y = Labels::Zero(3);
  try {
    pool.fit(Matrix::Zero(4, 1), short_y);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::LabelShapeMismatch);
  }
  ClassifierPool bad = pool_of({"knn:1", "knn:9"});
  try {
    bad.fit(Matrix::Zero(4, 1), to_labels({0, 1, 0, 1}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::BaseFitFailure);
    EXPECT_NE(std::string(e.what()).find('1'), std::string::npos);
  }
}

// ---------------------------------------------------------------------------
// Averaging and voting

TEST(AverageProba, OppositeMembers) {
  ClassifierPool pool;
  pool.add(constant(0));
  pool.add(constant(1));
  pool.fit(Matrix::Zero(2, 1), to_labels({0, 1}));
  const Matrix p = average_proba(pool, Matrix::Zero(1, 1));
  EXPECT_EQ(p(0, 0), 0.5);
  EXPECT_EQ(p(0, 1), 0.5);
}

TEST(AverageProba, SingleMemberIsIdentity) {
  std::mt19937_64 rng(3);
  const Matrix X = test::random_matrix(rng, 20, 2);
  const Labels y = test::random_labels(rng, 20, 3);
  ClassifierPool pool = pool_of({"nb"});
  pool.fit(X, y);
  EXPECT_EQ(average_proba(pool, X), pool[0].predict_proba(X));
}

TEST(AverageProba, MatchesDumpedMemberMean) {
  const auto ds = generate_two_arcs(120, 0.25, 4);
  ClassifierPool pool = pool_of({"knn:5", "knn:10", "knn:15", "knn:20", "knn:25"});
  pool.fit(ds.X, *ds.y);
  const auto dumped = pool.predict_proba_all(ds.X);
  Matrix mean = Matrix::Zero(ds.X.rows(), 2);
  for (const auto& p : dumped) {
    for (Index i = 0; i < mean.rows(); ++i) {
      for (Index c = 0; c < 2; ++c) mean(i, c) += p(i, c) / 5.0;
    }
  }
  const Matrix avg = average_proba(pool, ds.X);
  EXPECT_TRUE(avg.isApprox(mean, 1e-12));
  EXPECT_TRUE(test::row_stochastic(avg));

  AverageClassifier combined(pool_of({"knn:5", "knn:10", "knn:15", "knn:20", "knn:25"}));
  combined.fit(ds.X, *ds.y);
  EXPECT_EQ(combined.predict(ds.X), argmax_rows(combined.predict_proba(ds.X)));
}

TEST(MajorityVote, Examples) {
  Eigen::MatrixXi a(1, 3);
  a << 0, 1, 1;
  EXPECT_EQ(majority_vote(a)(0), 1);
  Eigen::MatrixXi tie(1, 4);
  tie << 0, 0, 1, 1;
  EXPECT_EQ(majority_vote(tie)(0), 0);
  Vector w(3);
  w << 3, 1, 1;
  EXPECT_EQ(majority_vote(a, w)(0), 0);
  try {
    majority_vote(a, Vector::Zero(3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::AllZeroWeights);
  }
}

TEST(MajorityVote, ProbaMatchesVote) {
  std::mt19937_64 rng(9);
  Eigen::MatrixXi labels(50, 5);
  for (Index i = 0; i < 50; ++i) {
    for (Index j = 0; j < 5; ++j) labels(i, j) = static_cast<int>(rng() % 3);
  }
  const Matrix p = vote_proba(labels, std::nullopt, 3);
  EXPECT_TRUE(test::row_stochastic(p));
  EXPECT_EQ(argmax_rows(p), majority_vote(labels));
  for (Index i = 0; i < 50; ++i) {
    std::vector<int> row;
    for (Index j = 0; j < 5; ++j) row.push_back(labels(i, j));
    EXPECT_EQ(majority_vote(labels)(i), oracle::plurality(row));
  }
}

// ---------------------------------------------------------------------------
// DCS

TEST(Dcs, PicksLocallyAccurateMember) {
  // Truth is x > 0. Constant member 0 is right on the left half only,
  // constant member 1 on the right half only.
  Matrix X(8, 1);
  X << -4, -3, -2, -1, 1, 2, 3, 4;
  const Labels y = to_labels({0, 0, 0, 0, 1, 1, 1, 1});
  ClassifierPool pool;
  pool.add(constant(0));
  pool.add(constant(1));
  DcsClassifier dcs(std::move(pool), 3);
  dcs.fit(X, y);

  Matrix q(2, 1);
  q << -3.5, 3.5;
  EXPECT_EQ(dcs.selected_members(q), (std::vector<Index>{0, 1}));
  EXPECT_EQ(dcs.predict(q), to_labels({0, 1}));

  const auto expected = oracle::dcs(test::to_rows(X), test::to_std(y), {std::vector<int>(8, 0), std::vector<int>(8, 1)},
                                    test::to_rows(q), {{0, 0}, {1, 1}}, 3);
  EXPECT_EQ(test::to_std(dcs.predict(q)), expected);
}

TEST(Dcs, HalfPlaneExperts) {
  std::mt19937_64 rng(21);
  const Matrix X = test::random_matrix(rng, 40, 2, -5, 5);
  Labels y(40);
  for (Index i = 0; i < 40; ++i) y(i) = X(i, 1) > 0 ? 1 : 0;
  // Member 0 knows the truth only for x < 0 (and guesses 1 - truth elsewhere).
  ClassifierPool pool;
  pool.add(std::make_unique<test::FunctionClassifier>(
      [](const Eigen::RowVectorXd& x) { return (x(1) > 0) == (x(0) < 0) ? 1 : 0; }, 2));
  pool.add(std::make_unique<test::FunctionClassifier>(
      [](const Eigen::RowVectorXd& x) { return (x(1) > 0) == (x(0) > 0) ? 1 : 0; }, 2));
  DcsClassifier dcs(std::move(pool), 5);
  dcs.fit(X, y);
  Matrix q(1, 2);
  q << -4.5, 1.0;
  EXPECT_EQ(dcs.selected_members(q)[0], 0);
  EXPECT_EQ(dcs.predict(q)(0), 1);
}

TEST(Dcs, WholeTrainingSetMeansGlobalAccuracy) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    auto in = random_instance(rng, 25, 10, 2);
    DcsClassifier dcs(pool_of({"knn:1", "nb", "tree:1", "dummy"}), 25);
    dcs.fit(in.X_train, in.y_train);
    // Explicit global accuracies of independently fitted members.
    ClassifierPool ref = pool_of({"knn:1", "nb", "tree:1", "dummy"});
    ref.fit(in.X_train, in.y_train);
    const Eigen::MatrixXi train_pred = ref.predict_all(in.X_train);
    Index best = 0;
    int best_hits = -1;
    for (Index j = 0; j < 4; ++j) {
      int hits = 0;
      for (Index i = 0; i < 25; ++i) hits += train_pred(i, j) == in.y_train(i) ? 1 : 0;
      if (hits > best_hits) {
        best = j;
        best_hits = hits;
      }
    }
    for (Index s : dcs.selected_members(in.X_test)) EXPECT_EQ(s, best);
    EXPECT_EQ(dcs.predict(in.X_test), ref[best].predict(in.X_test));
  }
}

TEST(Dcs, IdenticalPoolEqualsMember) {
  std::mt19937_64 rng(6);
  auto in = random_instance(rng, 30, 15, 3);
  DcsClassifier dcs(pool_of({"tree:3", "tree:3", "tree:3"}), 7);
  dcs.fit(in.X_train, in.y_train);
  DecisionTree single(3);
  single.fit(in.X_train, in.y_train);
  EXPECT_EQ(dcs.predict(in.X_test), single.predict(in.X_test));
}

TEST(Dcs, InvalidKLocal) {
  Matrix X = Matrix::Zero(4, 1);
  const Labels y = to_labels({0, 1, 0, 1});
  DcsClassifier zero(pool_of({"dummy", "nb"}), 0);
  EXPECT_THROW(zero.fit(X, y), Error);
  DcsClassifier big(pool_of({"dummy", "nb"}), 5);
  try {
    big.fit(X, y);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::KTooLarge);
  }
  DcsClassifier unfitted(pool_of({"dummy"}), 1);
  EXPECT_THROW(unfitted.predict(X), Error);
}

TEST(Dcs, CodeSnippetPool) {
  const auto ds = generate_two_arcs(100, 0.2, 11);
  DcsClassifier dcs(pool_of({"tree:5", "logreg", "knn:5"}), 5);
  dcs.fit(ds.X, *ds.y);
  EXPECT_EQ(dcs.state().phase, Phase::Fitted);
  EXPECT_TRUE(dcs.pool().fitted());
}

// ---------------------------------------------------------------------------
// DES

TEST(Des, DegenerateSelections) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    auto in = random_instance(rng, 30, 12, 3);
    DcsClassifier dcs(pool_of({"knn:1", "knn:3", "nb"}), 6);
    DesClassifier des1(pool_of({"knn:1", "knn:3", "nb"}), 6, 1);
    DesClassifier des3(pool_of({"knn:1", "knn:3", "nb"}), 6, 3);
    dcs.fit(in.X_train, in.y_train);
    des1.fit(in.X_train, in.y_train);
    des3.fit(in.X_train, in.y_train);
    EXPECT_EQ(des1.predict(in.X_test), dcs.predict(in.X_test));
    EXPECT_EQ(des3.predict(in.X_test), majority_vote(des3.pool().predict_all(in.X_test), std::nullopt, 3));
  }
}

TEST(Des, InvalidNSelect) {
  Matrix X = Matrix::Zero(4, 1);
  const Labels y = to_labels({0, 1, 0, 1});
  DesClassifier zero(pool_of({"dummy", "nb"}), 2, 0);
  EXPECT_THROW(zero.fit(X, y), Error);
  DesClassifier big(pool_of({"dummy", "nb"}), 2, 3);
  EXPECT_THROW(big.fit(X, y), Error);
}

TEST(LocalSelection, MatchesBruteForceOracle) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 30; ++trial) {
    const Index n = 5 + static_cast<Index>(rng() % 26);
    const int k = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(n));
    auto in = random_instance(rng, n, 8, 2 + static_cast<int>(rng() % 2));
    const int classes = in.y_train.maxCoeff() + 1;
    DcsClassifier dcs(pool_of({"knn:1", "tree:2", "nb"}), k);
    DesClassifier des(pool_of({"knn:1", "tree:2", "nb"}), k, 2);
    dcs.fit(in.X_train, in.y_train, classes);
    des.fit(in.X_train, in.y_train, classes);
    const auto train_pred = member_rows(dcs.pool().predict_all(in.X_train));
    const auto test_pred = member_rows(dcs.pool().predict_all(in.X_test));
    const auto rows_train = test::to_rows(in.X_train);
    const auto rows_test = test::to_rows(in.X_test);
    const auto y = test::to_std(in.y_train);
    EXPECT_EQ(test::to_std(dcs.predict(in.X_test)), oracle::dcs(rows_train, y, train_pred, rows_test, test_pred, k));
    EXPECT_EQ(test::to_std(des.predict(in.X_test)), oracle::des(rows_train, y, train_pred, rows_test, test_pred, k, 2));
  }
}

TEST(LocalSelection, ProbaConsistentWithPredict) {
  std::mt19937_64 rng(14);
  auto in = random_instance(rng, 40, 20, 3);
  DcsClassifier dcs(pool_of({"knn:3", "nb", "tree:2"}), 5);
  DesClassifier des(pool_of({"knn:3", "nb", "tree:2"}), 5, 2);
  dcs.fit(in.X_train, in.y_train);
  des.fit(in.X_train, in.y_train);
  for (const Classifier* c : {static_cast<const Classifier*>(&dcs), static_cast<const Classifier*>(&des)}) {
    const Matrix p = c->predict_proba(in.X_test);
    EXPECT_TRUE(test::row_stochastic(p));
    EXPECT_EQ(argmax_rows(p), c->predict(in.X_test));
  }
}

// ---------------------------------------------------------------------------
// Stacking

TEST(Stacking, MetaFeatureShapes) {
  std::mt19937_64 rng(15);
  const Matrix X = test::random_matrix(rng, 8, 2);
  const Labels y = to_labels({0, 1, 0, 1, 0, 1, 0, 1});
  StackingClassifier plain(pool_of({"knn:1", "nb"}), make_classifier("logreg"), 2);
  plain.fit(X, y);
  EXPECT_EQ(plain.train_meta_features().rows(), 8);
  EXPECT_EQ(plain.train_meta_features().cols(), 4);
  EXPECT_EQ(plain.meta_features(X).cols(), 4);

  StackingClassifier wide(pool_of({"knn:1", "nb"}), make_classifier("logreg"), 2, true);
  wide.fit(X, y);
  EXPECT_EQ(wide.train_meta_features().cols(), 6);
  EXPECT_EQ(wide.train_meta_features().rightCols(2), X);
}

TEST(Stacking, FoldsAreBalancedAndSeeded) {
  const auto folds = assign_folds(10, 3, 7);
  std::vector<int> sizes(3, 0);
  for (Index f : folds) ++sizes[static_cast<std::size_t>(f)];
  EXPECT_LE(*std::max_element(sizes.begin(), sizes.end()) - *std::min_element(sizes.begin(), sizes.end()), 1);
  EXPECT_EQ(folds, assign_folds(10, 3, 7));
  EXPECT_THROW(assign_folds(3, 4, 0), Error);
  EXPECT_THROW(assign_folds(3, 1, 0), Error);
}

TEST(Stacking, OutOfFoldFeaturesHaveNoLeakage) {
  const auto ds = generate_two_arcs(60, 0.3, 2);
  const Labels& y = *ds.y;
  StackingClassifier st(pool_of({"knn:3", "tree:2"}), make_classifier("logreg"), 3, false, 99);
  st.fit(ds.X, y);
  const auto& fold = st.fold_of();
  const Matrix& meta = st.train_meta_features();
  for (Index f = 0; f < 3; ++f) {
    std::vector<Index> tr, te;
    for (Index i = 0; i < 60; ++i) (fold[static_cast<std::size_t>(i)] == f ? te : tr).push_back(i);
    const Matrix Xtr = ds.X(tr, Eigen::all);
    const Labels ytr = y(tr);
    const Matrix Xte = ds.X(te, Eigen::all);
    const char* specs[] = {"knn:3", "tree:2"};
    for (Index j = 0; j < 2; ++j) {
      auto member = make_classifier(specs[j]);
      member->fit(Xtr, ytr, 2);
      const Matrix p = member->predict_proba(Xte);
      for (std::size_t r = 0; r < te.size(); ++r) {
        for (Index c = 0; c < 2; ++c) EXPECT_EQ(meta(te[r], j * 2 + c), p(static_cast<Index>(r), c));
      }
    }
  }
}

TEST(Stacking, DummyMetaIsConstant) {
  std::mt19937_64 rng(16);
  auto in = random_instance(rng, 40, 25, 2);
  StackingClassifier st(pool_of({"knn:3", "nb"}), make_classifier("dummy"), 4);
  st.fit(in.X_train, in.y_train);
  const Labels pred = st.predict(in.X_test);
  EXPECT_TRUE((pred.array() == pred(0)).all());
}

TEST(Stacking, SeparableBlobs) {
  Vector a(2), b(2);
  a << -3, -3;
  b << 3, 3;
  const auto ds = generate_blobs(200, {{a, 1.0}, {b, 1.0}}, 5);
  const auto split = train_test_split(ds, {0.3, 5, true});
  StackingClassifier st(pool_of({"knn:5", "nb", "tree:3"}), make_classifier("logreg"), 4, false, 5);
  st.fit(split.train.X, *split.train.y);
  EXPECT_GE(accuracy(*split.test.y, st.predict(split.test.X)), 0.9);
  const Matrix p = st.predict_proba(split.test.X);
  EXPECT_TRUE(test::row_stochastic(p));
  EXPECT_EQ(argmax_rows(p), st.predict(split.test.X));
}

TEST(Stacking, FoldTooSmall) {
  StackingClassifier st(pool_of({"dummy"}), make_classifier("dummy"), 5);
  try {
    st.fit(Matrix::Zero(4, 1), to_labels({0, 1, 0, 1}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::FoldTooSmall);
  }
}

TEST(Combiners, DeterministicRefits) {
  const auto ds = generate_two_arcs(80, 0.3, 3);
  auto build = [] {
    std::vector<std::unique_ptr<Classifier>> out;
    out.push_back(std::make_unique<AverageClassifier>(pool_of({"knn:3", "nb"})));
    out.push_back(std::make_unique<MajorityVoteClassifier>(pool_of({"knn:3", "nb", "tree:2"})));
    out.push_back(std::make_unique<DcsClassifier>(pool_of({"knn:3", "nb"}), 5));
    out.push_back(std::make_unique<DesClassifier>(pool_of({"knn:3", "nb", "tree:2"}), 5, 2));
    out.push_back(std::make_unique<StackingClassifier>(pool_of({"knn:3", "nb"}), make_classifier("logreg"), 4, true, 3));
    return out;
  };
  auto a = build();
  auto b = build();
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i]->fit(ds.X, *ds.y);
    b[i]->fit(ds.X, *ds.y);
    EXPECT_EQ(a[i]->predict_proba(ds.X), b[i]->predict_proba(ds.X)) << a[i]->name();
    EXPECT_TRUE(test::row_stochastic(a[i]->predict_proba(ds.X))) << a[i]->name();
    auto fresh = a[i]->clone_unfitted();
    EXPECT_EQ(fresh->state().phase, Phase::Unfitted);
  }
}
