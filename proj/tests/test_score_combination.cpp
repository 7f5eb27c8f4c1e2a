#include "combo/score_combination.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace combo;

namespace {

Matrix m2x2() {
  Matrix s(2, 2);
  s << 1, 3, 2, 4;
  return s;
}

Matrix row(std::initializer_list<double> values) {
  Matrix s(1, static_cast<Index>(values.size()));
  Index j = 0;
  for (double v : values) s(0, j++) = v;
  return s;
}

}  // namespace

TEST(Average, UnweightedAndWeighted) {
  const Vector plain = average(m2x2());
  EXPECT_EQ(plain(0), 2.0);
  EXPECT_EQ(plain(1), 3.0);
  Vector w(2);
  w << 1, 0;
  const Vector weighted = average(m2x2(), std::optional<Vector>(w));
  EXPECT_EQ(weighted(0), 1.0);
  EXPECT_EQ(weighted(1), 2.0);
}

TEST(Average, SingleColumnIsIdentity) {
  Matrix s(3, 1);
  s << 0.25, -4, 7;
  EXPECT_EQ(average(s), s.col(0));
}

TEST(Average, WeightErrors) {
  Vector zero = Vector::Zero(2);
  try {
    average(m2x2(), std::optional<Vector>(zero));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::AllZeroWeights);
  }
  Vector wrong = Vector::Ones(3);
  try {
    average(m2x2(), std::optional<Vector>(wrong));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::ShapeMismatch);
  }
}

TEST(Maximization, Examples) {
  const Vector out = maximization(m2x2());
  EXPECT_EQ(out(0), 3.0);
  EXPECT_EQ(out(1), 4.0);
  EXPECT_EQ(maximization(row({-5, -1}))(0), -1.0);
  EXPECT_THROW(maximization(Matrix(0, 2)), Error);
}

TEST(Median, OddAndEvenCounts) {
  EXPECT_EQ(median(row({1, 2, 9}))(0), 2.0);
  EXPECT_EQ(median(row({1, 2, 3, 10}))(0), 2.5);
  EXPECT_EQ(median(row({10, 3, 1, 2}))(0), 2.5);
}

TEST(AomMoa, WorkedExample) {
  const Matrix s = row({0.1, 0.9, 0.3, 0.5});
  const auto plan = BucketPlan::contiguous(4, 2);
  EXPECT_DOUBLE_EQ(aom(s, plan)(0), 0.7);
  EXPECT_DOUBLE_EQ(moa(s, plan)(0), 0.5);
}

TEST(BucketPlan, ContiguousSizes) {
  const auto plan = BucketPlan::contiguous(7, 3);
  ASSERT_EQ(plan.n_buckets(), 3);
  EXPECT_EQ(plan.buckets[0], (std::vector<Index>{0, 1, 2}));
  EXPECT_EQ(plan.buckets[1], (std::vector<Index>{3, 4}));
  EXPECT_EQ(plan.buckets[2], (std::vector<Index>{5, 6}));
  EXPECT_THROW(BucketPlan::contiguous(3, 4), Error);
  EXPECT_THROW(BucketPlan::contiguous(3, 0), Error);
}

TEST(BucketPlan, RandomIsSeededPartition) {
  const auto a = BucketPlan::random(9, 4, 42);
  const auto b = BucketPlan::random(9, 4, 42);
  EXPECT_EQ(a.buckets, b.buckets);
  EXPECT_NO_THROW(a.validate(9));
}

TEST(BucketPlan, ValidateRejectsBadPartitions) {
  BucketPlan overlap{{{0, 1}, {1, 2}}};
  BucketPlan missing{{{0}, {2}}};
  BucketPlan empty_bucket{{{0, 1, 2}, {}}};
  for (const auto* plan : {&overlap, &missing, &empty_bucket}) {
    try {
      plan->validate(3);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::InvalidPartition);
    }
  }
  EXPECT_THROW(aom(Matrix::Ones(2, 3), overlap), Error);
}

TEST(ScoreCombination, DegenerateIdentitiesAreExact) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = 1 + static_cast<Index>(rng() % 30);
    const Index m = 1 + static_cast<Index>(rng() % 8);
    const Matrix s = test::random_matrix(rng, n, m, -5, 5);
    EXPECT_EQ(aom(s, BucketPlan::contiguous(m, 1)), maximization(s));
    EXPECT_EQ(aom(s, BucketPlan::contiguous(m, m)), average(s));
    EXPECT_EQ(moa(s, BucketPlan::contiguous(m, 1)), average(s));
    EXPECT_EQ(moa(s, BucketPlan::contiguous(m, m)), maximization(s));
  }
}

TEST(ScoreCombination, PermutationInvariance) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const Index n = 1 + static_cast<Index>(rng() % 10);
    const Index m = 2 + static_cast<Index>(rng() % 6);
    const Matrix s = test::random_matrix(rng, n, m);
    std::vector<Index> perm(static_cast<std::size_t>(m));
    std::iota(perm.begin(), perm.end(), Index{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    const Matrix p = s(Eigen::all, perm);
    EXPECT_TRUE(average(p).isApprox(average(s), 1e-12));
    EXPECT_EQ(maximization(p), maximization(s));
    EXPECT_EQ(median(p), median(s));

    // Reversing each bucket's members and the bucket order leaves aom unchanged.
    const auto plan = BucketPlan::contiguous(m, 2);
    BucketPlan shuffled;
    for (auto it = plan.buckets.rbegin(); it != plan.buckets.rend(); ++it) {
      shuffled.buckets.emplace_back(it->rbegin(), it->rend());
    }
    EXPECT_TRUE(aom(s, shuffled).isApprox(aom(s, plan), 1e-12));
    EXPECT_TRUE(moa(s, shuffled).isApprox(moa(s, plan), 1e-12));
  }
}
