#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "hiermtl/error.hpp"
#include "hiermtl/objective.hpp"
#include "test_util.hpp"

using namespace hiermtl;
using hiermtl::fixture::identity_dataset;
using hiermtl::fixture::random_dataset;
using hiermtl::fixture::random_weights;

TEST(Weights, ComposeFollowsLayout) {
  WeightDecomposition w(2, {1, 2});
  w.theta << 1, 2;
  w.p << 10, 20, 30, 40;
  w.u << 100, 200, 300, 400, 500, 600;
  Vector expect(2);
  expect << 1 + 20 + 300, 2 + 40 + 600;  // attribute 1, user 1 -> U column 2
  EXPECT_EQ(w.compose(1, 1), expect);
  EXPECT_EQ(w.compose_flat(2), expect);
  EXPECT_EQ(w.attribute_of(0), 0u);
  EXPECT_EQ(w.attribute_of(2), 1u);
  EXPECT_EQ(w.users_in_attribute(1), 2u);
}

TEST(Weights, FlattenRoundTrips) {
  std::mt19937_64 rng(1);
  const auto ds = random_dataset(rng, 3, {2, 1}, 4);
  const WeightDecomposition w = random_weights(rng, ds);
  EXPECT_EQ(w.flat_size(), 3u + 6u + 9u);
  WeightDecomposition v = WeightDecomposition::zeros_like(ds);
  v.assign_flat(w.flatten());
  EXPECT_EQ(v.theta, w.theta);
  EXPECT_EQ(v.p, w.p);
  EXPECT_EQ(v.u, w.u);
  EXPECT_NEAR(squared_norm(w), w.flatten().squaredNorm(), 1e-12);
  const WeightDecomposition s = 2.0 * w - w;
  EXPECT_TRUE(s.flatten().isApprox(w.flatten()));
}

TEST(Loss, IdentityExample) {
  const auto ds = identity_dataset();
  EXPECT_DOUBLE_EQ(loss(ds, WeightDecomposition::zeros_like(ds)), 5.0);
  EXPECT_DOUBLE_EQ(objective_value(ds, WeightDecomposition::zeros_like(ds), {1, 1, 1}), 5.0);
}

TEST(Loss, ExactWeightsGiveZero) {
  const auto ds = identity_dataset();
  WeightDecomposition w = WeightDecomposition::zeros_like(ds);
  w.u.col(0) << 1, 2;
  EXPECT_EQ(loss(ds, w), 0.0);
  const GradientBundle g = gradient(ds, w);
  EXPECT_TRUE(g.g_theta.isZero(0.0));
  EXPECT_TRUE(g.g_p.isZero(0.0));
  EXPECT_TRUE(g.g_u.isZero(0.0));
  EXPECT_EQ(objective_value(ds, w, {0, 0, 0}), 0.0);
}

TEST(Loss, DuplicateSubtaskDoubles) {
  std::mt19937_64 rng(2);
  const auto one = random_dataset(rng, 3, {1}, 5);
  const MultiTaskDataset two(TaskKind::regression, 3, {2}, {one.subtask(0), [&] {
                               SubtaskData s = one.subtask(0);
                               s.user_index = 1;
                               return s;
                             }()});
  WeightDecomposition w1 = random_weights(rng, one);
  WeightDecomposition w2 = WeightDecomposition::zeros_like(two);
  w2.theta = w1.theta;
  w2.p = w1.p;
  w2.u.col(0) = w1.u.col(0);
  w2.u.col(1) = w1.u.col(0);
  EXPECT_DOUBLE_EQ(loss(two, w2), 2.0 * loss(one, w1));
}

TEST(Loss, AdditiveOverSubtasks) {
  std::mt19937_64 rng(3);
  const auto ds = random_dataset(rng, 4, {2, 3}, 6);
  const auto w = random_weights(rng, ds);
  const LeastSquaresObjective obj(ds);
  double sum = 0.0;
  for (std::size_t k = 0; k < ds.n_users(); ++k) {
    const auto& s = ds.subtask(k);
    sum += (s.responses - s.features * w.compose_flat(k)).squaredNorm();
  }
  EXPECT_NEAR(obj.loss(w), sum, 1e-10 * sum);
  double parts = 0.0;
  for (double v : obj.subtask_losses(w)) parts += v;
  EXPECT_NEAR(parts, sum, 1e-10 * sum);
}

TEST(Loss, RejectsNonFinite) {
  auto ds = identity_dataset();
  WeightDecomposition w = WeightDecomposition::zeros_like(ds);
  w.theta(0) = std::numeric_limits<double>::quiet_NaN();
  try {
    loss(ds, w);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonFiniteValue);
  }
  SubtaskData s = ds.subtask(0);
  s.features(0, 0) = std::numeric_limits<double>::infinity();
  const MultiTaskDataset bad(TaskKind::regression, 2, {1}, {s});
  EXPECT_THROW(LeastSquaresObjective{bad}, Error);
}

TEST(Regularizer, Examples) {
  auto ds = identity_dataset();
  WeightDecomposition w = WeightDecomposition::zeros_like(ds);
  EXPECT_EQ(regularizer(w, {1, 1, 1}), 0.0);
  w.theta << 1, -1;
  EXPECT_DOUBLE_EQ(regularizer(w, {1, 1, 1}), 2.0);
  WeightDecomposition q(2, {1, 1});
  q.p.row(0) << 3, 4;
  EXPECT_DOUBLE_EQ(regularizer(q, {0, 1, 0}), 5.0);
  q.u.col(1) << 6, 8;
  EXPECT_DOUBLE_EQ(regularizer(q, {0, 1, 2}), 25.0);
  try {
    regularizer(q, {0, -1, 0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NegativeLambda);
  }
}

TEST(Objective, BoundsItsParts) {
  std::mt19937_64 rng(4);
  const auto ds = random_dataset(rng, 3, {2}, 5);
  for (int i = 0; i < 20; ++i) {
    const auto w = random_weights(rng, ds);
    const double f = objective_value(ds, w, {0.5, 1.0, 2.0});
    EXPECT_GE(f, loss(ds, w));
    EXPECT_GE(f, regularizer(w, {0.5, 1.0, 2.0}));
  }
}

TEST(Gradient, IdentityExample) {
  const auto ds = identity_dataset();
  const GradientBundle g = gradient(ds, WeightDecomposition::zeros_like(ds));
  Vector expect(2);
  expect << -2, -4;
  EXPECT_EQ(g.g_theta, expect);
  EXPECT_EQ(Vector(g.g_p.col(0)), expect);
  EXPECT_EQ(Vector(g.g_u.col(0)), expect);
}

TEST(Gradient, MatchesCentralDifferences) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const auto ds = random_dataset(rng, 4, {2, 1}, 6);
    const auto w = random_weights(rng, ds);
    const Vector g = flatten(gradient(ds, w));
    const Vector x = w.flatten();
    Vector fd(x.size());
    WeightDecomposition probe = w;
    const double h = 1e-6;
    for (Eigen::Index k = 0; k < x.size(); ++k) {
      Vector xp = x, xm = x;
      xp(k) += h;
      xm(k) -= h;
      probe.assign_flat(xp);
      const double lp = loss(ds, probe);
      probe.assign_flat(xm);
      fd(k) = (lp - loss(ds, probe)) / (2 * h);
    }
    EXPECT_LE((fd - g).norm() / g.norm(), 1e-5);
  }
}

TEST(Lipschitz, IdentityExample) {
  EXPECT_NEAR(lipschitz_bound(identity_dataset()), 6.0 * std::sqrt(3.0), 1e-9);
}

TEST(Lipschitz, ScalesQuadratically) {
  std::mt19937_64 rng(6);
  const auto ds = random_dataset(rng, 3, {2}, 5);
  std::vector<SubtaskData> scaled = ds.subtasks();
  for (auto& s : scaled) s.features *= 2.0;
  const MultiTaskDataset ds2(TaskKind::regression, 3, {2}, scaled);
  EXPECT_NEAR(lipschitz_bound(ds2), 4.0 * lipschitz_bound(ds), 1e-8 * lipschitz_bound(ds2));
}

TEST(Lipschitz, SingularValueMatchesSvd) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 10; ++i) {
    const Matrix x = fixture::gaussian_matrix(rng, 7, 4);
    const double ref = Eigen::JacobiSVD<Matrix>(x).singularValues()(0);
    EXPECT_NEAR(largest_singular_value(x), ref, 1e-8 * ref);
  }
  EXPECT_EQ(largest_singular_value(Matrix::Zero(3, 2)), 0.0);
}

TEST(Lipschitz, BoundsGradientDifferences) {
  std::mt19937_64 rng(8);
  const auto ds = random_dataset(rng, 3, {2, 2}, 5);
  const LeastSquaresObjective obj(ds);
  const double rho = lipschitz_bound(ds);
  for (int i = 0; i < 1000; ++i) {
    const auto a = random_weights(rng, ds, 3.0);
    const auto b = random_weights(rng, ds, 3.0);
    const double lhs = (flatten(obj.gradient(a)) - flatten(obj.gradient(b))).norm();
    EXPECT_LE(lhs, rho * std::sqrt(squared_norm(a - b)));
  }
}

TEST(Objective, MidpointConvexity) {
  std::mt19937_64 rng(9);
  const auto ds = random_dataset(rng, 3, {2, 1}, 4);
  const Penalties lam{0.7, 1.3, 0.4};
  for (int i = 0; i < 200; ++i) {
    const auto a = random_weights(rng, ds);
    const auto b = random_weights(rng, ds);
    const double mid = objective_value(ds, 0.5 * (a + b), lam);
    EXPECT_LE(mid, 0.5 * objective_value(ds, a, lam) + 0.5 * objective_value(ds, b, lam) + 1e-9);
  }
}

TEST(Majorizer, UpperBoundsLossAtLipschitzCurvature) {
  std::mt19937_64 rng(10);
  const auto ds = random_dataset(rng, 3, {2}, 5);
  const double rho = lipschitz_bound(ds);
  for (int i = 0; i < 100; ++i) {
    const auto ref = random_weights(rng, ds);
    const auto cand = random_weights(rng, ds);
    const double m = majorizer(loss(ds, ref), gradient(ds, ref), ref, cand, rho);
    EXPECT_LE(loss(ds, cand), m * (1 + 1e-12));
  }
  const auto ref = random_weights(rng, ds);
  EXPECT_DOUBLE_EQ(majorizer(loss(ds, ref), gradient(ds, ref), ref, ref, rho), loss(ds, ref));
}

TEST(PairwiseSum, MatchesNaiveSum) {
  std::vector<double> v;
  for (int i = 1; i <= 100; ++i) v.push_back(i);
  EXPECT_EQ(pairwise_sum(v), 5050.0);
  EXPECT_EQ(pairwise_sum({}), 0.0);
}
