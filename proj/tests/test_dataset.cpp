#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "hiermtl/dataset.hpp"
#include "hiermtl/error.hpp"
#include "test_util.hpp"

using namespace hiermtl;

namespace {

SubtaskData make_subtask(std::size_t a, std::size_t u, Matrix x, Vector y) {
  SubtaskData s;
  s.attribute_index = a;
  s.user_index = u;
  s.features = std::move(x);
  s.responses = std::move(y);
  return s;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::IoError;
}

}  // namespace

TEST(TaskKind, RoundTripsNames) {
  for (TaskKind k : {TaskKind::regression, TaskKind::binary, TaskKind::relative})
    EXPECT_EQ(parse_task_kind(to_string(k)), k);
  EXPECT_EQ(code_of([] { parse_task_kind("ordinal"); }), ErrorCode::UnknownTaskKind);
}

TEST(MultiTaskDataset, ExposesLayout) {
  std::mt19937_64 rng(1);
  const auto ds = fixture::random_dataset(rng, 3, {2, 3}, 4);
  EXPECT_EQ(ds.n_users(), 5u);
  EXPECT_EQ(ds.n_attributes(), 2u);
  EXPECT_EQ(ds.attribute_offset(0), 0u);
  EXPECT_EQ(ds.attribute_offset(1), 2u);
  EXPECT_EQ(ds.subtask(1, 2).attribute_index, 1u);
  EXPECT_EQ(ds.subtask(1, 2).user_index, 2u);
  EXPECT_EQ(&ds.subtask(1, 2), &ds.subtask(4));
  EXPECT_EQ(ds.total_rows(), 20u);
  EXPECT_EQ(ds.attribute_names()[0], "attr1");
  EXPECT_EQ(ds.user_names()[1][2], "user3");
}

TEST(MultiTaskDataset, RejectsInconsistentShapes) {
  const Matrix x = Matrix::Ones(3, 2);
  const Vector y = Vector::Ones(3);
  EXPECT_EQ(code_of([&] { MultiTaskDataset(TaskKind::regression, 2, {1}, {make_subtask(0, 0, x, Vector::Ones(2))}); }),
            ErrorCode::ShapeMismatch);
  EXPECT_EQ(code_of([&] { MultiTaskDataset(TaskKind::regression, 3, {1}, {make_subtask(0, 0, x, y)}); }),
            ErrorCode::ShapeMismatch);
  EXPECT_EQ(code_of([&] { MultiTaskDataset(TaskKind::regression, 2, {2}, {make_subtask(0, 0, x, y)}); }),
            ErrorCode::ShapeMismatch);
  // wrong ordering: user-major instead of attribute-major
  EXPECT_EQ(code_of([&] {
              MultiTaskDataset(TaskKind::regression, 2, {1, 1}, {make_subtask(1, 0, x, y), make_subtask(0, 0, x, y)});
            }),
            ErrorCode::ShapeMismatch);
}

TEST(NormalizeColumns, RescalesSingleColumn) {
  Matrix x(2, 1);
  x << 3.0, 4.0;
  const MultiTaskDataset ds(TaskKind::regression, 1, {1}, {make_subtask(0, 0, x, Vector::Ones(2))});
  const auto n = normalize_columns(ds);
  EXPECT_NEAR(n.dataset.subtask(0).features(0, 0), 0.6, 1e-15);
  EXPECT_NEAR(n.dataset.subtask(0).features(1, 0), 0.8, 1e-15);
  EXPECT_TRUE(n.warnings.empty());
  EXPECT_EQ(ds.subtask(0).features(0, 0), 3.0);  // input untouched
}

TEST(NormalizeColumns, IdentityUnchanged) {
  const auto n = normalize_columns(fixture::identity_dataset());
  EXPECT_EQ(n.dataset.subtask(0).features, Matrix::Identity(2, 2));
}

TEST(NormalizeColumns, ZeroColumnWarned) {
  Matrix x(2, 2);
  x << 0.0, 1.0, 0.0, 1.0;
  const MultiTaskDataset ds(TaskKind::regression, 2, {1}, {make_subtask(0, 0, x, Vector::Ones(2))});
  const auto n = normalize_columns(ds);
  ASSERT_EQ(n.warnings.size(), 1u);
  EXPECT_EQ(n.warnings[0].subtask, 0u);
  EXPECT_EQ(n.warnings[0].column, 0u);
  EXPECT_TRUE(n.dataset.subtask(0).features.col(0).isZero(0.0));
}

TEST(NormalizeColumns, UnitNormsOnRandomData) {
  std::mt19937_64 rng(2);
  const auto ds = fixture::random_dataset(rng, 7, {3, 2}, 11);
  const auto n = normalize_columns(ds);
  for (const auto& s : n.dataset.subtasks())
    for (Eigen::Index c = 0; c < s.features.cols(); ++c) EXPECT_NEAR(s.features.col(c).squaredNorm(), 1.0, 1e-12);
}

TEST(Pairwise, Examples) {
  Vector a(2), b(2);
  a << 1, 2;
  b << 0, 1;
  EXPECT_EQ(make_pairwise(a, b), Vector::Ones(2));
  EXPECT_TRUE(make_pairwise(a, a).isZero(0.0));
  a << 0.5, -1;
  b << 1, 1;
  Vector expect(2);
  expect << -0.5, -2;
  EXPECT_EQ(make_pairwise(a, b), expect);
  EXPECT_EQ(code_of([] { make_pairwise(Vector::Ones(2), Vector::Ones(3)); }), ErrorCode::DimensionMismatch);
  EXPECT_EQ(code_of([] { make_pairwise_rows(Matrix::Ones(2, 2), Matrix::Ones(3, 2)); }), ErrorCode::DimensionMismatch);
}

TEST(SplitRows, CountsUseCeiling) {
  EXPECT_EQ(split_rows(10, 0.4, 1).train.size(), 4u);
  EXPECT_EQ(split_rows(10, 0.8, 1).train.size(), 8u);
  EXPECT_EQ(split_rows(10, 0.8, 1).test.size(), 2u);
  EXPECT_EQ(split_rows(7, 0.4, 1).train.size(), 3u);  // ceil(2.8)
  EXPECT_EQ(split_rows(2, 0.99, 1).test.size(), 1u);   // both halves non-empty
}

TEST(SplitRows, PartitionsAndIsDeterministic) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto s = split_rows(37, 0.4, seed);
    std::vector<std::size_t> all = s.train;
    all.insert(all.end(), s.test.begin(), s.test.end());
    std::sort(all.begin(), all.end());
    std::vector<std::size_t> expect(37);
    std::iota(expect.begin(), expect.end(), 0);
    EXPECT_EQ(all, expect);
    EXPECT_TRUE(std::is_sorted(s.train.begin(), s.train.end()));
    const auto again = split_rows(37, 0.4, seed);
    EXPECT_EQ(s.train, again.train);
  }
  EXPECT_NE(split_rows(37, 0.4, 1).train, split_rows(37, 0.4, 2).train);
}

TEST(SplitRows, RejectsBadInput) {
  EXPECT_EQ(code_of([] { split_rows(1, 0.5, 0); }), ErrorCode::TooFewSamples);
  EXPECT_EQ(code_of([] { split_rows(10, 0.0, 0); }), ErrorCode::InvalidConfig);
  EXPECT_EQ(code_of([] { split_rows(10, 1.0, 0); }), ErrorCode::InvalidConfig);
}

TEST(KFold, PartitionsEvenly) {
  const auto folds = kfold_partition(10, 3, 5);
  ASSERT_EQ(folds.size(), 3u);
  std::vector<std::size_t> all;
  for (const auto& f : folds) {
    EXPECT_GE(f.size(), 3u);
    EXPECT_LE(f.size(), 4u);
    EXPECT_TRUE(std::is_sorted(f.begin(), f.end()));
    all.insert(all.end(), f.begin(), f.end());
  }
  std::sort(all.begin(), all.end());
  for (std::size_t i = 0; i < 10; ++i) EXPECT_EQ(all[i], i);
  EXPECT_EQ(code_of([] { kfold_partition(10, 1, 0); }), ErrorCode::InvalidConfig);
  EXPECT_EQ(code_of([] { kfold_partition(2, 3, 0); }), ErrorCode::TooFewSamples);
}

TEST(SplitTrainTest, SplitsEverySubtask) {
  std::mt19937_64 rng(3);
  const auto ds = fixture::random_dataset(rng, 2, {2, 1}, 10);
  const auto split = split_train_test(ds, 0.4, 9);
  for (std::size_t k = 0; k < ds.n_users(); ++k) {
    EXPECT_EQ(split.train.subtask(k).rows(), 4u);
    EXPECT_EQ(split.test.subtask(k).rows(), 6u);
    // every original row appears in exactly one half
    std::size_t found = 0;
    for (Eigen::Index r = 0; r < 10; ++r) {
      const double y = ds.subtask(k).responses(r);
      found += (split.train.subtask(k).responses.array() == y).count();
      found += (split.test.subtask(k).responses.array() == y).count();
    }
    EXPECT_EQ(found, 10u);
  }
  const auto again = split_train_test(ds, 0.4, 9);
  EXPECT_EQ(split.train.subtask(2).features, again.train.subtask(2).features);
}

TEST(SelectRows, KeepsOrder) {
  std::mt19937_64 rng(4);
  const auto ds = fixture::random_dataset(rng, 2, {1}, 5);
  const auto sub = ds.select_rows({{4, 1}});
  EXPECT_EQ(sub.subtask(0).features.row(0), ds.subtask(0).features.row(4));
  EXPECT_EQ(sub.subtask(0).responses(1), ds.subtask(0).responses(1));
  EXPECT_EQ(code_of([&] { ds.select_rows({{5}}); }), ErrorCode::ShapeMismatch);
}
