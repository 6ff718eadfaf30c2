#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace hiermtl {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class TaskKind { regression, binary, relative };

const char* to_string(TaskKind kind) noexcept;
TaskKind parse_task_kind(std::string_view text);

// One (attribute, user) subtask. For relative tasks each feature row is
// already a pair difference.
struct SubtaskData {
  std::size_t attribute_index = 0;
  std::size_t user_index = 0;
  Matrix features;
  Vector responses;

  std::size_t rows() const { return static_cast<std::size_t>(features.rows()); }
};

// Subtasks are stored attribute-major, user-minor, which is also the column
// layout of the user-bias matrix.
class MultiTaskDataset {
 public:
  MultiTaskDataset() = default;
  MultiTaskDataset(TaskKind kind, std::size_t dim, std::vector<std::size_t> users_per_attribute,
                   std::vector<SubtaskData> subtasks);

  TaskKind kind() const { return kind_; }
  std::size_t dim() const { return dim_; }
  std::size_t n_attributes() const { return users_per_attribute_.size(); }
  std::size_t n_users() const { return subtasks_.size(); }
  const std::vector<std::size_t>& users_per_attribute() const { return users_per_attribute_; }

  const std::vector<SubtaskData>& subtasks() const { return subtasks_; }
  const SubtaskData& subtask(std::size_t flat_index) const { return subtasks_.at(flat_index); }
  const SubtaskData& subtask(std::size_t attribute, std::size_t user) const;

  // First flat subtask index (and U column) belonging to `attribute`.
  std::size_t attribute_offset(std::size_t attribute) const { return offsets_.at(attribute); }
  std::size_t min_rows() const;
  std::size_t total_rows() const;

  const std::vector<std::string>& attribute_names() const { return attribute_names_; }
  const std::vector<std::vector<std::string>>& user_names() const { return user_names_; }
  void set_names(std::vector<std::string> attribute_names, std::vector<std::vector<std::string>> user_names);

  // Same layout with every subtask reduced to the listed rows (in order).
  MultiTaskDataset select_rows(const std::vector<std::vector<std::size_t>>& rows_per_subtask) const;

 private:
  TaskKind kind_ = TaskKind::regression;
  std::size_t dim_ = 0;
  std::vector<std::size_t> users_per_attribute_;
  std::vector<std::size_t> offsets_;
  std::vector<SubtaskData> subtasks_;
  std::vector<std::string> attribute_names_;
  std::vector<std::vector<std::string>> user_names_;
};

struct ZeroColumnWarning {
  std::size_t subtask = 0;
  std::size_t column = 0;
};

struct NormalizedDataset {
  MultiTaskDataset dataset;
  std::vector<ZeroColumnWarning> warnings;
};

// Rescales every column of every subtask to unit Euclidean norm. Zero columns
// are left untouched and reported.
NormalizedDataset normalize_columns(const MultiTaskDataset& dataset);

Vector make_pairwise(const Vector& first, const Vector& second);
Matrix make_pairwise_rows(const Matrix& first, const Matrix& second);

struct RowSplit {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

// ceil(fraction * n) rows go to train (clamped so both sides are non-empty).
// Index lists are sorted.
RowSplit split_rows(std::size_t n, double train_fraction, std::uint64_t seed);

// Shuffled k-fold partition of 0..n-1; each fold is sorted and folds differ
// in size by at most one.
std::vector<std::vector<std::size_t>> kfold_partition(std::size_t n, std::size_t folds, std::uint64_t seed);

struct TrainTestSplit {
  MultiTaskDataset train;
  MultiTaskDataset test;
};

TrainTestSplit split_train_test(const MultiTaskDataset& dataset, double train_fraction, std::uint64_t seed);

}  // namespace hiermtl
