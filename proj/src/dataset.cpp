#include "hiermtl/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hiermtl/error.hpp"
#include "hiermtl/random.hpp"

namespace hiermtl {

const char* to_string(TaskKind kind) noexcept {
  switch (kind) {
    case TaskKind::regression: return "regression";
    case TaskKind::binary: return "binary";
    case TaskKind::relative: return "relative";
  }
  return "regression";
}

TaskKind parse_task_kind(std::string_view text) {
  if (text == "regression") return TaskKind::regression;
  if (text == "binary") return TaskKind::binary;
  if (text == "relative") return TaskKind::relative;
  throw Error(ErrorCode::UnknownTaskKind, "unknown task kind '" + std::string(text) + "'");
}

MultiTaskDataset::MultiTaskDataset(TaskKind kind, std::size_t dim, std::vector<std::size_t> users_per_attribute,
                                   std::vector<SubtaskData> subtasks)
    : kind_(kind), dim_(dim), users_per_attribute_(std::move(users_per_attribute)), subtasks_(std::move(subtasks)) {
  const std::size_t total = std::accumulate(users_per_attribute_.begin(), users_per_attribute_.end(), std::size_t{0});
  if (total != subtasks_.size()) {
    throw Error(ErrorCode::ShapeMismatch, "user counts sum to " + std::to_string(total) + " but " +
                                              std::to_string(subtasks_.size()) + " subtasks were given");
  }
  offsets_.resize(users_per_attribute_.size());
  std::size_t flat = 0;
  for (std::size_t i = 0; i < users_per_attribute_.size(); ++i) {
    offsets_[i] = flat;
    if (users_per_attribute_[i] == 0) {
      throw Error(ErrorCode::ShapeMismatch, "attribute " + std::to_string(i) + " has no users");
    }
    for (std::size_t j = 0; j < users_per_attribute_[i]; ++j, ++flat) {
      const auto& s = subtasks_[flat];
      if (s.attribute_index != i || s.user_index != j) {
        throw Error(ErrorCode::ShapeMismatch, "subtask " + std::to_string(flat) +
                                                  " is out of attribute-major order");
      }
      if (static_cast<std::size_t>(s.features.cols()) != dim_) {
        throw Error(ErrorCode::ShapeMismatch, "subtask " + std::to_string(flat) + " has " +
                                                  std::to_string(s.features.cols()) + " columns, expected " +
                                                  std::to_string(dim_));
      }
      if (s.features.rows() != s.responses.size()) {
        throw Error(ErrorCode::ShapeMismatch, "subtask " + std::to_string(flat) +
                                                  ": feature rows differ from response length");
      }
    }
  }
  set_names({}, {});
}

const SubtaskData& MultiTaskDataset::subtask(std::size_t attribute, std::size_t user) const {
  if (attribute >= n_attributes() || user >= users_per_attribute_[attribute]) {
    throw Error(ErrorCode::ShapeMismatch, "subtask index out of range");
  }
  return subtasks_[offsets_[attribute] + user];
}

std::size_t MultiTaskDataset::min_rows() const {
  std::size_t m = subtasks_.empty() ? 0 : subtasks_.front().rows();
  for (const auto& s : subtasks_) m = std::min(m, s.rows());
  return m;
}

std::size_t MultiTaskDataset::total_rows() const {
  std::size_t n = 0;
  for (const auto& s : subtasks_) n += s.rows();
  return n;
}

void MultiTaskDataset::set_names(std::vector<std::string> attribute_names,
                                 std::vector<std::vector<std::string>> user_names) {
  attribute_names_ = std::move(attribute_names);
  user_names_ = std::move(user_names);
  attribute_names_.resize(n_attributes());
  user_names_.resize(n_attributes());
  for (std::size_t i = 0; i < n_attributes(); ++i) {
    if (attribute_names_[i].empty()) attribute_names_[i] = "attr" + std::to_string(i + 1);
    user_names_[i].resize(users_per_attribute_[i]);
    for (std::size_t j = 0; j < users_per_attribute_[i]; ++j) {
      if (user_names_[i][j].empty()) user_names_[i][j] = "user" + std::to_string(j + 1);
    }
  }
}

MultiTaskDataset MultiTaskDataset::select_rows(const std::vector<std::vector<std::size_t>>& rows_per_subtask) const {
  if (rows_per_subtask.size() != subtasks_.size()) {
    throw Error(ErrorCode::ShapeMismatch, "row selection does not cover every subtask");
  }
  std::vector<SubtaskData> picked;
  picked.reserve(subtasks_.size());
  for (std::size_t k = 0; k < subtasks_.size(); ++k) {
    const auto& src = subtasks_[k];
    const auto& rows = rows_per_subtask[k];
    SubtaskData out{src.attribute_index, src.user_index, Matrix(rows.size(), dim_), Vector(rows.size())};
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r] >= src.rows()) throw Error(ErrorCode::ShapeMismatch, "row index out of range");
      out.features.row(r) = src.features.row(rows[r]);
      out.responses(r) = src.responses(rows[r]);
    }
    picked.push_back(std::move(out));
  }
  MultiTaskDataset result(kind_, dim_, users_per_attribute_, std::move(picked));
  result.set_names(attribute_names_, user_names_);
  return result;
}

NormalizedDataset normalize_columns(const MultiTaskDataset& dataset) {
  NormalizedDataset out;
  std::vector<SubtaskData> scaled = dataset.subtasks();
  for (std::size_t k = 0; k < scaled.size(); ++k) {
    auto& x = scaled[k].features;
    for (Eigen::Index l = 0; l < x.cols(); ++l) {
      const double norm = x.col(l).norm();
      if (norm == 0.0) {
        out.warnings.push_back({k, static_cast<std::size_t>(l)});
        continue;
      }
      x.col(l) /= norm;
    }
  }
  out.dataset = MultiTaskDataset(dataset.kind(), dataset.dim(), dataset.users_per_attribute(), std::move(scaled));
  out.dataset.set_names(dataset.attribute_names(), dataset.user_names());
  return out;
}

Vector make_pairwise(const Vector& first, const Vector& second) {
  if (first.size() != second.size()) {
    throw Error(ErrorCode::DimensionMismatch, "pair members have different lengths");
  }
  return first - second;
}

Matrix make_pairwise_rows(const Matrix& first, const Matrix& second) {
  if (first.rows() != second.rows() || first.cols() != second.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "pair matrices have different shapes");
  }
  return first - second;
}

RowSplit split_rows(std::size_t n, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw Error(ErrorCode::InvalidConfig, "train fraction must lie in (0, 1)");
  }
  if (n < 2) throw Error(ErrorCode::TooFewSamples, "need at least 2 rows to split, got " + std::to_string(n));
  // The epsilon keeps e.g. 0.4 * 10 from rounding up to 5.
  auto n_train = static_cast<std::size_t>(std::ceil(train_fraction * static_cast<double>(n) - 1e-9));
  n_train = std::clamp<std::size_t>(n_train, 1, n - 1);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto rng = make_stream(seed, "split");
  std::shuffle(order.begin(), order.end(), rng);

  RowSplit split;
  split.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  split.test.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

std::vector<std::vector<std::size_t>> kfold_partition(std::size_t n, std::size_t folds, std::uint64_t seed) {
  if (folds < 2) throw Error(ErrorCode::InvalidConfig, "need at least 2 folds");
  if (n < folds) {
    throw Error(ErrorCode::TooFewSamples, std::to_string(n) + " rows cannot fill " + std::to_string(folds) + " folds");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto rng = make_stream(seed, "folds");
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::vector<std::size_t>> out(folds);
  for (std::size_t k = 0; k < n; ++k) out[k % folds].push_back(order[k]);
  for (auto& f : out) std::sort(f.begin(), f.end());
  return out;
}

TrainTestSplit split_train_test(const MultiTaskDataset& dataset, double train_fraction, std::uint64_t seed) {
  std::vector<std::vector<std::size_t>> train_rows(dataset.n_users());
  std::vector<std::vector<std::size_t>> test_rows(dataset.n_users());
  for (std::size_t k = 0; k < dataset.n_users(); ++k) {
    const std::size_t n = dataset.subtask(k).rows();
    if (n < 2) {
      throw Error(ErrorCode::TooFewSamples, "subtask " + std::to_string(k) + " has fewer than 2 rows");
    }
    auto split = split_rows(n, train_fraction, derive_seed(seed, "subtask", k));
    train_rows[k] = std::move(split.train);
    test_rows[k] = std::move(split.test);
  }
  return {dataset.select_rows(train_rows), dataset.select_rows(test_rows)};
}

}  // namespace hiermtl
