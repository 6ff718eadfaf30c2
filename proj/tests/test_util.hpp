#pragma once

#include <random>
#include <vector>

#include "hiermtl/dataset.hpp"
#include "hiermtl/weights.hpp"

namespace hiermtl::fixture {

inline Matrix gaussian_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols, double sd = 1.0) {
  std::normal_distribution<double> n(0.0, sd);
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = n(rng);
  return m;
}

inline Vector gaussian_vector(std::mt19937_64& rng, Eigen::Index n, double sd = 1.0) {
  return gaussian_matrix(rng, n, 1, sd).col(0);
}

// Gaussian features and responses with the given layout.
inline MultiTaskDataset random_dataset(std::mt19937_64& rng, std::size_t d, const std::vector<std::size_t>& layout,
                                       std::size_t rows, TaskKind kind = TaskKind::regression) {
  std::vector<SubtaskData> subtasks;
  for (std::size_t i = 0; i < layout.size(); ++i)
    for (std::size_t j = 0; j < layout[i]; ++j) {
      SubtaskData s;
      s.attribute_index = i;
      s.user_index = j;
      s.features = gaussian_matrix(rng, static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(d));
      s.responses = gaussian_vector(rng, static_cast<Eigen::Index>(rows));
      subtasks.push_back(std::move(s));
    }
  return MultiTaskDataset(kind, d, layout, std::move(subtasks));
}

inline WeightDecomposition random_weights(std::mt19937_64& rng, const MultiTaskDataset& ds, double sd = 1.0) {
  WeightDecomposition w = WeightDecomposition::zeros_like(ds);
  w.assign_flat(gaussian_vector(rng, static_cast<Eigen::Index>(w.flat_size()), sd));
  return w;
}

// One subtask with X = I2, y = [1, 2].
inline MultiTaskDataset identity_dataset() {
  SubtaskData s;
  s.features = Matrix::Identity(2, 2);
  s.responses = Vector(2);
  s.responses << 1.0, 2.0;
  return MultiTaskDataset(TaskKind::regression, 2, {1}, {s});
}

}  // namespace hiermtl::fixture
