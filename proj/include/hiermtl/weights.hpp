#pragma once

#include <cstddef>
#include <vector>

#include "hiermtl/dataset.hpp"

namespace hiermtl {

// w(i, j) = theta + p.col(i) + u.col(offset(i) + j)
struct WeightDecomposition {
  Vector theta;
  Matrix p;  // d x n_a
  Matrix u;  // d x n_u
  std::vector<std::size_t> attribute_offsets;

  WeightDecomposition() = default;
  WeightDecomposition(std::size_t dim, const std::vector<std::size_t>& users_per_attribute);

  static WeightDecomposition zeros_like(const MultiTaskDataset& dataset);

  std::size_t dim() const { return static_cast<std::size_t>(theta.size()); }
  std::size_t n_attributes() const { return static_cast<std::size_t>(p.cols()); }
  std::size_t n_users() const { return static_cast<std::size_t>(u.cols()); }
  std::size_t users_in_attribute(std::size_t attribute) const;

  Vector compose(std::size_t attribute, std::size_t user) const;
  // Weight of the subtask at flat (attribute-major) index.
  Vector compose_flat(std::size_t flat_index) const;
  std::size_t attribute_of(std::size_t flat_index) const;

  bool matches(const MultiTaskDataset& dataset) const;
  bool same_shape(const WeightDecomposition& other) const;
  bool all_finite() const;

  // [theta; vec(P); vec(U)]
  Vector flatten() const;
  void assign_flat(const Vector& flat);
  std::size_t flat_size() const;

  WeightDecomposition& operator+=(const WeightDecomposition& other);
  WeightDecomposition& operator-=(const WeightDecomposition& other);
  WeightDecomposition& operator*=(double scale);
};

WeightDecomposition operator+(WeightDecomposition a, const WeightDecomposition& b);
WeightDecomposition operator-(WeightDecomposition a, const WeightDecomposition& b);
WeightDecomposition operator*(double scale, WeightDecomposition a);

double squared_norm(const WeightDecomposition& w);

// Same shapes as WeightDecomposition; holds the partial derivatives of the
// least-squares loss.
struct GradientBundle {
  Vector g_theta;
  Matrix g_p;
  Matrix g_u;
};

// <g, w> over all three blocks.
double inner(const GradientBundle& g, const WeightDecomposition& w);
double squared_norm(const GradientBundle& g);
Vector flatten(const GradientBundle& g);

}  // namespace hiermtl
