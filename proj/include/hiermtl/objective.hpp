#pragma once

#include <vector>

#include "hiermtl/dataset.hpp"
#include "hiermtl/weights.hpp"

namespace hiermtl {

// Strengths of the three penalty blocks: l1 on theta, row-group on P,
// column-group on U.
struct Penalties {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double lambda3 = 0.0;

  double sum() const { return lambda1 + lambda2 + lambda3; }
  friend bool operator==(const Penalties&, const Penalties&) = default;
};

void validate(const Penalties& penalties);

// Least-squares loss over all subtasks with per-subtask Gram matrices cached.
// The dataset must outlive the object.
class LeastSquaresObjective {
 public:
  explicit LeastSquaresObjective(const MultiTaskDataset& dataset);

  const MultiTaskDataset& dataset() const { return *dataset_; }

  double loss(const WeightDecomposition& weights) const;
  std::vector<double> subtask_losses(const WeightDecomposition& weights) const;
  GradientBundle gradient(const WeightDecomposition& weights) const;

 private:
  void check(const WeightDecomposition& weights) const;

  const MultiTaskDataset* dataset_;
  std::vector<Matrix> gram_;     // X^T X
  std::vector<Vector> moment_;   // X^T y
};

// Sum of squared residuals over every subtask.
double loss(const MultiTaskDataset& dataset, const WeightDecomposition& weights);

double regularizer(const WeightDecomposition& weights, const Penalties& penalties);

GradientBundle gradient(const MultiTaskDataset& dataset, const WeightDecomposition& weights);

double objective_value(const MultiTaskDataset& dataset, const WeightDecomposition& weights,
                       const Penalties& penalties);

// Quadratic upper model of the loss around `reference` with curvature rho:
// L(ref) + <grad, W - ref> + rho/2 ||W - ref||^2.
double majorizer(double reference_loss, const GradientBundle& reference_gradient,
                 const WeightDecomposition& reference, const WeightDecomposition& candidate, double rho);

// Largest singular value by power iteration on X^T X.
double largest_singular_value(const Matrix& x, double tolerance = 1e-10, int max_iterations = 1000);

// 6 n_u sqrt(n_u + n_a + 1) max_{ij} sigma_1(X_ij)^2
double lipschitz_bound(const MultiTaskDataset& dataset);

// Order-independent sum (pairwise reduction over a fixed tree).
double pairwise_sum(const std::vector<double>& values);

}  // namespace hiermtl
