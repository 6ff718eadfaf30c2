#include "hiermtl/objective.hpp"

#include <algorithm>
#include <cmath>

#include "hiermtl/error.hpp"

namespace hiermtl {

namespace {

double pairwise_sum_range(const double* values, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) s += values[k];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum_range(values, half) + pairwise_sum_range(values + half, n - half);
}

void require_finite(double value, const char* what) {
  if (!std::isfinite(value)) throw Error(ErrorCode::NonFiniteValue, std::string(what) + " is not finite");
}

}  // namespace

double pairwise_sum(const std::vector<double>& values) { return pairwise_sum_range(values.data(), values.size()); }

void validate(const Penalties& penalties) {
  if (!(penalties.lambda1 >= 0.0) || !(penalties.lambda2 >= 0.0) || !(penalties.lambda3 >= 0.0)) {
    throw Error(ErrorCode::NegativeLambda, "penalty strengths must be non-negative");
  }
}

LeastSquaresObjective::LeastSquaresObjective(const MultiTaskDataset& dataset) : dataset_(&dataset) {
  gram_.reserve(dataset.n_users());
  moment_.reserve(dataset.n_users());
  for (const auto& s : dataset.subtasks()) {
    if (!s.features.allFinite() || !s.responses.allFinite()) {
      throw Error(ErrorCode::NonFiniteValue, "dataset contains NaN or Inf");
    }
    gram_.push_back(s.features.transpose() * s.features);
    moment_.push_back(s.features.transpose() * s.responses);
  }
}

void LeastSquaresObjective::check(const WeightDecomposition& weights) const {
  if (!weights.matches(*dataset_)) throw Error(ErrorCode::ShapeMismatch, "weights do not match the dataset layout");
  if (!weights.all_finite()) throw Error(ErrorCode::NonFiniteValue, "weights contain NaN or Inf");
}

std::vector<double> LeastSquaresObjective::subtask_losses(const WeightDecomposition& weights) const {
  check(weights);
  std::vector<double> losses(dataset_->n_users());
  for (std::size_t i = 0; i < dataset_->n_attributes(); ++i) {
    const Vector shared = weights.theta + weights.p.col(static_cast<Eigen::Index>(i));
    const std::size_t offset = dataset_->attribute_offset(i);
    for (std::size_t j = 0; j < dataset_->users_per_attribute()[i]; ++j) {
      const auto& s = dataset_->subtask(offset + j);
      const Vector w = shared + weights.u.col(static_cast<Eigen::Index>(offset + j));
      losses[offset + j] = (s.responses - s.features * w).squaredNorm();
    }
  }
  return losses;
}

double LeastSquaresObjective::loss(const WeightDecomposition& weights) const {
  const double value = pairwise_sum(subtask_losses(weights));
  require_finite(value, "loss");
  return value;
}

GradientBundle LeastSquaresObjective::gradient(const WeightDecomposition& weights) const {
  check(weights);
  const auto d = static_cast<Eigen::Index>(dataset_->dim());
  GradientBundle g{Vector::Zero(d), Matrix::Zero(d, weights.p.cols()), Matrix::Zero(d, weights.u.cols())};
  for (std::size_t i = 0; i < dataset_->n_attributes(); ++i) {
    const Vector shared = weights.theta + weights.p.col(static_cast<Eigen::Index>(i));
    const std::size_t offset = dataset_->attribute_offset(i);
    for (std::size_t j = 0; j < dataset_->users_per_attribute()[i]; ++j) {
      const std::size_t k = offset + j;
      const Vector w = shared + weights.u.col(static_cast<Eigen::Index>(k));
      // Delta_ij = 2 (X^T X w - X^T y)
      g.g_u.col(static_cast<Eigen::Index>(k)) = 2.0 * (gram_[k] * w - moment_[k]);
    }
    g.g_p.col(static_cast<Eigen::Index>(i)) =
        g.g_u.middleCols(static_cast<Eigen::Index>(offset),
                         static_cast<Eigen::Index>(dataset_->users_per_attribute()[i]))
            .rowwise()
            .sum();
  }
  g.g_theta = g.g_p.rowwise().sum();
  if (!g.g_u.allFinite()) throw Error(ErrorCode::NonFiniteValue, "gradient is not finite");
  return g;
}

double loss(const MultiTaskDataset& dataset, const WeightDecomposition& weights) {
  return LeastSquaresObjective(dataset).loss(weights);
}

double regularizer(const WeightDecomposition& weights, const Penalties& penalties) {
  validate(penalties);
  double value = 0.0;
  if (penalties.lambda1 != 0.0) value += penalties.lambda1 * weights.theta.lpNorm<1>();
  if (penalties.lambda2 != 0.0) value += penalties.lambda2 * weights.p.rowwise().norm().sum();
  if (penalties.lambda3 != 0.0) value += penalties.lambda3 * weights.u.colwise().norm().sum();
  require_finite(value, "regularizer");
  return value;
}

GradientBundle gradient(const MultiTaskDataset& dataset, const WeightDecomposition& weights) {
  return LeastSquaresObjective(dataset).gradient(weights);
}

double objective_value(const MultiTaskDataset& dataset, const WeightDecomposition& weights,
                       const Penalties& penalties) {
  return loss(dataset, weights) + regularizer(weights, penalties);
}

double majorizer(double reference_loss, const GradientBundle& reference_gradient,
                 const WeightDecomposition& reference, const WeightDecomposition& candidate, double rho) {
  const WeightDecomposition step = candidate - reference;
  return reference_loss + inner(reference_gradient, step) + 0.5 * rho * squared_norm(step);
}

double largest_singular_value(const Matrix& x, double tolerance, int max_iterations) {
  if (x.size() == 0) return 0.0;
  const Matrix gram = x.transpose() * x;
  const Eigen::Index n = gram.rows();
  // Deterministic start with no symmetry that could make it orthogonal to
  // the top eigenvector of a structured matrix.
  Vector v(n);
  for (Eigen::Index k = 0; k < n; ++k) v(k) = 1.0 + 0.1 * static_cast<double>(k % 7) / 7.0;
  v.normalize();
  double eigen = 0.0;
  for (int it = 0; it < max_iterations; ++it) {
    Vector next = gram * v;
    const double norm = next.norm();
    if (norm == 0.0) return 0.0;
    next /= norm;
    const double updated = next.dot(gram * next);
    const bool done = std::abs(updated - eigen) <= tolerance * std::max(1.0, std::abs(updated));
    eigen = updated;
    v = std::move(next);
    if (done) break;
  }
  return std::sqrt(std::max(eigen, 0.0));
}

double lipschitz_bound(const MultiTaskDataset& dataset) {
  if (dataset.n_users() == 0) throw Error(ErrorCode::ShapeMismatch, "dataset is empty");
  double max_sigma = 0.0;
  for (const auto& s : dataset.subtasks()) max_sigma = std::max(max_sigma, largest_singular_value(s.features));
  const auto n_u = static_cast<double>(dataset.n_users());
  const auto n_a = static_cast<double>(dataset.n_attributes());
  return 6.0 * n_u * std::sqrt(n_u + n_a + 1.0) * max_sigma * max_sigma;
}

}  // namespace hiermtl
