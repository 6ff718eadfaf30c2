#pragma once

#include <cstdint>
#include <vector>

#include "hiermtl/dataset.hpp"
#include "hiermtl/solver.hpp"

namespace hiermtl {

// (X^T X + lambda I)^{-1} X^T y, solved as least squares on the stacked
// system [X; sqrt(lambda) I]. Throws SingularSystem for lambda = 0 with
// rank-deficient X.
Vector fit_ridge(const SubtaskData& subtask, double lambda);

// argmin ||y - X w||^2 + lambda ||w||_1, solved by the joint solver on a
// one-subtask problem with only the shared block free.
Vector fit_lasso(const SubtaskData& subtask, double lambda, const SolverConfig& solver_config);

enum class Learner { ridge, lasso };

const char* to_string(Learner learner) noexcept;

// Ten log-spaced values spanning [1e-4, 1e2] * ||X^T y||_inf.
std::vector<double> default_lambda_grid(const SubtaskData& subtask);

struct UserExclusiveConfig {
  Learner learner = Learner::lasso;
  std::vector<double> lambda_grid;  // empty: default_lambda_grid per subtask
  std::size_t cv_folds = 3;
  std::uint64_t seed = 0;
  SolverConfig solver;              // used by lasso
};

struct UserExclusiveFit {
  std::vector<Vector> weights;          // one per subtask, flat order
  std::vector<double> selected_lambda;
  std::vector<double> zero_bands;       // absolute; 0 unless the task is relative
};

// Independent per-subtask fits, lambda chosen by k-fold CV on that subtask.
UserExclusiveFit fit_user_exclusive(const MultiTaskDataset& dataset, const UserExclusiveConfig& config);

// Pooled residual standard deviation of near-unregularised per-subtask ridge
// fits; used when the noise level is not supplied.
double estimate_noise_sigma(const MultiTaskDataset& dataset);

}  // namespace hiermtl
