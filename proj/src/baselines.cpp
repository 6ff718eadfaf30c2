#include "hiermtl/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hiermtl/error.hpp"
#include "hiermtl/metrics.hpp"
#include "hiermtl/parallel.hpp"
#include "hiermtl/random.hpp"

namespace hiermtl {

const char* to_string(Learner learner) noexcept { return learner == Learner::ridge ? "ridge" : "lasso"; }

Vector fit_ridge(const SubtaskData& subtask, double lambda) {
  if (!(lambda >= 0.0)) throw Error(ErrorCode::NegativeLambda, "ridge penalty must be non-negative");
  const Matrix& x = subtask.features;
  const Eigen::Index n = x.rows();
  const Eigen::Index d = x.cols();
  if (lambda == 0.0) {
    Eigen::ColPivHouseholderQR<Matrix> qr(x);
    if (qr.rank() < d) throw Error(ErrorCode::SingularSystem, "X is rank deficient and lambda is zero");
    return qr.solve(subtask.responses);
  }
  Matrix stacked(n + d, d);
  stacked << x, std::sqrt(lambda) * Matrix::Identity(d, d);
  Vector rhs = Vector::Zero(n + d);
  rhs.head(n) = subtask.responses;
  return stacked.colPivHouseholderQr().solve(rhs);
}

Vector fit_lasso(const SubtaskData& subtask, double lambda, const SolverConfig& solver_config) {
  if (!(lambda >= 0.0)) throw Error(ErrorCode::NegativeLambda, "lasso penalty must be non-negative");
  SubtaskData single{0, 0, subtask.features, subtask.responses};
  const MultiTaskDataset dataset(TaskKind::regression, static_cast<std::size_t>(subtask.features.cols()), {1},
                                 {std::move(single)});
  SolverConfig config = solver_config;
  config.penalties = {lambda, 0.0, 0.0};
  config.active = {true, false, false};
  config.record_trace = false;
  return fit(dataset, config).weights.theta;
}

std::vector<double> default_lambda_grid(const SubtaskData& subtask) {
  double scale = (subtask.features.transpose() * subtask.responses).lpNorm<Eigen::Infinity>();
  if (!(scale > 0.0)) scale = 1.0;
  std::vector<double> grid(10);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    grid[k] = scale * std::pow(10.0, -4.0 + 6.0 * static_cast<double>(k) / 9.0);
  }
  return grid;
}

namespace {

Vector fit_one(Learner learner, const SubtaskData& s, double lambda, const SolverConfig& solver) {
  return learner == Learner::ridge ? fit_ridge(s, lambda) : fit_lasso(s, lambda, solver);
}

SubtaskData take_rows(const SubtaskData& s, const std::vector<std::size_t>& rows) {
  SubtaskData out{s.attribute_index, s.user_index, Matrix(rows.size(), s.features.cols()), Vector(rows.size())};
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out.features.row(static_cast<Eigen::Index>(r)) = s.features.row(static_cast<Eigen::Index>(rows[r]));
    out.responses(static_cast<Eigen::Index>(r)) = s.responses(static_cast<Eigen::Index>(rows[r]));
  }
  return out;
}

struct SubtaskChoice {
  Vector weights;
  double lambda = 0.0;
  double zero_band = 0.0;
};

SubtaskChoice select_and_fit(const SubtaskData& s, TaskKind kind, const UserExclusiveConfig& config,
                             std::uint64_t fold_seed) {
  const MetricKind metric = default_metric(kind);
  const std::vector<double> grid = config.lambda_grid.empty() ? default_lambda_grid(s) : config.lambda_grid;
  if (grid.empty()) throw Error(ErrorCode::InvalidConfig, "lambda grid is empty");
  const auto folds = kfold_partition(s.rows(), config.cv_folds, fold_seed);
  const bool relative = kind == TaskKind::relative;
  const std::size_t n_bands = relative ? kZeroBandFactors.size() : 1;

  // error[g][b]: mean validation error over folds.
  std::vector<std::vector<double>> error(grid.size(), std::vector<double>(n_bands, 0.0));
  for (std::size_t f = 0; f < folds.size(); ++f) {
    std::vector<std::size_t> fit_rows;
    for (std::size_t g = 0; g < folds.size(); ++g)
      if (g != f) fit_rows.insert(fit_rows.end(), folds[g].begin(), folds[g].end());
    const SubtaskData fit_part = take_rows(s, fit_rows);
    const SubtaskData valid_part = take_rows(s, folds[f]);
    for (std::size_t g = 0; g < grid.size(); ++g) {
      const Vector w = fit_one(config.learner, fit_part, grid[g], config.solver);
      const Vector scores = valid_part.features * w;
      const double spread = relative ? sample_std(fit_part.features * w) : 0.0;
      for (std::size_t b = 0; b < n_bands; ++b) {
        const double band = relative ? kZeroBandFactors[b] * spread : 0.0;
        error[g][b] += metric_error(metric, metric_value(metric, scores, valid_part.responses, band)) /
                       static_cast<double>(folds.size());
      }
    }
  }

  // Ties go to the larger lambda, then to the first band.
  std::size_t best_g = 0, best_b = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t g = 0; g < grid.size(); ++g) {
    for (std::size_t b = 0; b < n_bands; ++b) {
      const bool better = error[g][b] < best ||
                          (error[g][b] == best && grid[g] > grid[best_g]);
      if (better) {
        best = error[g][b];
        best_g = g;
        best_b = b;
      }
    }
  }
  SubtaskChoice choice{fit_one(config.learner, s, grid[best_g], config.solver), grid[best_g], 0.0};
  if (relative) choice.zero_band = kZeroBandFactors[best_b] * sample_std(s.features * choice.weights);
  return choice;
}

}  // namespace

UserExclusiveFit fit_user_exclusive(const MultiTaskDataset& dataset, const UserExclusiveConfig& config) {
  if (config.cv_folds < 2) throw Error(ErrorCode::InvalidConfig, "need at least 2 folds");
  for (double l : config.lambda_grid) {
    if (!(l >= 0.0)) throw Error(ErrorCode::NegativeLambda, "grid values must be non-negative");
  }
  const std::size_t n = dataset.n_users();
  std::vector<SubtaskChoice> choices(n);
  parallel_for(n, [&](std::size_t k) {
    // Every subtask shares one fold stream so identical subtasks make
    // identical choices.
    choices[k] = select_and_fit(dataset.subtask(k), dataset.kind(), config, derive_seed(config.seed, "user-cv"));
  });
  UserExclusiveFit out;
  for (auto& c : choices) {
    out.weights.push_back(std::move(c.weights));
    out.selected_lambda.push_back(c.lambda);
    out.zero_bands.push_back(c.zero_band);
  }
  return out;
}

double estimate_noise_sigma(const MultiTaskDataset& dataset) {
  double rss = 0.0;
  double dof = 0.0;
  for (const auto& s : dataset.subtasks()) {
    const double scale = s.features.squaredNorm() / std::max<double>(1.0, static_cast<double>(s.features.cols()));
    const Vector w = fit_ridge(s, 1e-8 * std::max(scale, 1e-300));
    rss += (s.responses - s.features * w).squaredNorm();
    dof += std::max(1.0, static_cast<double>(s.features.rows()) - static_cast<double>(s.features.cols()));
  }
  return std::sqrt(rss / dof);
}

}  // namespace hiermtl
