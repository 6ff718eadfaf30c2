#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "hiermtl/baselines.hpp"
#include "hiermtl/dataset.hpp"
#include "hiermtl/metrics.hpp"
#include "hiermtl/solver.hpp"

namespace hiermtl {

// Per-subtask linear scorers plus the zero band used for relative tasks.
struct SubtaskPredictor {
  std::vector<Vector> weights;
  std::vector<double> zero_bands;
};

SubtaskPredictor predictor_from(const WeightDecomposition& weights);

struct EvalReport {
  std::string method;
  MetricKind metric = MetricKind::nmse;
  std::vector<std::vector<double>> per_subtask;  // [attribute][user]
  std::vector<double> per_attribute;              // mean over users
  double overall = 0.0;                           // mean over attributes
  double train_fraction = 0.0;
  std::uint64_t seed = 0;
  int repetitions = 1;
};

// Fills per_attribute and overall from per_subtask.
void aggregate(EvalReport& report);

EvalReport evaluate(const MultiTaskDataset& test, const SubtaskPredictor& predictor, MetricKind metric,
                    const std::string& method = "");

struct CvRow {
  Penalties penalties;
  double mean_error = 0.0;
  std::vector<double> fold_errors;
  double band_factor = 0.0;
};

struct CvResult {
  Penalties best;
  double best_band_factor = 0.0;
  std::vector<CvRow> table;
};

// Joint-model k-fold CV over a penalty grid. Each fold holds out a slice of
// every subtask's rows. The grid point with the smallest mean validation
// error wins; ties go to the larger lambda1 + lambda2 + lambda3, then to the
// earlier grid entry.
CvResult cross_validate(const MultiTaskDataset& train, const std::vector<Penalties>& grid, std::size_t folds,
                        std::uint64_t seed, const SolverConfig& solver = {});

// Band (absolute) to use when scoring a fitted model: factor * std of the
// training scores of each subtask.
SubtaskPredictor with_zero_bands(SubtaskPredictor predictor, const MultiTaskDataset& train, double band_factor);

// Each lambda set to `scale` times the size of its block's loss gradient at
// zero weights (l-inf of g_theta, largest row norm of g_P, largest column
// norm of g_U). Scale 1 is roughly where every block is shrunk to zero.
Penalties scaled_penalties(const MultiTaskDataset& train, double scale_theta, double scale_p, double scale_u);

// Penalty grid scaled to the data: each lambda is a multiple of the size of
// its block's loss gradient at zero weights. lambda1 and lambda2 share a scale
// in {1e-4, 1e-3, 1e-2}, crossed with lambda3 scales {1e-4, 1e-3, 1e-2, 1e-1}.
std::vector<Penalties> default_penalty_grid(const MultiTaskDataset& train);

enum class Method { zero, ridge, lasso, proposed };

const char* to_string(Method method) noexcept;
Method parse_method(std::string_view text);

struct ExperimentDescriptor {
  std::vector<Method> methods{Method::ridge, Method::lasso, Method::proposed};
  std::vector<double> train_fractions{0.4, 0.8};
  int repetitions = 5;
  std::uint64_t seed = 0;
  std::size_t cv_folds = 3;
  std::vector<Penalties> grid;  // empty: default_penalty_grid on each training split
  std::vector<double> baseline_lambda_grid;  // empty: default_lambda_grid per subtask
  SolverConfig solver;
  bool normalize = true;
};

void validate(const ExperimentDescriptor& descriptor);

// One report per (fraction, method), fraction-major. Per-subtask values are
// averaged over repetitions before aggregation.
std::vector<EvalReport> run_experiment(const MultiTaskDataset& data, const ExperimentDescriptor& descriptor);

// Table layout: one row per attribute plus a final "mean" row, one column per
// report (all reports must share the attribute layout).
std::string report_table_csv(const std::vector<EvalReport>& reports, const std::vector<std::string>& row_names);

nlohmann::json to_json(const EvalReport& report);

struct ConvergenceCurves {
  std::vector<double> accelerated;  // mean objective after iteration k+1
  std::vector<double> plain;
};

// Mean objective per iteration over `restarts` random initialisations
// (entries N(0, init_scale^2)), with and without momentum. Both variants start
// from the same points and run exactly `iterations` steps.
ConvergenceCurves acceleration_curves(const MultiTaskDataset& train, const Penalties& penalties, int restarts,
                                      int iterations, std::uint64_t seed, double init_scale = 1.0,
                                      const SolverConfig& solver = {});

}  // namespace hiermtl
