#pragma once

#include <optional>
#include <vector>

#include "hiermtl/dataset.hpp"
#include "hiermtl/objective.hpp"
#include "hiermtl/weights.hpp"

namespace hiermtl {

// Blocks that are allowed to move. Frozen blocks keep their initial value.
struct BlockMask {
  bool theta = true;
  bool p = true;
  bool u = true;
};

struct SolverConfig {
  Penalties penalties;
  double rho0 = 1.0;
  double eta = 2.0;
  int max_iterations = 1000;
  double rel_tolerance = 1e-6;
  bool accelerated = true;
  bool record_trace = false;
  BlockMask active;
};

void validate(const SolverConfig& config);

struct TraceRecord {
  int iteration = 0;
  double objective = 0.0;
  double loss = 0.0;
  double regularizer = 0.0;
  double rho = 0.0;
  int backtracks = 0;
  double momentum = 0.0;  // dt used to extrapolate the next reference point
  double seconds = 0.0;
};

struct SolverTrace {
  std::vector<TraceRecord> records;
};

enum class FitStatus { converged, max_iterations, non_finite };

const char* to_string(FitStatus status) noexcept;

struct FitResult {
  WeightDecomposition weights;
  SolverTrace trace;
  bool converged = false;
  int iterations_used = 0;
  FitStatus status = FitStatus::max_iterations;
  double initial_objective = 0.0;
  double final_objective = 0.0;
};

// Gradient step from `reference` with step 1/rho followed by the three
// closed-form shrinkages at thresholds lambda/rho.
WeightDecomposition prox_step(const WeightDecomposition& reference, const GradientBundle& reference_gradient,
                              double rho, const SolverConfig& config);
WeightDecomposition prox_step(const MultiTaskDataset& dataset, const WeightDecomposition& reference, double rho,
                              const SolverConfig& config);

struct BacktrackResult {
  WeightDecomposition weights;
  double rho = 0.0;
  int backtracks = 0;
  double loss = 0.0;  // loss at `weights`
};

inline constexpr int kMaxBacktracks = 200;

// Smallest i >= 0 such that the prox step at rho = eta^i * rho_prev
// satisfies L(W) <= majorizer(W). Throws BacktrackOverflow past 200.
BacktrackResult backtrack(const LeastSquaresObjective& objective, const WeightDecomposition& reference,
                          double reference_loss, const GradientBundle& reference_gradient, double rho_prev,
                          const SolverConfig& config);
BacktrackResult backtrack(const MultiTaskDataset& dataset, const WeightDecomposition& reference, double rho_prev,
                          const SolverConfig& config);

// Next momentum weight: (1 + sqrt(1 + 4 t^2)) / 2.
double next_momentum(double t);

// Accelerated (or plain, if config.accelerated is false) proximal gradient
// with backtracking. Starts from zeros unless `initial` is given.
FitResult fit(const MultiTaskDataset& dataset, const SolverConfig& config,
              const std::optional<WeightDecomposition>& initial = std::nullopt);

}  // namespace hiermtl
