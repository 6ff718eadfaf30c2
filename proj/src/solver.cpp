#include "hiermtl/solver.hpp"

#include <chrono>
#include <cmath>

#include "hiermtl/error.hpp"
#include "hiermtl/prox.hpp"

namespace hiermtl {

const char* to_string(FitStatus status) noexcept {
  switch (status) {
    case FitStatus::converged: return "converged";
    case FitStatus::max_iterations: return "max_iterations";
    case FitStatus::non_finite: return "non_finite";
  }
  return "max_iterations";
}

void validate(const SolverConfig& config) {
  validate(config.penalties);
  if (!(config.rho0 > 0.0) || !std::isfinite(config.rho0)) {
    throw Error(ErrorCode::InvalidConfig, "rho0 must be positive");
  }
  if (!(config.eta > 1.0) || !std::isfinite(config.eta)) {
    throw Error(ErrorCode::InvalidConfig, "eta must exceed 1");
  }
  if (config.max_iterations < 1) throw Error(ErrorCode::InvalidConfig, "max_iterations must be at least 1");
  if (!(config.rel_tolerance >= 0.0)) throw Error(ErrorCode::InvalidConfig, "rel_tolerance must be non-negative");
}

WeightDecomposition prox_step(const WeightDecomposition& reference, const GradientBundle& reference_gradient,
                              double rho, const SolverConfig& config) {
  if (!(rho > 0.0)) throw Error(ErrorCode::InvalidConfig, "rho must be positive");
  const auto& lam = config.penalties;
  const double step = 1.0 / rho;
  WeightDecomposition next = reference;
  if (config.active.theta) {
    next.theta = soft_threshold(reference.theta - step * reference_gradient.g_theta, lam.lambda1 * step);
  }
  if (config.active.p) next.p = row_group_shrink(reference.p - step * reference_gradient.g_p, lam.lambda2 * step);
  if (config.active.u) next.u = col_group_shrink(reference.u - step * reference_gradient.g_u, lam.lambda3 * step);
  return next;
}

WeightDecomposition prox_step(const MultiTaskDataset& dataset, const WeightDecomposition& reference, double rho,
                              const SolverConfig& config) {
  return prox_step(reference, gradient(dataset, reference), rho, config);
}

namespace {

// Frozen blocks do not move, so their gradient must not enter the model.
GradientBundle masked(GradientBundle g, const BlockMask& mask) {
  if (!mask.theta) g.g_theta.setZero();
  if (!mask.p) g.g_p.setZero();
  if (!mask.u) g.g_u.setZero();
  return g;
}

}  // namespace

BacktrackResult backtrack(const LeastSquaresObjective& objective, const WeightDecomposition& reference,
                          double reference_loss, const GradientBundle& reference_gradient, double rho_prev,
                          const SolverConfig& config) {
  if (!(rho_prev > 0.0)) throw Error(ErrorCode::InvalidConfig, "rho must be positive");
  double rho = rho_prev;
  for (int i = 0; i <= kMaxBacktracks; ++i) {
    WeightDecomposition candidate = prox_step(reference, reference_gradient, rho, config);
    const double candidate_loss = objective.loss(candidate);
    const double model = majorizer(reference_loss, reference_gradient, reference, candidate, rho);
    // Rounding slack so that W == ref does not trigger spurious growth.
    const double slack = 1e-12 * std::max(std::abs(reference_loss), std::abs(candidate_loss));
    if (candidate_loss <= model + slack) return {std::move(candidate), rho, i, candidate_loss};
    rho *= config.eta;
  }
  throw Error(ErrorCode::BacktrackOverflow,
              "majorization test failed after " + std::to_string(kMaxBacktracks) + " increases of rho");
}

BacktrackResult backtrack(const MultiTaskDataset& dataset, const WeightDecomposition& reference, double rho_prev,
                          const SolverConfig& config) {
  const LeastSquaresObjective objective(dataset);
  return backtrack(objective, reference, objective.loss(reference),
                   masked(objective.gradient(reference), config.active), rho_prev, config);
}

double next_momentum(double t) { return 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t)); }

FitResult fit(const MultiTaskDataset& dataset, const SolverConfig& config,
              const std::optional<WeightDecomposition>& initial) {
  validate(config);
  if (dataset.n_users() == 0) throw Error(ErrorCode::ShapeMismatch, "dataset is empty");
  const LeastSquaresObjective objective(dataset);

  FitResult result;
  WeightDecomposition previous = initial ? *initial : WeightDecomposition::zeros_like(dataset);
  if (!previous.matches(dataset)) throw Error(ErrorCode::ShapeMismatch, "initial weights do not match the dataset");
  WeightDecomposition reference = previous;

  double previous_objective = objective.loss(previous) + regularizer(previous, config.penalties);
  result.initial_objective = previous_objective;
  result.final_objective = previous_objective;
  double t = 1.0;
  double rho = config.rho0;

  using clock = std::chrono::steady_clock;
  for (int k = 1; k <= config.max_iterations; ++k) {
    const auto started = clock::now();
    BacktrackResult step;
    double reg = 0.0;
    try {
      const double reference_loss = objective.loss(reference);
      const GradientBundle g = masked(objective.gradient(reference), config.active);
      step = backtrack(objective, reference, reference_loss, g, rho, config);
      reg = regularizer(step.weights, config.penalties);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NonFiniteValue) throw;
      result.status = FitStatus::non_finite;
      break;
    }
    rho = step.rho;
    const double current_objective = step.loss + reg;

    const double t_next = next_momentum(t);
    const double dt = config.accelerated ? (t - 1.0) / t_next : 0.0;
    reference = step.weights;
    if (dt != 0.0) reference += dt * (step.weights - previous);

    if (config.record_trace) {
      const std::chrono::duration<double> elapsed = clock::now() - started;
      result.trace.records.push_back({k, current_objective, step.loss, reg, rho, step.backtracks, dt, elapsed.count()});
    }

    previous = std::move(step.weights);
    result.iterations_used = k;
    result.final_objective = current_objective;
    t = t_next;

    if (std::abs(current_objective - previous_objective) <= config.rel_tolerance * std::abs(previous_objective)) {
      result.converged = true;
      result.status = FitStatus::converged;
      break;
    }
    previous_objective = current_objective;
  }
  result.weights = std::move(previous);
  return result;
}

}  // namespace hiermtl
