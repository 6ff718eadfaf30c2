#include "hiermtl/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "hiermtl/error.hpp"
#include "hiermtl/io.hpp"
#include "hiermtl/parallel.hpp"
#include "hiermtl/random.hpp"

namespace hiermtl {

SubtaskPredictor predictor_from(const WeightDecomposition& weights) {
  SubtaskPredictor p;
  for (std::size_t k = 0; k < weights.n_users(); ++k) p.weights.push_back(weights.compose_flat(k));
  p.zero_bands.assign(weights.n_users(), 0.0);
  return p;
}

void aggregate(EvalReport& report) {
  report.per_attribute.clear();
  for (const auto& users : report.per_subtask) {
    double s = 0.0;
    for (double v : users) s += v;
    report.per_attribute.push_back(users.empty() ? 0.0 : s / static_cast<double>(users.size()));
  }
  double s = 0.0;
  for (double v : report.per_attribute) s += v;
  report.overall = report.per_attribute.empty() ? 0.0 : s / static_cast<double>(report.per_attribute.size());
}

EvalReport evaluate(const MultiTaskDataset& test, const SubtaskPredictor& predictor, MetricKind metric,
                    const std::string& method) {
  if (predictor.weights.size() != test.n_users()) {
    throw Error(ErrorCode::ShapeMismatch, "predictor does not cover every subtask");
  }
  EvalReport report;
  report.method = method;
  report.metric = metric;
  for (std::size_t i = 0; i < test.n_attributes(); ++i) {
    report.per_subtask.emplace_back();
    for (std::size_t j = 0; j < test.users_per_attribute()[i]; ++j) {
      const std::size_t k = test.attribute_offset(i) + j;
      const auto& s = test.subtask(k);
      if (predictor.weights[k].size() != s.features.cols()) {
        throw Error(ErrorCode::ShapeMismatch, "predictor weight has the wrong length");
      }
      const double band = predictor.zero_bands.empty() ? 0.0 : predictor.zero_bands.at(k);
      report.per_subtask.back().push_back(metric_value(metric, s.features * predictor.weights[k], s.responses, band));
    }
  }
  aggregate(report);
  return report;
}

SubtaskPredictor with_zero_bands(SubtaskPredictor predictor, const MultiTaskDataset& train, double band_factor) {
  predictor.zero_bands.assign(train.n_users(), 0.0);
  if (band_factor == 0.0) return predictor;
  for (std::size_t k = 0; k < train.n_users(); ++k) {
    predictor.zero_bands[k] = band_factor * sample_std(train.subtask(k).features * predictor.weights[k]);
  }
  return predictor;
}

CvResult cross_validate(const MultiTaskDataset& train, const std::vector<Penalties>& grid, std::size_t folds,
                        std::uint64_t seed, const SolverConfig& solver) {
  if (grid.empty()) throw Error(ErrorCode::InvalidConfig, "penalty grid is empty");
  if (folds < 2) throw Error(ErrorCode::InvalidConfig, "need at least 2 folds");
  for (const auto& p : grid) validate(p);
  if (train.min_rows() < folds) {
    throw Error(ErrorCode::TooFewSamples, "every subtask needs at least " + std::to_string(folds) + " rows");
  }
  const MetricKind metric = default_metric(train.kind());
  const bool relative = train.kind() == TaskKind::relative;
  const std::size_t n_bands = relative ? kZeroBandFactors.size() : 1;

  // Per subtask, fold f holds out partition[k][f].
  std::vector<std::vector<std::vector<std::size_t>>> partition(train.n_users());
  for (std::size_t k = 0; k < train.n_users(); ++k) {
    partition[k] = kfold_partition(train.subtask(k).rows(), folds, derive_seed(seed, "cv-subtask", k));
  }
  std::vector<MultiTaskDataset> fit_parts, valid_parts;
  for (std::size_t f = 0; f < folds; ++f) {
    std::vector<std::vector<std::size_t>> fit_rows(train.n_users()), valid_rows(train.n_users());
    for (std::size_t k = 0; k < train.n_users(); ++k) {
      valid_rows[k] = partition[k][f];
      for (std::size_t g = 0; g < folds; ++g)
        if (g != f) fit_rows[k].insert(fit_rows[k].end(), partition[k][g].begin(), partition[k][g].end());
      std::sort(fit_rows[k].begin(), fit_rows[k].end());
    }
    fit_parts.push_back(train.select_rows(fit_rows));
    valid_parts.push_back(train.select_rows(valid_rows));
  }

  // errors[g * folds + f][b]
  std::vector<std::vector<double>> errors(grid.size() * folds, std::vector<double>(n_bands, 0.0));
  parallel_for(grid.size() * folds, [&](std::size_t task) {
    const std::size_t g = task / folds;
    const std::size_t f = task % folds;
    SolverConfig config = solver;
    config.penalties = grid[g];
    config.record_trace = false;
    const FitResult result = fit(fit_parts[f], config);
    const SubtaskPredictor base = predictor_from(result.weights);
    for (std::size_t b = 0; b < n_bands; ++b) {
      const double factor = relative ? kZeroBandFactors[b] : 0.0;
      const auto report = evaluate(valid_parts[f], with_zero_bands(base, fit_parts[f], factor), metric);
      errors[task][b] = metric_error(metric, report.overall);
    }
  });

  CvResult out;
  std::size_t best_row = 0;
  double best_error = std::numeric_limits<double>::infinity();
  for (std::size_t g = 0; g < grid.size(); ++g) {
    CvRow row{grid[g], std::numeric_limits<double>::infinity(), {}, 0.0};
    for (std::size_t b = 0; b < n_bands; ++b) {
      double mean = 0.0;
      std::vector<double> per_fold;
      for (std::size_t f = 0; f < folds; ++f) {
        per_fold.push_back(errors[g * folds + f][b]);
        mean += per_fold.back() / static_cast<double>(folds);
      }
      if (mean < row.mean_error) {
        row.mean_error = mean;
        row.fold_errors = std::move(per_fold);
        row.band_factor = relative ? kZeroBandFactors[b] : 0.0;
      }
    }
    const bool better = row.mean_error < best_error ||
                        (row.mean_error == best_error && row.penalties.sum() > out.table[best_row].penalties.sum());
    out.table.push_back(std::move(row));
    if (better) {
      best_error = out.table.back().mean_error;
      best_row = g;
    }
  }
  out.best = out.table[best_row].penalties;
  out.best_band_factor = out.table[best_row].band_factor;
  return out;
}

Penalties scaled_penalties(const MultiTaskDataset& train, double scale_theta, double scale_p, double scale_u) {
  const GradientBundle g0 = gradient(train, WeightDecomposition::zeros_like(train));
  return {scale_theta * g0.g_theta.lpNorm<Eigen::Infinity>(), scale_p * g0.g_p.rowwise().norm().maxCoeff(),
          scale_u * g0.g_u.colwise().norm().maxCoeff()};
}

std::vector<Penalties> default_penalty_grid(const MultiTaskDataset& train) {
  const Penalties unit = scaled_penalties(train, 1.0, 1.0, 1.0);
  std::vector<Penalties> grid;
  for (double shared : {1e-4, 1e-3, 1e-2})
    for (double user : {1e-4, 1e-3, 1e-2, 1e-1})
      grid.push_back({shared * unit.lambda1, shared * unit.lambda2, user * unit.lambda3});
  return grid;
}

const char* to_string(Method method) noexcept {
  switch (method) {
    case Method::zero: return "zero";
    case Method::ridge: return "ridge";
    case Method::lasso: return "lasso";
    case Method::proposed: return "ours";
  }
  return "ours";
}

Method parse_method(std::string_view text) {
  if (text == "zero") return Method::zero;
  if (text == "ridge") return Method::ridge;
  if (text == "lasso") return Method::lasso;
  if (text == "ours" || text == "proposed") return Method::proposed;
  throw Error(ErrorCode::InvalidConfig, "unknown method '" + std::string(text) + "'");
}

void validate(const ExperimentDescriptor& d) {
  if (d.methods.empty()) throw Error(ErrorCode::InvalidConfig, "method list is empty");
  if (d.train_fractions.empty()) throw Error(ErrorCode::InvalidConfig, "no train fractions given");
  for (double f : d.train_fractions) {
    if (!(f > 0.0 && f < 1.0)) throw Error(ErrorCode::InvalidConfig, "train fractions must lie in (0, 1)");
  }
  if (d.repetitions < 1) throw Error(ErrorCode::InvalidConfig, "repetitions must be at least 1");
  if (d.cv_folds < 2) throw Error(ErrorCode::InvalidConfig, "need at least 2 folds");
  for (const auto& p : d.grid) validate(p);
  validate(d.solver);
}

namespace {

SubtaskPredictor fit_method(Method method, const MultiTaskDataset& train, const ExperimentDescriptor& d,
                            std::uint64_t cv_seed) {
  switch (method) {
    case Method::zero: {
      SubtaskPredictor p;
      p.weights.assign(train.n_users(), Vector::Zero(static_cast<Eigen::Index>(train.dim())));
      p.zero_bands.assign(train.n_users(), 0.0);
      return p;
    }
    case Method::ridge:
    case Method::lasso: {
      UserExclusiveConfig config;
      config.learner = method == Method::ridge ? Learner::ridge : Learner::lasso;
      config.lambda_grid = d.baseline_lambda_grid;
      config.cv_folds = d.cv_folds;
      config.seed = cv_seed;
      config.solver = d.solver;
      auto fitted = fit_user_exclusive(train, config);
      return {std::move(fitted.weights), std::move(fitted.zero_bands)};
    }
    case Method::proposed: {
      const auto grid = d.grid.empty() ? default_penalty_grid(train) : d.grid;
      const CvResult cv = cross_validate(train, grid, d.cv_folds, cv_seed, d.solver);
      SolverConfig config = d.solver;
      config.penalties = cv.best;
      config.record_trace = false;
      return with_zero_bands(predictor_from(fit(train, config).weights), train, cv.best_band_factor);
    }
  }
  throw Error(ErrorCode::InvalidConfig, "unknown method");
}

}  // namespace

std::vector<EvalReport> run_experiment(const MultiTaskDataset& data, const ExperimentDescriptor& d) {
  validate(d);
  const MultiTaskDataset prepared = d.normalize ? normalize_columns(data).dataset : data;
  const MetricKind metric = default_metric(prepared.kind());

  std::vector<EvalReport> reports;
  for (std::size_t fi = 0; fi < d.train_fractions.size(); ++fi) {
    const double fraction = d.train_fractions[fi];
    std::vector<EvalReport> sums(d.methods.size());
    for (int r = 0; r < d.repetitions; ++r) {
      const auto rep = static_cast<std::uint64_t>(r);
      const TrainTestSplit split =
          split_train_test(prepared, fraction, derive_seed(d.seed, "split", rep * 1000 + fi));
      const std::uint64_t cv_seed = derive_seed(d.seed, "cv", rep * 1000 + fi);
      for (std::size_t m = 0; m < d.methods.size(); ++m) {
        const auto predictor = fit_method(d.methods[m], split.train, d, cv_seed);
        EvalReport one = evaluate(split.test, predictor, metric, to_string(d.methods[m]));
        if (r == 0) {
          sums[m] = std::move(one);
          continue;
        }
        for (std::size_t i = 0; i < one.per_subtask.size(); ++i)
          for (std::size_t j = 0; j < one.per_subtask[i].size(); ++j) sums[m].per_subtask[i][j] += one.per_subtask[i][j];
      }
    }
    for (auto& report : sums) {
      for (auto& users : report.per_subtask)
        for (auto& v : users) v /= static_cast<double>(d.repetitions);
      report.train_fraction = fraction;
      report.seed = d.seed;
      report.repetitions = d.repetitions;
      aggregate(report);
      reports.push_back(std::move(report));
    }
  }
  return reports;
}

std::string report_table_csv(const std::vector<EvalReport>& reports, const std::vector<std::string>& row_names) {
  std::ostringstream out;
  out << "attribute";
  for (const auto& r : reports) out << ',' << r.method;
  out << '\n';
  const std::size_t n_rows = reports.empty() ? 0 : reports.front().per_attribute.size();
  for (std::size_t i = 0; i < n_rows; ++i) {
    out << (i < row_names.size() ? row_names[i] : "attr" + std::to_string(i + 1));
    for (const auto& r : reports) {
      if (r.per_attribute.size() != n_rows) throw Error(ErrorCode::ShapeMismatch, "reports differ in layout");
      out << ',' << io::format_double(r.per_attribute[i]);
    }
    out << '\n';
  }
  out << "mean";
  for (const auto& r : reports) out << ',' << io::format_double(r.overall);
  out << '\n';
  return out.str();
}

nlohmann::json to_json(const EvalReport& report) {
  return {{"method", report.method},
          {"metric", to_string(report.metric)},
          {"per_subtask", report.per_subtask},
          {"per_attribute", report.per_attribute},
          {"overall", report.overall},
          {"train_fraction", report.train_fraction},
          {"seed", report.seed},
          {"repetitions", report.repetitions}};
}

ConvergenceCurves acceleration_curves(const MultiTaskDataset& train, const Penalties& penalties, int restarts,
                                      int iterations, std::uint64_t seed, double init_scale,
                                      const SolverConfig& solver) {
  if (restarts < 1 || iterations < 1) throw Error(ErrorCode::InvalidConfig, "restarts and iterations must be positive");
  const auto n = static_cast<std::size_t>(iterations);
  ConvergenceCurves curves{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  std::vector<ConvergenceCurves> runs(static_cast<std::size_t>(restarts));
  parallel_for(runs.size(), [&](std::size_t r) {
    WeightDecomposition start = WeightDecomposition::zeros_like(train);
    auto rng = make_stream(seed, "restarts", r);
    std::normal_distribution<double> dist(0.0, init_scale);
    Vector flat(static_cast<Eigen::Index>(start.flat_size()));
    for (Eigen::Index k = 0; k < flat.size(); ++k) flat(k) = dist(rng);
    start.assign_flat(flat);
    for (bool accelerated : {true, false}) {
      SolverConfig config = solver;
      config.penalties = penalties;
      config.accelerated = accelerated;
      config.max_iterations = iterations;
      config.rel_tolerance = 0.0;
      config.record_trace = true;
      const FitResult result = fit(train, config, start);
      auto& out = accelerated ? runs[r].accelerated : runs[r].plain;
      out.assign(n, result.final_objective);
      for (const auto& rec : result.trace.records) out[static_cast<std::size_t>(rec.iteration - 1)] = rec.objective;
    }
  });
  for (const auto& run : runs) {
    for (std::size_t k = 0; k < n; ++k) {
      curves.accelerated[k] += run.accelerated[k] / static_cast<double>(restarts);
      curves.plain[k] += run.plain[k] / static_cast<double>(restarts);
    }
  }
  return curves;
}

}  // namespace hiermtl
