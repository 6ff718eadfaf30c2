#include "hiermtl/synthgen.hpp"

#include <cmath>
#include <random>

#include "hiermtl/error.hpp"
#include "hiermtl/random.hpp"

namespace hiermtl {

void validate(const SynthConfig& config) {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidConfig, what); };
  if (config.d == 0 || config.n_a == 0 || config.users_per_attribute == 0 || config.samples_per_subtask == 0) {
    fail("dimensions and counts must be positive");
  }
  if (!(config.feature_variance > 0.0)) fail("feature_variance must be positive");
  if (!(config.noise_variance >= 0.0)) fail("noise_variance must be non-negative");
  if (!(config.theta_variance >= 0.0 && config.p_variance >= 0.0 && config.u_variance >= 0.0)) {
    fail("weight variances must be non-negative");
  }
  auto check_range = [&](const IndexRange& r, std::size_t limit, const char* name) {
    if (r.begin > r.end || r.end > limit) fail(std::string(name) + " lies outside [0, " + std::to_string(limit) + ")");
  };
  check_range(config.theta_zero_range, config.d, "theta_zero_range");
  check_range(config.p_zero_row_range, config.d, "p_zero_row_range");
  if (config.u_zero_cols_per_attribute > config.users_per_attribute) {
    fail("u_zero_cols_per_attribute exceeds users_per_attribute");
  }
}

namespace {

Matrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, double mean, double variance, std::mt19937_64 rng) {
  std::normal_distribution<double> dist(mean, std::sqrt(variance));
  Matrix m(rows, cols);
  // Column-major fill: column c depends only on the stream position.
  for (Eigen::Index c = 0; c < cols; ++c)
    for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = variance == 0.0 ? mean : dist(rng);
  return m;
}

GroundTruth draw_truth(const SynthConfig& config) {
  const std::vector<std::size_t> layout(config.n_a, config.users_per_attribute);
  GroundTruth truth{WeightDecomposition(config.d, layout), config};
  auto& w = truth.weights;
  const auto d = static_cast<Eigen::Index>(config.d);
  w.theta = gaussian_matrix(d, 1, config.theta_mean, config.theta_variance, make_stream(config.seed, "theta"));
  w.p = gaussian_matrix(d, w.p.cols(), config.p_mean, config.p_variance, make_stream(config.seed, "p"));
  w.u = gaussian_matrix(d, w.u.cols(), config.u_mean, config.u_variance, make_stream(config.seed, "u"));

  for (auto r = config.theta_zero_range.begin; r < config.theta_zero_range.end; ++r) {
    w.theta(static_cast<Eigen::Index>(r)) = 0.0;
  }
  for (auto r = config.p_zero_row_range.begin; r < config.p_zero_row_range.end; ++r) {
    w.p.row(static_cast<Eigen::Index>(r)).setZero();
  }
  for (std::size_t i = 0; i < config.n_a; ++i) {
    for (std::size_t j = 0; j < config.u_zero_cols_per_attribute; ++j) {
      w.u.col(static_cast<Eigen::Index>(w.attribute_offsets[i] + j)).setZero();
    }
  }
  return truth;
}

Vector gaussian_noise(Eigen::Index n, double variance, std::mt19937_64 rng) {
  if (variance == 0.0) return Vector::Zero(n);
  std::normal_distribution<double> dist(0.0, std::sqrt(variance));
  Vector v(n);
  for (Eigen::Index k = 0; k < n; ++k) v(k) = dist(rng);
  return v;
}

double sign_label(double score) { return score >= 0.0 ? 1.0 : -1.0; }

}  // namespace

Vector binary_labels(const Vector& scores) {
  Vector labels(scores.size());
  for (Eigen::Index r = 0; r < scores.size(); ++r) labels(r) = sign_label(scores(r));
  return labels;
}

Vector relative_labels(const Vector& scores, double relative_band) {
  const auto n = scores.size();
  const double mean = n > 0 ? scores.mean() : 0.0;
  const double sd = n > 1 ? std::sqrt((scores.array() - mean).square().sum() / static_cast<double>(n - 1)) : 0.0;
  const double band = relative_band * sd;
  Vector labels(n);
  for (Eigen::Index r = 0; r < n; ++r) labels(r) = std::abs(scores(r)) <= band ? 0.0 : sign_label(scores(r));
  return labels;
}

SyntheticData generate(const SynthConfig& config) {
  validate(config);
  GroundTruth truth = draw_truth(config);
  const auto n = static_cast<Eigen::Index>(config.samples_per_subtask);
  const auto d = static_cast<Eigen::Index>(config.d);
  std::vector<SubtaskData> subtasks;
  for (std::size_t i = 0; i < config.n_a; ++i) {
    for (std::size_t j = 0; j < config.users_per_attribute; ++j) {
      const std::size_t k = i * config.users_per_attribute + j;
      SubtaskData s{i, j, gaussian_matrix(n, d, 0.0, config.feature_variance, make_stream(config.seed, "features", k)),
                    Vector()};
      s.responses = s.features * truth.weights.compose(i, j) +
                    gaussian_noise(n, config.noise_variance, make_stream(config.seed, "noise", k));
      subtasks.push_back(std::move(s));
    }
  }
  MultiTaskDataset dataset(TaskKind::regression, config.d,
                           std::vector<std::size_t>(config.n_a, config.users_per_attribute), std::move(subtasks));
  return {std::move(dataset), std::move(truth)};
}

SyntheticData generate_classification(const SynthConfig& config, TaskKind kind, double relative_band) {
  if (kind == TaskKind::regression) {
    throw Error(ErrorCode::InvalidConfig, "generate_classification needs a binary or relative kind");
  }
  if (!(relative_band >= 0.0)) throw Error(ErrorCode::InvalidConfig, "relative band must be non-negative");
  validate(config);
  GroundTruth truth = draw_truth(config);
  const auto n = static_cast<Eigen::Index>(config.samples_per_subtask);
  const auto d = static_cast<Eigen::Index>(config.d);
  std::vector<SubtaskData> subtasks;
  for (std::size_t i = 0; i < config.n_a; ++i) {
    for (std::size_t j = 0; j < config.users_per_attribute; ++j) {
      const std::size_t k = i * config.users_per_attribute + j;
      SubtaskData s{i, j, Matrix(), Vector()};
      if (kind == TaskKind::binary) {
        s.features = gaussian_matrix(n, d, 0.0, config.feature_variance, make_stream(config.seed, "features", k));
      } else {
        const Matrix first =
            gaussian_matrix(n, d, 0.0, config.feature_variance, make_stream(config.seed, "features", k));
        const Matrix second =
            gaussian_matrix(n, d, 0.0, config.feature_variance, make_stream(config.seed, "features-pair", k));
        s.features = make_pairwise_rows(first, second);
      }
      const Vector scores = s.features * truth.weights.compose(i, j) +
                            gaussian_noise(n, config.noise_variance, make_stream(config.seed, "noise", k));
      s.responses = kind == TaskKind::binary ? binary_labels(scores) : relative_labels(scores, relative_band);
      subtasks.push_back(std::move(s));
    }
  }
  MultiTaskDataset dataset(kind, config.d, std::vector<std::size_t>(config.n_a, config.users_per_attribute),
                           std::move(subtasks));
  return {std::move(dataset), std::move(truth)};
}

}  // namespace hiermtl
