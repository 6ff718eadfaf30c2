#include "hiermtl/metrics.hpp"

#include <cmath>

#include "hiermtl/error.hpp"

namespace hiermtl {

const char* to_string(MetricKind kind) noexcept {
  switch (kind) {
    case MetricKind::nmse: return "nmse";
    case MetricKind::binary_accuracy: return "accuracy";
    case MetricKind::ranking_accuracy: return "ranking_accuracy";
  }
  return "nmse";
}

MetricKind parse_metric_kind(std::string_view text) {
  if (text == "nmse") return MetricKind::nmse;
  if (text == "accuracy" || text == "binary_accuracy") return MetricKind::binary_accuracy;
  if (text == "ranking_accuracy" || text == "ranking") return MetricKind::ranking_accuracy;
  throw Error(ErrorCode::InvalidConfig, "unknown metric '" + std::string(text) + "'");
}

MetricKind default_metric(TaskKind kind) {
  switch (kind) {
    case TaskKind::regression: return MetricKind::nmse;
    case TaskKind::binary: return MetricKind::binary_accuracy;
    case TaskKind::relative: return MetricKind::ranking_accuracy;
  }
  return MetricKind::nmse;
}

bool metric_fits_task(MetricKind metric, TaskKind kind) { return metric == default_metric(kind); }

namespace {

void check_lengths(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "score and label lengths differ");
}

double sign_of(double v) { return v >= 0.0 ? 1.0 : -1.0; }

}  // namespace

double nmse(const Vector& predictions, const Vector& truth) {
  check_lengths(predictions, truth);
  if (truth.size() == 0) throw Error(ErrorCode::DimensionMismatch, "empty vectors");
  const double mean = truth.mean();
  const double variance = (truth.array() - mean).square().mean();
  if (!(variance > 0.0)) throw Error(ErrorCode::ConstantTruth, "truth has zero variance");
  return (predictions - truth).squaredNorm() / static_cast<double>(truth.size()) / variance;
}

double binary_accuracy(const Vector& scores, const Vector& labels) {
  check_lengths(scores, labels);
  if (scores.size() == 0) return 0.0;
  std::size_t hits = 0;
  for (Eigen::Index k = 0; k < scores.size(); ++k) hits += sign_of(scores(k)) == labels(k);
  return static_cast<double>(hits) / static_cast<double>(scores.size());
}

double ranking_accuracy(const Vector& scores, const Vector& labels, double zero_band) {
  check_lengths(scores, labels);
  if (!(zero_band >= 0.0)) throw Error(ErrorCode::InvalidConfig, "zero band must be non-negative");
  if (scores.size() == 0) return 0.0;
  std::size_t hits = 0;
  for (Eigen::Index k = 0; k < scores.size(); ++k) {
    const double predicted = std::abs(scores(k)) <= zero_band ? 0.0 : sign_of(scores(k));
    hits += predicted == labels(k);
  }
  return static_cast<double>(hits) / static_cast<double>(scores.size());
}

double metric_value(MetricKind metric, const Vector& scores, const Vector& truth, double zero_band) {
  switch (metric) {
    case MetricKind::nmse: return nmse(scores, truth);
    case MetricKind::binary_accuracy: return binary_accuracy(scores, truth);
    case MetricKind::ranking_accuracy: return ranking_accuracy(scores, truth, zero_band);
  }
  return 0.0;
}

double metric_error(MetricKind metric, double value) { return metric == MetricKind::nmse ? value : 1.0 - value; }

double sample_std(const Vector& values) {
  const auto n = values.size();
  if (n < 2) return 0.0;
  const double mean = values.mean();
  return std::sqrt((values.array() - mean).square().sum() / static_cast<double>(n - 1));
}

}  // namespace hiermtl
