#pragma once

#include <array>

#include "hiermtl/dataset.hpp"

namespace hiermtl {

enum class MetricKind { nmse, binary_accuracy, ranking_accuracy };

const char* to_string(MetricKind kind) noexcept;
MetricKind parse_metric_kind(std::string_view text);
MetricKind default_metric(TaskKind kind);
// Lower is better for every kind: NMSE itself, or 1 - accuracy.
bool metric_fits_task(MetricKind metric, TaskKind kind);

// Mean squared error divided by the (population) variance of `truth`.
double nmse(const Vector& predictions, const Vector& truth);

// Fraction of samples with sign(score) == label; sign(0) counts as +1.
double binary_accuracy(const Vector& scores, const Vector& labels);

// Predicted label is 0 when |score| <= zero_band, sign(score) otherwise.
double ranking_accuracy(const Vector& scores, const Vector& labels, double zero_band);

double metric_value(MetricKind metric, const Vector& scores, const Vector& truth, double zero_band = 0.0);
// Quantity minimised during model selection.
double metric_error(MetricKind metric, double value);

// Candidate zero bands for relative tasks, as multiples of std(train scores).
inline constexpr std::array<double, 4> kZeroBandFactors{0.0, 0.05, 0.1, 0.2};

double sample_std(const Vector& values);

}  // namespace hiermtl
