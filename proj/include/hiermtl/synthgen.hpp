#pragma once

#include <cstddef>
#include <cstdint>

#include "hiermtl/dataset.hpp"
#include "hiermtl/weights.hpp"

namespace hiermtl {

struct IndexRange {
  std::size_t begin = 0;
  std::size_t end = 0;  // exclusive
};

// Defaults reproduce the simulated regression benchmark: 5 attributes x 10
// users, d = 50, 300 samples per subtask.
struct SynthConfig {
  std::size_t d = 50;
  std::size_t n_a = 5;
  std::size_t users_per_attribute = 10;
  std::size_t samples_per_subtask = 300;
  double feature_variance = 4.0;
  double noise_variance = 1.0;
  double theta_mean = 1.0;
  double theta_variance = 4.0;
  double p_mean = 1.0;
  double p_variance = 5.0;
  double u_mean = 1.0;
  double u_variance = 10.0;
  IndexRange theta_zero_range{0, 15};
  IndexRange p_zero_row_range{19, 35};  // rows "20-35", 1-based inclusive
  std::size_t u_zero_cols_per_attribute = 2;
  std::uint64_t seed = 0;
};

void validate(const SynthConfig& config);

struct GroundTruth {
  WeightDecomposition weights;
  SynthConfig config;
};

struct SyntheticData {
  MultiTaskDataset dataset;
  GroundTruth truth;
};

// Regression data y = X w* + noise with structured-sparse w*.
SyntheticData generate(const SynthConfig& config);

// Sign-labelled variants. Binary: labels sign(score) with sign(0) = +1.
// Relative: rows are differences of two raw draws, labels are 0 inside a
// band of half-width relative_band * std(scores), sign(score) outside.
SyntheticData generate_classification(const SynthConfig& config, TaskKind kind, double relative_band = 0.1);

// Label maps used by generate_classification.
Vector binary_labels(const Vector& scores);
Vector relative_labels(const Vector& scores, double relative_band);

}  // namespace hiermtl
