#pragma once

// Reference computations that do not share code paths with the library.

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "hiermtl/dataset.hpp"
#include "hiermtl/objective.hpp"
#include "hiermtl/weights.hpp"

namespace hiermtl::oracle {

// Compass (coordinate pattern) search. Needs only function values, so it is
// independent of any closed-form prox. At most `max_sweeps` improving sweeps
// per step size, so creeping along a diagonal valley cannot stall it.
inline Vector compass_minimize(const std::function<double(const Vector&)>& f, Vector x, double initial_step,
                               double final_step = 1e-14, int max_sweeps = 200) {
  double fx = f(x);
  double step = initial_step;
  int sweeps = 0;
  while (step > final_step) {
    bool improved = false;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      for (double dir : {1.0, -1.0}) {
        Vector y = x;
        y(i) += dir * step;
        const double fy = f(y);
        if (fy < fx) {
          x = std::move(y);
          fx = fy;
          improved = true;
          break;
        }
      }
    }
    if (!improved || ++sweeps >= max_sweeps) {
      step *= 0.5;
      sweeps = 0;
    }
  }
  return x;
}

// Best of several compass searches (from the input, from zero and from a few
// random points).
inline double brute_force_min(const std::function<double(const Vector&)>& f, const Vector& input,
                              std::mt19937_64& rng) {
  const double scale = std::max(1.0, input.lpNorm<Eigen::Infinity>());
  std::vector<Vector> starts{input, Vector::Zero(input.size())};
  std::normal_distribution<double> n(0.0, scale);
  for (int k = 0; k < 2; ++k) {
    Vector s(input.size());
    for (Eigen::Index i = 0; i < s.size(); ++i) s(i) = n(rng);
    starts.push_back(s);
  }
  double best = f(input);
  for (const auto& s : starts) best = std::min(best, f(compass_minimize(f, s, scale)));
  return best;
}

// Plain residual loss, written independently of the library's Gram-based path.
inline double direct_loss(const MultiTaskDataset& ds, const WeightDecomposition& w) {
  double total = 0.0;
  for (std::size_t k = 0; k < ds.n_users(); ++k) {
    const auto& s = ds.subtask(k);
    const std::size_t i = s.attribute_index;
    const Vector wk = w.theta + w.p.col(static_cast<Eigen::Index>(i)) + w.u.col(static_cast<Eigen::Index>(k));
    total += (s.responses - s.features * wk).squaredNorm();
  }
  return total;
}

inline Vector central_difference_gradient(const MultiTaskDataset& ds, const WeightDecomposition& w,
                                          double h = 1e-6) {
  const Vector x = w.flatten();
  Vector g(x.size());
  WeightDecomposition probe = w;
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    Vector xp = x, xm = x;
    xp(k) += h;
    xm(k) -= h;
    probe.assign_flat(xp);
    const double fp = direct_loss(ds, probe);
    probe.assign_flat(xm);
    const double fm = direct_loss(ds, probe);
    g(k) = (fp - fm) / (2.0 * h);
  }
  return g;
}

struct TailEstimate {
  double probability = 0.0;
  double standard_error = 0.0;
};

// Monte Carlo estimate of P(chi2(d) >= d + t).
inline TailEstimate chi_square_tail(double d, double t, int draws, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::chi_squared_distribution<double> chi(d);
  int hits = 0;
  for (int i = 0; i < draws; ++i) hits += chi(rng) >= d + t ? 1 : 0;
  const double p = static_cast<double>(hits) / draws;
  return {p, std::sqrt(std::max(p * (1.0 - p), 1.0 / draws) / draws)};
}

}  // namespace hiermtl::oracle
