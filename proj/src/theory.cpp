#include "hiermtl/theory.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "hiermtl/error.hpp"

namespace hiermtl::theory {

std::size_t TheoryParams::n_users() const {
  return std::accumulate(users_per_attribute.begin(), users_per_attribute.end(), std::size_t{0});
}

void validate(const TheoryParams& params) {
  if (!(params.sigma >= 0.0)) throw Error(ErrorCode::InvalidConfig, "sigma must be non-negative");
  if (!(params.t > 0.0)) throw Error(ErrorCode::InvalidConfig, "t must be positive");
  if (params.d == 0 || params.users_per_attribute.empty()) {
    throw Error(ErrorCode::InvalidConfig, "d and the attribute layout must be non-empty");
  }
  if (params.n_min < 1) throw Error(ErrorCode::InvalidConfig, "n_min must be at least 1");
}

double alpha(const TheoryParams& params) {
  const double dn = static_cast<double>(params.d) * static_cast<double>(params.n_users());
  return 2.0 * params.sigma * std::sqrt(dn + params.t);
}

double n_tilde(const std::vector<std::size_t>& users_per_attribute) {
  double s = 0.0;
  for (auto n : users_per_attribute) s += static_cast<double>(n) * static_cast<double>(n);
  return std::sqrt(s);
}

Penalties lambda_schedule(const TheoryParams& params, const Multipliers& multipliers) {
  validate(params);
  if (!(multipliers.c1 >= 1.0 && multipliers.c2 >= 1.0 && multipliers.c3 >= 1.0)) {
    throw Error(ErrorCode::MultiplierBelowOne, "schedule multipliers must be at least 1");
  }
  const double a = alpha(params);
  return {multipliers.c1 * static_cast<double>(params.n_users()) * a,
          multipliers.c2 * n_tilde(params.users_per_attribute) * a, multipliers.c3 * a};
}

double z_value(double d_total, double t) {
  // log1p keeps the t -> 0 limit accurate.
  return t - d_total * std::log1p(t / d_total);
}

double chi_square_tail_bound(double d, double t) {
  const double z = z_value(d, t);
  return std::exp(-0.5 * z) / std::sqrt(2.0 * std::numbers::pi * z);
}

double delta_probability(double d_total, double t) { return 1.0 - chi_square_tail_bound(d_total, t); }

double zeta(const Penalties& lambdas, const Kappas& kappas, const Supports& supports, ZetaForm form) {
  if (!(kappas.theta > 0.0 && kappas.p > 0.0 && kappas.ua > 0.0)) {
    throw Error(ErrorCode::NonPositiveKappa, "restricted-eigenvalue constants must be positive");
  }
  const double third_lambda = form == ZetaForm::verbatim ? lambdas.lambda2 : lambdas.lambda3;
  return lambdas.lambda1 * std::sqrt(supports.n_theta) / kappas.theta +
         lambdas.lambda2 * std::sqrt(supports.n_p) / kappas.p + third_lambda * std::sqrt(supports.n_ua) / kappas.ua;
}

}  // namespace hiermtl::theory
