#pragma once

#include <cstddef>
#include <vector>

#include "hiermtl/objective.hpp"

namespace hiermtl::theory {

struct TheoryParams {
  double sigma = 1.0;  // noise standard deviation
  double t = 1.0;
  std::size_t d = 1;
  std::vector<std::size_t> users_per_attribute;
  std::size_t n_min = 1;

  std::size_t n_users() const;
};

void validate(const TheoryParams& params);

struct Multipliers {
  double c1 = 1.0;
  double c2 = 1.0;
  double c3 = 1.0;
};

struct Kappas {
  double theta = 1.0;
  double p = 1.0;
  double ua = 1.0;
};

// Upper bounds on the number of non-zero entries / rows / columns.
struct Supports {
  double n_theta = 0.0;
  double n_p = 0.0;
  double n_ua = 0.0;
};

enum class ZetaForm {
  verbatim,   // third term weighted by lambda2, as printed
  corrected,  // third term weighted by lambda3
};

// 2 sigma sqrt(d n_u + t)
double alpha(const TheoryParams& params);

// sqrt(sum_i n_{u_i}^2)
double n_tilde(const std::vector<std::size_t>& users_per_attribute);

// (c1 n_u alpha, c2 n_tilde alpha, c3 alpha); every multiplier must be >= 1.
Penalties lambda_schedule(const TheoryParams& params, const Multipliers& multipliers);

// t - d log(1 + t / d)
double z_value(double d_total, double t);

// Upper bound on P(chi2(d) >= d + t): exp(-Z/2) / sqrt(2 pi Z).
double chi_square_tail_bound(double d, double t);

// 1 - chi_square_tail_bound(d_total, t). Negative values mean the bound is
// vacuous at this t.
double delta_probability(double d_total, double t);
inline bool is_vacuous(double delta) { return delta < 0.0; }

double zeta(const Penalties& lambdas, const Kappas& kappas, const Supports& supports,
            ZetaForm form = ZetaForm::verbatim);

}  // namespace hiermtl::theory
