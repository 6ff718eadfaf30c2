#include <gtest/gtest.h>

#include <cmath>

#include "hiermtl/error.hpp"
#include "hiermtl/theory.hpp"
#include "oracles.hpp"

using namespace hiermtl;
using namespace hiermtl::theory;

namespace {

TheoryParams params(double sigma, std::size_t d, std::vector<std::size_t> layout, double t) {
  TheoryParams p;
  p.sigma = sigma;
  p.d = d;
  p.users_per_attribute = std::move(layout);
  p.t = t;
  return p;
}

}  // namespace

TEST(Alpha, Examples) {
  EXPECT_DOUBLE_EQ(alpha(params(1.0, 2, {1}, 2.0)), 4.0);
  EXPECT_EQ(alpha(params(0.0, 2, {1}, 2.0)), 0.0);
  EXPECT_DOUBLE_EQ(alpha(params(2.0, 7, {3, 2}, 5.0)), 2.0 * alpha(params(1.0, 7, {3, 2}, 5.0)));
}

TEST(LambdaSchedule, SimulatedLayout) {
  const std::vector<std::size_t> layout(5, 10);
  EXPECT_NEAR(n_tilde(layout), std::sqrt(500.0), 1e-12);
  EXPECT_NEAR(n_tilde(layout), 22.3607, 1e-4);

  const TheoryParams p = params(1.0, 50, layout, 10.0);
  const double a = 2.0 * std::sqrt(50.0 * 50.0 + 10.0);
  const Penalties unit = lambda_schedule(p, {1, 1, 1});
  EXPECT_DOUBLE_EQ(unit.lambda1, 50.0 * a);
  EXPECT_DOUBLE_EQ(unit.lambda2, std::sqrt(500.0) * a);
  EXPECT_DOUBLE_EQ(unit.lambda3, a);

  const Penalties rec = lambda_schedule(p, {2, 2.5, 32});
  EXPECT_DOUBLE_EQ(rec.lambda1, 2 * 50.0 * a);
  EXPECT_DOUBLE_EQ(rec.lambda2, 2.5 * std::sqrt(500.0) * a);
  EXPECT_DOUBLE_EQ(rec.lambda3, 32 * a);
  // the schedule meets the theorem's lower bounds
  EXPECT_GE(rec.lambda1, unit.lambda1);
  EXPECT_GE(rec.lambda2, unit.lambda2);
  EXPECT_GE(rec.lambda3, unit.lambda3);
}

TEST(LambdaSchedule, Validation) {
  try {
    lambda_schedule(params(1.0, 5, {2}, 1.0), {0.5, 1, 1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MultiplierBelowOne);
  }
  EXPECT_THROW(lambda_schedule(params(1.0, 5, {2}, 0.0), {1, 1, 1}), Error);
  EXPECT_THROW(lambda_schedule(params(-1.0, 5, {2}, 1.0), {1, 1, 1}), Error);
}

TEST(ZValue, Examples) {
  EXPECT_NEAR(z_value(1, 1), 1.0 - std::log(2.0), 1e-15);
  EXPECT_NEAR(z_value(1, 1), 0.30685, 1e-5);
  const double tiny = z_value(10, 1e-9);
  EXPECT_GT(tiny, 0.0);
  EXPECT_LT(tiny, 1e-15);
  double prev = 0.0;
  for (double t = 0.01; t < 1000; t *= 1.3) {
    const double z = z_value(25, t);
    EXPECT_GT(z, prev);
    prev = z;
  }
}

TEST(TailBound, Examples) {
  EXPECT_NEAR(chi_square_tail_bound(1, 1), 0.6181, 1e-3);
  EXPECT_NEAR(delta_probability(1, 1), 0.3819, 1e-3);
  EXPECT_EQ(delta_probability(7, 3.5), 1.0 - chi_square_tail_bound(7, 3.5));
  EXPECT_LT(chi_square_tail_bound(5, 1e4), 1e-100);

  // strictly increasing until the bound drops below double resolution near 1
  double prev = -1e300;
  for (double t = 1; t < 500; t *= 1.5) {
    const double delta = delta_probability(40, t);
    if (chi_square_tail_bound(40, t) > 1e-15)
      EXPECT_GT(delta, prev) << "t = " << t;
    else
      EXPECT_GE(delta, prev) << "t = " << t;
    prev = delta;
  }
  EXPECT_TRUE(is_vacuous(delta_probability(2500, 1.0)));
}

TEST(TailBound, LargeTIsNearlyCertain) {
  const double d = 50.0 * 50.0;
  double t = 1.0;
  while (z_value(d, t) < 12.0) t *= 1.1;
  const double delta = delta_probability(d, t);
  EXPECT_GT(delta, 0.99);
  EXPECT_LT(delta, 1.0);
}

TEST(TailBound, DominatesMonteCarlo) {
  const auto one = oracle::chi_square_tail(1, 1, 100000, 1);
  EXPECT_NEAR(one.probability, 0.1573, 0.005);
  EXPECT_LE(one.probability, chi_square_tail_bound(1, 1) + 3 * one.standard_error);
  const auto twenty = oracle::chi_square_tail(20, 100, 100000, 2);
  EXPECT_LE(twenty.probability, chi_square_tail_bound(20, 100) + 3 * twenty.standard_error);
}

TEST(Zeta, Examples) {
  EXPECT_DOUBLE_EQ(zeta({1, 1, 1}, {1, 1, 1}, {4, 4, 4}), 6.0);
  EXPECT_LT(zeta({1, 1, 1}, {1e12, 1e12, 1e12}, {4, 4, 4}), 1e-10);

  const Penalties lam{1.0, 2.0, 5.0};
  const Kappas k{1.5, 2.5, 0.5};
  const Supports s{9, 4, 16};
  const double verbatim = zeta(lam, k, s, ZetaForm::verbatim);
  const double corrected = zeta(lam, k, s, ZetaForm::corrected);
  EXPECT_NEAR(corrected - verbatim, (5.0 - 2.0) * 4.0 / 0.5, 1e-12);

  try {
    zeta(lam, {0, 1, 1}, s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonPositiveKappa);
  }
}
