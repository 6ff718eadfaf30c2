#include "hiermtl/prox.hpp"

#include <cmath>

#include "hiermtl/error.hpp"

namespace hiermtl {

namespace {

void check_tau(double tau) {
  if (!(tau >= 0.0)) throw Error(ErrorCode::NegativeTau, "threshold must be non-negative");
}

// 0/0 is taken as factor 0: a zero group maps to zero.
double group_factor(double norm, double tau) {
  if (norm == 0.0 || norm <= tau) return 0.0;
  return 1.0 - tau / norm;
}

}  // namespace

Vector soft_threshold(const Vector& v, double tau) {
  check_tau(tau);
  Vector out(v.size());
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    const double shrunk = std::abs(v(k)) - tau;
    out(k) = shrunk > 0.0 ? std::copysign(shrunk, v(k)) : 0.0;
  }
  return out;
}

Matrix row_group_shrink(const Matrix& m, double tau) {
  check_tau(tau);
  Matrix out(m.rows(), m.cols());
  for (Eigen::Index r = 0; r < m.rows(); ++r) out.row(r) = group_factor(m.row(r).norm(), tau) * m.row(r);
  return out;
}

Matrix col_group_shrink(const Matrix& m, double tau) {
  check_tau(tau);
  Matrix out(m.rows(), m.cols());
  for (Eigen::Index c = 0; c < m.cols(); ++c) out.col(c) = group_factor(m.col(c).norm(), tau) * m.col(c);
  return out;
}

}  // namespace hiermtl
