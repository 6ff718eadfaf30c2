#include "hiermtl/weights.hpp"

#include <numeric>

#include "hiermtl/error.hpp"

namespace hiermtl {

WeightDecomposition::WeightDecomposition(std::size_t dim, const std::vector<std::size_t>& users_per_attribute) {
  const std::size_t n_u = std::accumulate(users_per_attribute.begin(), users_per_attribute.end(), std::size_t{0});
  const auto d = static_cast<Eigen::Index>(dim);
  theta = Vector::Zero(d);
  p = Matrix::Zero(d, static_cast<Eigen::Index>(users_per_attribute.size()));
  u = Matrix::Zero(d, static_cast<Eigen::Index>(n_u));
  attribute_offsets.resize(users_per_attribute.size());
  std::size_t offset = 0;
  for (std::size_t i = 0; i < users_per_attribute.size(); ++i) {
    attribute_offsets[i] = offset;
    offset += users_per_attribute[i];
  }
}

WeightDecomposition WeightDecomposition::zeros_like(const MultiTaskDataset& dataset) {
  return WeightDecomposition(dataset.dim(), dataset.users_per_attribute());
}

std::size_t WeightDecomposition::users_in_attribute(std::size_t attribute) const {
  const std::size_t next = attribute + 1 < attribute_offsets.size() ? attribute_offsets[attribute + 1] : n_users();
  return next - attribute_offsets.at(attribute);
}

Vector WeightDecomposition::compose(std::size_t attribute, std::size_t user) const {
  if (attribute >= n_attributes() || user >= users_in_attribute(attribute)) {
    throw Error(ErrorCode::ShapeMismatch, "subtask index out of range");
  }
  return theta + p.col(static_cast<Eigen::Index>(attribute)) +
         u.col(static_cast<Eigen::Index>(attribute_offsets[attribute] + user));
}

std::size_t WeightDecomposition::attribute_of(std::size_t flat_index) const {
  if (flat_index >= n_users()) throw Error(ErrorCode::ShapeMismatch, "subtask index out of range");
  std::size_t i = 0;
  while (i + 1 < attribute_offsets.size() && attribute_offsets[i + 1] <= flat_index) ++i;
  return i;
}

Vector WeightDecomposition::compose_flat(std::size_t flat_index) const {
  const std::size_t i = attribute_of(flat_index);
  return theta + p.col(static_cast<Eigen::Index>(i)) + u.col(static_cast<Eigen::Index>(flat_index));
}

bool WeightDecomposition::matches(const MultiTaskDataset& dataset) const {
  if (dim() != dataset.dim() || n_attributes() != dataset.n_attributes() || n_users() != dataset.n_users()) {
    return false;
  }
  if (p.rows() != theta.size() || u.rows() != theta.size()) return false;
  for (std::size_t i = 0; i < n_attributes(); ++i) {
    if (attribute_offsets[i] != dataset.attribute_offset(i)) return false;
  }
  return true;
}

bool WeightDecomposition::same_shape(const WeightDecomposition& other) const {
  return theta.size() == other.theta.size() && p.rows() == other.p.rows() && p.cols() == other.p.cols() &&
         u.rows() == other.u.rows() && u.cols() == other.u.cols() && attribute_offsets == other.attribute_offsets;
}

bool WeightDecomposition::all_finite() const { return theta.allFinite() && p.allFinite() && u.allFinite(); }

std::size_t WeightDecomposition::flat_size() const {
  return static_cast<std::size_t>(theta.size() + p.size() + u.size());
}

Vector WeightDecomposition::flatten() const {
  Vector flat(static_cast<Eigen::Index>(flat_size()));
  flat << theta, p.reshaped(), u.reshaped();
  return flat;
}

void WeightDecomposition::assign_flat(const Vector& flat) {
  if (static_cast<std::size_t>(flat.size()) != flat_size()) {
    throw Error(ErrorCode::ShapeMismatch, "flat vector has the wrong length");
  }
  theta = flat.head(theta.size());
  p.reshaped() = flat.segment(theta.size(), p.size());
  u.reshaped() = flat.tail(u.size());
}

WeightDecomposition& WeightDecomposition::operator+=(const WeightDecomposition& other) {
  if (!same_shape(other)) throw Error(ErrorCode::ShapeMismatch, "weight shapes differ");
  theta += other.theta;
  p += other.p;
  u += other.u;
  return *this;
}

WeightDecomposition& WeightDecomposition::operator-=(const WeightDecomposition& other) {
  if (!same_shape(other)) throw Error(ErrorCode::ShapeMismatch, "weight shapes differ");
  theta -= other.theta;
  p -= other.p;
  u -= other.u;
  return *this;
}

WeightDecomposition& WeightDecomposition::operator*=(double scale) {
  theta *= scale;
  p *= scale;
  u *= scale;
  return *this;
}

WeightDecomposition operator+(WeightDecomposition a, const WeightDecomposition& b) { return a += b; }
WeightDecomposition operator-(WeightDecomposition a, const WeightDecomposition& b) { return a -= b; }
WeightDecomposition operator*(double scale, WeightDecomposition a) { return a *= scale; }

double squared_norm(const WeightDecomposition& w) {
  return w.theta.squaredNorm() + w.p.squaredNorm() + w.u.squaredNorm();
}

double inner(const GradientBundle& g, const WeightDecomposition& w) {
  return g.g_theta.dot(w.theta) + g.g_p.reshaped().dot(w.p.reshaped()) + g.g_u.reshaped().dot(w.u.reshaped());
}

double squared_norm(const GradientBundle& g) {
  return g.g_theta.squaredNorm() + g.g_p.squaredNorm() + g.g_u.squaredNorm();
}

Vector flatten(const GradientBundle& g) {
  Vector flat(g.g_theta.size() + g.g_p.size() + g.g_u.size());
  flat << g.g_theta, g.g_p.reshaped(), g.g_u.reshaped();
  return flat;
}

}  // namespace hiermtl
