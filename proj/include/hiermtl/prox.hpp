#pragma once

#include "hiermtl/dataset.hpp"

namespace hiermtl {

// Closed-form proximal maps of the three penalty blocks. Each returns a new
// value; inputs are never modified. All throw NegativeTau for tau < 0.

// sign(v) * max(|v| - tau, 0), the prox of tau * ||.||_1.
Vector soft_threshold(const Vector& v, double tau);

// Each row r -> (1 - tau / ||r||)_+ r. Zero rows stay zero.
Matrix row_group_shrink(const Matrix& m, double tau);

// Column-wise counterpart of row_group_shrink.
Matrix col_group_shrink(const Matrix& m, double tau);

}  // namespace hiermtl
