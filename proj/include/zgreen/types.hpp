#pragma once

#include <Eigen/Dense>

namespace zgreen {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Operator 2-norm (largest singular value).
double spectral_norm(const Matrix& m);

/// ||p*p - p|| relative to 1 + ||p||^2, the scale used for idempotency checks.
double idempotency_defect(const Matrix& p);

}  // namespace zgreen
