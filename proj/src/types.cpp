#include "zgreen/types.hpp"

#include <Eigen/SVD>

namespace zgreen {

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return Eigen::JacobiSVD<Matrix>(m).singularValues()(0);
}

double idempotency_defect(const Matrix& p) {
  const double np = spectral_norm(p);
  return spectral_norm(p * p - p) / (1.0 + np * np);
}

}  // namespace zgreen
