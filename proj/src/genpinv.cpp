#include "zgreen/genpinv.hpp"

#include <Eigen/SVD>
#include <algorithm>

namespace zgreen {

Matrix matching_operator(const Matrix& p, const Matrix& q, double idem_tol) {
  if (p.rows() != p.cols() || q.rows() != q.cols() || p.rows() != q.rows()) {
    throw ShapeMismatch("matching operator needs square projectors of equal size");
  }
  if (idempotency_defect(p) > idem_tol) throw NotIdempotent("P is not a projector");
  if (idempotency_defect(q) > idem_tol) throw NotIdempotent("Q is not a projector");
  return p - (Matrix::Identity(p.rows(), p.cols()) - q);
}

GeneralizedInverse pseudo_inverse(const Matrix& m, double rank_tol_rel, double scale_floor) {
  if (m.rows() != m.cols()) throw ShapeMismatch("pseudo_inverse expects a square matrix");
  const int n = static_cast<int>(m.rows());
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vector& sv = svd.singularValues();

  GeneralizedInverse gi;
  gi.d_matrix = m;
  gi.singular_values = sv;
  gi.rank_tol = sv.size() > 0 ? rank_tol_rel * std::max(sv(0), scale_floor) : 0.0;
  int r = 0;
  while (r < sv.size() && sv(r) > gi.rank_tol) ++r;
  gi.rank = r;

  Vector inv_sv = Vector::Zero(n);
  for (int i = 0; i < r; ++i) inv_sv(i) = 1.0 / sv(i);
  gi.d_pinv = svd.matrixV() * inv_sv.asDiagonal() * svd.matrixU().transpose();

  // Kernel/cokernel projectors from the trailing singular bases; these agree
  // with I - D^+ D and I - D D^+ and are symmetric by construction.
  const Matrix v2 = svd.matrixV().rightCols(n - r);
  const Matrix u2 = svd.matrixU().rightCols(n - r);
  gi.proj_ker = v2 * v2.transpose();
  gi.proj_coker = u2 * u2.transpose();
  return gi;
}

int matrix_rank(const Matrix& m, double rank_tol_rel) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const Vector& sv = svd.singularValues();
  const double tol = rank_tol_rel * sv(0);
  int r = 0;
  while (r < sv.size() && sv(r) > tol) ++r;
  return r;
}

namespace {

// Rank of a product of projectors. Such products have unit natural scale, so
// the threshold keeps a floor at rank_tol_rel: a product that is pure rounding
// noise (sigma_max ~ eps) must count as zero, which a purely sigma_max-relative
// threshold cannot deliver.
int projector_product_rank(const Matrix& m, double rank_tol_rel) {
  Eigen::JacobiSVD<Matrix> svd(m);
  const Vector& sv = svd.singularValues();
  if (sv.size() == 0) return 0;
  const double tol = rank_tol_rel * std::max(1.0, sv(0));
  int r = 0;
  while (r < sv.size() && sv(r) > tol) ++r;
  return r;
}

}  // namespace

CommutationReport projector_commutation(const Matrix& p, const Matrix& q, double tol) {
  if (p.rows() != q.rows() || p.cols() != q.cols()) {
    throw ShapeMismatch("projector shapes differ");
  }
  CommutationReport rep;
  const Matrix pq = p * q;
  rep.commutator_norm = spectral_norm(pq - q * p);
  rep.pq_eq_q = spectral_norm(pq - q) <= tol;
  rep.pq_eq_p = spectral_norm(pq - p) <= tol;
  return rep;
}

Classification classify(const GeneralizedInverse& gi, const Matrix& p, const Matrix& q,
                        double rank_tol_rel, double flag_tol) {
  const int dim = static_cast<int>(gi.d_matrix.rows());
  if (p.rows() != dim || q.rows() != dim) {
    throw ShapeMismatch("projector dimension does not match the operator");
  }
  Classification cls;
  cls.dim_ker = dim - gi.rank;
  cls.dim_coker = dim - gi.rank;
  cls.index = cls.dim_ker - cls.dim_coker;  // always 0 for square operators
  cls.r = projector_product_rank(p * gi.proj_ker, rank_tol_rel);
  cls.d = projector_product_rank(gi.proj_coker * q, rank_tol_rel);
  const CommutationReport comm = projector_commutation(p, q, flag_tol);
  const bool commute = comm.commutator_norm <= flag_tol;
  cls.trichotomy = commute && comm.pq_eq_q;
  cls.dichotomy_on_z = commute && comm.pq_eq_q && comm.pq_eq_p;
  return cls;
}

double tripotent_defect(const Matrix& d) {
  return spectral_norm(d * d * d - d);
}

}  // namespace zgreen
