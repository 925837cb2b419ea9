#pragma once

#include "zgreen/errors.hpp"
#include "zgreen/types.hpp"

namespace zgreen {

/// A square matrix together with its Moore-Penrose pseudoinverse and the
/// orthogonal projectors onto its kernel and cokernel, all derived from one
/// singular value decomposition with threshold rank_tol.
struct GeneralizedInverse {
  Matrix d_matrix;
  Matrix d_pinv;
  Matrix proj_ker;    // I - D^+ D
  Matrix proj_coker;  // I - D D^+
  Vector singular_values;  // descending
  int rank = 0;
  double rank_tol = 0.0;
};

/// Dimension bookkeeping of the matching operator. In finite dimension the
/// operator is always Fredholm of index zero, so dim_ker == dim_coker; what
/// varies is how the kernel and cokernel sit relative to the two dichotomy
/// projectors:
///   r = rank(P * proj_ker)    — dimension of the bounded homogeneous family
///   d = rank(proj_coker * Q)  — number of independent solvability conditions
struct Classification {
  int dim_ker = 0;
  int dim_coker = 0;
  int r = 0;
  int d = 0;
  int index = 0;
  bool trichotomy = false;     // [P,Q] = 0 and PQ = Q
  bool dichotomy_on_z = false; // [P,Q] = 0 and PQ = Q = P
};

struct CommutationReport {
  double commutator_norm = 0.0;
  bool pq_eq_q = false;
  bool pq_eq_p = false;
};

/// The matching operator D = P - (I - Q) that glues the two semi-axis
/// solution families at time 0. Both arguments must be square, equally
/// sized, and idempotent within idem_tol.
Matrix matching_operator(const Matrix& p, const Matrix& q, double idem_tol = 1e-8);

/// SVD-based Moore-Penrose pseudoinverse with relative rank threshold
/// rank_tol_rel * sigma_max. The zero matrix yields a zero pseudoinverse
/// with identity kernel/cokernel projectors.
///
/// scale_floor raises the threshold to rank_tol_rel * max(sigma_max,
/// scale_floor). Pass the natural scale of the operator (1 for a difference
/// of projectors) so that a matrix that is pure rounding noise is treated as
/// zero instead of having its noise inverted.
GeneralizedInverse pseudo_inverse(const Matrix& m, double rank_tol_rel = 1e-10,
                                  double scale_floor = 0.0);

/// Number of singular values above rank_tol_rel * sigma_max.
int matrix_rank(const Matrix& m, double rank_tol_rel = 1e-10);

CommutationReport projector_commutation(const Matrix& p, const Matrix& q, double tol);

Classification classify(const GeneralizedInverse& gi, const Matrix& p, const Matrix& q,
                        double rank_tol_rel = 1e-10, double flag_tol = 1e-10);

/// ||D^3 - D||. Vanishes whenever the two projectors commute.
double tripotent_defect(const Matrix& d);

}  // namespace zgreen
