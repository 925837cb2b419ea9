#pragma once

#include <Eigen/Dense>

#include "zgreen/linsys.hpp"
#include "zgreen/types.hpp"

namespace zgreen {

enum class Axis { plus, minus };

/// Invariant-subspace splitting of a matrix across the unit circle.
/// stable_basis / unstable_basis hold orthonormal column bases of the
/// generalized eigenspaces for |mu| < 1 and |mu| > 1 respectively.
struct SpectralSplit {
  Matrix stable_basis;
  Matrix unstable_basis;
  Eigen::VectorXcd eigenvalues;
};

/// Splits t across the unit circle. Throws UnitCircleEigenvalue if some
/// eigenvalue mu has | |mu| - 1 | < gap_tol.
SpectralSplit split_unit_circle(const Matrix& t, double gap_tol = 1e-8);

/// Spectral projector of t onto its stable invariant subspace along the
/// unstable one (oblique in general).
Matrix stable_spectral_projector(const Matrix& t, double gap_tol = 1e-8);

/// Dichotomy projector at time 0 for the forward semi-axis: range is the
/// stable invariant subspace of tail_plus transported to time 0, kernel the
/// transported unstable subspace.
Matrix dichotomy_projector_plus(const OperatorSequence& seq, double gap_tol = 1e-8);

/// Dichotomy projector at time 0 for the backward semi-axis, built from the
/// splitting of tail_minus transported to time 0. The kernel (equivalently
/// the range of the complementary projector) collects the initial values
/// whose backward continuation stays bounded.
Matrix dichotomy_projector_minus(const OperatorSequence& seq, double gap_tol = 1e-8);

/// Dichotomy data for one semi-axis: projector anchored at time 0 plus the
/// constants of the two exponential estimates, with the window over which
/// they were checked.
struct DichotomyCertificate {
  Axis axis = Axis::plus;
  Matrix projector;
  double k = 1.0;
  double lambda = 0.5;
  int window_lo = 0;
  int window_hi = 0;
};

struct VerificationReport {
  bool verified = false;
  double max_ratio = 0.0;  // worst ||.|| / (k lambda^gap); <= 1 means verified
  double k_fit = 1.0;      // tightest constants observed on the window
  double lambda_fit = 0.0;
};

/// Checks both exponential estimates of the certificate on every ordered
/// pair of the window and reports the worst ratio together with fitted
/// constants (lambda from the max per-gap root, k as the sup against it).
/// The window must lie inside the certificate's semi-axis.
VerificationReport verify_dichotomy(const OperatorSequence& seq,
                                    const DichotomyCertificate& cert, int win_lo,
                                    int win_hi);

/// Computes the projector for the axis and fits (k, lambda) over
/// [0, window_extent] (mirrored for the backward axis).
DichotomyCertificate certify_axis(const OperatorSequence& seq, Axis axis,
                                  int window_extent, double gap_tol = 1e-8);

}  // namespace zgreen
